#include <gtest/gtest.h>

#include "qgwb/experiments.hpp"

using namespace qgwb;

namespace {

std::vector<Action> sample_actions(const FiniteQG& g) {
    std::vector<Action> acts;
    acts.push_back(trivial_action(g, {2, 1}));
    acts.push_back(comultiplication_action(g));
    if (cyclic_generator(g)) acts.push_back(grading_action(g, {0, 1, 1}));
    for (std::size_t a = 0; a < g.num_irreps(); ++a)
        if (g.irrep(a).n > 1) acts.push_back(adjoint_action(irrep_corep(g, a)));
    return acts;
}

const char* const kParents[] = {"fun-S3", "grp-S3", "kac-paljutkin", "dual-Z(3)"};

}  // namespace

TEST(Actions, PresetActionsSatisfyTheActionAxioms) {
    for (const char* name : kParents) {
        const FiniteQG g = make_preset(name);
        for (const auto& a : sample_actions(g))
            for (const auto& r : a.check()) EXPECT_LE(r.value, r.tol) << name << "/" << a.label() << " " << r.name;
    }
}

TEST(Actions, ConstructionErrors) {
    const FiniteQG g = fun_S3();
    try {
        Action(g, FiniteAlgebra::matrix_blocks({2}), std::vector<CMatrix>(2, CMatrix::identity(4)), "short");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Schema);
    }
    EXPECT_THROW(grading_action(g, {0, 1}), Error);
}

TEST(Implementation, UnitaryCorepImplementingTheAction) {
    for (const char* name : kParents) {
        const FiniteQG g = make_preset(name);
        for (const auto& a : sample_actions(g)) {
            const Implementation im = implement(a);
            EXPECT_LT(im.unitarity, 1e-9) << name << "/" << a.label();
            EXPECT_LT(im.corep_identity, 1e-9) << name << "/" << a.label();
            EXPECT_LT(im.implements, 1e-9) << name << "/" << a.label();
            EXPECT_LT(im.condition_R, 1e-8) << name << "/" << a.label();
            // J conj(.) is an anti-unitary involution
            EXPECT_LT(frob_norm(im.J * im.J.conj() - CMatrix::identity(a.dim_N())), 1e-9);
            EXPECT_LT(frob_norm(im.J.adjoint() * im.J - CMatrix::identity(a.dim_N())), 1e-9);
        }
    }
}

TEST(Implementation, InvariantStateIsRequired) {
    const FiniteQG g = dual_Zn(2);
    Action a = grading_action(g, {0, 1});
    CMatrix rho(2, 2);
    rho(0, 0) = rho(1, 1) = 0.5;
    rho(0, 1) = rho(1, 0) = 0.25;
    a.set_theta(density_to_state({2}, rho));
    try {
        implement(a);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "NoInvariantState");
    }
    CMatrix pure(2, 2);
    pure(0, 0) = 1.0;
    a.set_theta(density_to_state({2}, pure));  // invariant but not faithful
    try {
        implement(a);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "NoInvariantState");
    }
}

TEST(FixedPoints, ExpectationProperties) {
    for (const char* name : kParents) {
        const FiniteQG g = make_preset(name);
        for (const auto& a : sample_actions(g)) {
            const Implementation im = implement(a);
            const FixedPoints fp = fixed_point_expectation(a, im);
            const std::string lbl = std::string(name) + "/" + a.label();
            EXPECT_LT(fp.idempotent, 1e-9) << lbl;
            EXPECT_LT(fp.unital, 1e-9) << lbl;
            EXPECT_LT(fp.positivity, 1e-9) << lbl;
            EXPECT_LT(fp.compression, 1e-9) << lbl;
            EXPECT_LT(fp.invariance, 1e-9) << lbl;
            EXPECT_LT(fp.slice_invariance, 1e-9) << lbl;
            // range of E is the fixed-point algebra
            EXPECT_EQ(rank(fp.E, 1e-9), fp.basis.cols()) << lbl;
        }
    }
}

TEST(FixedPoints, PerturbedProjectionLosesSliceInvariance) {
    // E' = E + B(1 - E) is still a unital idempotent onto the fixed points, but not the slice by h
    const FiniteQG g = dual_Zn(2);
    const Action a = grading_action(g, {0, 1});
    const Implementation im = implement(a);
    const FixedPoints fp = fixed_point_expectation(a, im);
    const std::size_t D = a.dim_N();
    CounterRng rng(3, 0);
    const CMatrix B = fp.basis * rng.cmatrix(fp.basis.cols(), D);
    const CMatrix I = CMatrix::identity(D);
    const CMatrix Ep = fp.E + 0.3 * B * (I - fp.E);
    EXPECT_LT(frob_norm(Ep * Ep - Ep), 1e-12);
    EXPECT_LT(vnorm(vsub(Ep * a.N().unit(), a.N().unit())), 1e-12);
    double worst = 0.0;
    for (std::size_t x = 0; x < D; ++x) {
        const Vec e = a.N().basis(x);
        worst = std::max(worst, vnorm(vsub(Ep * a.slice_by(g.counit(), e), Ep * e)) +
                                    vnorm(vsub(Ep * a.slice_by(unit_vec(g.dim(), 1), e), Ep * e)));
    }
    EXPECT_GT(worst, 1e-3);
}

TEST(FixedPoints, GradingCompressesToEqualWeightEntries) {
    const FiniteQG g = dual_Zn(2);
    const std::vector<int> w{0, 1, 0};
    const Action a = grading_action(g, w);
    const FixedPoints fp = fixed_point_expectation(a, implement(a));
    EXPECT_EQ(fp.basis.cols(), 5u);  // 2x2 block on weight 0 and 1x1 on weight 1
    CMatrix expect(9, 9);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (w[i] == w[j]) expect(3 * i + j, 3 * i + j) = 1.0;
    EXPECT_LT(max_abs(fp.E - expect), 1e-10);
}

TEST(Cone, CanonicalImplementationPreservesTheCone) {
    const FiniteQG g = dual_Zn(2);
    const Action a = grading_action(g, {0, 1});
    const Implementation im = implement(a);
    const ConeReport ok = cone_preservation_check(im, im.U, {g.one(), g.basis(1)});
    EXPECT_TRUE(ok.preserved);
    EXPECT_GT(ok.trials, 0u);
    EXPECT_GE(ok.worst_min_eig, -1e-8);
    for (const char* name : {"fun-S3", "kac-paljutkin"}) {
        const FiniteQG h = make_preset(name);
        const Action c = comultiplication_action(h);
        const Implementation ic = implement(c);
        EXPECT_TRUE(cone_preservation_check(ic, ic.U, {h.one()}, 0, 8).preserved) << name;
    }
}

TEST(Cone, TwistedImplementationIsRejected) {
    const FiniteQG g = dual_Zn(2);
    const Action a = grading_action(g, {0, 1});
    const Implementation im = implement(a);
    const AMat minus = twisted_implementation(im, vscale(a.N().unit(), -1.0));
    double sum = 0.0;
    for (std::size_t i = 0; i < g.dim(); ++i) sum = std::max(sum, frob_norm(minus.c[i] + im.U.c[i]));
    EXPECT_LT(sum, 1e-10);  // -U
    const ConeReport bad = cone_preservation_check(im, minus, {g.one(), g.basis(1)});
    EXPECT_FALSE(bad.preserved);
    EXPECT_FALSE(bad.witness.empty());
    // still unitary, so only the cone tells it apart
    EXPECT_LT(unitarity_residual(g, minus), 1e-9);
}

TEST(VVbar, AdjointImplementationIsTheTensorWithTheContragredient) {
    for (const char* name : {"fun-S3", "kac-paljutkin"}) {
        const FiniteQG g = make_preset(name);
        for (std::size_t a = 0; a < g.num_irreps(); ++a) {
            if (g.irrep(a).n < 2) continue;
            const VVbarReport r = v_vbar_implementation_check(irrep_corep(g, a));
            EXPECT_TRUE(r.equivalent) << name;
            EXPECT_LT(r.intertwiner_residual, 1e-8) << name;
        }
    }
}

TEST(SpectralGap, IndicatorsAgree) {
    for (const char* name : kParents) {
        const FiniteQG g = make_preset(name);
        for (const auto& a : sample_actions(g)) {
            const Implementation im = implement(a);
            const SpectralGapReport sg = spectral_gap_report(a, im);
            EXPECT_TRUE(sg.consistent) << name << "/" << a.label();
            EXPECT_EQ(sg.rank_p, sg.fixed_dim);
            EXPECT_TRUE(sg.p_in_image);
            EXPECT_GT(sg.gap, 0.0);
        }
    }
}

TEST(DefectBridge, VectorDefectIsBoundedByTheOperatorDefect) {
    const FiniteQG g = kac_paljutkin();
    const Action a = comultiplication_action(g);
    const Implementation im = implement(a);
    CounterRng rng(12, 0);
    const std::vector<Vec> states{random_state(g, 1).values(), random_state(g, 2).values(), g.counit()};
    for (int t = 0; t < 3; ++t) {
        const Vec x = rng.cvector(a.dim_N());
        const DefectBridge b = defect_bridge(im, x, states);
        EXPECT_LE(b.vector_defect, b.bound_linear * vnorm(x) + 1e-10);
        EXPECT_LE(b.vector_defect, b.delta + 1e-10);
        EXPECT_GE(b.bound_sqrt, 0.0);
    }
    // a fixed point has zero defect everywhere
    const DefectBridge f = defect_bridge(im, a.N().unit(), states);
    EXPECT_LT(f.delta, 1e-10);
    EXPECT_LT(f.vector_defect, 1e-10);
    EXPECT_LT(f.corep_defect, 1e-10);
}
