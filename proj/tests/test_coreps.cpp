#include <gtest/gtest.h>

#include <numbers>

#include "qgwb/experiments.hpp"

using namespace qgwb;

namespace {

double worst(const std::vector<NamedResidual>& rs) {
    double w = 0.0;
    for (const auto& r : rs) w = std::max(w, r.value);
    return w;
}

const char* const kParents[] = {"fun-S3", "grp-S3", "kac-paljutkin", "dual-Z(4)"};

}  // namespace

TEST(Coreps, BuiltinsSatisfyTheCorepIdentities) {
    for (const char* name : kParents) {
        const FiniteQG g = make_preset(name);
        EXPECT_LT(worst(trivial_corep(g, 3).check()), 1e-10) << name;
        EXPECT_LT(worst(regular_corep(g).check()), 1e-10) << name;
        EXPECT_EQ(regular_corep(g).space_dim(), g.dim()) << name;  // each irrep with multiplicity n
        for (std::size_t a = 0; a < g.num_irreps(); ++a) EXPECT_LT(worst(irrep_corep(g, a).check()), 1e-10) << name << " " << a;
    }
}

TEST(Coreps, TensorRoutesAgreeAndContragredientIsACorep) {
    for (const char* name : kParents) {
        const FiniteQG g = make_preset(name);
        for (std::size_t a = 0; a < g.num_irreps(); ++a)
            for (std::size_t b = 0; b < g.num_irreps(); ++b) {
                const Corep u = irrep_corep(g, a), v = irrep_corep(g, b);
                EXPECT_LT(tensor_route_residual(u, v), 1e-10) << name;
                EXPECT_LT(worst(tensor(u, v).check()), 1e-10) << name;
            }
        const Corep r = regular_corep(g);
        const Corep rc = contragredient(r);
        EXPECT_LT(worst(rc.check()), 1e-10) << name;
        EXPECT_TRUE(find_unitary_intertwiner(contragredient(rc), r).equivalent) << name;
    }
}

TEST(Coreps, ParentMismatchInTensor) {
    const FiniteQG a = fun_S3(), b = grp_S3();
    try {
        tensor(trivial_corep(a), trivial_corep(b));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "ParentMismatch");
    }
}

TEST(Schur, IntertwinersBetweenIrreps) {
    for (const char* name : kParents) {
        const FiniteQG g = make_preset(name);
        for (std::size_t a = 0; a < g.num_irreps(); ++a)
            for (std::size_t b = 0; b < g.num_irreps(); ++b) {
                const auto sp = intertwiner_space(irrep_corep(g, a), irrep_corep(g, b));
                EXPECT_EQ(sp.size(), a == b ? 1u : 0u) << name << " " << a << "," << b;
                const std::size_t r = projection_rank(invariant_projection(tensor(irrep_corep(g, a), contragredient(irrep_corep(g, b)))));
                EXPECT_EQ(r, a == b ? 1u : 0u) << name;
            }
    }
}

TEST(Schur, DirectSumOrderIsAnEquivalence) {
    const FiniteQG g = kac_paljutkin();
    const Corep x = irrep_corep(g, 0), y = irrep_corep(g, g.num_irreps() - 1);
    const Equivalence e = find_unitary_intertwiner(direct_sum({x, y}), direct_sum({y, x}));
    EXPECT_TRUE(e.equivalent);
    EXPECT_LT(e.residual, 1e-9);
    EXPECT_LT(frob_norm(e.T.adjoint() * e.T - CMatrix::identity(e.T.cols())), 1e-9);
    EXPECT_FALSE(find_unitary_intertwiner(direct_sum({x, x}), direct_sum({x, y})).equivalent);
}

TEST(InvariantVectors, ProjectionMatchesTheJointKernel) {
    for (const auto& name : finite_preset_names()) {
        if (name.find("(64)") != std::string::npos || name.find("(32)") != std::string::npos) continue;
        const FiniteQG g = make_preset(name);
        const Corep r = regular_corep(g);
        const CMatrix p = invariant_projection(r);
        EXPECT_LT(frob_norm(p - brute_force_invariant_projection(r)), 1e-9) << name;
        EXPECT_EQ(projection_rank(p), 1u) << name;
        EXPECT_EQ(projection_rank(invariant_projection(trivial_corep(g, 2))), 2u) << name;
        if (g.num_irreps() > 1) {
            EXPECT_TRUE(is_ergodic(nontrivial_irreps_corep(g))) << name;
        }
    }
}

TEST(InvariantVectors, FiniteCorepsAreNeverWeaklyMixing) {
    // u (x) u^c always contains the identity intertwiner
    for (const char* name : kParents) {
        const FiniteQG g = make_preset(name);
        for (std::size_t a = 0; a < g.num_irreps(); ++a) EXPECT_FALSE(is_weakly_mixing(irrep_corep(g, a))) << name;
    }
}

TEST(Kazhdan, CyclicClosedForm) {
    for (std::size_t n : {2u, 3u, 5u, 8u, 16u}) {
        const FiniteQG g = dual_Zn(n);
        const double gap = kazhdan_gap(nontrivial_irreps_corep(g), {*cyclic_generator(g)});
        EXPECT_NEAR(gap, 2.0 * std::sin(std::numbers::pi / static_cast<double>(n)), 1e-10) << n;
    }
}

TEST(Kazhdan, DefectAndDegenerateCases) {
    const FiniteQG g = dual_Zn(6);
    const Corep u = regular_corep(g);
    const Vec q = *cyclic_generator(g);
    const CMatrix p = invariant_projection(u);
    const Vec inv = p.col(0);
    ASSERT_GT(vnorm(inv), 0.5);
    EXPECT_LT(defect(u, vscale(inv, 1.0 / vnorm(inv)), {q}), 1e-12);
    EXPECT_TRUE(std::isinf(kazhdan_gap(trivial_corep(g, 2), {q})));
    EXPECT_GT(kazhdan_gap(u, all_matrix_units(g)), 0.0);
    try {
        kazhdan_gap(u, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "EmptyQ");
    }
}

TEST(ConditionR, RealIrrepsAndInvolutionCheck) {
    const FiniteQG g = fun_S3();
    for (std::size_t a = 0; a < g.num_irreps(); ++a) {
        const Corep u = irrep_corep(g, a);
        EXPECT_TRUE(check_condition_R(u, CMatrix::identity(u.space_dim()))) << a;
    }
    const Corep u = irrep_corep(g, 0);
    try {
        check_condition_R(u, 2.0 * CMatrix::identity(u.space_dim()));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "NotInvolutive");
    }
    const CMatrix Mtwo(u.space_dim() + 1, u.space_dim() + 1);
    EXPECT_THROW(check_condition_R(u, Mtwo), Error);
}

TEST(Gns, CounitAndTracialStates) {
    for (const char* name : kParents) {
        const FiniteQG g = make_preset(name);
        const GnsResult c = gns(g, dual_counit_state(g));
        EXPECT_EQ(c.dim, 1u) << name;
        EXPECT_LT(c.reproduce_residual, 1e-10);
        EXPECT_NEAR(vnorm(c.omega), 1.0, 1e-12);
        const GnsResult t = gns(g, dual_tracial_state(g));
        EXPECT_EQ(t.dim, g.dim()) << name;
        EXPECT_LT(t.reproduce_residual, 1e-10) << name;
        EXPECT_LT(worst(t.corep.check()), 1e-9) << name;
        ASSERT_TRUE(t.J.has_value()) << name;
        EXPECT_LT(t.condition_R, 1e-8) << name;
        // the tracial GNS corep is the regular one up to equivalence
        EXPECT_EQ(projection_rank(invariant_projection(t.corep)), 1u) << name;
    }
}

TEST(Gns, RejectsNonStates) {
    const FiniteQG g = kac_paljutkin();
    try {
        gns(g, vscale(dual_tracial_state(g), -1.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "NotAState");
    }
}

TEST(WindowReps, CharactersOnTheIntegers) {
    const GroupDualWindow w = GroupDualWindow::lattice(1, 5);
    WindowRep a{&w, {}}, b{&w, {}};
    for (std::size_t g = 0; g < w.size(); ++g) {
        const double n = static_cast<double>(w.element(g).at(0));
        CMatrix x(1, 1), y(1, 1);
        x(0, 0) = std::polar(1.0, 0.3 * n);
        y(0, 0) = std::polar(1.0, -0.3 * n);
        a.pi.push_back(x);
        b.pi.push_back(y);
    }
    EXPECT_LT(a.residual(), 1e-12);
    const WindowRep ab = tensor(a, b);
    EXPECT_LT(ab.residual(), 1e-12);
    const Vec one{1.0};
    std::vector<std::size_t> all(w.size());
    for (std::size_t g = 0; g < w.size(); ++g) all[g] = g;
    EXPECT_LT(defect(ab, one, all), 1e-12);  // chi (x) conj chi is trivial
    EXPECT_GT(defect(a, one, all), 0.1);
}
