#include <gtest/gtest.h>

#include "qgwb/experiments.hpp"

using namespace qgwb;

namespace {

/// J = swap, Q = diag(q, 1/q): T = J Q^{1/2} is an involution but the vacuum state is not a trace.
TruncatedFock araki_woods(int depth, double q) {
    CMatrix M(2, 2), Q(2, 2);
    M(0, 1) = M(1, 0) = 1.0;
    Q(0, 0) = q;
    Q(1, 1) = 1.0 / q;
    return TruncatedFock(2, depth, M, Q);
}

std::vector<Vec> random_vectors(std::size_t k, std::size_t n, std::uint64_t seed) {
    CounterRng rng(seed, 0);
    std::vector<Vec> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(rng.cvector(k));
    return out;
}

}  // namespace

TEST(FockSpace, LayoutAndInvolution) {
    const TruncatedFock f = TruncatedFock::tracial(3, 4, CMatrix::identity(3));
    EXPECT_EQ(f.total_dim(), 1u + 3u + 9u + 27u + 81u);
    EXPECT_EQ(f.offset(2), 4u);
    EXPECT_EQ(f.degree_dim(3), 27u);
    EXPECT_TRUE(f.is_tracial());
    const auto r = f.involution_residuals();
    EXPECT_LT(r.J2, 1e-15);
    EXPECT_LT(r.T2, 1e-15);
    const auto a = araki_woods(3, 2.5).involution_residuals();
    EXPECT_LT(a.J2, 1e-14);
    EXPECT_LT(a.T2, 1e-14);
    EXPECT_NEAR(a.Q_min_eig, 0.4, 1e-14);
    EXPECT_FALSE(araki_woods(3, 2.5).is_tracial());
}

TEST(FockSpace, CreationIsAnIsometryBelowTheTopDegree) {
    const TruncatedFock f = TruncatedFock::tracial(2, 5, CMatrix::identity(2));
    const Vec z{0.6, cplx(0.0, 0.8)};
    const CMatrix l = f.ell(z).dense();
    const CMatrix ll = l.adjoint() * l;
    for (std::size_t i = 0; i < f.offset(5); ++i) EXPECT_NEAR(std::abs(ll(i, i) - 1.0), 0.0, 1e-14) << i;
    // s(zeta) is self-adjoint exactly when T zeta = zeta
    const Vec real{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    const CMatrix s = f.s(real).dense();
    EXPECT_LT(frob_norm(s - s.adjoint()), 1e-14);
}

TEST(FockSpace, SizeCapAndDepthErrors) {
    try {
        TruncatedFock::tracial(4, 12, CMatrix::identity(4));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "DepthExceeded");
        EXPECT_EQ(exit_code(e.kind()), 5);
    }
    const TruncatedFock f = TruncatedFock::tracial(2, 3, CMatrix::identity(2));
    EXPECT_THROW(vacuum_moments(f, Vec{1.0, 0.0}, 4), Error);
    EXPECT_THROW(TruncatedFock(2, 2, CMatrix::identity(3), CMatrix::identity(2)), Error);
}

TEST(Moments, SemicircleCatalanNumbers) {
    const TruncatedFock f = TruncatedFock::tracial(2, 12, CMatrix::identity(2));
    const Vec z{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    const auto m = vacuum_moments(f, z, 12);
    for (std::size_t p = 0; p <= 12; ++p) {
        const double want = static_cast<double>(count_nc_pairings(p));
        EXPECT_NEAR(std::abs(m[p] - want), 0.0, 1e-9) << p;
    }
    EXPECT_EQ(count_nc_pairings(8), 14u);
    EXPECT_EQ(count_nc_pairings(7), 0u);
}

TEST(Moments, TruncationDepthDoesNotChangeLowOrderWords) {
    for (int depth : {4, 6}) {
        const TruncatedFock a = araki_woods(depth, 1.7), b = araki_woods(depth + 2, 1.7);
        const auto gens = random_vectors(2, 2, 31);
        for (const auto& w : all_words(2, static_cast<std::size_t>(depth)))
            EXPECT_LT(std::abs(vacuum_word(a, gens, w) - vacuum_word(b, gens, w)), 1e-12);
    }
}

TEST(Moments, NonCrossingPairingOracle) {
    for (double q : {1.0, 0.3, 4.0}) {
        const TruncatedFock f = araki_woods(6, q);
        const auto gens = random_vectors(2, 3, 7);
        const auto ops = generator_ops(f, gens);
        double worst = 0.0;
        for (const auto& w : all_words(3, 6)) worst = std::max(worst, std::abs(vacuum_word(f, ops, w) - nc_pairing_moment(f, gens, w)));
        EXPECT_LT(worst, 1e-10) << q;
    }
    const TruncatedFock t = TruncatedFock::tracial(3, 6, CMatrix::identity(3));
    const auto gens = random_vectors(3, 2, 8);
    for (const auto& w : all_words(2, 6)) EXPECT_LT(std::abs(vacuum_word(t, gens, w) - nc_pairing_moment(t, gens, w)), 1e-10);
}

TEST(Traciality, TraceOnlyForTheTracialQ) {
    const TruncatedFock f = TruncatedFock::tracial(2, 8, CMatrix::identity(2));
    EXPECT_LT(trace_check(f, {unit_vec(2, 0), unit_vec(2, 1)}, all_words(2, 4)), 1e-12);
    try {
        trace_check(araki_woods(8, 2.0), {unit_vec(2, 0)}, all_words(1, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "NotTracial");
    }
    // the failure is real: the modular vacuum state does not commute words
    const TruncatedFock aw = araki_woods(4, 2.0);
    const std::vector<Vec> gens{Vec{1.0, 0.0}, Vec{0.0, 1.0}};
    const cplx ab = vacuum_word(aw, gens, {0, 1}), ba = vacuum_word(aw, gens, {1, 0});
    EXPECT_GT(std::abs(ab - ba), 0.1);
    EXPECT_THROW(trace_check(f, {unit_vec(2, 0)}, all_words(1, 5)), Error);
}

TEST(Lift, CompatibleCorepsLiftToCoreps) {
    for (const char* name : {"fun-S3", "kac-paljutkin", "dual-Z(4)"}) {
        const FiniteQG g = make_preset(name);
        const auto ccs = compatible_coreps(g);
        ASSERT_FALSE(ccs.empty()) << name;
        for (const auto& cc : ccs) {
            const std::size_t dk = cc.corep.space_dim();
            const TruncatedFock f = TruncatedFock::tracial(dk, fit_lift_depth(dk, g.dim(), 2), cc.M);
            const LiftedRep L = lift_rep(f, cc.corep);
            EXPECT_LT(L.unitarity, 1e-9) << name << "/" << cc.label;
            EXPECT_LT(L.corep_identity, 1e-9) << name << "/" << cc.label;
            for (const auto& z : j_real_vectors(f, 2, 3)) {
                EXPECT_LT(vnorm(vsub(f.J_apply(z), z)), 1e-12);
                EXPECT_LT(vacuum_invariance_residual(L, {f.s(z), f.s(z)}), 1e-9) << name << "/" << cc.label;
                EXPECT_LT(intertwining_residual(L, z, 1), 1e-9) << name << "/" << cc.label;
            }
        }
    }
}

TEST(Lift, InducedActionIsMultiplicative) {
    const FiniteQG g = fun_S3();
    const auto ccs = compatible_coreps(g);
    const auto& cc = ccs.front();
    const std::size_t dk = cc.corep.space_dim();
    const TruncatedFock f = TruncatedFock::tracial(dk, fit_lift_depth(dk, g.dim(), 3), cc.M);
    const LiftedRep L = lift_rep(f, cc.corep);
    const auto zs = j_real_vectors(f, 2, 0);
    EXPECT_LT(induced_multiplicativity_residual(L, {f.s(zs[0])}, {f.s(zs[1])}), 1e-9);
}

TEST(Lift, ProbeResidualsAgreeWithTheDenseChecks) {
    const FiniteQG g = kac_paljutkin();
    const auto ccs = compatible_coreps(g);
    const auto& cc = ccs.front();
    const std::size_t dk = cc.corep.space_dim();
    const TruncatedFock f = TruncatedFock::tracial(dk, 2, cc.M);
    LiftedRep L = lift_rep(f, cc.corep);
    CounterRng rng(5, 0);
    for (std::size_t n = 0; n < L.block.size(); ++n) {
        Vec xi = rng.cvector(L.block[n].space_dim());
        xi = vscale(xi, 1.0 / vnorm(xi));
        const auto [u, c] = L.probe_residuals(g, n, xi);
        EXPECT_LT(u, 1e-12) << n;
        EXPECT_LT(c, 1e-12) << n;
        EXPECT_LT(unitarity_residual(g, L.block[n]), 1e-12);
    }
    // scaling one slice breaks both identities; the dense check and the probe both see it
    const std::size_t n = L.block.size() - 1;
    std::size_t slot = 0;
    while (max_abs(L.block[n].c[slot]) == 0.0) ++slot;
    L.block[n].c[slot] = 1.01 * L.block[n].c[slot];
    L.index_blocks();
    Vec xi = rng.cvector(L.block[n].space_dim());
    xi = vscale(xi, 1.0 / vnorm(xi));
    const auto [u, c] = L.probe_residuals(g, n, xi);
    EXPECT_GT(unitarity_residual(g, L.block[n]), 1e-4);
    EXPECT_GT(std::max(u, c), 1e-4);
}

TEST(Lift, IncompatibleJIsRejected) {
    const FiniteQG g = dual_Zn(3);
    std::optional<std::size_t> bad;
    for (std::size_t a = 0; a < g.num_irreps() && !bad; ++a)
        if (condition_R_residual(irrep_corep(g, a), CMatrix::identity(1)) > 1e-6) bad = a;
    ASSERT_TRUE(bad.has_value());
    const Corep u = irrep_corep(g, *bad);
    const TruncatedFock f = TruncatedFock::tracial(1, 2, CMatrix::identity(1));
    try {
        lift_rep(f, u);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "CompatibilityFailed");
    }
}

TEST(ConnesWeiss, VacuumSeesTheCorepDefect) {
    const std::size_t n = 8;
    const FiniteQG g = dual_Zn(n);
    CMatrix M(n, n);
    for (std::size_t j = 0; j < n; ++j) M((n - j) % n, j) = 1.0;
    const TruncatedFock f = TruncatedFock::tracial(n, 1, M);
    const Corep u = regular_corep(g);
    const LiftedRep L = lift_rep(f, u);
    std::vector<Vec> zs;
    for (std::size_t j = 1; j <= 3; ++j) {
        Vec z(n);
        z[j] = z[n - j] = 1.0 / std::sqrt(2.0);
        zs.push_back(z);
    }
    for (const auto& row : connes_weiss_experiment(L, zs, *cyclic_generator(g))) {
        EXPECT_LT(row.trace, 1e-12);
        EXPECT_NEAR(row.gns_norm, 1.0, 1e-12);
        EXPECT_NEAR(row.action_defect, row.corep_defect, 1e-9);
        EXPECT_GT(row.corep_defect, 1e-3);  // the generator moves every non-constant vector
        ASSERT_TRUE(std::isfinite(row.operator_defect));
        EXPECT_GE(row.operator_defect, row.action_defect - 1e-12);
    }
}
