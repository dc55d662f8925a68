#include <gtest/gtest.h>

#include "qgwb/experiments.hpp"

using namespace qgwb;

namespace {

const char* const kParents[] = {"fun-S3", "grp-S3", "kac-paljutkin", "dual-Z(5)", "fun-Z(4)"};

Functional generator_from_state(const FiniteQG& g, std::uint64_t seed, double lambda = 3.0) {
    return lambda * (counit_functional(g) - random_state(g, seed));
}

}  // namespace

TEST(Convolution, AssociativeWithCounitAsUnit) {
    for (const char* name : kParents) {
        const FiniteQG g = make_preset(name);
        const Functional a = random_state(g, 1), b = random_state(g, 2), c = random_state(g, 3);
        EXPECT_LT(distance(convolve(convolve(a, b), c), convolve(a, convolve(b, c))), 1e-12) << name;
        const Functional e = counit_functional(g);
        EXPECT_LT(distance(convolve(e, a), a), 1e-12) << name;
        EXPECT_LT(distance(convolve(a, e), a), 1e-12) << name;
    }
}

TEST(Convolution, HaarAbsorbsStates) {
    for (const char* name : kParents) {
        const FiniteQG g = make_preset(name);
        const Functional h = haar_functional(g), mu = random_state(g, 11);
        EXPECT_LT(distance(convolve(h, mu), h), 1e-12) << name;
        EXPECT_LT(distance(convolve(mu, h), h), 1e-12) << name;
    }
}

TEST(Convolution, BlocksMultiply) {
    // on the irrep blocks, convolution is the block product
    const FiniteQG g = kac_paljutkin();
    const Functional a = random_state(g, 4), b = random_state(g, 5);
    const Functional ab = convolve(a, b);
    double worst = 0.0;
    for (std::size_t k = 0; k < g.num_irreps(); ++k) {
        const CMatrix& x = a.blocks()[k];
        const CMatrix& y = b.blocks()[k];
        worst = std::max(worst, std::min(frob_norm(ab.blocks()[k] - x * y), frob_norm(ab.blocks()[k] - y * x)));
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(Functionals, BlockRoundTripAndParentMismatch) {
    const FiniteQG a = fun_S3(), b = grp_S3();
    const Functional mu = random_state(a, 7);
    EXPECT_LT(mu.block_residual(), 1e-12);
    try {
        convolve(mu, haar_functional(b));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "ParentMismatch");
        EXPECT_EQ(e.kind(), ErrorKind::Contract);
    }
}

TEST(Positivity, StatesAndNonStates) {
    for (const char* name : kParents) {
        const FiniteQG g = make_preset(name);
        EXPECT_TRUE(is_state(haar_functional(g))) << name;
        EXPECT_TRUE(is_state(counit_functional(g))) << name;
        EXPECT_TRUE(is_state(random_state(g, 3))) << name;
        EXPECT_FALSE(is_positive(cplx(-1.0) * haar_functional(g))) << name;
        EXPECT_FALSE(is_state(2.0 * haar_functional(g))) << name;
        EXPECT_LT(hermitian_defect(positivity_matrix(random_state(g, 9))), 1e-12) << name;
    }
}

TEST(Positivity, AdjointIsAnInvolutionFixingStates) {
    const FiniteQG g = kac_paljutkin();
    const Functional mu = random_state(g, 21);
    EXPECT_LT(distance(adjoint(mu), mu), 1e-12);
    const Functional z = cplx(0.0, 1.0) * mu;
    EXPECT_LT(distance(adjoint(adjoint(z)), z), 1e-12);
    EXPECT_LT(distance(adjoint(z), cplx(0.0, -1.0) * mu), 1e-12);
}

TEST(PdElement, BlocksAreAdjointsOfFunctionalBlocks) {
    for (const char* name : kParents) {
        const FiniteQG g = make_preset(name);
        const Functional mu = random_state(g, 8);
        const PdElement a = pd_element(mu);
        for (std::size_t k = 0; k < g.num_irreps(); ++k) EXPECT_LT(frob_norm(a.a[k] - mu.blocks()[k].adjoint()), 1e-15);
        EXPECT_LT(distance(pd_functional(a), mu), 1e-12) << name;
        // counit: every block is the identity
        const PdElement one = pd_element(counit_functional(g));
        EXPECT_LT(gauge_norm(one.a), 1e-12) << name;
        EXPECT_TRUE(one.central);
        // Haar: only the trivial block survives
        const PdElement h = pd_element(haar_functional(g));
        for (std::size_t k = 0; k < g.num_irreps(); ++k)
            EXPECT_LT(frob_norm(h.a[k] - (k == g.trivial() ? 1.0 : 0.0) * CMatrix::identity(g.irrep(k).n)), 1e-12) << name;
    }
}

TEST(PdElement, RejectsNonStates) {
    const FiniteQG g = fun_S3();
    try {
        pd_element(2.0 * haar_functional(g));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "NotAState");
    }
}

TEST(PdElement, ReAndExpTransformsStayPositive) {
    for (const char* name : kParents) {
        const FiniteQG g = make_preset(name);
        const PdElement a = pd_element(random_state(g, 13));
        const PdElement re = re_transform(a);
        for (const auto& m : re.a) EXPECT_LT(hermitian_defect(m), 1e-12);
        const PdElement ex = exp_transform(re);
        EXPECT_TRUE(is_state(pd_functional(ex))) << name;
        EXPECT_LE(gauge_norm(ex.a), 1.0 + 1e-12) << name;
    }
}

TEST(Semigroup, LawPositivityAndStart) {
    for (const char* name : kParents) {
        const FiniteQG g = make_preset(name);
        const Functional L = generator_from_state(g, 2);
        require_generating(L);
        EXPECT_LT(distance(semigroup_at(L, 0.0), counit_functional(g)), 1e-14) << name;
        const auto traj = conv_exp_semigroup(L, {0.05, 0.4, 2.0});
        for (const auto& mu : traj) EXPECT_TRUE(is_state(mu)) << name;
        for (double s : {0.1, 0.7})
            for (double t : {0.2, 1.3})
                EXPECT_LT(distance(convolve(semigroup_at(L, s), semigroup_at(L, t)), semigroup_at(L, s + t)), 1e-12) << name;
        // the convolution series agrees with the blockwise exponential
        EXPECT_LT(distance(series_exp(cplx(-0.7) * L), semigroup_at(L, 0.7)), 1e-10) << name;
    }
}

TEST(Semigroup, DifferenceQuotientsConverge) {
    const FiniteQG g = kac_paljutkin();
    const Functional L = generator_from_state(g, 0);
    const double one = distance(derivative_quotient(L, 1e-3), L), one_half = distance(derivative_quotient(L, 5e-4), L);
    const double rich = distance(richardson_quotient(L, 1e-3), L);
    EXPECT_NEAR(one / one_half, 2.0, 0.05);  // first order
    EXPECT_LT(rich, one / 100.0);
}

TEST(Semigroup, RejectsNonGenerators) {
    const FiniteQG g = fun_S3();
    const Functional L = generator_from_state(g, 4);
    try {
        conv_exp_semigroup(cplx(-1.0) * L, {1.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "NotGenerating");
        EXPECT_EQ(exit_code(e.kind()), 4);
    }
}

TEST(Schoenberg, ConverseWitnessIsPositiveOnKernelOfCounit) {
    for (const char* name : kParents) {
        const FiniteQG g = make_preset(name);
        const Functional bad = cplx(-1.0) * generator_from_state(g, 6);
        try {
            validate_generating(bad);
            FAIL() << name;
        } catch (const Error& e) {
            ASSERT_EQ(e.code(), "NotCND") << name;
            const Vec& x = e.witness();
            ASSERT_EQ(x.size(), g.dim());
            EXPECT_LT(std::abs(FiniteQG::apply(g.counit(), x)), 1e-12) << name;
            // -L(x^* x) < 0 for a CND functional; here it is positive
            EXPECT_GT(bad(g.mul(g.adj(x), x)).real(), 1e-6) << name;
        }
    }
}

TEST(Schoenberg, SelfadjointAndVanishingChecks) {
    const FiniteQG g = kac_paljutkin();
    const Functional L = generator_from_state(g, 1);
    try {
        validate_generating(cplx(0.0, 1.0) * L);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "NotSelfadjoint");
    }
    try {
        validate_generating(L + counit_functional(g));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "NotVanishing");
    }
}

TEST(WindowFunctions, PointwiseConvolutionAndSemigroup) {
    const GroupDualWindow w = GroupDualWindow::free_group(2, 6);
    EXPECT_EQ(gram_radius(w), 3);
    const WindowFunction L = word_length(w);
    const auto a = window_semigroup_at(L, 0.3), b = window_semigroup_at(L, 0.5);
    const auto ab = convolve(a, b), c = window_semigroup_at(L, 0.8);
    EXPECT_LT(vmax_abs(vsub(ab.f, c.f)), 1e-14);
    for (double t : {0.05, 1.0, 5.0}) EXPECT_TRUE(is_positive(window_semigroup_at(L, t))) << t;
    require_generating(L);
    EXPECT_EQ(conv_exp_semigroup(L, {0.1, 0.2}).size(), 2u);
}

TEST(WindowFunctions, NegatedLengthIsNotConditionallyNegative) {
    const GroupDualWindow w = GroupDualWindow::free_group(2, 4);
    const WindowFunction L = word_length(w);
    const WindowFunction bad = window_function(w, [&](std::size_t g) { return -L(g); });
    EXPECT_THROW(require_generating(bad), Error);
    try {
        validate_generating(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "NotCND");
        cplx total = 0.0;
        for (auto x : e.witness()) total += x;
        EXPECT_LT(std::abs(total), 1e-12);  // sum of coefficients = counit
    }
    EXPECT_FALSE(is_positive(window_semigroup_at(bad, 1.0)));
}

TEST(WindowFunctions, LatticeLengthIsGenerating) {
    for (int d : {1, 2}) {
        const GroupDualWindow w = GroupDualWindow::lattice(d, 6);
        const auto gl = validate_generating(word_length(w));
        EXPECT_GE(gl.cnd_min_eig, -1e-9);
        EXPECT_EQ(gl.gram_radius, 3);
    }
}
