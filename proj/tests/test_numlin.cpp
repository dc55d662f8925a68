#include <gtest/gtest.h>

#include <numbers>

#include "qgwb/numlin.hpp"
#include "qgwb/rng.hpp"

using namespace qgwb;

namespace {

CMatrix pauli_y() {
    CMatrix m(2, 2);
    m(0, 1) = cplx(0, -1);
    m(1, 0) = cplx(0, 1);
    return m;
}

CMatrix random_unitary(CounterRng& rng, std::size_t n) {
    const CMatrix h = rng.hermitian(n);
    return expm(cplx(0, 1) * h);
}

}  // namespace

TEST(Eigensolver, ReconstructsRandomHermitian) {
    CounterRng rng(7, 0);
    for (std::size_t n : {1u, 2u, 5u, 17u}) {
        const CMatrix h = rng.hermitian(n);
        const EigResult e = hermitian_eig(h);
        CMatrix rec(n, n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) rec(i, j) += e.values[k] * e.vectors(i, k) * std::conj(e.vectors(j, k));
        EXPECT_LT(frob_norm(rec - h), 1e-11) << n;
        EXPECT_LT(frob_norm(e.vectors.adjoint() * e.vectors - CMatrix::identity(n)), 1e-11);
        for (std::size_t k = 1; k < n; ++k) EXPECT_LE(e.values[k - 1], e.values[k]);
    }
}

TEST(Eigensolver, KnownSpectrumUnderUnitaryConjugation) {
    CounterRng rng(3, 1);
    const std::vector<double> spec{-2.0, -2.0, 0.5, 3.0, 7.25};
    const CMatrix u = random_unitary(rng, spec.size());
    const CMatrix h = u * CMatrix::diag(spec) * u.adjoint();
    const EigResult e = hermitian_eig(h);
    for (std::size_t k = 0; k < spec.size(); ++k) EXPECT_NEAR(e.values[k], spec[k], 1e-11);
    EXPECT_NEAR(min_eigenvalue(h), -2.0, 1e-11);
    EXPECT_NEAR(op_norm(h), 7.25, 1e-10);
    EXPECT_FALSE(psd_check(h, 1e-9));
    EXPECT_TRUE(psd_check(h * h, 1e-9));
}

TEST(Expm, RotationClosedForm) {
    for (double t : {0.0, 0.3, 1.0, 4.0}) {
        const CMatrix r = expm(cplx(0, -t) * pauli_y());
        EXPECT_NEAR(r(0, 0).real(), std::cos(t), 1e-13);
        EXPECT_NEAR(r(0, 1).real(), -std::sin(t), 1e-13);
        EXPECT_NEAR(r(1, 0).real(), std::sin(t), 1e-13);
    }
}

TEST(Expm, NilpotentAndLargeNorm) {
    CMatrix n(3, 3);
    n(0, 1) = 1.0;
    n(1, 2) = 1.0;
    const CMatrix e = expm(n);
    EXPECT_NEAR(std::abs(e(0, 2) - 0.5), 0.0, 1e-14);
    const CMatrix d = expm(CMatrix::diag(std::vector<double>{-30.0, 0.0, 12.0}));
    EXPECT_NEAR(d(0, 0).real(), std::exp(-30.0), 1e-25);
    EXPECT_NEAR(d(2, 2).real() / std::exp(12.0), 1.0, 1e-12);
}

TEST(Expm, GroupLaw) {
    CounterRng rng(11, 0);
    const CMatrix a = 0.3 * rng.cmatrix(6, 6);
    EXPECT_LT(frob_norm(expm(a) * expm(a) - expm(2.0 * a)), 1e-11);
    EXPECT_LT(frob_norm(expm(a) * expm(-a) - CMatrix::identity(6)), 1e-12);
}

TEST(Solve, InverseAndPseudoInverse) {
    CounterRng rng(5, 0);
    const CMatrix a = rng.cmatrix(7, 7);
    EXPECT_LT(frob_norm(a * inverse(a) - CMatrix::identity(7)), 1e-10);
    const CMatrix b = rng.cmatrix(4, 6);
    const CMatrix p = pinv(b);
    EXPECT_LT(frob_norm(b * p * b - b), 1e-11);
    EXPECT_LT(frob_norm(p * b * p - p), 1e-11);
    EXPECT_LT(hermitian_defect(b * p), 1e-11);
    EXPECT_LT(hermitian_defect(p * b), 1e-11);
}

TEST(Subspaces, NullSpaceRangeRank) {
    CounterRng rng(9, 0);
    const CMatrix x = rng.cmatrix(6, 2), y = rng.cmatrix(2, 6);
    const CMatrix m = x * y;  // rank 2
    EXPECT_EQ(rank(m, 1e-9), 2u);
    const CMatrix ns = null_space(m, 1e-9);
    EXPECT_EQ(ns.cols(), 4u);
    EXPECT_LT(frob_norm(m * ns), 1e-10);
    EXPECT_EQ(range_basis(m, 1e-9).cols(), 2u);
}

TEST(Kron, MixedProductAndSparseAccumulation) {
    CounterRng rng(2, 0);
    const CMatrix a = rng.cmatrix(2, 3), b = rng.cmatrix(3, 2), c = rng.cmatrix(3, 2), d = rng.cmatrix(2, 3);
    EXPECT_LT(frob_norm(kron(a, c) * kron(b, d) - kron(a * b, c * d)), 1e-12);
    CMatrix acc(6, 6);
    CMatrix sa = a, sc = c;
    sa(0, 1) = 0.0;
    sc(2, 0) = 0.0;
    kron_axpy(acc, cplx(0.5, -1.0), sa, sc);
    EXPECT_LT(frob_norm(acc - cplx(0.5, -1.0) * kron(sa, sc)), 1e-14);
}

TEST(SqrtPsd, SquaresBack) {
    CounterRng rng(4, 0);
    const CMatrix g = rng.cmatrix(5, 5);
    const CMatrix p = g.adjoint() * g;
    const CMatrix s = sqrt_psd(p);
    EXPECT_LT(frob_norm(s * s - p), 1e-10);
    EXPECT_LT(hermitian_defect(s), 1e-12);
}

TEST(Rng, SplitMixReferenceValues) {
    // first outputs of the reference SplitMix64 stream started at state 0
    EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
    EXPECT_EQ(splitmix64(0x9E3779B97F4A7C15ULL), 0x6E789E6AA1B965F4ULL);
}

TEST(Rng, StreamsAreDeterministicAndIndependentOfOrder) {
    CounterRng a(42, 7), b(42, 7), c(42, 8);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        EXPECT_NE(x, c.next_u64());
    }
    CounterRng u(1, 0);
    double mean = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double x = u.uniform();
        ASSERT_GE(x, 0.0);
        ASSERT_LT(x, 1.0);
        mean += x;
    }
    EXPECT_NEAR(mean / 20000.0, 0.5, 0.01);
}

TEST(Errors, KindsMapToExitCodes) {
    EXPECT_EQ(exit_code(ErrorKind::Schema), 2);
    EXPECT_EQ(exit_code(ErrorKind::Axiom), 3);
    EXPECT_EQ(exit_code(ErrorKind::Contract), 4);
    EXPECT_EQ(exit_code(ErrorKind::Resource), 5);
    try {
        CMatrix(2, 3) * CMatrix(2, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Contract);
        EXPECT_EQ(e.code(), "DimensionMismatch");
    }
}
