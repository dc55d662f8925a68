#pragma once

// Dense complex linear algebra used throughout qgwb.
// Storage is row-major; kron flattens with the left factor outermost.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace qgwb {

using cplx = std::complex<double>;
using Vec = std::vector<cplx>;

class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
    CMatrix(std::size_t rows, std::size_t cols, Vec entries) : r_(rows), c_(cols), a_(std::move(entries)) {
        if (a_.size() != r_ * c_) fail(ErrorKind::Contract, "DimensionMismatch", "entry count differs from rows*cols");
    }

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static CMatrix diag(const std::vector<double>& d) {
        CMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }
    static CMatrix diag(const Vec& d) {
        CMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }
    static CMatrix column(const Vec& v) { return CMatrix(v.size(), 1, v); }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    bool square() const { return r_ == c_; }
    bool empty() const { return a_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
    const Vec& data() const { return a_; }
    Vec& data() { return a_; }

    CMatrix adjoint() const {
        CMatrix m(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }
    CMatrix transpose() const {
        CMatrix m(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }
    CMatrix conj() const {
        CMatrix m = *this;
        for (auto& x : m.a_) x = std::conj(x);
        return m;
    }
    Vec col(std::size_t j) const {
        Vec v(r_);
        for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    void set_col(std::size_t j, const Vec& v) {
        for (std::size_t i = 0; i < r_; ++i) (*this)(i, j) = v[i];
    }
    CMatrix block(std::size_t i0, std::size_t j0, std::size_t nr, std::size_t nc) const {
        CMatrix m(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(i0 + i, j0 + j);
        return m;
    }
    void set_block(std::size_t i0, std::size_t j0, const CMatrix& b) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
    }

    CMatrix& operator+=(const CMatrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    CMatrix& operator-=(const CMatrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    CMatrix& operator*=(cplx s) {
        for (auto& x : a_) x *= s;
        return *this;
    }
    /// this += s * o
    void axpy(cplx s, const CMatrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += s * o.a_[k];
    }

private:
    void check_same(const CMatrix& o) const {
        if (r_ != o.r_ || c_ != o.c_) fail(ErrorKind::Contract, "DimensionMismatch", "matrix shapes differ");
    }

    std::size_t r_ = 0, c_ = 0;
    Vec a_;
};

inline CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
inline CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
inline CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
inline CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
inline CMatrix operator-(CMatrix a) { return a *= -1.0; }

inline CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) fail(ErrorKind::Contract, "DimensionMismatch", "inner dimensions differ in product");
    CMatrix c(a.rows(), b.cols());
    const std::size_t n = a.cols(), m = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx* crow = &c(i, 0);
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            const cplx* brow = &b(k, 0);
            for (std::size_t j = 0; j < m; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

/// Nonzero entries of a matrix, row-major.
struct Entry {
    std::size_t r, c;
    cplx v;
};
inline std::vector<Entry> nonzero_entries(const CMatrix& a) {
    std::vector<Entry> out;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != cplx(0.0)) out.push_back({i, j, a(i, j)});
    return out;
}

/// dst += s * A * b with A given by its nonzero entries.
inline void product_axpy(CMatrix& dst, cplx s, const std::vector<Entry>& a, const CMatrix& b) {
    const std::size_t m = b.cols();
    for (const auto& e : a) {
        const cplx f = s * e.v;
        cplx* out = &dst(e.r, 0);
        const cplx* row = &b(e.c, 0);
        for (std::size_t j = 0; j < m; ++j) out[j] += f * row[j];
    }
}

inline Vec operator*(const CMatrix& a, const Vec& v) {
    if (a.cols() != v.size()) fail(ErrorKind::Contract, "DimensionMismatch", "matrix-vector size mismatch");
    Vec out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

// ---- vector helpers ----

inline Vec vadd(const Vec& a, const Vec& b) {
    Vec c(a);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
    return c;
}
inline Vec vsub(const Vec& a, const Vec& b) {
    Vec c(a);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b[i];
    return c;
}
inline Vec vscale(const Vec& a, cplx s) {
    Vec c(a);
    for (auto& x : c) x *= s;
    return c;
}
inline void vaxpy(Vec& y, cplx s, const Vec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}
/// Inner product, conjugate-linear in the first argument.
inline cplx vdot(const Vec& a, const Vec& b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}
inline double vnorm(const Vec& a) { return std::sqrt(std::max(0.0, vdot(a, a).real())); }
inline double vmax_abs(const Vec& a) {
    double m = 0.0;
    for (auto& x : a) m = std::max(m, std::abs(x));
    return m;
}
inline Vec vconj(const Vec& a) {
    Vec c(a);
    for (auto& x : c) x = std::conj(x);
    return c;
}
inline Vec unit_vec(std::size_t n, std::size_t i) {
    Vec v(n);
    v[i] = 1.0;
    return v;
}

// ---- matrix scalars ----

inline cplx trace(const CMatrix& m) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) s += m(i, i);
    return s;
}
inline double frob_norm(const CMatrix& m) {
    double s = 0.0;
    for (auto& x : m.data()) s += std::norm(x);
    return std::sqrt(s);
}
inline double max_abs(const CMatrix& m) {
    double s = 0.0;
    for (auto& x : m.data()) s = std::max(s, std::abs(x));
    return s;
}
inline double hermitian_defect(const CMatrix& m) { return frob_norm(m - m.adjoint()); }
inline bool is_finite(const CMatrix& m) {
    for (auto& x : m.data())
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0)) continue;
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q) k(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
    return k;
}

/// dst += s (a (x) b), touching only nonzero entries of a and b.
inline void kron_axpy(CMatrix& dst, cplx s, const CMatrix& a, const CMatrix& b) {
    if (dst.rows() != a.rows() * b.rows() || dst.cols() != a.cols() * b.cols())
        fail(ErrorKind::Contract, "DimensionMismatch", "kron_axpy target has the wrong shape");
    std::vector<std::pair<std::size_t, cplx>> bnz;
    for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
            if (b(p, q) != cplx(0.0)) bnz.push_back({p * b.cols() + q, b(p, q)});
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0)) continue;
            const cplx f = s * aij;
            for (const auto& [pq, v] : bnz) dst(i * b.rows() + pq / b.cols(), j * b.cols() + pq % b.cols()) += f * v;
        }
}

// ---- Hermitian eigensolver (cyclic complex Jacobi) ----

struct EigResult {
    std::vector<double> values;  // ascending
    CMatrix vectors;             // columns
};

inline EigResult hermitian_eig(const CMatrix& m, int max_sweeps = 100) {
    if (!m.square()) fail(ErrorKind::Contract, "DimensionMismatch", "hermitian_eig needs a square matrix");
    const std::size_t n = m.rows();
    const double fn = frob_norm(m);
    if (hermitian_defect(m) > 1e-9 * std::max(1.0, fn))
        fail(ErrorKind::Contract, "NotHermitian", "defect " + std::to_string(hermitian_defect(m)));
    CMatrix a = m;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            cplx h = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = h;
            a(j, i) = std::conj(h);
        }
    for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
    CMatrix v = CMatrix::identity(n);

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
        return std::sqrt(2.0 * s);
    };
    const double target = 1e-15 * std::max(fn, std::numeric_limits<double>::min());

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (off_norm() <= target) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double b = std::abs(a(p, q));
                if (b <= 1e-300) continue;
                const double app = a(p, p).real(), aqq = a(q, q).real();
                if (b < 1e-18 * (std::abs(app) + std::abs(aqq)) && sweep > 3) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const cplx ph = a(p, q) / b;  // e^{i phi}
                const double tau = (aqq - app) / (2.0 * b);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // U = [[c, s], [-s conj(ph), c conj(ph)]]
                const cplx upp = c, upq = s, uqp = -s * std::conj(ph), uqq = c * std::conj(ph);
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * upp + akq * uqp;
                    a(k, q) = akp * upq + akq * uqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
                    a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * upp + vkq * uqp;
                    v(k, q) = vkp * upq + vkq * uqq;
                }
            }
    }
    if (sweep == max_sweeps && off_norm() > target * 1e3)
        fail(ErrorKind::Contract, "NoConvergence", "Jacobi sweep budget exhausted");

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
    EigResult r{std::vector<double>(n), CMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        r.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) r.vectors(i, k) = v(i, order[k]);
    }
    return r;
}

/// Applies f to the spectrum of a Hermitian matrix.
template <class F>
CMatrix hermitian_apply(const CMatrix& m, F f) {
    auto e = hermitian_eig(m);
    const std::size_t n = m.rows();
    CMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx fk = f(e.values[k]);
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = e.vectors(i, k) * fk;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(e.vectors(j, k));
        }
    }
    return out;
}

inline double min_eigenvalue(const CMatrix& m) {
    if (m.rows() == 0) return 0.0;
    return hermitian_eig(m).values.front();
}

inline bool psd_check(const CMatrix& m, double tol) {
    if (!m.square()) fail(ErrorKind::Contract, "DimensionMismatch", "psd_check needs a square matrix");
    if (m.rows() == 0) return true;
    if (hermitian_defect(m) > std::max(tol, 1e-12) * std::max(1.0, frob_norm(m)))
        fail(ErrorKind::Contract, "NotHermitian", "psd_check input is not Hermitian");
    CMatrix h = 0.5 * (m + m.adjoint());
    return hermitian_eig(h).values.front() >= -tol;
}

inline CMatrix sqrt_psd(const CMatrix& m) {
    return hermitian_apply(0.5 * (m + m.adjoint()), [](double x) { return cplx(std::sqrt(std::max(0.0, x))); });
}

/// Largest singular value.
inline double op_norm(const CMatrix& m) {
    if (m.empty()) return 0.0;
    CMatrix g = m.rows() < m.cols() ? m * m.adjoint() : m.adjoint() * m;
    if (g.rows() <= 160) return std::sqrt(std::max(0.0, hermitian_eig(g).values.back()));
    // power iteration for large Gram matrices
    Vec x(g.rows());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1.0 + 0.001 * static_cast<double>(i % 7);
    double lam = 0.0;
    for (int it = 0; it < 1000; ++it) {
        Vec y = g * x;
        const double ny = vnorm(y);
        if (ny == 0.0) return 0.0;
        const double nl = vdot(x, y).real() / vdot(x, x).real();
        x = vscale(y, 1.0 / ny);
        if (std::abs(nl - lam) <= 1e-14 * std::abs(nl)) {
            lam = nl;
            break;
        }
        lam = nl;
    }
    return std::sqrt(std::max(0.0, lam));
}

/// One-sided (Hestenes) Jacobi: m V = W with W's columns mutually orthogonal, V unitary.
/// Singular values are the column norms of W, accurate to about eps * ||m|| even when tiny.
struct ColumnSvd {
    CMatrix W, V;
    std::vector<double> sigma;
};

inline ColumnSvd column_svd(const CMatrix& m, int max_sweeps = 80) {
    const std::size_t r = m.rows(), n = m.cols();
    ColumnSvd out{m, CMatrix::identity(n), {}};
    CMatrix& W = out.W;
    CMatrix& V = out.V;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                double a = 0.0, b = 0.0;
                cplx g = 0.0;
                for (std::size_t i = 0; i < r; ++i) {
                    const cplx wp = W(i, p), wq = W(i, q);
                    a += std::norm(wp);
                    b += std::norm(wq);
                    g += std::conj(wp) * wq;
                }
                const double ag = std::abs(g);
                if (ag == 0.0 || ag <= 1e-15 * std::sqrt(a * b)) continue;
                rotated = true;
                const double zeta = (b - a) / (2.0 * ag);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t), sn = c * t;
                const cplx ph = g / ag;
                auto rot = [&](CMatrix& X, std::size_t rows) {
                    for (std::size_t i = 0; i < rows; ++i) {
                        const cplx xp = X(i, p), xq = X(i, q);
                        X(i, p) = c * xp - sn * std::conj(ph) * xq;
                        X(i, q) = sn * ph * xp + c * xq;
                    }
                };
                rot(W, r);
                rot(V, n);
            }
        if (!rotated) break;
    }
    out.sigma.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double s2 = 0.0;
        for (std::size_t i = 0; i < r; ++i) s2 += std::norm(W(i, k));
        out.sigma[k] = std::sqrt(s2);
    }
    return out;
}

/// Orthonormal basis (columns) of {x : m x = 0}, singular values below tol counted as zero.
inline CMatrix null_space(const CMatrix& m, double tol) {
    const std::size_t n = m.cols();
    if (m.rows() == 0) return CMatrix::identity(n);
    const ColumnSvd s = column_svd(m);
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < n; ++k)
        if (s.sigma[k] <= tol) keep.push_back(k);
    CMatrix out(n, keep.size());
    for (std::size_t c = 0; c < keep.size(); ++c) out.set_col(c, s.V.col(keep[c]));
    return out;
}

/// Orthonormal basis of the column space of m.
inline CMatrix range_basis(const CMatrix& m, double tol) {
    const std::size_t n = m.rows();
    if (m.cols() == 0) return CMatrix(n, 0);
    const ColumnSvd s = column_svd(m);
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < m.cols(); ++k)
        if (s.sigma[k] > tol) keep.push_back(k);
    CMatrix out(n, keep.size());
    for (std::size_t c = 0; c < keep.size(); ++c) out.set_col(c, vscale(s.W.col(keep[c]), 1.0 / s.sigma[keep[c]]));
    return out;
}

inline std::size_t rank(const CMatrix& m, double tol) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    const ColumnSvd s = column_svd(m.rows() < m.cols() ? m.adjoint() : m);
    std::size_t r = 0;
    for (double x : s.sigma)
        if (x > tol) ++r;
    return r;
}

/// Moore-Penrose pseudo-inverse. Singular values below tol, or below the rounding floor of
/// m^*m (about 3e-7 of the largest), are dropped.
inline CMatrix pinv(const CMatrix& m, double tol = 1e-12) {
    auto e = hermitian_eig(m.adjoint() * m);
    const std::size_t n = m.cols();
    CMatrix g(n, n);
    const double floor = std::max(tol * tol, 1e-13 * (n ? e.values.back() : 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        if (e.values[k] <= floor) continue;
        const double inv = 1.0 / e.values[k];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) g(i, j) += inv * e.vectors(i, k) * std::conj(e.vectors(j, k));
    }
    return g * m.adjoint();
}

/// Solves a x = b for square a by partial-pivot LU; b may have several columns.
inline CMatrix solve(CMatrix a, CMatrix b) {
    if (!a.square() || a.rows() != b.rows()) fail(ErrorKind::Contract, "DimensionMismatch", "solve shapes");
    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (std::abs(a(piv, k)) == 0.0) fail(ErrorKind::Contract, "Singular", "solve: singular matrix");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(k, j), b(piv, j));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = a(i, k) / a(k, k);
            if (f == cplx(0.0)) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) -= f * b(k, j);
        }
    }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            cplx s = b(ii, j);
            for (std::size_t k = ii + 1; k < n; ++k) s -= a(ii, k) * b(k, j);
            b(ii, j) = s / a(ii, ii);
        }
    }
    return b;
}

inline CMatrix inverse(const CMatrix& a) { return solve(a, CMatrix::identity(a.rows())); }

inline double norm1(const CMatrix& m) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

/// Matrix exponential: spectral route for Hermitian input, Pade-13 scaling and squaring otherwise.
inline CMatrix expm(const CMatrix& m) {
    if (!m.square()) fail(ErrorKind::Contract, "DimensionMismatch", "expm needs a square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return m;
    if (hermitian_defect(m) <= 1e-14 * std::max(1.0, frob_norm(m)))
        return hermitian_apply(0.5 * (m + m.adjoint()), [](double x) { return cplx(std::exp(x)); });

    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
    const double theta13 = 5.371920351148152;
    const double nrm = norm1(m);
    int s = 0;
    if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    CMatrix a = m * cplx(std::ldexp(1.0, -s));
    const CMatrix id = CMatrix::identity(n);
    const CMatrix a2 = a * a, a4 = a2 * a2, a6 = a4 * a2;

    CMatrix inner_u = b[13] * a6 + b[11] * a4 + b[9] * a2;
    CMatrix u = a6 * inner_u + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
    u = a * u;
    CMatrix inner_v = b[12] * a6 + b[10] * a4 + b[8] * a2;
    CMatrix v = a6 * inner_v + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

    CMatrix r = solve(v - u, v + u);
    for (int k = 0; k < s; ++k) r = r * r;
    return r;
}

}  // namespace qgwb
