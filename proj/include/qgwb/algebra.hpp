#pragma once

// Finite-dimensional *-algebras given by structure constants, and elements of A (x) M_m
// stored as coefficient matrices: X = sum_i e_i (x) X[i].

#include <cstddef>
#include <vector>

#include "numlin.hpp"

namespace qgwb {

struct Triple {
    std::size_t i, j, k;
    cplx v;
};

using SparseVec = std::vector<std::pair<std::size_t, cplx>>;

inline SparseVec sparse(const Vec& x) {
    SparseVec s;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != cplx(0.0)) s.push_back({i, x[i]});
    return s;
}

/// Dense accumulator that remembers which coordinates were touched, so clearing is cheap.
class SparseAcc {
public:
    explicit SparseAcc(std::size_t n) : v_(n), mark_(n, 0) {}
    void add(std::size_t k, cplx x) {
        if (!mark_[k]) {
            mark_[k] = 1;
            touched_.push_back(k);
        }
        v_[k] += x;
    }
    /// Euclidean norm of the accumulated vector; resets to zero.
    double norm_and_clear() {
        double s = 0.0;
        for (auto k : touched_) {
            s += std::norm(v_[k]);
            v_[k] = 0.0;
            mark_[k] = 0;
        }
        touched_.clear();
        return std::sqrt(s);
    }

private:
    Vec v_;
    std::vector<char> mark_;
    std::vector<std::size_t> touched_;
};

class FiniteAlgebra {
public:
    FiniteAlgebra() = default;
    FiniteAlgebra(std::size_t dim, std::vector<Triple> mult, Vec unit, CMatrix star)
        : dim_(dim), mult_(std::move(mult)), unit_(std::move(unit)), star_(std::move(star)) {
        by_left_.assign(dim_, {});
        table_.assign(dim_ * dim_, {});
        for (std::size_t t = 0; t < mult_.size(); ++t) {
            const auto& m = mult_[t];
            if (m.i >= dim_ || m.j >= dim_ || m.k >= dim_)
                fail(ErrorKind::Schema, "SchemaError", "structure constant index out of range");
            by_left_[m.i].push_back(t);
            table_[m.i * dim_ + m.j].push_back({m.k, m.v});
        }
        if (star_.rows() != dim_ || star_.cols() != dim_ || unit_.size() != dim_)
            fail(ErrorKind::Schema, "SchemaError", "unit/star size differs from dim");
        for (std::size_t i = 0; i < dim_; ++i) adj_.push_back(sparse(star_.col(i)));
    }

    /// Direct sum of full matrix algebras; basis = matrix units E^k_ab, block by block, row-major.
    static FiniteAlgebra matrix_blocks(const std::vector<std::size_t>& sizes) {
        std::size_t dim = 0;
        std::vector<std::size_t> off;
        for (auto n : sizes) {
            off.push_back(dim);
            dim += n * n;
        }
        std::vector<Triple> mult;
        Vec unit(dim);
        CMatrix star(dim, dim);
        for (std::size_t b = 0; b < sizes.size(); ++b) {
            const std::size_t n = sizes[b];
            for (std::size_t i = 0; i < n; ++i) {
                unit[off[b] + i * n + i] = 1.0;
                for (std::size_t j = 0; j < n; ++j) {
                    star(off[b] + j * n + i, off[b] + i * n + j) = 1.0;
                    for (std::size_t l = 0; l < n; ++l)
                        mult.push_back({off[b] + i * n + j, off[b] + j * n + l, off[b] + i * n + l, 1.0});
                }
            }
        }
        return FiniteAlgebra(dim, std::move(mult), std::move(unit), std::move(star));
    }

    std::size_t dim() const { return dim_; }
    const std::vector<Triple>& mult() const { return mult_; }
    const Vec& unit() const { return unit_; }
    /// Column i holds the coefficients of e_i^*.
    const CMatrix& star_matrix() const { return star_; }
    /// Sparse coefficients of e_i^*.
    const SparseVec& adj_basis(std::size_t i) const { return adj_[i]; }

    Vec mul(const Vec& x, const Vec& y) const {
        Vec z(dim_);
        for (const auto& t : mult_) {
            const cplx a = x[t.i];
            if (a == cplx(0.0)) continue;
            const cplx b = y[t.j];
            if (b == cplx(0.0)) continue;
            z[t.k] += t.v * a * b;
        }
        return z;
    }

    Vec adj(const Vec& x) const { return star_ * vconj(x); }

    Vec basis(std::size_t i) const { return unit_vec(dim_, i); }

    /// Matrix of y -> x y.
    CMatrix left_mult(const Vec& x) const {
        CMatrix m(dim_, dim_);
        for (const auto& t : mult_) m(t.k, t.j) += t.v * x[t.i];
        return m;
    }
    /// Matrix of y -> y x.
    CMatrix right_mult(const Vec& x) const {
        CMatrix m(dim_, dim_);
        for (const auto& t : mult_) m(t.k, t.i) += t.v * x[t.j];
        return m;
    }

    /// Indices into mult() of the triples whose left factor is e_i.
    const std::vector<std::size_t>& triples_with_left(std::size_t i) const { return by_left_[i]; }

    /// Sparse coefficients of e_i e_j.
    const std::vector<std::pair<std::size_t, cplx>>& product(std::size_t i, std::size_t j) const {
        return table_[i * dim_ + j];
    }

    double associativity_residual() const {
        double worst = 0.0;
        SparseAcc acc(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                for (std::size_t k = 0; k < dim_; ++k) {
                    for (const auto& [m, v] : product(i, j))
                        for (const auto& [n, w] : product(m, k)) acc.add(n, v * w);
                    for (const auto& [m, v] : product(j, k))
                        for (const auto& [n, w] : product(i, m)) acc.add(n, -v * w);
                    worst = std::max(worst, acc.norm_and_clear());
                }
        return worst;
    }

    double unit_residual() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            worst = std::max(worst, vnorm(vsub(mul(unit_, basis(i)), basis(i))));
            worst = std::max(worst, vnorm(vsub(mul(basis(i), unit_), basis(i))));
        }
        return worst;
    }

    /// (xy)* = y* x*, x** = x.
    double star_residual() const {
        double worst = 0.0;
        SparseAcc acc(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            worst = std::max(worst, vnorm(vsub(adj(adj(basis(i))), basis(i))));
            for (std::size_t j = 0; j < dim_; ++j) {
                for (const auto& [k, v] : product(i, j))
                    for (const auto& [p, w] : adj_[k]) acc.add(p, std::conj(v) * w);
                for (const auto& [p, w1] : adj_[j])
                    for (const auto& [q, w2] : adj_[i])
                        for (const auto& [k, v] : product(p, q)) acc.add(k, -w1 * w2 * v);
                worst = std::max(worst, acc.norm_and_clear());
            }
        }
        return worst;
    }

private:
    std::size_t dim_ = 0;
    std::vector<Triple> mult_;
    Vec unit_;
    CMatrix star_;
    std::vector<std::vector<std::size_t>> by_left_;
    std::vector<std::vector<std::pair<std::size_t, cplx>>> table_;
    std::vector<SparseVec> adj_;
};

/// Element of A (x) M_m.
struct AMat {
    std::vector<CMatrix> c;

    std::size_t space_dim() const { return c.empty() ? 0 : c.front().rows(); }
};

inline AMat amat_zero(const FiniteAlgebra& a, std::size_t m) { return AMat{std::vector<CMatrix>(a.dim(), CMatrix(m, m))}; }

inline AMat amat_unit(const FiniteAlgebra& a, std::size_t m) {
    AMat u = amat_zero(a, m);
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (a.unit()[i] != cplx(0.0)) u.c[i] = a.unit()[i] * CMatrix::identity(m);
    return u;
}

/// a (x) X.
inline AMat amat_simple(const FiniteAlgebra& alg, const Vec& a, const CMatrix& x) {
    AMat r = amat_zero(alg, x.rows());
    for (std::size_t i = 0; i < alg.dim(); ++i)
        if (a[i] != cplx(0.0)) r.c[i] = a[i] * x;
    return r;
}

inline AMat amat_mul(const FiniteAlgebra& alg, const AMat& x, const AMat& y) {
    const std::size_t m = x.space_dim();
    AMat z = amat_zero(alg, m);
    std::vector<std::vector<Entry>> xs(alg.dim());
    std::vector<bool> yz(alg.dim());
    for (std::size_t i = 0; i < alg.dim(); ++i) {
        xs[i] = nonzero_entries(x.c[i]);
        yz[i] = max_abs(y.c[i]) == 0.0;
    }
    for (const auto& t : alg.mult()) {
        if (xs[t.i].empty() || yz[t.j]) continue;
        product_axpy(z.c[t.k], t.v, xs[t.i], y.c[t.j]);
    }
    return z;
}

inline AMat amat_adj(const FiniteAlgebra& alg, const AMat& x) {
    const std::size_t m = x.space_dim();
    AMat z = amat_zero(alg, m);
    const CMatrix& s = alg.star_matrix();
    for (std::size_t i = 0; i < alg.dim(); ++i) {
        if (max_abs(x.c[i]) == 0.0) continue;
        const CMatrix xa = x.c[i].adjoint();
        for (std::size_t j = 0; j < alg.dim(); ++j)
            if (s(j, i) != cplx(0.0)) z.c[j].axpy(s(j, i), xa);
    }
    return z;
}

inline AMat amat_sub(const AMat& x, const AMat& y) {
    AMat z = x;
    for (std::size_t i = 0; i < z.c.size(); ++i) z.c[i] -= y.c[i];
    return z;
}

inline double amat_norm(const AMat& x) {
    double s = 0.0;
    for (const auto& m : x.c) s += std::pow(frob_norm(m), 2);
    return std::sqrt(s);
}

/// (omega (x) id)(X) for a functional given by its values on the basis.
inline CMatrix amat_slice(const AMat& x, const Vec& omega) {
    CMatrix r(x.space_dim(), x.space_dim());
    for (std::size_t i = 0; i < x.c.size(); ++i)
        if (omega[i] != cplx(0.0)) r.axpy(omega[i], x.c[i]);
    return r;
}

/// (id (x) f)(X) for a linear map f on the matrix leg.
template <class F>
AMat amat_map(const AMat& x, F f) {
    AMat r;
    r.c.reserve(x.c.size());
    for (const auto& m : x.c) r.c.push_back(f(m));
    return r;
}

}  // namespace qgwb
