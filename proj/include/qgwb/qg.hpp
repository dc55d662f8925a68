#pragma once

// Finite quantum groups by structure constants, their dual block algebras, and the
// dense-image analyzer for Hopf *-morphisms.

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "algebra.hpp"

namespace qgwb {

struct Irrep {
    std::size_t n = 1;
    std::vector<Vec> u;  // n*n coefficient vectors, row-major: u[i*n+j] = u_ij

    const Vec& at(std::size_t i, std::size_t j) const { return u[i * n + j]; }
};

struct NamedResidual {
    std::string name;
    double value;
    double tol;
    bool pass() const { return value <= tol; }
};

class FiniteQG {
public:
    FiniteQG() = default;

    /// Assembles and derives index tables. Axioms are checked separately (check_axioms / validate).
    FiniteQG(std::string id, FiniteAlgebra alg, std::vector<Triple> comult, Vec counit, CMatrix antipode, Vec haar,
             std::vector<Irrep> irreps)
        : id_(std::move(id)),
          alg_(std::move(alg)),
          comult_(std::move(comult)),
          counit_(std::move(counit)),
          antipode_(std::move(antipode)),
          haar_(std::move(haar)),
          irreps_(std::move(irreps)) {
        const std::size_t d = alg_.dim();
        if (counit_.size() != d || antipode_.rows() != d || antipode_.cols() != d)
            fail(ErrorKind::Schema, "SchemaError", "counit/antipode size differs from dim");
        delta_.assign(d, {});
        for (const auto& t : comult_) {
            if (t.i >= d || t.j >= d || t.k >= d) fail(ErrorKind::Schema, "SchemaError", "comult index out of range");
            delta_[t.i].push_back(t);
        }
        std::size_t total = 0;
        for (const auto& r : irreps_) {
            if (r.u.size() != r.n * r.n) fail(ErrorKind::Schema, "SchemaError", "irrep matrix has wrong entry count");
            offsets_.push_back(total);
            total += r.n * r.n;
        }
        if (total != d)
            fail(ErrorKind::Axiom, "AxiomViolation",
                 "irrep coefficients: sum n_a^2 = " + std::to_string(total) + " but dim = " + std::to_string(d));
        ibasis_ = CMatrix(d, d);
        for (std::size_t a = 0; a < irreps_.size(); ++a)
            for (std::size_t c = 0; c < irreps_[a].u.size(); ++c) {
                if (irreps_[a].u[c].size() != d) fail(ErrorKind::Schema, "SchemaError", "irrep coefficient vector size");
                ibasis_.set_col(offsets_[a] + c, irreps_[a].u[c]);
            }
        if (rank(ibasis_, 1e-9) != d) fail(ErrorKind::Axiom, "AxiomViolation", "irrep coefficients are not a basis");
        ibasis_inv_ = inverse(ibasis_);
        trivial_ = irreps_.size();
        for (std::size_t a = 0; a < irreps_.size(); ++a)
            if (irreps_[a].n == 1 && vnorm(vsub(irreps_[a].u[0], alg_.unit())) < 1e-9) trivial_ = a;
        if (trivial_ == irreps_.size()) fail(ErrorKind::Axiom, "AxiomViolation", "no trivial irrep (u = 1) supplied");
        for (std::size_t a = 0; a < irreps_.size(); ++a)
            for (std::size_t i = 0; i < irreps_[a].n; ++i)
                for (std::size_t j = 0; j < irreps_[a].n; ++j) labels_.push_back({a, i, j});
    }

    struct Label {
        std::size_t alpha, i, j;
    };

    const std::string& id() const { return id_; }
    std::size_t dim() const { return alg_.dim(); }
    const FiniteAlgebra& alg() const { return alg_; }
    const std::vector<Triple>& comult() const { return comult_; }
    const std::vector<Triple>& comult_of(std::size_t i) const { return delta_[i]; }
    const Vec& counit() const { return counit_; }
    const CMatrix& antipode() const { return antipode_; }
    const Vec& haar() const { return haar_; }
    const std::vector<Irrep>& irreps() const { return irreps_; }
    const Irrep& irrep(std::size_t a) const { return irreps_[a]; }
    std::size_t num_irreps() const { return irreps_.size(); }
    std::size_t trivial() const { return trivial_; }

    /// Flat index of u^a_ij in the irrep basis (also the index of e^a_ij in the dual block algebra).
    std::size_t flat(std::size_t a, std::size_t i, std::size_t j) const { return offsets_[a] + i * irreps_[a].n + j; }
    std::size_t offset(std::size_t a) const { return offsets_[a]; }
    const Label& label(std::size_t c) const { return labels_[c]; }
    std::vector<std::size_t> block_sizes() const {
        std::vector<std::size_t> s;
        for (const auto& r : irreps_) s.push_back(r.n);
        return s;
    }
    std::size_t max_irrep_dim() const {
        std::size_t m = 0;
        for (const auto& r : irreps_) m = std::max(m, r.n);
        return m;
    }

    /// Columns are the coefficient vectors of u^a_ij in flat order.
    const CMatrix& irrep_basis() const { return ibasis_; }
    const CMatrix& irrep_basis_inv() const { return ibasis_inv_; }
    const Vec& u(std::size_t c) const { return irreps_[labels_[c].alpha].u[labels_[c].i * irreps_[labels_[c].alpha].n + labels_[c].j]; }

    /// Coordinates of x in the irrep basis.
    Vec irrep_coords(const Vec& x) const { return ibasis_inv_ * x; }

    Vec mul(const Vec& x, const Vec& y) const { return alg_.mul(x, y); }
    Vec adj(const Vec& x) const { return alg_.adj(x); }
    Vec S(const Vec& x) const { return antipode_ * x; }
    Vec basis(std::size_t i) const { return alg_.basis(i); }
    const Vec& one() const { return alg_.unit(); }

    /// Delta(x) as a d*d vector, index j*d+k for e_j (x) e_k.
    Vec coproduct(const Vec& x) const {
        const std::size_t d = dim();
        Vec out(d * d);
        for (std::size_t i = 0; i < d; ++i) {
            if (x[i] == cplx(0.0)) continue;
            for (const auto& t : delta_[i]) out[t.j * d + t.k] += x[i] * t.v;
        }
        return out;
    }

    /// Evaluates a functional (values on the basis) at x.
    static cplx apply(const Vec& f, const Vec& x) {
        cplx s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += f[i] * x[i];
        return s;
    }

    /// Kac type: S^2 = id and S(x*) = S(x)*.
    double kac_residual() const {
        double worst = frob_norm(antipode_ * antipode_ - CMatrix::identity(dim()));
        for (std::size_t i = 0; i < dim(); ++i) {
            const Vec l = S(adj(basis(i)));
            const Vec r = adj(S(basis(i)));
            worst = std::max(worst, vnorm(vsub(l, r)));
        }
        return worst;
    }
    bool is_kac(double tol = 1e-9) const { return kac_residual() <= tol; }

    /// Products in A (x) A, both given as d*d vectors.
    Vec mul2(const Vec& x, const Vec& y) const {
        const std::size_t d = dim();
        Vec z(d * d);
        const auto nx = nonzeros(x), ny = nonzeros(y);
        for (auto a : nx)
            for (auto b : ny) {
                const cplx c = x[a] * y[b];
                for (const auto& [k1, v1] : alg_.product(a / d, b / d))
                    for (const auto& [k2, v2] : alg_.product(a % d, b % d)) z[k1 * d + k2] += c * v1 * v2;
            }
        return z;
    }

    /// Structure constants of the dual block algebra in the irrep basis.
    struct DualStructure {
        std::vector<Triple> comult;  // {c, p, q, v}: Delta-hat(e_c) has v at e_p (x) e_q
        CMatrix antipode;
    };

    /// Computed on first use and shared by copies.
    const DualStructure& dual_structure() const {
        std::call_once(dual_->once, [&] {
            const std::size_t d = dim();
            DualStructure& s = dual_->data;
            // u_a u_b = sum_c C[a][b][c] u_c ; Delta-hat(e_c) = sum C[a][b][c] e_b (x) e_a
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b) {
                    const Vec c = irrep_coords(mul(u(a), u(b)));
                    for (std::size_t k = 0; k < d; ++k)
                        if (std::abs(c[k]) > 1e-13) s.comult.push_back({k, b, a, c[k]});
                }
            // S-hat(e_c) = sum_a K[a][c] e_{a^T}, where (u_a)* = sum_c K[a][c] u_c
            s.antipode = CMatrix(d, d);
            for (std::size_t a = 0; a < d; ++a) {
                const Vec k = irrep_coords(adj(u(a)));
                const auto& l = label(a);
                const std::size_t at = flat(l.alpha, l.j, l.i);
                for (std::size_t c = 0; c < d; ++c)
                    if (std::abs(k[c]) > 1e-13) s.antipode(at, c) += k[c];
            }
        });
        return dual_->data;
    }

    static std::vector<std::size_t> nonzeros(const Vec& x) {
        std::vector<std::size_t> nz;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] != cplx(0.0)) nz.push_back(i);
        return nz;
    }

private:
    std::string id_;
    FiniteAlgebra alg_;
    std::vector<Triple> comult_;
    std::vector<std::vector<Triple>> delta_;
    Vec counit_;
    CMatrix antipode_;
    Vec haar_;
    std::vector<Irrep> irreps_;
    std::vector<std::size_t> offsets_;
    std::vector<Label> labels_;
    CMatrix ibasis_, ibasis_inv_;
    std::size_t trivial_ = 0;
    struct DualCache {
        std::once_flag once;
        DualStructure data;
    };
    std::shared_ptr<DualCache> dual_ = std::make_shared<DualCache>();
};

// ---------------------------------------------------------------- axioms

/// Haar state solver: kernel of the left/right invariance system, normalised by h(1) = 1.
inline Vec solve_haar(const FiniteAlgebra& alg, const std::vector<Triple>& comult) {
    const std::size_t d = alg.dim();
    CMatrix m(2 * d * d, d);
    // row (i,k): sum_j h_j Delta[i][j][k] - h_i 1_k  (left);  row (i,j): sum_k h_k Delta[i][j][k] - h_i 1_j (right)
    for (const auto& t : comult) {
        m(t.i * d + t.k, t.j) += t.v;
        m(d * d + t.i * d + t.j, t.k) += t.v;
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            m(i * d + k, i) -= alg.unit()[k];
            m(d * d + i * d + k, i) -= alg.unit()[k];
        }
    CMatrix g = m.adjoint() * m;
    auto e = hermitian_eig(0.5 * (g + g.adjoint()));
    const double scale = std::max(1.0, e.values.back());
    std::size_t nullity = 0;
    for (double x : e.values)
        if (x <= 1e-12 * scale) ++nullity;
    if (nullity == 0) fail(ErrorKind::Axiom, "HaarNotFound", "invariance system has trivial kernel");
    if (nullity > 1) fail(ErrorKind::Axiom, "NonUnique", "invariance kernel dimension " + std::to_string(nullity));
    Vec h = e.vectors.col(0);
    const cplx h1 = FiniteQG::apply(h, alg.unit());
    if (std::abs(h1) < 1e-12) fail(ErrorKind::Axiom, "HaarNotFound", "invariant functional vanishes at 1");
    h = vscale(h, 1.0 / h1);
    return h;
}

inline CMatrix haar_gram(const FiniteQG& g) {
    const std::size_t d = g.dim();
    CMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        const Vec ei = g.adj(g.basis(i));
        for (std::size_t j = 0; j < d; ++j) m(i, j) = FiniteQG::apply(g.haar(), g.mul(ei, g.basis(j)));
    }
    return m;
}

/// Every FiniteQG invariant as a named residual.
inline std::vector<NamedResidual> check_axioms(const FiniteQG& g, double tol = 1e-9) {
    std::vector<NamedResidual> out;
    const std::size_t d = g.dim();
    const auto& A = g.alg();
    out.push_back({"associativity", A.associativity_residual(), tol});
    out.push_back({"unit", A.unit_residual(), tol});
    out.push_back({"star_involution", A.star_residual(), tol});

    double coassoc = 0.0, mult = 0.0, star = 0.0, counit = 0.0, antip = 0.0, counit_hom = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        // coassociativity on d^3 coordinates
        std::map<std::size_t, cplx> acc;
        for (const auto& t : g.comult_of(i)) {
            for (const auto& s : g.comult_of(t.j)) acc[(s.j * d + s.k) * d + t.k] += t.v * s.v;
            for (const auto& s : g.comult_of(t.k)) acc[(t.j * d + s.j) * d + s.k] -= t.v * s.v;
        }
        double r = 0.0;
        for (auto& [k, v] : acc) r += std::norm(v);
        coassoc = std::max(coassoc, std::sqrt(r));

        // counit: (eps (x) id)Delta = id = (id (x) eps)Delta
        Vec l(d), rr(d);
        for (const auto& t : g.comult_of(i)) {
            l[t.k] += g.counit()[t.j] * t.v;
            rr[t.j] += g.counit()[t.k] * t.v;
        }
        counit = std::max({counit, vnorm(vsub(l, g.basis(i))), vnorm(vsub(rr, g.basis(i)))});

        // antipode: m(S (x) id)Delta = eps 1 = m(id (x) S)Delta
        Vec sl(d), sr(d);
        for (const auto& t : g.comult_of(i)) {
            vaxpy(sl, t.v, g.mul(g.S(g.basis(t.j)), g.basis(t.k)));
            vaxpy(sr, t.v, g.mul(g.basis(t.j), g.S(g.basis(t.k))));
        }
        const Vec target = vscale(g.one(), g.counit()[i]);
        antip = std::max({antip, vnorm(vsub(sl, target)), vnorm(vsub(sr, target))});

        // Delta is *-preserving: Delta(e_i*) = Delta(e_i)^*
        const Vec dl = g.coproduct(g.adj(g.basis(i)));
        Vec dr(d * d);
        for (const auto& t : g.comult_of(i)) {
            const Vec aj = g.adj(g.basis(t.j)), ak = g.adj(g.basis(t.k));
            for (std::size_t p = 0; p < d; ++p) {
                if (aj[p] == cplx(0.0)) continue;
                for (std::size_t q = 0; q < d; ++q) dr[p * d + q] += std::conj(t.v) * aj[p] * ak[q];
            }
        }
        star = std::max(star, vnorm(vsub(dl, dr)));
    }
    // Delta multiplicative and eps multiplicative on basis pairs
    SparseAcc acc(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            cplx eps = -g.counit()[i] * g.counit()[j];
            for (const auto& [k, v] : A.product(i, j)) {
                eps += v * g.counit()[k];
                for (const auto& t : g.comult_of(k)) acc.add(t.j * d + t.k, v * t.v);
            }
            for (const auto& s : g.comult_of(i))
                for (const auto& t : g.comult_of(j))
                    for (const auto& [k1, v1] : A.product(s.j, t.j))
                        for (const auto& [k2, v2] : A.product(s.k, t.k)) acc.add(k1 * d + k2, -s.v * t.v * v1 * v2);
            mult = std::max(mult, acc.norm_and_clear());
            counit_hom = std::max(counit_hom, std::abs(eps));
        }
    counit_hom = std::max(counit_hom, std::abs(FiniteQG::apply(g.counit(), g.one()) - 1.0));
    out.push_back({"coassociativity", coassoc, tol});
    out.push_back({"comult_multiplicative", mult, tol});
    out.push_back({"comult_star", star, tol});
    out.push_back({"counit", counit, tol});
    out.push_back({"counit_multiplicative", counit_hom, tol});
    out.push_back({"antipode", antip, tol});

    // Haar state
    out.push_back({"haar_normalised", std::abs(FiniteQG::apply(g.haar(), g.one()) - 1.0), tol});
    const CMatrix gram = haar_gram(g);
    out.push_back({"haar_gram_hermitian", hermitian_defect(gram), tol});
    out.push_back({"haar_gram_psd", std::max(0.0, -min_eigenvalue(0.5 * (gram + gram.adjoint()))), tol});
    double inv = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        Vec l(d), r(d);
        for (const auto& t : g.comult_of(i)) {
            l[t.k] += g.haar()[t.j] * t.v;
            r[t.j] += g.haar()[t.k] * t.v;
        }
        const Vec target = vscale(g.one(), g.haar()[i]);
        inv = std::max({inv, vnorm(vsub(l, target)), vnorm(vsub(r, target))});
    }
    out.push_back({"haar_invariance", inv, tol});

    // irreps: comultiplication rule, unitarity, Schur orthogonality
    double rule = 0.0, unit = 0.0, schur = 0.0;
    for (std::size_t a = 0; a < g.num_irreps(); ++a) {
        const Irrep& r = g.irrep(a);
        for (std::size_t i = 0; i < r.n; ++i)
            for (std::size_t j = 0; j < r.n; ++j) {
                Vec rhs(d * d);
                for (std::size_t k = 0; k < r.n; ++k) {
                    const Vec& x = r.at(i, k);
                    const Vec& y = r.at(k, j);
                    for (std::size_t p = 0; p < d; ++p) {
                        if (x[p] == cplx(0.0)) continue;
                        for (std::size_t q = 0; q < d; ++q) rhs[p * d + q] += x[p] * y[q];
                    }
                }
                rule = std::max(rule, vnorm(vsub(g.coproduct(r.at(i, j)), rhs)));
                Vec s1(d), s2(d);
                for (std::size_t k = 0; k < r.n; ++k) {
                    s1 = vadd(s1, g.mul(g.adj(r.at(k, i)), r.at(k, j)));
                    s2 = vadd(s2, g.mul(r.at(i, k), g.adj(r.at(j, k))));
                }
                const Vec target = i == j ? g.one() : Vec(d);
                unit = std::max({unit, vnorm(vsub(s1, target)), vnorm(vsub(s2, target))});
            }
    }
    // Kac form: h(u^a_ij* u^b_kl) = delta_ab delta_ik delta_jl / n_a
    for (std::size_t c1 = 0; c1 < d; ++c1) {
        const Vec uc = g.adj(g.u(c1));
        const auto& l1 = g.label(c1);
        for (std::size_t c2 = 0; c2 < d; ++c2) {
            const auto& l2 = g.label(c2);
            const cplx val = FiniteQG::apply(g.haar(), g.mul(uc, g.u(c2)));
            const double expect =
                (l1.alpha == l2.alpha && l1.i == l2.i && l1.j == l2.j) ? 1.0 / static_cast<double>(g.irrep(l1.alpha).n) : 0.0;
            schur = std::max(schur, std::abs(val - expect));
        }
    }
    out.push_back({"irrep_comult_rule", rule, tol});
    out.push_back({"irrep_unitary", unit, tol});
    out.push_back({"schur_orthogonality", schur, tol});
    return out;
}

inline void validate(const FiniteQG& g, double tol = 1e-9) {
    for (const auto& r : check_axioms(g, tol))
        if (!r.pass()) fail(ErrorKind::Axiom, "AxiomViolation", r.name + " residual " + std::to_string(r.value));
}

// ---------------------------------------------------------------- dual block algebra

/// c0 of the dual: block algebra with matrix units e^a_ij indexed like the irrep basis.
class DualBlockAlgebra {
public:
    explicit DualBlockAlgebra(const FiniteQG& g)
        : g_(&g),
          alg_(FiniteAlgebra::matrix_blocks(g.block_sizes())),
          comult_(g.dual_structure().comult),
          antipode_(g.dual_structure().antipode) {
        counit_ = Vec(g.dim());
        counit_[g.flat(g.trivial(), 0, 0)] = 1.0;
    }

    const FiniteQG& parent() const { return *g_; }
    const FiniteAlgebra& alg() const { return alg_; }
    std::size_t dim() const { return alg_.dim(); }
    /// Triple {c, p, q, v}: Delta-hat(e_c) has coefficient v at e_p (x) e_q.
    const std::vector<Triple>& comult() const { return comult_; }
    const Vec& counit() const { return counit_; }
    const CMatrix& antipode() const { return antipode_; }
    /// Kac case: the unitary antipode equals the antipode.
    const CMatrix& unitary_antipode() const { return antipode_; }

    /// Delta-hat(x) as a D*D vector.
    Vec coproduct(const Vec& x) const {
        const std::size_t D = dim();
        Vec out(D * D);
        for (const auto& t : comult_)
            if (x[t.i] != cplx(0.0)) out[t.j * D + t.k] += x[t.i] * t.v;
        return out;
    }

    /// Block matrices of an element: x^a as n_a x n_a.
    std::vector<CMatrix> blocks(const Vec& x) const {
        std::vector<CMatrix> out;
        for (std::size_t a = 0; a < g_->num_irreps(); ++a) {
            const std::size_t n = g_->irrep(a).n;
            CMatrix m(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) m(i, j) = x[g_->flat(a, i, j)];
            out.push_back(m);
        }
        return out;
    }
    Vec from_blocks(const std::vector<CMatrix>& b) const {
        Vec x(dim());
        for (std::size_t a = 0; a < b.size(); ++a)
            for (std::size_t i = 0; i < b[a].rows(); ++i)
                for (std::size_t j = 0; j < b[a].cols(); ++j) x[g_->flat(a, i, j)] = b[a](i, j);
        return x;
    }

    std::vector<NamedResidual> check(double tol = 1e-9) const {
        const std::size_t D = dim();
        std::vector<NamedResidual> out;
        // coassociativity
        std::vector<std::vector<Triple>> by(D);
        for (const auto& t : comult_) by[t.i].push_back(t);
        double coassoc = 0.0, hom = 0.0, cnt = 0.0, star = 0.0;
        for (std::size_t c = 0; c < D; ++c) {
            std::map<std::size_t, cplx> acc;
            for (const auto& t : by[c]) {
                for (const auto& s : by[t.j]) acc[(s.j * D + s.k) * D + t.k] += t.v * s.v;
                for (const auto& s : by[t.k]) acc[(t.j * D + s.j) * D + s.k] -= t.v * s.v;
            }
            double r = 0.0;
            for (auto& [k, v] : acc) r += std::norm(v);
            coassoc = std::max(coassoc, std::sqrt(r));
            Vec l(D), rr(D);
            for (const auto& t : by[c]) {
                l[t.k] += counit_[t.j] * t.v;
                rr[t.j] += counit_[t.k] * t.v;
            }
            cnt = std::max({cnt, vnorm(vsub(l, alg_.basis(c))), vnorm(vsub(rr, alg_.basis(c)))});
        }
        // *-homomorphism on basis pairs (block algebra product is sparse)
        SparseAcc acc(D * D);
        for (std::size_t a = 0; a < D; ++a)
            for (std::size_t b = 0; b < D; ++b) {
                for (const auto& [k, v] : alg_.product(a, b))
                    for (const auto& t : by[k]) acc.add(t.j * D + t.k, v * t.v);
                for (const auto& s : by[a])
                    for (const auto& t : by[b])
                        for (const auto& [k1, v1] : alg_.product(s.j, t.j))
                            for (const auto& [k2, v2] : alg_.product(s.k, t.k)) acc.add(k1 * D + k2, -s.v * t.v * v1 * v2);
                hom = std::max(hom, acc.norm_and_clear());
            }
        for (std::size_t c = 0; c < D; ++c) {
            for (const auto& [k, w] : alg_.adj_basis(c))
                for (const auto& t : by[k]) acc.add(t.j * D + t.k, std::conj(w) * t.v);
            for (const auto& t : by[c])
                for (const auto& [p, w1] : alg_.adj_basis(t.j))
                    for (const auto& [q, w2] : alg_.adj_basis(t.k)) acc.add(p * D + q, -std::conj(t.v) * w1 * w2);
            star = std::max(star, acc.norm_and_clear());
        }
        out.push_back({"dual_coassociativity", coassoc, tol});
        out.push_back({"dual_comult_multiplicative", hom, tol});
        out.push_back({"dual_comult_star", star, tol});
        out.push_back({"dual_counit", cnt, tol});
        out.push_back({"W_identity", w_identity_residual(), tol});
        return out;
    }

    /// (id (x) Delta-hat)(W) = W_13 W_12 with W = sum u_c (x) e_c, compared on A (x) c0 (x) c0 coordinates.
    double w_identity_residual() const {
        const FiniteQG& g = *g_;
        const std::size_t d = g.dim(), D = dim();
        std::map<std::pair<std::size_t, std::size_t>, Vec> lhs, rhs;  // key (p,q) in c0 (x) c0 -> A-vector
        for (const auto& t : comult_) {
            auto& v = lhs[{t.j, t.k}];
            if (v.empty()) v.assign(d, 0.0);
            vaxpy(v, t.v, g.u(t.i));
        }
        for (std::size_t a = 0; a < D; ++a)
            for (std::size_t b = 0; b < D; ++b) {
                // W_13 W_12 = sum u_a u_b (x) e_b (x) e_a
                auto& v = rhs[{b, a}];
                if (v.empty()) v.assign(d, 0.0);
                v = vadd(v, g.mul(g.u(a), g.u(b)));
            }
        double worst = 0.0;
        for (auto& [k, v] : rhs) {
            auto it = lhs.find(k);
            worst = std::max(worst, it == lhs.end() ? vnorm(v) : vnorm(vsub(v, it->second)));
        }
        for (auto& [k, v] : lhs)
            if (!rhs.count(k)) worst = std::max(worst, vnorm(v));
        return worst;
    }

private:
    const FiniteQG* g_;
    FiniteAlgebra alg_;
    std::vector<Triple> comult_;
    Vec counit_;
    CMatrix antipode_;
};

/// W = sum u^a_ij (x) E^a_ij with c0 realised block-diagonally in M_N, N = sum n_a.
inline AMat multiplicative_unitary(const FiniteQG& g) {
    std::size_t N = 0;
    std::vector<std::size_t> pos;
    for (const auto& r : g.irreps()) {
        pos.push_back(N);
        N += r.n;
    }
    AMat w = amat_zero(g.alg(), N);
    for (std::size_t c = 0; c < g.dim(); ++c) {
        const auto& l = g.label(c);
        const Vec& uc = g.u(c);
        for (std::size_t i = 0; i < g.dim(); ++i)
            if (uc[i] != cplx(0.0)) w.c[i](pos[l.alpha] + l.i, pos[l.alpha] + l.j) += uc[i];
    }
    return w;
}

/// Block W^a = sum_ij u^a_ij (x) E_ij in A (x) M_{n_a}; W is their direct sum.
inline AMat multiplicative_unitary_block(const FiniteQG& g, std::size_t a) {
    const Irrep& r = g.irrep(a);
    AMat w = amat_zero(g.alg(), r.n);
    for (std::size_t i = 0; i < r.n; ++i)
        for (std::size_t j = 0; j < r.n; ++j)
            for (const auto& [k, v] : sparse(r.at(i, j))) w.c[k](i, j) += v;
    return w;
}

/// max of ||U*U - 1|| and ||UU* - 1|| for U in A (x) M_m.
inline double unitarity_residual(const FiniteQG& g, const AMat& u) {
    const AMat one = amat_unit(g.alg(), u.space_dim());
    const AMat ua = amat_adj(g.alg(), u);
    return std::max(amat_norm(amat_sub(amat_mul(g.alg(), ua, u), one)), amat_norm(amat_sub(amat_mul(g.alg(), u, ua), one)));
}

/// ||(Delta (x) id)U - U_13 U_23|| over A (x) A (x) M_m.
inline double corep_identity_residual(const FiniteQG& g, const AMat& u) {
    const std::size_t d = g.dim(), n = u.space_dim();
    std::vector<std::vector<Entry>> sp(d);
    std::vector<char> nonzero(d);
    for (std::size_t i = 0; i < d; ++i) {
        sp[i] = nonzero_entries(u.c[i]);
        nonzero[i] = !sp[i].empty();
    }
    // (Delta (x) id)U grouped by the e_j (x) e_k slot
    std::map<std::size_t, std::vector<std::pair<std::size_t, cplx>>> lhs;
    for (std::size_t i = 0; i < d; ++i)
        if (nonzero[i])
            for (const auto& t : g.comult_of(i)) lhs[t.j * d + t.k].push_back({i, t.v});
    double r = 0.0;
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k) {
            const auto it = lhs.find(j * d + k);
            const bool prod = nonzero[j] && nonzero[k];
            if (it == lhs.end() && !prod) continue;
            CMatrix m(n, n);
            if (prod) product_axpy(m, -1.0, sp[j], u.c[k]);
            if (it != lhs.end())
                for (const auto& [i, v] : it->second) m.axpy(v, u.c[i]);
            r += std::pow(frob_norm(m), 2);
        }
    return std::sqrt(r);
}

inline std::vector<NamedResidual> check_w(const FiniteQG& g, double tol = 1e-9) {
    double unit = 0.0, corep = 0.0;
    for (std::size_t a = 0; a < g.num_irreps(); ++a) {
        const AMat w = multiplicative_unitary_block(g, a);
        unit = std::hypot(unit, unitarity_residual(g, w));
        corep = std::hypot(corep, corep_identity_residual(g, w));
    }
    return {{"W_unitary", unit, tol}, {"W_corep_identity", corep, tol}};
}

// ---------------------------------------------------------------- dense image

struct DenseImageReport {
    bool cond1_injective_alpha;
    bool cond2_injective_beta;
    bool cond3_AV_dense;
    bool cond4_dual_surjective;
    std::size_t rank1, rank2, rank3, rank4, target_rank;
    bool agree() const {
        return cond1_injective_alpha == cond2_injective_beta && cond2_injective_beta == cond3_AV_dense &&
               cond3_AV_dense == cond4_dual_surjective;
    }
    bool dense() const { return cond1_injective_alpha; }
};

/// Residual of (pi (x) pi)Delta_G = Delta_H pi and of the *-homomorphism property.
inline double morphism_residual(const FiniteQG& G, const FiniteQG& H, const CMatrix& pi) {
    const std::size_t dg = G.dim(), dh = H.dim();
    double worst = 0.0;
    for (std::size_t i = 0; i < dg; ++i) {
        const Vec pe = pi.col(i);
        const Vec lhs = H.coproduct(pe);
        Vec rhs(dh * dh);
        for (const auto& t : G.comult_of(i)) {
            const Vec a = pi.col(t.j), b = pi.col(t.k);
            for (std::size_t p = 0; p < dh; ++p) {
                if (a[p] == cplx(0.0)) continue;
                for (std::size_t q = 0; q < dh; ++q) rhs[p * dh + q] += t.v * a[p] * b[q];
            }
        }
        worst = std::max(worst, vnorm(vsub(lhs, rhs)));
        worst = std::max(worst, vnorm(vsub(pi * G.adj(G.basis(i)), H.adj(pe))));
        for (std::size_t j = 0; j < dg; ++j)
            worst = std::max(worst, vnorm(vsub(pi * G.mul(G.basis(i), G.basis(j)), H.mul(pe, pi.col(j)))));
    }
    worst = std::max(worst, vnorm(vsub(pi * G.one(), H.one())));
    return worst;
}

/// Four equivalent dense-image conditions for a Hopf *-morphism pi: C(G) -> C(H) (d_H x d_G matrix).
inline DenseImageReport dense_image_report(const FiniteQG& G, const FiniteQG& H, const CMatrix& pi, double tol = 1e-9) {
    if (pi.rows() != H.dim() || pi.cols() != G.dim())
        fail(ErrorKind::Schema, "SchemaError", "morphism matrix must be d_H x d_G");
    const double res = morphism_residual(G, H, pi);
    if (res > tol) fail(ErrorKind::Contract, "NotAMorphism", "intertwining residual " + std::to_string(res));
    const std::size_t dg = G.dim(), dh = H.dim();
    const double rtol = 1e-9;

    // (1) omega -> pi((id (x) omega)W^G): columns pi(u_c)
    CMatrix m1(dh, dg);
    for (std::size_t c = 0; c < dg; ++c) m1.set_col(c, pi * G.u(c));
    const std::size_t r1 = rank(m1, rtol);

    // bicharacter V = (pi (x) id)W^G in C(H) (x) c0(G-hat), as an AMat over H with block-diagonal leg
    AMat w = multiplicative_unitary(G);
    const std::size_t N = w.space_dim();
    AMat v = amat_zero(H.alg(), N);
    for (std::size_t i = 0; i < dg; ++i)
        for (std::size_t p = 0; p < dh; ++p)
            if (pi(p, i) != cplx(0.0)) v.c[p].axpy(pi(p, i), w.c[i]);
    std::vector<std::pair<std::size_t, std::size_t>> entry;  // (row, col) of e_c in M_N
    {
        std::size_t pos = 0;
        for (const auto& r : G.irreps()) {
            for (std::size_t i = 0; i < r.n; ++i)
                for (std::size_t j = 0; j < r.n; ++j) entry.push_back({pos + i, pos + j});
            pos += r.n;
        }
    }
    // (2) omega_c -> (id (x) omega_c)(V)
    CMatrix m2(dh, dg);
    for (std::size_t c = 0; c < dg; ++c)
        for (std::size_t p = 0; p < dh; ++p) m2(p, c) = v.c[p](entry[c].first, entry[c].second);
    const std::size_t r2 = rank(m2, rtol);

    // (3) span of (zeta (x) id)(V) inside the block algebra
    CMatrix m3(dg, dh);
    for (std::size_t p = 0; p < dh; ++p)
        for (std::size_t c = 0; c < dg; ++c) m3(c, p) = v.c[p](entry[c].first, entry[c].second);
    const std::size_t r3 = rank(m3, rtol);

    // (4) dual morphism pi-hat(e^H_b) = sum_c P[b][c] e^G_c with P = B_H^{-1} pi B_G
    const CMatrix P = H.irrep_basis_inv() * pi * G.irrep_basis();
    const std::size_t r4 = rank(P.transpose(), rtol);

    return {r1 == dg, r2 == dg, r3 == dg, r4 == dg, r1, r2, r3, r4, dg};
}

}  // namespace qgwb
