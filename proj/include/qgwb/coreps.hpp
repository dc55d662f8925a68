#pragma once

// Unitary corepresentations stored on the dual side: phi(e^a_ij) for the matrix units of the
// dual block algebra. U = sum_c u_c (x) phi(e_c) is assembled on demand.

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "functionals.hpp"
#include "rng.hpp"

namespace qgwb {

class Corep {
public:
    Corep(const FiniteQG& g, std::vector<CMatrix> phi) : g_(&g), phi_(std::move(phi)) {
        if (phi_.size() != g.dim()) fail(ErrorKind::Schema, "SchemaError", "corep needs one matrix per dual matrix unit");
        m_ = phi_.front().rows();
        for (const auto& p : phi_)
            if (p.rows() != m_ || p.cols() != m_) fail(ErrorKind::Schema, "SchemaError", "corep matrices differ in size");
    }

    const FiniteQG& parent() const { return *g_; }
    std::size_t space_dim() const { return m_; }
    const std::vector<CMatrix>& phi() const { return phi_; }
    const CMatrix& phi(std::size_t c) const { return phi_[c]; }

    /// phi(x) for x = sum x_c e_c in the dual block algebra.
    CMatrix phi_of(const Vec& x) const {
        CMatrix r(m_, m_);
        for (std::size_t c = 0; c < x.size(); ++c)
            if (x[c] != cplx(0.0)) r.axpy(x[c], phi_[c]);
        return r;
    }

    /// U = sum_c u_c (x) phi(e_c) in A (x) M_m.
    AMat assemble() const {
        const FiniteQG& g = *g_;
        AMat u = amat_zero(g.alg(), m_);
        for (std::size_t c = 0; c < g.dim(); ++c) {
            if (max_abs(phi_[c]) == 0.0) continue;
            for (const auto& [i, v] : sparse(g.u(c))) u.c[i].axpy(v, phi_[c]);
        }
        return u;
    }

    /// Inverse of assemble: phi(e_c) = sum_i Binv[c][i] U_i.
    static Corep from_amat(const FiniteQG& g, const AMat& u) {
        const CMatrix& Bi = g.irrep_basis_inv();
        std::vector<CMatrix> phi(g.dim(), CMatrix(u.space_dim(), u.space_dim()));
        for (std::size_t i = 0; i < g.dim(); ++i) {
            if (max_abs(u.c[i]) == 0.0) continue;
            for (std::size_t c = 0; c < g.dim(); ++c)
                if (Bi(c, i) != cplx(0.0)) phi[c].axpy(Bi(c, i), u.c[i]);
        }
        return Corep(g, std::move(phi));
    }

    /// *-homomorphism, unitality, unitarity of U and the corep identity.
    std::vector<NamedResidual> check(double tol = 1e-9) const {
        const FiniteQG& g = *g_;
        double hom = 0.0, star = 0.0;
        for (std::size_t a = 0; a < g.dim(); ++a) {
            const auto& la = g.label(a);
            star = std::max(star, frob_norm(phi_[a].adjoint() - phi_[g.flat(la.alpha, la.j, la.i)]));
            for (std::size_t b = 0; b < g.dim(); ++b) {
                const auto& lb = g.label(b);
                CMatrix expect(m_, m_);
                if (la.alpha == lb.alpha && la.j == lb.i) expect = phi_[g.flat(la.alpha, la.i, lb.j)];
                hom = std::max(hom, frob_norm(phi_[a] * phi_[b] - expect));
            }
        }
        CMatrix sum(m_, m_);
        for (std::size_t a = 0; a < g.num_irreps(); ++a)
            for (std::size_t i = 0; i < g.irrep(a).n; ++i) sum += phi_[g.flat(a, i, i)];
        const AMat u = assemble();
        return {{"phi_multiplicative", hom, tol},
                {"phi_star", star, tol},
                {"phi_unital", frob_norm(sum - CMatrix::identity(m_)), tol},
                {"U_unitary", unitarity_residual(g, u), tol},
                {"U_corep_identity", corep_identity_residual(g, u), tol}};
    }

private:
    const FiniteQG* g_;
    std::vector<CMatrix> phi_;
    std::size_t m_ = 0;
};

inline void same_parent(const Corep& a, const Corep& b) {
    if (&a.parent() != &b.parent() && a.parent().id() != b.parent().id())
        fail(ErrorKind::Contract, "ParentMismatch", a.parent().id() + " vs " + b.parent().id());
}

inline void require_kac(const FiniteQG& g) {
    if (!g.is_kac()) fail(ErrorKind::Contract, "NotKac", g.id() + " is not of Kac type");
}

// ---------------------------------------------------------------- constructors

inline Corep trivial_corep(const FiniteQG& g, std::size_t k = 1) {
    std::vector<CMatrix> phi(g.dim(), CMatrix(k, k));
    phi[g.flat(g.trivial(), 0, 0)] = CMatrix::identity(k);
    return Corep(g, std::move(phi));
}

/// The irrep u^a itself: phi(e^a_ij) = E_ij.
inline Corep irrep_corep(const FiniteQG& g, std::size_t a) {
    const std::size_t n = g.irrep(a).n;
    std::vector<CMatrix> phi(g.dim(), CMatrix(n, n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) phi[g.flat(a, i, j)](i, j) = 1.0;
    return Corep(g, std::move(phi));
}

inline Corep direct_sum(const std::vector<Corep>& parts) {
    if (parts.empty()) fail(ErrorKind::Contract, "EmptySum", "direct_sum of nothing");
    const FiniteQG& g = parts.front().parent();
    std::size_t m = 0;
    for (const auto& p : parts) {
        same_parent(parts.front(), p);
        m += p.space_dim();
    }
    std::vector<CMatrix> phi(g.dim(), CMatrix(m, m));
    std::size_t pos = 0;
    for (const auto& p : parts) {
        for (std::size_t c = 0; c < g.dim(); ++c) phi[c].set_block(pos, pos, p.phi(c));
        pos += p.space_dim();
    }
    return Corep(g, std::move(phi));
}

/// Regular corep: each irrep with multiplicity n_a (space dimension = dim A).
inline Corep regular_corep(const FiniteQG& g) {
    std::vector<Corep> parts;
    for (std::size_t a = 0; a < g.num_irreps(); ++a)
        for (std::size_t k = 0; k < g.irrep(a).n; ++k) parts.push_back(irrep_corep(g, a));
    return direct_sum(parts);
}

/// Direct sum of all irreps except the trivial one.
inline Corep nontrivial_irreps_corep(const FiniteQG& g) {
    std::vector<Corep> parts;
    for (std::size_t a = 0; a < g.num_irreps(); ++a)
        if (a != g.trivial()) parts.push_back(irrep_corep(g, a));
    if (parts.empty()) return trivial_corep(g, 1);
    return direct_sum(parts);
}

// ---------------------------------------------------------------- tensor, contragredient

/// U tensor V via phi = (phi_u (x) phi_v) o flip o Delta-hat.
inline Corep tensor(const Corep& u, const Corep& v) {
    same_parent(u, v);
    const FiniteQG& g = u.parent();
    const DualBlockAlgebra D(g);
    const std::size_t m = u.space_dim() * v.space_dim();
    std::vector<CMatrix> phi(g.dim(), CMatrix(m, m));
    for (const auto& t : D.comult()) phi[t.i].axpy(t.v, kron(u.phi(t.k), v.phi(t.j)));
    return Corep(g, std::move(phi));
}

/// U_12 V_13 assembled directly in A (x) M_m (x) M_k.
inline AMat tensor_direct(const Corep& u, const Corep& v) {
    const FiniteQG& g = u.parent();
    const AMat a = u.assemble(), b = v.assemble();
    AMat r = amat_zero(g.alg(), u.space_dim() * v.space_dim());
    for (const auto& t : g.alg().mult()) {
        if (max_abs(a.c[t.i]) == 0.0 || max_abs(b.c[t.j]) == 0.0) continue;
        r.c[t.k].axpy(t.v, kron(a.c[t.i], b.c[t.j]));
    }
    return r;
}

/// Distance between the two tensor constructions.
inline double tensor_route_residual(const Corep& u, const Corep& v) {
    return amat_norm(amat_sub(tensor(u, v).assemble(), tensor_direct(u, v)));
}

/// U^c = (R (x) transpose)U on the conjugate space (same coordinates).
inline Corep contragredient(const Corep& u) {
    const FiniteQG& g = u.parent();
    require_kac(g);
    AMat r = amat_zero(g.alg(), u.space_dim());
    for (std::size_t c = 0; c < g.dim(); ++c) {
        if (max_abs(u.phi(c)) == 0.0) continue;
        const CMatrix pt = u.phi(c).transpose();
        for (const auto& [i, v] : sparse(g.S(g.u(c)))) r.c[i].axpy(v, pt);
    }
    return Corep::from_amat(g, r);
}

/// Orthonormal basis (as matrices) of {T : T phi_1(x) = phi_2(x) T}.
inline std::vector<CMatrix> intertwiner_space(const Corep& from, const Corep& to, double tol = 1e-8) {
    const std::size_t m1 = from.space_dim(), m2 = to.space_dim(), n = m1 * m2, d = from.parent().dim();
    CMatrix stacked(d * n, n);
    const CMatrix I1 = CMatrix::identity(m1), I2 = CMatrix::identity(m2);
    for (std::size_t c = 0; c < d; ++c) {
        const CMatrix M = kron(to.phi(c), I1) - kron(I2, from.phi(c).transpose());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) stacked(c * n + i, j) = M(i, j);
    }
    const CMatrix N = null_space(stacked, tol);
    std::vector<CMatrix> out;
    for (std::size_t k = 0; k < N.cols(); ++k) out.push_back(CMatrix(m2, m1, N.col(k)));
    return out;
}

/// Unitary intertwiner from u to v when one exists, with its residual max_c ||T phi_u - phi_v T||.
struct Equivalence {
    bool equivalent;
    CMatrix T;
    double residual;
};

inline Equivalence find_unitary_intertwiner(const Corep& u, const Corep& v, double tol = 1e-8) {
    if (u.space_dim() != v.space_dim()) return {false, CMatrix(), std::numeric_limits<double>::infinity()};
    const auto basis = intertwiner_space(u, v, tol);
    if (basis.empty()) return {false, CMatrix(), std::numeric_limits<double>::infinity()};
    CounterRng rng(0x1A7E, basis.size());
    CMatrix T(v.space_dim(), u.space_dim());
    for (const auto& b : basis) T.axpy(rng.cnormal(), b);
    const CMatrix tt = T.adjoint() * T;
    if (min_eigenvalue(0.5 * (tt + tt.adjoint())) < 1e-10) return {false, T, std::numeric_limits<double>::infinity()};
    const CMatrix W = T * hermitian_apply(0.5 * (tt + tt.adjoint()), [](double x) { return cplx(1.0 / std::sqrt(x)); });
    double res = 0.0;
    for (std::size_t c = 0; c < u.parent().dim(); ++c) res = std::max(res, frob_norm(W * u.phi(c) - v.phi(c) * W));
    return {res <= tol, W, res};
}

// ---------------------------------------------------------------- invariant vectors

/// Orthogonal projection onto {xi : phi(x)xi = eps-hat(x)xi for all x}, by a joint kernel.
inline CMatrix brute_force_invariant_projection(const Corep& u, double tol = 1e-9) {
    const FiniteQG& g = u.parent();
    const std::size_t m = u.space_dim();
    const std::size_t triv = g.flat(g.trivial(), 0, 0);
    CMatrix gram(m, m);
    for (std::size_t c = 0; c < g.dim(); ++c) {
        CMatrix M = u.phi(c);
        if (c == triv) M -= CMatrix::identity(m);
        gram += M.adjoint() * M;
    }
    const CMatrix N = null_space(0.5 * (gram + gram.adjoint()), std::sqrt(tol));
    return N * N.adjoint();
}

/// p^U = (h (x) id)(U), cross-checked against the joint kernel.
inline CMatrix invariant_projection(const Corep& u, double tol = 1e-8) {
    const FiniteQG& g = u.parent();
    CMatrix p(u.space_dim(), u.space_dim());
    for (std::size_t c = 0; c < g.dim(); ++c) {
        const cplx hc = FiniteQG::apply(g.haar(), g.u(c));
        if (std::abs(hc) > 1e-15) p.axpy(hc, u.phi(c));
    }
    const double proj = std::max(frob_norm(p * p - p), hermitian_defect(p));
    const double diff = frob_norm(p - brute_force_invariant_projection(u));
    if (proj > tol || diff > tol)
        fail(ErrorKind::Contract, "OracleMismatch",
             "projection defect " + std::to_string(proj) + ", kernel mismatch " + std::to_string(diff));
    return p;
}

inline std::size_t projection_rank(const CMatrix& p) {
    return static_cast<std::size_t>(std::llround(trace(p).real()));
}

/// max over x in F of ||phi(x)xi - eps-hat(x)xi||.
inline double defect(const Corep& u, const Vec& xi, const std::vector<Vec>& F) {
    const FiniteQG& g = u.parent();
    const std::size_t triv = g.flat(g.trivial(), 0, 0);
    double worst = 0.0;
    for (const auto& x : F) worst = std::max(worst, vnorm(vsub(u.phi_of(x) * xi, vscale(xi, x[triv]))));
    return worst;
}

/// min over unit xi orthogonal to the invariant vectors of sqrt(sum_x ||phi(x)xi - eps-hat(x)xi||^2);
/// +infinity when every vector is invariant.
inline double kazhdan_gap(const Corep& u, const std::vector<Vec>& Q) {
    if (Q.empty()) fail(ErrorKind::Contract, "EmptyQ", "kazhdan_gap needs a non-empty Q");
    const FiniteQG& g = u.parent();
    const std::size_t m = u.space_dim(), triv = g.flat(g.trivial(), 0, 0);
    const CMatrix p = invariant_projection(u);
    const CMatrix N = null_space(p, 1e-6);
    if (N.cols() == 0) return std::numeric_limits<double>::infinity();
    CMatrix M(m, m);
    for (const auto& x : Q) {
        CMatrix d = u.phi_of(x) - x[triv] * CMatrix::identity(m);
        M += d.adjoint() * d;
    }
    const CMatrix R = N.adjoint() * M * N;
    return std::sqrt(std::max(0.0, min_eigenvalue(0.5 * (R + R.adjoint()))));
}

/// Every dual matrix unit e_c.
inline std::vector<Vec> all_matrix_units(const FiniteQG& g) {
    std::vector<Vec> q;
    for (std::size_t c = 0; c < g.dim(); ++c) q.push_back(unit_vec(g.dim(), c));
    return q;
}

inline bool is_ergodic(const Corep& u) { return projection_rank(invariant_projection(u)) == 0; }

inline bool is_weakly_mixing(const Corep& u) {
    require_kac(u.parent());
    return projection_rank(invariant_projection(tensor(u, contragredient(u)))) == 0;
}

// ---------------------------------------------------------------- condition R and GNS

/// j(x) = J x^* J for the anti-linear J v = M conj(v).
inline CMatrix j_map(const CMatrix& M, const CMatrix& x) { return M * x.transpose() * M.conj(); }

/// ||(R (x) j)(U) - U||.
inline double condition_R_residual(const Corep& u, const CMatrix& M) {
    const FiniteQG& g = u.parent();
    AMat r = amat_zero(g.alg(), u.space_dim());
    for (std::size_t c = 0; c < g.dim(); ++c) {
        if (max_abs(u.phi(c)) == 0.0) continue;
        const CMatrix jc = j_map(M, u.phi(c));
        for (const auto& [i, v] : sparse(g.S(g.u(c)))) r.c[i].axpy(v, jc);
    }
    return amat_norm(amat_sub(r, u.assemble()));
}

inline bool check_condition_R(const Corep& u, const CMatrix& M, double tol = 1e-8) {
    require_kac(u.parent());
    if (M.rows() != u.space_dim() || !M.square()) fail(ErrorKind::Schema, "SchemaError", "J has the wrong size");
    if (frob_norm(M * M.conj() - CMatrix::identity(M.rows())) > 1e-9)
        fail(ErrorKind::Contract, "NotInvolutive", "J^2 != 1");
    return condition_R_residual(u, M) <= tol;
}

struct GnsResult {
    Corep corep;
    Vec omega;
    std::size_t dim;
    double reproduce_residual;  // max_c |mu(e_c) - <Omega, phi(e_c) Omega>|
    bool r_invariant;
    std::optional<CMatrix> J;  // J v = M conj(v), present when mu o R-hat = mu
    double condition_R;        // residual, NaN without J
};

/// GNS of a state mu on the dual block algebra, mu given by its values on the matrix units.
inline GnsResult gns(const FiniteQG& g, const Vec& mu, double tol = 1e-9) {
    const DualBlockAlgebra D(g);
    const std::size_t d = g.dim();
    if (mu.size() != d) fail(ErrorKind::Schema, "SchemaError", "dual state length differs from dim");
    CMatrix gram(d, d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            const auto& la = g.label(a);
            const auto& lb = g.label(b);
            if (la.alpha == lb.alpha && la.i == lb.i) gram(a, b) = mu[g.flat(la.alpha, la.j, lb.j)];
        }
    cplx mu1 = 0.0;
    for (std::size_t c = 0; c < d; ++c) mu1 += mu[c] * D.alg().unit()[c];
    if (hermitian_defect(gram) > tol || std::abs(mu1 - 1.0) > tol || !psd_check(0.5 * (gram + gram.adjoint()), tol))
        fail(ErrorKind::Contract, "NotAState", "dual functional is not a state");
    auto e = hermitian_eig(0.5 * (gram + gram.adjoint()));
    const double scale = std::max(1.0, e.values.back());
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < d; ++k)
        if (e.values[k] > 1e-10 * scale) keep.push_back(k);
    const std::size_t r = keep.size();
    CMatrix V(r, d);  // Lambda(x) = V x
    for (std::size_t q = 0; q < r; ++q)
        for (std::size_t i = 0; i < d; ++i) V(q, i) = std::sqrt(e.values[keep[q]]) * std::conj(e.vectors(i, keep[q]));
    const CMatrix Vp = pinv(V);
    std::vector<CMatrix> phi;
    for (std::size_t c = 0; c < d; ++c) phi.push_back(V * D.alg().left_mult(D.alg().basis(c)) * Vp);
    Corep cor(g, std::move(phi));
    const Vec omega = V * D.alg().unit();
    double rep = 0.0;
    for (std::size_t c = 0; c < d; ++c) rep = std::max(rep, std::abs(mu[c] - vdot(omega, cor.phi(c) * omega)));

    GnsResult out{cor, omega, r, rep, false, std::nullopt, std::numeric_limits<double>::quiet_NaN()};
    const CMatrix& R = D.unitary_antipode();
    const Vec muR = R.transpose() * mu;  // (mu o R-hat)(e_c) = sum_k mu_k R[k][c]
    out.r_invariant = vmax_abs(vsub(muR, mu)) <= tol;
    if (out.r_invariant && g.is_kac()) {
        // J Lambda(x) = Lambda(R-hat(x)^*): coefficients Star conj(R) conj(x)
        const CMatrix M = V * D.alg().star_matrix() * R.conj() * pinv(V.conj());
        out.J = M;
        out.condition_R = condition_R_residual(cor, M);
    }
    return out;
}

/// Dual states used by the examples.
inline Vec dual_counit_state(const FiniteQG& g) { return DualBlockAlgebra(g).counit(); }

/// x -> sum_a (n_a / dim) Tr(x^a).
inline Vec dual_tracial_state(const FiniteQG& g) {
    Vec mu(g.dim());
    for (std::size_t a = 0; a < g.num_irreps(); ++a) {
        const std::size_t n = g.irrep(a).n;
        for (std::size_t i = 0; i < n; ++i) mu[g.flat(a, i, i)] = static_cast<double>(n) / static_cast<double>(g.dim());
    }
    return mu;
}

// ---------------------------------------------------------------- window representations

/// Unitary representation of a windowed group (partial multiplicativity).
struct WindowRep {
    const GroupDualWindow* w;
    std::vector<CMatrix> pi;

    std::size_t space_dim() const { return pi.front().rows(); }

    /// max over defined products of ||pi(g)pi(h) - pi(gh)|| and of ||pi(g)^* pi(g) - 1||.
    double residual() const {
        double worst = 0.0;
        const std::size_t m = space_dim();
        for (std::size_t g = 0; g < w->size(); ++g) {
            worst = std::max(worst, frob_norm(pi[g].adjoint() * pi[g] - CMatrix::identity(m)));
            for (std::size_t h = 0; h < w->size(); ++h)
                if (auto gh = w->product(g, h)) worst = std::max(worst, frob_norm(pi[g] * pi[h] - pi[*gh]));
        }
        return worst;
    }
};

inline WindowRep tensor(const WindowRep& a, const WindowRep& b) {
    if (a.w != b.w) fail(ErrorKind::Contract, "ParentMismatch", "window reps on different windows");
    WindowRep r{a.w, {}};
    for (std::size_t g = 0; g < a.pi.size(); ++g) r.pi.push_back(kron(a.pi[g], b.pi[g]));
    return r;
}

/// max over g in F of ||pi(g)xi - xi||.
inline double defect(const WindowRep& r, const Vec& xi, const std::vector<std::size_t>& F) {
    double worst = 0.0;
    for (auto g : F) worst = std::max(worst, vnorm(vsub(r.pi[g] * xi, xi)));
    return worst;
}

}  // namespace qgwb
