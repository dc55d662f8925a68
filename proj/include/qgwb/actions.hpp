#pragma once

// Actions alpha: N -> A (x) N of a finite quantum group on a finite-dimensional C*-algebra N,
// stored slice-wise: alpha(x) = sum_i e_i (x) alpha_i(x) with alpha_i a D x D matrix on N's
// coefficients. L^2(N, theta) is used in orthonormal coordinates v' = R v, R = Gram^{1/2}.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "coreps.hpp"

namespace qgwb {

class Action {
public:
    Action(const FiniteQG& g, FiniteAlgebra N, std::vector<CMatrix> alpha, std::string label)
        : g_(&g), N_(std::move(N)), alpha_(std::move(alpha)), label_(std::move(label)) {
        if (alpha_.size() != g.dim()) fail(ErrorKind::Schema, "SchemaError", "action needs one slice per basis element of A");
        for (const auto& a : alpha_)
            if (a.rows() != N_.dim() || a.cols() != N_.dim()) fail(ErrorKind::Schema, "SchemaError", "action slice has the wrong size");
    }

    const FiniteQG& parent() const { return *g_; }
    const FiniteAlgebra& N() const { return N_; }
    std::size_t dim_N() const { return N_.dim(); }
    const CMatrix& slice(std::size_t i) const { return alpha_[i]; }
    const std::string& label() const { return label_; }
    const std::optional<Vec>& theta() const { return theta_; }
    void set_theta(Vec t) {
        if (t.size() != N_.dim()) fail(ErrorKind::Schema, "SchemaError", "theta has the wrong size");
        theta_ = std::move(t);
    }

    /// Components alpha_i(x).
    std::vector<Vec> apply(const Vec& x) const {
        std::vector<Vec> r;
        for (const auto& a : alpha_) r.push_back(a * x);
        return r;
    }

    /// (omega (x) id) alpha(x).
    Vec slice_by(const Vec& omega, const Vec& x) const {
        Vec r(dim_N());
        for (std::size_t i = 0; i < alpha_.size(); ++i)
            if (omega[i] != cplx(0.0)) vaxpy(r, omega[i], alpha_[i] * x);
        return r;
    }

    std::vector<NamedResidual> check(double tol = 1e-9) const {
        const FiniteQG& g = *g_;
        const std::size_t d = g.dim(), D = dim_N();
        double unital = 0.0, mult = 0.0, star = 0.0, coact = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            unital = std::max(unital, vnorm(vsub(alpha_[i] * N_.unit(), vscale(N_.unit(), g.one()[i]))));
        std::vector<std::vector<Vec>> comp(D);
        for (std::size_t a = 0; a < D; ++a) comp[a] = apply(N_.basis(a));
        for (std::size_t a = 0; a < D; ++a) {
            // alpha(f_a^*) against alpha(f_a)^*
            const auto lhs = apply(N_.adj(N_.basis(a)));
            std::vector<Vec> rhs(d, Vec(D));
            for (std::size_t i = 0; i < d; ++i)
                for (const auto& [j, v] : g.alg().adj_basis(i)) vaxpy(rhs[j], v, N_.adj(comp[a][i]));
            for (std::size_t j = 0; j < d; ++j) star = std::max(star, vnorm(vsub(lhs[j], rhs[j])));
            for (std::size_t b = 0; b < D; ++b) {
                Vec fab(D);
                for (const auto& [k, v] : N_.product(a, b)) fab[k] += v;
                const auto l = apply(fab);
                std::vector<Vec> r(d, Vec(D));
                for (const auto& t : g.alg().mult()) vaxpy(r[t.k], t.v, N_.mul(comp[a][t.i], comp[b][t.j]));
                for (std::size_t k = 0; k < d; ++k) mult = std::max(mult, vnorm(vsub(l[k], r[k])));
            }
        }
        // (Delta (x) id) alpha = (id (x) alpha) alpha, slice-wise: sum_i Delta_i^{jl} alpha_i = alpha_l alpha_j
        std::vector<CMatrix> lhs(d * d, CMatrix(D, D));
        for (const auto& t : g.comult()) lhs[t.j * d + t.k].axpy(t.v, alpha_[t.i]);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t l = 0; l < d; ++l) coact = std::max(coact, frob_norm(lhs[j * d + l] - alpha_[l] * alpha_[j]));
        CMatrix stacked(d * D, D);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t r = 0; r < D; ++r)
                for (std::size_t c = 0; c < D; ++c) stacked(i * D + r, c) = alpha_[i](r, c);
        const double injective = static_cast<double>(D - rank(stacked, 1e-9));
        std::vector<NamedResidual> out{{"alpha_unital", unital, tol},       {"alpha_multiplicative", mult, tol},
                                       {"alpha_star", star, tol},           {"alpha_injective_defect", injective, 0.0},
                                       {"action_equation", coact, tol}};
        if (theta_) {
            out.push_back({"theta_invariance", invariance_residual(*theta_), tol});
            out.push_back({"theta_faithful_defect", std::max(0.0, 1e-12 - min_eigenvalue(gram(*theta_))), 0.0});
        }
        return out;
    }

    /// max_x |(id (x) theta) alpha(x) - theta(x) 1| over the basis.
    double invariance_residual(const Vec& theta) const {
        const FiniteQG& g = *g_;
        double r = 0.0;
        for (std::size_t a = 0; a < dim_N(); ++a) {
            Vec s(g.dim());
            for (std::size_t i = 0; i < g.dim(); ++i) s[i] = FiniteQG::apply(theta, alpha_[i].col(a));
            r = std::max(r, vnorm(vsub(s, vscale(g.one(), theta[a]))));
        }
        return r;
    }

    /// theta(f_i^* f_j).
    CMatrix gram(const Vec& theta) const {
        const std::size_t D = dim_N();
        CMatrix G(D, D);
        for (std::size_t i = 0; i < D; ++i)
            for (const auto& [k, v] : N_.adj_basis(i))
                for (std::size_t j = 0; j < D; ++j)
                    for (const auto& [l, w] : N_.product(k, j)) G(i, j) += v * w * theta[l];
        return G;
    }

private:
    const FiniteQG* g_;
    FiniteAlgebra N_;
    std::vector<CMatrix> alpha_;
    std::string label_;
    std::optional<Vec> theta_;
};

// ---------------------------------------------------------------- preset actions

/// Normalised trace on a direct sum of matrix blocks, weighted by block size.
inline Vec block_trace_state(const std::vector<std::size_t>& pattern) {
    std::size_t n = 0, D = 0;
    for (auto b : pattern) {
        n += b;
        D += b * b;
    }
    Vec t(D);
    std::size_t off = 0;
    for (auto b : pattern) {
        for (std::size_t i = 0; i < b; ++i) t[off + i * b + i] = 1.0 / static_cast<double>(n);
        off += b * b;
    }
    return t;
}

/// theta(E^b_ij) = rho^b_ji for a block density matrix given as the full n x n matrix.
inline Vec density_to_state(const std::vector<std::size_t>& pattern, const CMatrix& rho) {
    std::size_t D = 0;
    for (auto b : pattern) D += b * b;
    Vec t(D);
    std::size_t off = 0, pos = 0;
    for (auto b : pattern) {
        for (std::size_t i = 0; i < b; ++i)
            for (std::size_t j = 0; j < b; ++j) t[off + i * b + j] = rho(pos + j, pos + i);
        off += b * b;
        pos += b;
    }
    return t;
}

inline Action trivial_action(const FiniteQG& g, const std::vector<std::size_t>& pattern) {
    FiniteAlgebra N = FiniteAlgebra::matrix_blocks(pattern);
    std::vector<CMatrix> a;
    for (std::size_t i = 0; i < g.dim(); ++i) a.push_back(g.one()[i] * CMatrix::identity(N.dim()));
    Action act(g, std::move(N), std::move(a), "trivial");
    act.set_theta(block_trace_state(pattern));
    return act;
}

/// Grading of M_n by Ad diag(omega^{w_i}) for the group algebra of Z_m (a dual-Z(m) preset):
/// E_ij -> lambda_{(w_i - w_j) mod m} (x) E_ij.
inline Action grading_action(const FiniteQG& g, const std::vector<int>& weights) {
    const std::size_t m = g.dim(), n = weights.size();
    if (g.id() != "dual-Z(" + std::to_string(m) + ")") fail(ErrorKind::Contract, "SchemaError", "grading needs a dual-Z(m) parent");
    FiniteAlgebra N = FiniteAlgebra::matrix_blocks({n});
    std::vector<CMatrix> a(m, CMatrix(n * n, n * n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const long k = ((weights[i] - weights[j]) % static_cast<long>(m) + static_cast<long>(m)) % static_cast<long>(m);
            a[static_cast<std::size_t>(k)](i * n + j, i * n + j) = 1.0;
        }
    Action act(g, std::move(N), std::move(a), "grading");
    act.set_theta(block_trace_state({n}));
    return act;
}

/// Delta: A -> A (x) A, with the Haar state.
inline Action comultiplication_action(const FiniteQG& g) {
    const std::size_t d = g.dim();
    std::vector<CMatrix> a(d, CMatrix(d, d));
    for (const auto& t : g.comult()) a[t.j](t.k, t.i) += t.v;
    Action act(g, g.alg(), std::move(a), "comultiplication");
    act.set_theta(g.haar());
    return act;
}

/// alpha(x) = V^*(1 (x) x)V on B(K), normalised trace.
inline Action adjoint_action(const Corep& v) {
    const FiniteQG& g = v.parent();
    const std::size_t k = v.space_dim();
    const AMat V = v.assemble(), Vs = amat_adj(g.alg(), V);
    FiniteAlgebra N = FiniteAlgebra::matrix_blocks({k});
    std::vector<CMatrix> a(g.dim(), CMatrix(k * k, k * k));
    for (std::size_t p = 0; p < k; ++p)
        for (std::size_t q = 0; q < k; ++q) {
            CMatrix E(k, k);
            E(p, q) = 1.0;
            const AMat r = amat_mul(g.alg(), amat_mul(g.alg(), Vs, amat_simple(g.alg(), g.one(), E)), V);
            for (std::size_t i = 0; i < g.dim(); ++i)
                for (std::size_t x = 0; x < k; ++x)
                    for (std::size_t y = 0; y < k; ++y) a[i](x * k + y, p * k + q) = r.c[i](x, y);
        }
    Action act(g, std::move(N), std::move(a), "adjoint");
    act.set_theta(block_trace_state({k}));
    return act;
}

/// (h (x) theta0) alpha for a faithful theta0: an invariant faithful state.
inline Vec averaged_invariant_state(const Action& a, const Vec& theta0) {
    const FiniteQG& g = a.parent();
    Vec t(a.dim_N());
    for (std::size_t x = 0; x < a.dim_N(); ++x) t[x] = FiniteQG::apply(theta0, a.slice_by(g.haar(), a.N().basis(x)));
    if (a.invariance_residual(t) > 1e-9 || min_eigenvalue(a.gram(t)) <= 1e-12)
        fail(ErrorKind::Contract, "NoInvariantState", "averaged state is not a faithful invariant state");
    return t;
}

// ---------------------------------------------------------------- unitary implementation

struct Implementation {
    const Action* action;
    Vec theta;
    CMatrix R, Rinv;           // Gram^{1/2} and its inverse
    AMat Ustar, U;
    Corep corep;
    CMatrix J;                 // J v = J conj(v), orthonormal coordinates
    CMatrix nabla;             // modular operator
    double unitarity, implements, corep_identity, condition_R;

    /// pi(x) on L^2(N) in orthonormal coordinates.
    CMatrix pi(const Vec& x) const { return R * action->N().left_mult(x) * Rinv; }
    Vec lambda(const Vec& x) const { return R * x; }
    Vec unlambda(const Vec& v) const { return Rinv * v; }
};

inline Implementation implement(const Action& a, double tol = 1e-9) {
    if (!a.theta()) fail(ErrorKind::Contract, "NoInvariantState", "action has no invariant state");
    const FiniteQG& g = a.parent();
    const Vec& theta = *a.theta();
    if (a.invariance_residual(theta) > tol) fail(ErrorKind::Contract, "NoInvariantState", "theta is not invariant");
    const CMatrix G = a.gram(theta);
    const CMatrix Gh = 0.5 * (G + G.adjoint());
    if (min_eigenvalue(Gh) <= 1e-12) fail(ErrorKind::Contract, "NoInvariantState", "theta is not faithful");
    const CMatrix R = sqrt_psd(Gh);
    const CMatrix Ri = inverse(R);
    AMat Us = amat_zero(g.alg(), a.dim_N());
    for (std::size_t i = 0; i < g.dim(); ++i) Us.c[i] = R * a.slice(i) * Ri;
    const AMat U = amat_adj(g.alg(), Us);
    Implementation im{&a, theta, R, Ri, Us, U, Corep::from_amat(g, U), CMatrix(), CMatrix(), 0.0, 0.0, 0.0, 0.0};
    im.unitarity = unitarity_residual(g, U);
    im.corep_identity = corep_identity_residual(g, U);
    if (im.unitarity > tol || im.corep_identity > tol)
        fail(ErrorKind::Contract, "NotUnitary", "implementation unitarity residual " + std::to_string(im.unitarity));
    // both sides are linear in x: basis elements for small N, seeded random elements otherwise
    std::vector<Vec> probes;
    if (a.dim_N() <= 16) {
        for (std::size_t x = 0; x < a.dim_N(); ++x) probes.push_back(a.N().basis(x));
    } else {
        CounterRng rng(0, 0x1AB);
        for (int t = 0; t < 4; ++t) {
            const Vec v = rng.cvector(a.dim_N());
            probes.push_back(vscale(v, 1.0 / vnorm(v)));
        }
    }
    for (const Vec& fx : probes) {
        const CMatrix P = im.pi(fx);
        AMat left = Us;  // Us (1 (x) P)
        for (auto& m : left.c) m = m * P;
        const AMat lhs = amat_mul(g.alg(), left, U);
        AMat rhs = amat_zero(g.alg(), a.dim_N());
        for (std::size_t i = 0; i < g.dim(); ++i) rhs.c[i] = im.pi(a.slice(i) * fx);
        im.implements = std::max(im.implements, amat_norm(amat_sub(lhs, rhs)));
    }
    // S Lambda(x) = Lambda(x^*) is A conj(.) in orthonormal coordinates
    const CMatrix A = R * a.N().star_matrix() * Ri.conj();
    im.nabla = A.transpose() * A.conj();
    im.nabla = 0.5 * (im.nabla + im.nabla.adjoint());
    im.J = A * hermitian_apply(im.nabla, [](double x) { return cplx(1.0 / std::sqrt(x)); }).conj();
    if (g.is_kac()) im.condition_R = condition_R_residual(im.corep, im.J);
    return im;
}

// ---------------------------------------------------------------- fixed points and E

struct FixedPoints {
    CMatrix basis;  // columns: N^alpha in N coordinates
    CMatrix E;      // (h (x) id) alpha
    double idempotent, unital, positivity, compression, invariance, slice_invariance;
};

inline FixedPoints fixed_point_expectation(const Action& a, const Implementation& im, std::uint64_t seed = 0) {
    const FiniteQG& g = a.parent();
    const std::size_t d = g.dim(), D = a.dim_N();
    CMatrix stacked(d * D, D);
    for (std::size_t i = 0; i < d; ++i) {
        const CMatrix m = a.slice(i) - g.one()[i] * CMatrix::identity(D);
        for (std::size_t r = 0; r < D; ++r)
            for (std::size_t c = 0; c < D; ++c) stacked(i * D + r, c) = m(r, c);
    }
    FixedPoints fp{null_space(stacked, 1e-7), CMatrix(D, D), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < d; ++i)
        if (g.haar()[i] != cplx(0.0)) fp.E.axpy(g.haar()[i], a.slice(i));
    fp.idempotent = frob_norm(fp.E * fp.E - fp.E);
    fp.unital = vnorm(vsub(fp.E * a.N().unit(), a.N().unit()));
    const CMatrix p = invariant_projection(im.corep);
    CounterRng rng(seed, 0xE0);
    std::vector<Vec> tests;
    for (std::size_t x = 0; x < D; ++x) tests.push_back(a.N().basis(x));
    for (int k = 0; k < 4; ++k) tests.push_back(rng.cvector(D));
    for (const auto& x : tests) {
        const Vec Ex = fp.E * x;
        fp.compression = std::max(fp.compression, frob_norm(im.pi(Ex) * p - p * im.pi(x) * p));
        for (std::size_t i = 0; i < d; ++i)
            fp.invariance = std::max(fp.invariance, vnorm(vsub(a.slice(i) * Ex, vscale(Ex, g.one()[i]))));
        const Vec xx = a.N().mul(a.N().adj(x), x);
        const CMatrix P = im.pi(fp.E * xx);
        fp.positivity = std::max(fp.positivity, std::max(0.0, -min_eigenvalue(0.5 * (P + P.adjoint()))));
        // E((omega (x) id) alpha(x)) = E(x) for states omega
        for (const Vec& om : {g.counit(), g.haar()})
            fp.slice_invariance = std::max(fp.slice_invariance, vnorm(vsub(fp.E * a.slice_by(om, x), Ex)));
    }
    return fp;
}

// ---------------------------------------------------------------- positive cone

/// Z = (zeta_ij) in M_m (x) L^2(N), zeta_ij in orthonormal coordinates. Member of the cone iff
/// (y_ij) = (Lambda^{-1} nabla^{-1/4} zeta_ij) is positive in M_m(N). Returns the smallest
/// eigenvalue of the Hermitian part and the Hermitian defect.
struct ConeTest {
    double min_eig;
    double hermitian_defect;
    bool member(double tol = 1e-8) const { return min_eig >= -tol && hermitian_defect <= tol; }
};

inline ConeTest cone_membership(const Implementation& im, const std::vector<std::vector<Vec>>& Z) {
    const std::size_t m = Z.size(), D = im.action->dim_N();
    const CMatrix nq = hermitian_apply(im.nabla, [](double x) { return cplx(std::pow(x, -0.25)); });
    CMatrix B(m * D, m * D);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const CMatrix P = im.pi(im.unlambda(nq * Z[i][j]));
            for (std::size_t r = 0; r < D; ++r)
                for (std::size_t c = 0; c < D; ++c) B(i * D + r, j * D + c) = P(r, c);
        }
    const double scale = std::max(1.0, frob_norm(B));
    return {min_eigenvalue(0.5 * (B + B.adjoint())) / scale, hermitian_defect(B) / scale};
}

/// Cone generator (nabla^{1/4} Lambda(x_i^* x_j))_ij.
inline std::vector<std::vector<Vec>> cone_generator(const Implementation& im, const std::vector<Vec>& x) {
    const FiniteAlgebra& N = im.action->N();
    const CMatrix nq = hermitian_apply(im.nabla, [](double v) { return cplx(std::pow(v, 0.25)); });
    std::vector<std::vector<Vec>> Z(x.size(), std::vector<Vec>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) Z[i][j] = nq * im.lambda(N.mul(N.adj(x[i]), x[j]));
    return Z;
}

struct ConeReport {
    bool preserved;
    double worst_min_eig;
    std::size_t trials;
    double tol;
    std::vector<std::vector<Vec>> witness;  // a generator whose image leaves the cone, if any
};

/// u_ij = (omega_{xi_j, xi_i} (x) id)(U), omega(x) = <xi_i, x xi_j> = h(a_i^* x a_j) for xi = Lambda_h(a).
inline ConeReport cone_preservation_check(const Implementation& im, const AMat& U, const std::vector<Vec>& xi,
                                          std::uint64_t seed = 0, int random_trials = 24, double tol = 1e-8) {
    const Action& a = *im.action;
    const FiniteQG& g = a.parent();
    require_kac(g);
    const std::size_t m = xi.size(), D = a.dim_N();
    std::vector<std::vector<CMatrix>> u(m, std::vector<CMatrix>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            Vec om(g.dim());
            const Vec ai = g.adj(xi[i]);
            for (std::size_t k = 0; k < g.dim(); ++k) om[k] = FiniteQG::apply(g.haar(), g.mul(g.mul(ai, g.basis(k)), xi[j]));
            u[i][j] = amat_slice(U, om);
        }
    ConeReport rep{true, std::numeric_limits<double>::infinity(), 0, tol, {}};
    auto run = [&](const std::vector<Vec>& x) {
        const auto Z = cone_generator(im, x);
        auto W = Z;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) W[i][j] = u[i][j] * Z[i][j];
        const ConeTest t = cone_membership(im, W);
        ++rep.trials;
        rep.worst_min_eig = std::min(rep.worst_min_eig, t.min_eig);
        if (!t.member(tol) && rep.preserved) {
            rep.preserved = false;
            rep.witness = Z;
        }
    };
    for (std::size_t b = 0; b < D; ++b) {
        std::vector<Vec> x(m, a.N().basis(b));
        run(x);
        for (std::size_t c = 0; c < D; ++c) {
            for (std::size_t i = 0; i < m; ++i) x[i] = (i % 2 == 0) ? a.N().basis(b) : a.N().basis(c);
            run(x);
        }
    }
    CounterRng rng(seed, 0xC0DE);
    for (int t = 0; t < random_trials; ++t) {
        std::vector<Vec> x;
        for (std::size_t i = 0; i < m; ++i) x.push_back(rng.cvector(D));
        run(x);
    }
    return rep;
}

/// U (1 (x) J w J) for a unitary w in N: still satisfies alpha(x) = V^*(1 (x) x)V, but is not the
/// canonical implementation unless w is central and trivial. w = -1 gives -U.
inline AMat twisted_implementation(const Implementation& im, const Vec& w) {
    const FiniteQG& g = im.action->parent();
    const CMatrix z = im.J * im.pi(w).conj() * im.J.conj();
    return amat_mul(g.alg(), im.U, amat_simple(g.alg(), g.one(), z));
}

// ---------------------------------------------------------------- V tensor V^c

struct VVbarReport {
    bool equivalent;
    bool order_u_vc;          // matched tensor(V, V^c) rather than tensor(V^c, V)
    double intertwiner_residual;
    double canonical_residual;  // direct comparison under sqrt(k) E_ab <-> e_a (x) conj(e_b)
};

inline VVbarReport v_vbar_implementation_check(const Corep& v) {
    require_kac(v.parent());
    const Action act = adjoint_action(v);
    const Implementation im = implement(act);
    const Corep vc = contragredient(v);
    const Corep t1 = tensor(v, vc), t2 = tensor(vc, v);
    auto canon = [&](const Corep& t) {
        double r = 0.0;
        for (std::size_t c = 0; c < v.parent().dim(); ++c) r = std::max(r, frob_norm(im.corep.phi(c) - t.phi(c)));
        return r;
    };
    const Equivalence e1 = find_unitary_intertwiner(im.corep, t1), e2 = find_unitary_intertwiner(im.corep, t2);
    const bool first = e1.equivalent && (!e2.equivalent || e1.residual <= e2.residual);
    const Equivalence& e = first ? e1 : e2;
    return {e.equivalent, first, e.residual, std::min(canon(t1), canon(t2))};
}

// ---------------------------------------------------------------- spectral gap

struct SpectralGapReport {
    std::size_t rank_p;
    double gap;             // Kazhdan gap on range(p)^perp
    bool p_in_image;
    double image_residual;  // distance from p^U to span{phi_U(e_c)}
    std::size_t fixed_dim;
    bool consistent;
};

/// Q defaults to all dual matrix units.
inline SpectralGapReport spectral_gap_report(const Action& a, const Implementation& im, std::vector<Vec> Q = {}) {
    const Corep& u = im.corep;
    const FiniteQG& g = a.parent();
    if (Q.empty()) Q = all_matrix_units(g);
    const CMatrix p = invariant_projection(u);
    SpectralGapReport r{projection_rank(p), kazhdan_gap(u, Q), false, 0.0, 0, false};
    const std::size_t m = u.space_dim();
    CMatrix span(m * m, g.dim());
    for (std::size_t c = 0; c < g.dim(); ++c)
        for (std::size_t x = 0; x < m * m; ++x) span(x, c) = u.phi(c)(x / m, x % m);
    Vec pv(m * m);
    for (std::size_t x = 0; x < m * m; ++x) pv[x] = p(x / m, x % m);
    const Vec coef = pinv(span) * pv;
    r.image_residual = vnorm(vsub(span * coef, pv));
    r.p_in_image = r.image_residual < 1e-8;
    r.fixed_dim = fixed_point_expectation(a, im).basis.cols();
    const bool gap_positive = r.gap > 0.0;
    r.consistent = gap_positive && r.p_in_image && r.rank_p == r.fixed_dim;
    if (!gap_positive) fail(ErrorKind::Contract, "GapVanishes", "finite-dimensional corep with zero Kazhdan gap");
    return r;
}

// ---------------------------------------------------------------- defect bridge

struct DefectBridge {
    double delta;          // max_omega ||(omega (x) id)alpha(x) - x|| (operator norm on L^2(N))
    double vector_defect;  // max_omega ||(omega (x) id)(U^*)Lambda(x) - Lambda(x)||
    double corep_defect;   // defect of Lambda(x) for phi_U on the dual elements of the states
    double bound_linear;   // C delta, C = 1 (||Lambda(y)|| <= ||y|| for a state)
    double bound_sqrt;     // sqrt(2 ||Lambda(x)|| vector_defect)
};

inline DefectBridge defect_bridge(const Implementation& im, const Vec& x, const std::vector<Vec>& states) {
    const Action& a = *im.action;
    const FiniteQG& g = a.parent();
    DefectBridge b{0.0, 0.0, 0.0, 0.0, 0.0};
    const Vec xi = im.lambda(x);
    std::vector<Vec> F;
    for (const auto& om : states) {
        const Vec y = vsub(a.slice_by(om, x), x);
        b.delta = std::max(b.delta, op_norm(im.pi(y)));
        b.vector_defect = std::max(b.vector_defect, vnorm(vsub(amat_slice(im.Ustar, om) * xi, xi)));
        Vec dual(g.dim());
        for (std::size_t c = 0; c < g.dim(); ++c) dual[c] = FiniteQG::apply(om, g.u(c));
        F.push_back(dual);
    }
    b.corep_defect = defect(im.corep, xi, F);
    b.bound_linear = b.delta;
    b.bound_sqrt = std::sqrt(2.0 * vnorm(xi) * b.vector_defect);
    return b;
}

}  // namespace qgwb
