#pragma once

// Functionals on a finite quantum group (values on the document basis, plus the block form
// mu^a_ij = mu(u^a_ij)) and complex functions on group-dual windows.

#include <cmath>
#include <string>
#include <vector>

#include "qg.hpp"
#include "window.hpp"

namespace qgwb {

class Functional {
public:
    Functional(const FiniteQG& g, Vec values) : g_(&g), f_(std::move(values)) {
        if (f_.size() != g.dim()) fail(ErrorKind::Schema, "SchemaError", "functional length differs from dim");
        const CMatrix& B = g.irrep_basis();
        Vec m(g.dim());
        for (std::size_t c = 0; c < g.dim(); ++c)
            for (std::size_t i = 0; i < g.dim(); ++i) m[c] += f_[i] * B(i, c);
        for (std::size_t a = 0; a < g.num_irreps(); ++a) {
            const std::size_t n = g.irrep(a).n;
            CMatrix blk(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) blk(i, j) = m[g.flat(a, i, j)];
            blocks_.push_back(std::move(blk));
        }
    }

    static Functional from_blocks(const FiniteQG& g, const std::vector<CMatrix>& b) {
        if (b.size() != g.num_irreps()) fail(ErrorKind::Schema, "SchemaError", "block count differs from irrep count");
        Vec m(g.dim());
        for (std::size_t a = 0; a < b.size(); ++a) {
            const std::size_t n = g.irrep(a).n;
            if (b[a].rows() != n || b[a].cols() != n) fail(ErrorKind::Schema, "SchemaError", "block size differs from irrep");
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) m[g.flat(a, i, j)] = b[a](i, j);
        }
        const CMatrix& Bi = g.irrep_basis_inv();
        Vec f(g.dim());
        for (std::size_t i = 0; i < g.dim(); ++i)
            for (std::size_t c = 0; c < g.dim(); ++c) f[i] += m[c] * Bi(c, i);
        return Functional(g, std::move(f));
    }

    const FiniteQG& parent() const { return *g_; }
    const Vec& values() const { return f_; }
    const std::vector<CMatrix>& blocks() const { return blocks_; }
    cplx operator()(const Vec& x) const { return FiniteQG::apply(f_, x); }

    /// Distance between the stored blocks and those rebuilt through the basis change.
    double block_residual() const {
        const Functional back = from_blocks(*g_, blocks_);
        return vnorm(vsub(back.f_, f_));
    }

private:
    const FiniteQG* g_;
    Vec f_;
    std::vector<CMatrix> blocks_;
};

inline void same_parent(const Functional& a, const Functional& b) {
    if (&a.parent() != &b.parent() && a.parent().id() != b.parent().id())
        fail(ErrorKind::Contract, "ParentMismatch", a.parent().id() + " vs " + b.parent().id());
}

inline Functional operator+(const Functional& a, const Functional& b) {
    same_parent(a, b);
    return Functional(a.parent(), vadd(a.values(), b.values()));
}
inline Functional operator-(const Functional& a, const Functional& b) {
    same_parent(a, b);
    return Functional(a.parent(), vsub(a.values(), b.values()));
}
inline Functional operator*(cplx s, const Functional& a) { return Functional(a.parent(), vscale(a.values(), s)); }

inline double distance(const Functional& a, const Functional& b) { return vnorm(vsub(a.values(), b.values())); }

inline Functional counit_functional(const FiniteQG& g) { return Functional(g, g.counit()); }
inline Functional haar_functional(const FiniteQG& g) { return Functional(g, g.haar()); }

/// (mu * nu)(x) = (mu (x) nu)Delta(x).
inline Functional convolve(const Functional& mu, const Functional& nu) {
    same_parent(mu, nu);
    const FiniteQG& g = mu.parent();
    Vec out(g.dim());
    for (const auto& t : g.comult()) out[t.i] += t.v * mu.values()[t.j] * nu.values()[t.k];
    return Functional(g, std::move(out));
}

/// mu-bar(x) = conj(mu(x*)).
inline Functional adjoint(const Functional& mu) {
    const FiniteQG& g = mu.parent();
    Vec out(g.dim());
    for (std::size_t i = 0; i < g.dim(); ++i) {
        cplx s = 0.0;
        for (const auto& [p, w] : g.alg().adj_basis(i)) s += w * mu.values()[p];
        out[i] = std::conj(s);
    }
    return Functional(g, std::move(out));
}

/// omega^sharp(x) = conj(omega(S(x)^*)).
inline Functional sharp(const Functional& mu) {
    const FiniteQG& g = mu.parent();
    Vec out(g.dim());
    for (std::size_t i = 0; i < g.dim(); ++i) out[i] = std::conj(mu(g.adj(g.S(g.basis(i)))));
    return Functional(g, std::move(out));
}

/// M[i][j] = mu(e_i^* e_j).
inline CMatrix positivity_matrix(const Functional& mu) {
    const FiniteQG& g = mu.parent();
    const std::size_t d = g.dim();
    CMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (const auto& [p, w] : g.alg().adj_basis(i))
            for (std::size_t j = 0; j < d; ++j)
                for (const auto& [k, v] : g.alg().product(p, j)) m(i, j) += w * v * mu.values()[k];
    return m;
}

inline bool is_positive(const Functional& mu, double tol = 1e-9) {
    const CMatrix m = positivity_matrix(mu);
    if (hermitian_defect(m) > tol * std::max(1.0, frob_norm(m))) return false;
    return psd_check(0.5 * (m + m.adjoint()), tol);
}

inline bool is_state(const Functional& mu, double tol = 1e-9) {
    return std::abs(mu(mu.parent().one()) - 1.0) <= tol && is_positive(mu, tol);
}

// ---------------------------------------------------------------- positive-definite elements

/// a = (id (x) mu)(W^*) as blocks a^alpha = (mu^alpha)^*.
struct PdElement {
    const FiniteQG* g;
    std::vector<CMatrix> a;
    bool central;
};

inline double scalarity_residual(const CMatrix& m) {
    const cplx mean = trace(m) / static_cast<double>(m.rows());
    return frob_norm(m - mean * CMatrix::identity(m.rows()));
}

inline bool blocks_central(const std::vector<CMatrix>& a, double tol = 1e-10) {
    for (const auto& m : a)
        if (scalarity_residual(m) > tol) return false;
    return true;
}

inline PdElement pd_element(const Functional& mu, double tol = 1e-9) {
    if (!is_state(mu, tol)) fail(ErrorKind::Contract, "NotAState", "pd_element needs a state");
    PdElement r{&mu.parent(), {}, false};
    for (const auto& b : mu.blocks()) r.a.push_back(b.adjoint());
    r.central = blocks_central(r.a);
    return r;
}

/// The functional whose pd element is a.
inline Functional pd_functional(const PdElement& a) {
    std::vector<CMatrix> b;
    for (const auto& m : a.a) b.push_back(m.adjoint());
    return Functional::from_blocks(*a.g, b);
}

/// max_a ||a^a - I||.
inline double gauge_norm(const std::vector<CMatrix>& a) {
    double worst = 0.0;
    for (const auto& m : a) worst = std::max(worst, op_norm(m - CMatrix::identity(m.rows())));
    return worst;
}

/// max over the irreps in F of ||a^a - I||.
inline double gauge_strict(const std::vector<CMatrix>& a, const std::vector<std::size_t>& F) {
    double worst = 0.0;
    for (auto k : F) worst = std::max(worst, op_norm(a.at(k) - CMatrix::identity(a.at(k).rows())));
    return worst;
}

/// Re(a) = (a + a^*)/2; its functional is (mu + mu-bar o S)/2.
inline PdElement re_transform(const PdElement& a, double tol = 1e-9) {
    PdElement r{a.g, {}, false};
    for (const auto& m : a.a) r.a.push_back(0.5 * (m + m.adjoint()));
    r.central = blocks_central(r.a);
    if (!is_state(pd_functional(r), tol)) fail(ErrorKind::Contract, "PositivityLost", "Re(a) is not positive-definite");
    return r;
}

inline Functional series_exp(const Functional& x, int max_terms = 60, double stop = 1e-15);

/// exp(a - 1) blockwise; cross-checked against the convolution series exp_*(mu - eps).
inline PdElement exp_transform(const PdElement& a, double tol = 1e-9) {
    for (const auto& m : a.a)
        if (hermitian_defect(m) > 1e-10) fail(ErrorKind::Contract, "NotSelfadjoint", "exp_transform needs a = a^*");
    PdElement r{a.g, {}, false};
    for (const auto& m : a.a) r.a.push_back(expm(m - CMatrix::identity(m.rows())));
    r.central = blocks_central(r.a);
    const FiniteQG& g = *a.g;
    const Functional mu = pd_functional(a);
    const Functional series = series_exp(mu - counit_functional(g));
    const double res = distance(series, pd_functional(r));
    if (res > tol) fail(ErrorKind::Contract, "SeriesDivergence", "series vs blockwise residual " + std::to_string(res));
    return r;
}

/// sum_k x^{*k}/k!, stopping when a term drops below stop or after max_terms.
inline Functional series_exp(const Functional& x, int max_terms, double stop) {
    const FiniteQG& g = x.parent();
    Functional sum = counit_functional(g);
    Functional term = sum;
    for (int k = 1; k <= max_terms; ++k) {
        term = (1.0 / k) * convolve(term, x);
        sum = sum + term;
        if (vnorm(term.values()) < stop) break;
    }
    return sum;
}

// ---------------------------------------------------------------- generating functionals (basic checks)

/// G[i][j] = conj(L(e_i)) eps_j + conj(eps_i) L(e_j) - L(e_i^* e_j); PSD iff L is conditionally
/// negative definite (given L(1) = 0 and L self-adjoint).
inline CMatrix schurmann_gram(const Functional& L) {
    const FiniteQG& g = L.parent();
    const std::size_t d = g.dim();
    const CMatrix m = positivity_matrix(L);
    CMatrix G(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            G(i, j) = std::conj(L.values()[i]) * g.counit()[j] + std::conj(g.counit()[i]) * L.values()[j] - m(i, j);
    return G;
}

struct GeneratingDefects {
    double unit;         // |L(1)|
    double selfadjoint;  // max |L(x*) - conj L(x)|
    double gram_hermitian;
    double cnd_min_eig;  // min eigenvalue of the Schurmann Gram
    Vec witness;         // eigenvector for cnd_min_eig, as coefficients of sum v_i (e_i - eps_i 1)

    bool ok(double tol = 1e-9) const {
        return unit <= 1e-10 && selfadjoint <= 1e-10 && gram_hermitian <= tol && cnd_min_eig >= -tol;
    }
};

inline GeneratingDefects generating_defects(const Functional& L) {
    const FiniteQG& g = L.parent();
    GeneratingDefects r{};
    r.unit = std::abs(L(g.one()));
    r.selfadjoint = vmax_abs(vsub(adjoint(L).values(), L.values()));
    const CMatrix G = schurmann_gram(L);
    r.gram_hermitian = hermitian_defect(G);
    auto e = hermitian_eig(0.5 * (G + G.adjoint()));
    r.cnd_min_eig = e.values.front();
    r.witness = e.vectors.col(0);
    return r;
}

inline void require_generating(const Functional& L, double tol = 1e-9) {
    const auto d = generating_defects(L);
    if (!d.ok(tol))
        fail(ErrorKind::Contract, "NotGenerating",
             "L(1)=" + std::to_string(d.unit) + " selfadjoint=" + std::to_string(d.selfadjoint) +
                 " cnd_min_eig=" + std::to_string(d.cnd_min_eig));
}

/// mu_t = exp_*(-tL) through the blocks expm(-t L^a).
inline Functional semigroup_at(const Functional& L, double t) {
    std::vector<CMatrix> b;
    for (const auto& m : L.blocks()) b.push_back(expm(cplx(-t) * m));
    return Functional::from_blocks(L.parent(), b);
}

inline std::vector<Functional> conv_exp_semigroup(const Functional& L, const std::vector<double>& ts, double tol = 1e-9) {
    require_generating(L, tol);
    std::vector<Functional> out;
    for (double t : ts) out.push_back(semigroup_at(L, t));
    return out;
}

/// (eps - mu_h)/h, which tends to L.
inline Functional derivative_quotient(const Functional& L, double h) {
    return (1.0 / h) * (counit_functional(L.parent()) - semigroup_at(L, h));
}

/// 2 D(h/2) - D(h): cancels the first-order term of the one-sided quotient D.
inline Functional richardson_quotient(const Functional& L, double h) {
    return 2.0 * derivative_quotient(L, h / 2) - derivative_quotient(L, h);
}

// ---------------------------------------------------------------- windows

/// A complex function on the elements of a window (the dual of a group: functionals are functions).
struct WindowFunction {
    const GroupDualWindow* w;
    Vec f;

    cplx operator()(std::size_t g) const { return f[g]; }
};

inline WindowFunction window_function(const GroupDualWindow& w, const std::function<cplx(std::size_t)>& fn) {
    WindowFunction r{&w, Vec(w.size())};
    for (std::size_t g = 0; g < w.size(); ++g) r.f[g] = fn(g);
    return r;
}

/// Delta(lambda_g) = lambda_g (x) lambda_g makes convolution pointwise.
inline WindowFunction convolve(const WindowFunction& a, const WindowFunction& b) {
    if (a.w != b.w) fail(ErrorKind::Contract, "ParentMismatch", "window functions on different windows");
    WindowFunction r{a.w, Vec(a.f.size())};
    for (std::size_t g = 0; g < a.f.size(); ++g) r.f[g] = a.f[g] * b.f[g];
    return r;
}

/// Largest r <= floor(R/2) such that every g^{-1}h over the r-ball is in the window.
inline int gram_radius(const GroupDualWindow& w) {
    for (int r = w.radius() / 2; r >= 1; --r) {
        const auto b = w.ball(r);
        bool okay = true;
        for (auto g : b) {
            for (auto h : b)
                if (!w.product(w.inverse(g), h)) {
                    okay = false;
                    break;
                }
            if (!okay) break;
        }
        if (okay) return r;
    }
    fail(ErrorKind::Resource, "WindowTruncation", "no sub-window of radius >= 1 has all products defined");
}

/// [f(g^{-1} h)] over the half-radius ball.
inline CMatrix window_gram(const WindowFunction& f) {
    const GroupDualWindow& w = *f.w;
    const auto b = w.ball(gram_radius(w));
    CMatrix m(b.size(), b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = f.f[w.mul(w.inverse(b[i]), b[j])];
    return m;
}

inline bool is_positive(const WindowFunction& f, double tol = 1e-9) {
    const CMatrix m = window_gram(f);
    if (hermitian_defect(m) > tol * std::max(1.0, frob_norm(m))) return false;
    return psd_check(0.5 * (m + m.adjoint()), tol);
}

/// -[L(g^{-1}h) - L(g^{-1}) - L(h) + L(e)] over g, h != e in the half-radius ball: the form -L(a^*b)
/// on the basis lambda_g - lambda_e of ker eps.
inline CMatrix window_cnd_gram(const WindowFunction& L) {
    const GroupDualWindow& w = *L.w;
    std::vector<std::size_t> b;
    for (auto g : w.ball(gram_radius(w)))
        if (g != w.identity()) b.push_back(g);
    CMatrix m(b.size(), b.size());
    const cplx le = L.f[w.identity()];
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            const std::size_t gi = w.inverse(b[i]);
            m(i, j) = -(L.f[w.mul(gi, b[j])] - L.f[gi] - L.f[b[j]] + le);
        }
    return m;
}

inline void require_generating(const WindowFunction& L, double tol = 1e-9) {
    const GroupDualWindow& w = *L.w;
    if (std::abs(L.f[w.identity()]) > 1e-10) fail(ErrorKind::Contract, "NotGenerating", "L(e) != 0");
    for (std::size_t g = 0; g < w.size(); ++g)
        if (std::abs(L.f[w.inverse(g)] - std::conj(L.f[g])) > 1e-10)
            fail(ErrorKind::Contract, "NotGenerating", "L not self-adjoint at " + w.name(g));
    const CMatrix m = window_cnd_gram(L);
    if (!psd_check(0.5 * (m + m.adjoint()), tol)) fail(ErrorKind::Contract, "NotGenerating", "L not conditionally negative definite");
}

/// mu_t(g) = exp(-t L(g)): convolution powers on a group dual are pointwise powers.
inline WindowFunction window_semigroup_at(const WindowFunction& L, double t) {
    WindowFunction r{L.w, Vec(L.f.size())};
    for (std::size_t g = 0; g < L.f.size(); ++g) r.f[g] = std::exp(-t * L.f[g]);
    return r;
}

inline std::vector<WindowFunction> conv_exp_semigroup(const WindowFunction& L, const std::vector<double>& ts, double tol = 1e-9) {
    require_generating(L, tol);
    std::vector<WindowFunction> out;
    for (double t : ts) out.push_back(window_semigroup_at(L, t));
    return out;
}

}  // namespace qgwb
