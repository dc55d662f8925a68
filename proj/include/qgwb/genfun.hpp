#pragma once

// Generating functionals, Schurmann triples, the V^(l) and T matrices for central S-invariant
// generators, the strongly unbounded generator constructor, and the no-invariant-vector bounds.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "functionals.hpp"

namespace qgwb {

// ---------------------------------------------------------------- validation

struct GenFunctional {
    Functional L;
    bool selfadjoint, vanishes_at_unit, central, S_invariant;
    std::vector<double> c;  // c_a with L^a = c_a I (central case only)
    GeneratingDefects defects;
};

inline GenFunctional validate_generating(const Functional& L, double tol = 1e-9) {
    const FiniteQG& g = L.parent();
    const GeneratingDefects d = generating_defects(L);
    if (d.selfadjoint > 1e-10) fail(ErrorKind::Contract, "NotSelfadjoint", "max |L(x*) - conj L(x)| = " + std::to_string(d.selfadjoint));
    if (d.unit > 1e-10) fail(ErrorKind::Contract, "NotVanishing", "|L(1)| = " + std::to_string(d.unit));
    if (d.cnd_min_eig < -tol) {
        // witness sum v_i (e_i - eps_i 1) in ker eps
        Vec w(g.dim());
        for (std::size_t i = 0; i < g.dim(); ++i) {
            w[i] += d.witness[i];
            vaxpy(w, -d.witness[i] * g.counit()[i], g.one());
        }
        throw Error(ErrorKind::Contract, "NotCND", "form value " + std::to_string(-d.cnd_min_eig) + " > 0 on ker eps", w);
    }
    GenFunctional r{L, true, true, blocks_central(L.blocks()), false, {}, d};
    const Vec LS = g.antipode().transpose() * L.values();
    r.S_invariant = vmax_abs(vsub(LS, L.values())) <= 1e-10;
    if (r.central)
        for (const auto& b : L.blocks()) r.c.push_back(b(0, 0).real());
    return r;
}

/// L with L^a = c_a I.
inline Functional central_generator(const FiniteQG& g, const std::vector<double>& c) {
    std::vector<CMatrix> b;
    for (std::size_t a = 0; a < g.num_irreps(); ++a) b.push_back(c.at(a) * CMatrix::identity(g.irrep(a).n));
    return Functional::from_blocks(g, b);
}

struct WindowGenFunctional {
    WindowFunction L;
    int gram_radius;
    double cnd_min_eig;
};

inline WindowGenFunctional validate_generating(const WindowFunction& L, double tol = 1e-9) {
    const GroupDualWindow& w = *L.w;
    for (std::size_t g = 0; g < w.size(); ++g)
        if (std::abs(L.f[w.inverse(g)] - std::conj(L.f[g])) > 1e-10)
            fail(ErrorKind::Contract, "NotSelfadjoint", "L(g^-1) != conj L(g) at " + w.name(g));
    if (std::abs(L.f[w.identity()]) > 1e-10) fail(ErrorKind::Contract, "NotVanishing", "L(e) != 0");
    const CMatrix m = window_cnd_gram(L);
    auto e = hermitian_eig(0.5 * (m + m.adjoint()));
    if (e.values.front() < -tol) {
        // witness over the ball: coefficient of lambda_g, with the lambda_e coefficient balancing it
        std::vector<std::size_t> b;
        for (auto g : w.ball(gram_radius(w)))
            if (g != w.identity()) b.push_back(g);
        Vec wv(w.size());
        for (std::size_t i = 0; i < b.size(); ++i) {
            wv[b[i]] += e.vectors(i, 0);
            wv[w.identity()] -= e.vectors(i, 0);
        }
        throw Error(ErrorKind::Contract, "NotCND", "form value " + std::to_string(-e.values.front()) + " > 0 on ker eps", wv);
    }
    return {L, gram_radius(w), e.values.front()};
}

// ---------------------------------------------------------------- Schurmann triple

struct SchurmannTriple {
    const FiniteQG* g;
    CMatrix gram;                // <c(e_i), c(e_j)>
    CMatrix C;                   // r x d, c(e_j) = column j
    std::vector<CMatrix> rho;    // rho(e_i) on C^r
    double cocycle_residual;     // max |<c(a), c(bd)> - <c(a), rho(b)c(d)> - <c(a), c(b)> eps(d)|
    double identity_residual;    // max |L(a*b) - conj L(a) eps(b) - conj eps(a) L(b) + <c(a), c(b)>|
    double reality_residual;     // max imaginary part of the Gram in the document basis (S-invariant L)

    std::size_t dim() const { return C.rows(); }
    Vec c(const Vec& x) const { return C * x; }
};

inline SchurmannTriple schurmann_triple(const GenFunctional& gl, double tol = 1e-9) {
    const Functional& L = gl.L;
    const FiniteQG& g = L.parent();
    const std::size_t d = g.dim();
    const CMatrix G = schurmann_gram(L);
    if (!psd_check(0.5 * (G + G.adjoint()), tol)) fail(ErrorKind::Contract, "GramNotPSD", "Schurmann Gram has a negative eigenvalue");
    auto e = hermitian_eig(0.5 * (G + G.adjoint()));
    const double scale = std::max(1.0, e.values.back());
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < d; ++k)
        if (e.values[k] > 1e-10 * scale) keep.push_back(k);
    SchurmannTriple t{&g, G, CMatrix(keep.size(), d), {}, 0.0, 0.0, 0.0};
    for (std::size_t q = 0; q < keep.size(); ++q)
        for (std::size_t i = 0; i < d; ++i) t.C(q, i) = std::sqrt(e.values[keep[q]]) * std::conj(e.vectors(i, keep[q]));
    const CMatrix Cp = pinv(t.C);
    const std::size_t r = t.dim();
    for (std::size_t i = 0; i < d; ++i) {
        CMatrix a = t.C * g.alg().left_mult(g.basis(i));
        const Vec ci = t.C.col(i);
        for (std::size_t p = 0; p < r; ++p)
            for (std::size_t j = 0; j < d; ++j) a(p, j) -= ci[p] * g.counit()[j];
        t.rho.push_back(a * Cp);
    }
    // cocycle expansion on basis triples
    std::vector<Vec> cb(d);
    for (std::size_t i = 0; i < d; ++i) cb[i] = t.C.col(i);
    const CMatrix CG = t.C.adjoint() * t.C;
    for (std::size_t b = 0; b < d; ++b) {
        std::vector<Vec> rc(d);
        for (std::size_t dd = 0; dd < d; ++dd) rc[dd] = t.rho[b] * cb[dd];
        for (std::size_t dd = 0; dd < d; ++dd) {
            Vec cbd(r);
            for (const auto& [k, v] : g.alg().product(b, dd)) vaxpy(cbd, v, cb[k]);
            for (std::size_t a = 0; a < d; ++a) {
                const cplx lhs = vdot(cb[a], cbd);
                const cplx rhs = vdot(cb[a], rc[dd]) + CG(a, b) * g.counit()[dd];
                t.cocycle_residual = std::max(t.cocycle_residual, std::abs(lhs - rhs));
            }
        }
    }
    const CMatrix M = positivity_matrix(L);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const cplx expect = std::conj(L.values()[i]) * g.counit()[j] + std::conj(g.counit()[i]) * L.values()[j] - CG(i, j);
            t.identity_residual = std::max(t.identity_residual, std::abs(M(i, j) - expect));
        }
    if (gl.S_invariant) {
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) t.reality_residual = std::max(t.reality_residual, std::abs(CG(i, j).imag()));
        if (t.reality_residual > 1e-8)
            fail(ErrorKind::Contract, "CocycleNotReal", "Gram imaginary part " + std::to_string(t.reality_residual));
    }
    return t;
}

// ---------------------------------------------------------------- V^(l) and T

struct VMatrix {
    CMatrix V;
    double hermitian_residual;
    double oracle_residual;  // against the irrep structure-constant expansion
    double min_eig;
    double derived_bound;    // c_a + c_g + c_b - sqrt(2c_g 2c_b) - sqrt(2c_a 2c_g) - sqrt(2c_a 2c_b)
    double spec_bound;       // c_g - (2 sqrt(2c_a 2c_g) + 2 sqrt(2c_a 2c_b) + sqrt(2c_g 2c_b))
};

inline void require_central_kac(const GenFunctional& gl) {
    if (!gl.L.parent().is_kac()) fail(ErrorKind::Contract, "NotKac", gl.L.parent().id());
    if (!gl.central) fail(ErrorKind::Contract, "NotCentral", "L blocks are not scalar");
    if (!gl.S_invariant) fail(ErrorKind::Contract, "NotCentral", "L is not S-invariant");
}

inline double derived_v_bound(double ca, double cg, double cb) {
    return ca + cg + cb - std::sqrt(2 * cg * 2 * cb) - std::sqrt(2 * ca * 2 * cg) - std::sqrt(2 * ca * 2 * cb);
}
inline double spec_v_bound(double ca, double cg, double cb) {
    return cg - (2 * std::sqrt(2 * ca * 2 * cg) + 2 * std::sqrt(2 * ca * 2 * cb) + std::sqrt(2 * cg * 2 * cb));
}

/// V_{(i,j,k),(p,r,s)} = L((u^a_ip)^* u^g_jr u^b_ks), rows flattened (i*n_g + j)*n_b + k.
inline std::vector<VMatrix> build_V_matrices(const GenFunctional& gl, std::size_t alpha, std::size_t beta,
                                             const std::vector<std::size_t>& gammas) {
    require_central_kac(gl);
    const Functional& L = gl.L;
    const FiniteQG& g = L.parent();
    const std::size_t d = g.dim();
    // irrep-basis structure constants: u_a u_b = sum C[a][b][c] u_c, u_a^* = sum K[a][c] u_c
    std::vector<Vec> C(d * d), K(d);
    for (std::size_t a = 0; a < d; ++a) {
        K[a] = g.irrep_coords(g.adj(g.u(a)));
        for (std::size_t b = 0; b < d; ++b) C[a * d + b] = g.irrep_coords(g.mul(g.u(a), g.u(b)));
    }
    Vec Lu(d);
    for (std::size_t c = 0; c < d; ++c) Lu[c] = L(g.u(c));
    auto oracle = [&](std::size_t x, std::size_t y, std::size_t z) {
        Vec s1(d);
        for (std::size_t p = 0; p < d; ++p)
            if (K[x][p] != cplx(0.0)) vaxpy(s1, K[x][p], C[p * d + y]);
        cplx v = 0.0;
        for (std::size_t q = 0; q < d; ++q)
            if (std::abs(s1[q]) > 1e-15)
                for (std::size_t w = 0; w < d; ++w) v += s1[q] * C[q * d + z][w] * Lu[w];
        return v;
    };
    const std::size_t na = g.irrep(alpha).n, nb = g.irrep(beta).n;
    std::vector<VMatrix> out;
    for (auto gam : gammas) {
        const std::size_t ng = g.irrep(gam).n, n = na * ng * nb;
        CMatrix V(n, n), O(n, n);
        for (std::size_t i = 0; i < na; ++i)
            for (std::size_t j = 0; j < ng; ++j)
                for (std::size_t k = 0; k < nb; ++k)
                    for (std::size_t p = 0; p < na; ++p)
                        for (std::size_t r = 0; r < ng; ++r)
                            for (std::size_t s = 0; s < nb; ++s) {
                                const std::size_t row = (i * ng + j) * nb + k, col = (p * ng + r) * nb + s;
                                const Vec prod = g.mul(g.mul(g.adj(g.irrep(alpha).at(i, p)), g.irrep(gam).at(j, r)), g.irrep(beta).at(k, s));
                                V(row, col) = L(prod);
                                O(row, col) = oracle(g.flat(alpha, i, p), g.flat(gam, j, r), g.flat(beta, k, s));
                            }
        VMatrix vm{V, hermitian_defect(V), frob_norm(V - O), 0.0, 0.0, 0.0};
        vm.min_eig = min_eigenvalue(0.5 * (V + V.adjoint()));
        const double ca = gl.c[alpha], cb = gl.c[beta], cg = gl.c[gam];
        vm.derived_bound = derived_v_bound(ca, cg, cb);
        vm.spec_bound = spec_v_bound(ca, cg, cb);
        out.push_back(std::move(vm));
    }
    return out;
}

/// Group-dual case: all irreps are one-dimensional and V = L(p^{-1} m q).
inline VMatrix window_V(const WindowFunction& L, std::size_t p, std::size_t q, std::size_t m) {
    const GroupDualWindow& w = *L.w;
    const cplx v = L.f[w.mul(w.mul(w.inverse(p), m), q)];
    CMatrix V(1, 1);
    V(0, 0) = v;
    const double ca = L.f[p].real(), cb = L.f[q].real(), cg = L.f[m].real();
    return {V, std::abs(v.imag()) * std::sqrt(2.0), 0.0, v.real(), derived_v_bound(ca, cg, cb), spec_v_bound(ca, cg, cb)};
}

/// T_g(e_j) = sum_a c(u^g_ja) (x) e_a and T~_g(e_j) = sum_a c((u^g_aj)^*) (x) e_a; returns
/// max(||T^*T - 2c_g I||, ||T~^*T~ - 2c_g I||).
inline double check_T_norms(const SchurmannTriple& t, const GenFunctional& gl, std::size_t gamma) {
    if (!gl.central) fail(ErrorKind::Contract, "NotCentral", "L blocks are not scalar");
    const FiniteQG& g = *t.g;
    const Irrep& u = g.irrep(gamma);
    const std::size_t n = u.n, r = t.dim();
    CMatrix T(r * n, n), Tt(r * n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t a = 0; a < n; ++a) {
            const Vec c1 = t.c(u.at(j, a)), c2 = t.c(g.adj(u.at(a, j)));
            for (std::size_t q = 0; q < r; ++q) {
                T(q * n + a, j) = c1[q];
                Tt(q * n + a, j) = c2[q];
            }
        }
    const CMatrix target = (2.0 * gl.c[gamma]) * CMatrix::identity(n);
    return std::max(frob_norm(T.adjoint() * T - target), frob_norm(Tt.adjoint() * Tt - target));
}

// ---------------------------------------------------------------- strongly unbounded generator

/// A sequence of central normalised pd elements on a discrete group, evaluated lazily.
struct CentralSequence {
    /// ||I - a_k^alpha|| (scalar case: |1 - a_k(alpha)|).
    std::function<double(std::int64_t k, const Key& alpha)> gap;
    /// 1 - a_k(alpha), the block of eps-hat - mu_k (real scalar case).
    std::function<double(std::int64_t k, const Key& alpha)> defect;
    /// Elements of length exactly n (the shell K_n \ K_{n-1}).
    std::function<std::vector<Key>(std::int64_t n)> shell;
    /// gap(k, alpha) depends only on |alpha| and is non-decreasing in it.
    bool radial_monotone = false;
};

/// a_k(m) = exp(-|m|/k) on Z^d (l1 length).
inline CentralSequence exp_decay_sequence_Zd(int dim) {
    CentralSequence s;
    auto len = [](const Key& x) {
        std::int64_t l = 0;
        for (auto v : x) l += std::abs(v);
        return static_cast<double>(l);
    };
    s.gap = [len](std::int64_t k, const Key& a) { return 1.0 - std::exp(-len(a) / static_cast<double>(k)); };
    s.defect = s.gap;
    s.shell = [dim](std::int64_t n) {
        std::vector<Key> out;
        if (dim == 1) {
            if (n == 0) return std::vector<Key>{Key{0}};
            return std::vector<Key>{Key{-n}, Key{n}};
        }
        Key x(static_cast<std::size_t>(dim));
        std::function<void(int, std::int64_t)> rec = [&](int pos, std::int64_t budget) {
            if (pos == dim - 1) {
                x[pos] = budget;
                out.push_back(x);
                if (budget) {
                    x[pos] = -budget;
                    out.push_back(x);
                }
                return;
            }
            for (std::int64_t v = -budget; v <= budget; ++v) {
                x[pos] = v;
                rec(pos + 1, budget - std::abs(v));
            }
        };
        rec(0, n);
        return out;
    };
    s.radial_monotone = true;
    return s;
}

struct Theorem69Stage {
    int l;
    std::int64_t k;
    double small_sup;   // sup over K_l of ||I - a_k||
    Key witness;
    std::int64_t witness_length;
    double witness_gap;   // ||I - a_k^{alpha_l}||
    double L_at_witness;  // ||L^{alpha_l}|| over the completed stages
    double bound;         // 2^l eps
};

struct Theorem69Result {
    std::vector<Theorem69Stage> stages;
    std::vector<std::int64_t> ks;
    /// L(alpha) = sum_l 2^l (1 - a_{k_l}(alpha)) over the selected stages.
    std::function<double(const Key&)> L;
    double tail_bound_on_K(int n) const {
        // stages beyond n contribute at most sum_{l > n} 2^l eps / 4^l on K_n
        double s = 0.0;
        for (const auto& st : stages)
            if (st.l > n) s += std::ldexp(st.small_sup, st.l);
        return s;
    }
};

struct Theorem69Options {
    int stages = 10;
    std::int64_t witness_cap = std::int64_t{1} << 53;  // largest radius searched
    std::int64_t scan_cap = 10000000;                  // elements examined by a non-radial search
    int max_stages = 40;
};

inline Theorem69Result theorem69_constructor(const CentralSequence& a, double eps, const Theorem69Options& opt = {}) {
    if (opt.stages > opt.max_stages)
        fail(ErrorKind::Resource, "StageOverflow", "requested " + std::to_string(opt.stages) + " stages, cap " + std::to_string(opt.max_stages));
    Theorem69Result res;
    constexpr std::int64_t k_ceiling = std::int64_t{1} << 53;
    std::int64_t k = 1;
    for (int l = 1; l <= opt.stages; ++l) {
        const double target = eps / std::ldexp(1.0, 2 * l);
        // condition (small) on K_l = ball of radius l
        auto sup_on_ball = [&](std::int64_t kk) {
            double s = 0.0;
            for (std::int64_t n = 0; n <= l; ++n)
                for (const auto& x : a.shell(n)) s = std::max(s, a.gap(kk, x));
            return s;
        };
        double sup = sup_on_ball(k);
        while (sup > target) {
            if (k >= k_ceiling)
                fail(ErrorKind::Resource, "StageOverflow", "stage " + std::to_string(l) + ": k exceeds 2^53");
            k *= 2;
            sup = sup_on_ball(k);
        }
        if (!res.ks.empty() && sup > target)
            fail(ErrorKind::Contract, "SelectionFailed", "(small) fails at stage " + std::to_string(l));
        // condition (pointbig): witness with ||I - a_k^alpha|| >= eps
        std::optional<Key> wit;
        std::int64_t wlen = -1;
        if (a.radial_monotone) {
            auto rep = [&](std::int64_t n) { return a.shell(n).front(); };
            std::int64_t hi = 1;
            while (hi <= opt.witness_cap && a.gap(k, rep(hi)) < eps) hi *= 2;
            if (hi > opt.witness_cap) {
                hi = opt.witness_cap;
                if (a.gap(k, rep(hi)) < eps) hi = -1;
            }
            if (hi > 0) {
                std::int64_t lo = hi / 2;  // gap(lo) < eps unless lo == 0
                while (hi - lo > 1) {
                    const std::int64_t mid = lo + (hi - lo) / 2;
                    if (a.gap(k, rep(mid)) >= eps)
                        hi = mid;
                    else
                        lo = mid;
                }
                wit = rep(hi);
                wlen = hi;
            }
        } else {
            std::int64_t seen = 0;
            for (std::int64_t n = 0; n <= opt.witness_cap && seen <= opt.scan_cap && !wit; ++n)
                for (const auto& x : a.shell(n))
                    if (++seen, a.gap(k, x) >= eps) {
                        wit = x;
                        wlen = n;
                        break;
                    }
        }
        if (!wit)
            fail(ErrorKind::Contract, "SelectionFailed",
                 "(pointbig) fails at stage " + std::to_string(l) + ": no witness within the search cap");
        res.ks.push_back(k);
        res.stages.push_back({l, k, sup, *wit, wlen, a.gap(k, *wit), 0.0, std::ldexp(eps, l)});
        k *= 2;  // strictly increasing subsequence
    }
    const auto ks = res.ks;
    auto defect = a.defect;
    res.L = [ks, defect](const Key& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < ks.size(); ++i) s += std::ldexp(defect(ks[i], x), static_cast<int>(i + 1));
        return s;
    };
    for (auto& st : res.stages) st.L_at_witness = std::abs(res.L(st.witness));
    return res;
}

/// Restriction of a lazily defined L to a window.
inline WindowFunction restrict_to(const GroupDualWindow& w, const std::function<double(const Key&)>& L) {
    return window_function(w, [&](std::size_t g) { return cplx(L(w.element(g))); });
}

// ---------------------------------------------------------------- no invariant vectors

/// zeta = sum_i c_i Lambda(a_i) (x) Lambda(b_i) in the GNS space of mu_t (x) mu_t.
struct ZetaTerm {
    cplx c;
    std::size_t a, b;
};

struct Lemma74Stage {
    std::size_t gamma;
    std::string gamma_name;
    int gamma_length;
    double value;  // sum_ij Re[...]
    double bound;  // 1 - 2 value
};

/// ||zeta||^2 under mu_t (x) mu_t.
inline double zeta_norm2(const WindowFunction& L, double t, const std::vector<ZetaTerm>& z) {
    const GroupDualWindow& w = *L.w;
    auto mu = [&](std::size_t g) { return std::exp(-t * L.f[g]); };
    cplx s = 0.0;
    for (const auto& x : z)
        for (const auto& y : z) s += std::conj(y.c) * x.c * mu(w.mul(w.inverse(y.a), x.a)) * mu(w.mul(w.inverse(y.b), x.b));
    return s.real();
}

inline std::vector<Lemma74Stage> lemma74_experiment(const WindowFunction& L, double t, std::vector<ZetaTerm> z,
                                                    const std::vector<std::size_t>& gammas, bool auto_normalize = false) {
    const GroupDualWindow& w = *L.w;
    const double n2 = zeta_norm2(L, t, z);
    if (std::abs(n2 - 1.0) > 1e-9) {
        if (!auto_normalize || n2 <= 0.0) fail(ErrorKind::Contract, "NotNormalized", "||zeta||^2 = " + std::to_string(n2));
        for (auto& x : z) x.c /= std::sqrt(n2);
    }
    auto mu = [&](std::size_t g) { return std::exp(-t * L.f[g]); };
    std::vector<Lemma74Stage> out;
    for (auto gam : gammas) {
        double s = 0.0;
        for (const auto& zi : z)
            for (const auto& zj : z) {
                const std::size_t x = w.mul(w.mul(w.inverse(zj.a), gam), zi.a);
                const std::size_t y = w.mul(w.mul(w.inverse(zj.b), gam), zi.b);
                s += (std::conj(zj.c) * zi.c * mu(x) * mu(y)).real();
            }
        out.push_back({gam, w.name(gam), w.length(gam), s, 1.0 - 2.0 * s});
    }
    return out;
}

}  // namespace qgwb
