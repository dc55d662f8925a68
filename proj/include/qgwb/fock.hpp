#pragma once

// Truncated full Fock space F(K) = C Omega + K + ... + K^{(x)N}, free Araki-Woods operators
// s(zeta) = l(zeta) + l(T zeta)^*, the lift F(U) of a corep and its induced action.
// Words e_{i1} (x) ... (x) e_{in} sit at offset(n) + i1 k^{n-1} + ... + in; creation prepends.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "coreps.hpp"

namespace qgwb {

/// Sparse operator stored column by column.
struct FockOp {
    std::size_t n = 0;
    std::vector<std::vector<std::pair<std::size_t, cplx>>> cols;

    explicit FockOp(std::size_t dim = 0) : n(dim), cols(dim) {}

    Vec apply(const Vec& x) const {
        Vec y(n);
        for (std::size_t c = 0; c < n; ++c)
            if (x[c] != cplx(0.0))
                for (const auto& [r, v] : cols[c]) y[r] += v * x[c];
        return y;
    }

    FockOp adjoint() const {
        FockOp a(n);
        for (std::size_t c = 0; c < n; ++c)
            for (const auto& [r, v] : cols[c]) a.cols[r].push_back({c, std::conj(v)});
        return a;
    }

    CMatrix dense() const {
        CMatrix m(n, n);
        for (std::size_t c = 0; c < n; ++c)
            for (const auto& [r, v] : cols[c]) m(r, c) += v;
        return m;
    }

    friend FockOp operator+(FockOp a, const FockOp& b) {
        for (std::size_t c = 0; c < a.n; ++c) a.cols[c].insert(a.cols[c].end(), b.cols[c].begin(), b.cols[c].end());
        return a;
    }
};

/// Product w = ops[0] ops[1] ... applied to x (rightmost first).
inline Vec apply_word(const std::vector<FockOp>& ops, Vec x) {
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) x = it->apply(x);
    return x;
}

class TruncatedFock {
public:
    static constexpr std::size_t default_total_cap = 87381;

    /// J v = M conj(v); Q positive definite; T = J Q^{1/2}.
    TruncatedFock(std::size_t base_dim, int depth, CMatrix M, CMatrix Q, std::size_t total_cap = default_total_cap)
        : k_(base_dim), depth_(depth), M_(std::move(M)), Q_(std::move(Q)) {
        if (k_ == 0 || depth_ < 0) fail(ErrorKind::Schema, "SchemaError", "Fock space needs dim K >= 1 and depth >= 0");
        if (M_.rows() != k_ || !M_.square() || Q_.rows() != k_ || !Q_.square())
            fail(ErrorKind::Schema, "SchemaError", "J and Q must be dim K x dim K");
        std::size_t total = 0, layer = 1;
        for (int n = 0; n <= depth_; ++n) {
            off_.push_back(total);
            dims_.push_back(layer);
            total += layer;
            if (total > total_cap) fail(ErrorKind::Resource, "DepthExceeded", "truncated Fock space exceeds " + std::to_string(total_cap) + " dimensions");
            layer *= k_;
        }
        total_ = total;
        Qh_ = sqrt_psd(0.5 * (Q_ + Q_.adjoint()));
    }

    static TruncatedFock tracial(std::size_t base_dim, int depth, const CMatrix& M, std::size_t cap = default_total_cap) {
        return TruncatedFock(base_dim, depth, M, CMatrix::identity(base_dim), cap);
    }

    std::size_t base_dim() const { return k_; }
    int depth() const { return depth_; }
    std::size_t total_dim() const { return total_; }
    std::size_t offset(int n) const { return off_[static_cast<std::size_t>(n)]; }
    std::size_t degree_dim(int n) const { return dims_[static_cast<std::size_t>(n)]; }
    const CMatrix& J() const { return M_; }
    const CMatrix& Q() const { return Q_; }
    bool is_tracial(double tol = 1e-12) const { return max_abs(Q_ - CMatrix::identity(k_)) <= tol; }

    Vec T(const Vec& z) const { return M_ * vconj(Qh_ * z); }
    Vec J_apply(const Vec& z) const { return M_ * vconj(z); }

    Vec vacuum() const { return unit_vec(total_, 0); }

    /// zeta placed in degree 1.
    Vec embed(const Vec& z) const {
        if (depth_ < 1) fail(ErrorKind::Resource, "DepthExceeded", "depth 0 has no degree-1 vectors");
        Vec v(total_);
        for (std::size_t i = 0; i < k_; ++i) v[off_[1] + i] = z[i];
        return v;
    }

    struct InvolutionResiduals {
        double J2, Q_min_eig, T2;
    };
    InvolutionResiduals involution_residuals() const {
        const CMatrix A = M_ * Qh_.conj();  // T z = A conj(z)
        return {frob_norm(M_ * M_.conj() - CMatrix::identity(k_)), min_eigenvalue(0.5 * (Q_ + Q_.adjoint())),
                frob_norm(A * A.conj() - CMatrix::identity(k_))};
    }

    /// l(zeta): degree n -> n+1 for n < depth, degree depth -> 0.
    FockOp ell(const Vec& z) const {
        FockOp op(total_);
        for (int n = 0; n < depth_; ++n) {
            const std::size_t dn = dims_[n];
            for (std::size_t w = 0; w < dn; ++w)
                for (std::size_t i = 0; i < k_; ++i)
                    if (z[i] != cplx(0.0)) op.cols[off_[n] + w].push_back({off_[n + 1] + i * dn + w, z[i]});
        }
        return op;
    }

    FockOp s(const Vec& z) const { return ell(z) + ell(T(z)).adjoint(); }

private:
    std::size_t k_;
    int depth_;
    CMatrix M_, Q_, Qh_;
    std::vector<std::size_t> off_, dims_;
    std::size_t total_ = 0;
};

// ---------------------------------------------------------------- moments

/// <Omega, s(zeta)^p Omega> for p = 0..pmax.
inline std::vector<cplx> vacuum_moments(const TruncatedFock& f, const Vec& z, int pmax) {
    if (pmax > f.depth()) fail(ErrorKind::Resource, "DepthExceeded", "moment order exceeds the truncation depth");
    const FockOp s = f.s(z);
    std::vector<cplx> m;
    Vec v = f.vacuum();
    for (int p = 0; p <= pmax; ++p) {
        m.push_back(v[0]);
        v = s.apply(v);
    }
    return m;
}

/// <Omega, S_{w0} ... S_{wp} Omega> for prebuilt generator operators.
inline cplx vacuum_word(const TruncatedFock& f, const std::vector<FockOp>& ops, const std::vector<std::size_t>& word) {
    if (static_cast<int>(word.size()) > f.depth()) fail(ErrorKind::Resource, "DepthExceeded", "word longer than the truncation depth");
    Vec v = f.vacuum();
    for (auto it = word.rbegin(); it != word.rend(); ++it) v = ops.at(*it).apply(v);
    return v[0];
}

inline std::vector<FockOp> generator_ops(const TruncatedFock& f, const std::vector<Vec>& gens) {
    std::vector<FockOp> ops;
    for (const auto& g : gens) ops.push_back(f.s(g));
    return ops;
}

/// <Omega, s(z_{w0}) ... s(z_{wp}) Omega>.
inline cplx vacuum_word(const TruncatedFock& f, const std::vector<Vec>& gens, const std::vector<std::size_t>& word) {
    return vacuum_word(f, generator_ops(f, gens), word);
}

/// Non-crossing pair partition oracle: sum over NC pairings of prod <T z_a, z_b> (a < b).
inline cplx nc_pairing_moment(const TruncatedFock& f, const std::vector<Vec>& gens, const std::vector<std::size_t>& word) {
    const std::size_t p = word.size();
    if (p % 2) return 0.0;
    std::vector<Vec> Tz;
    for (const auto& g : gens) Tz.push_back(f.T(g));
    // interval recursion: the first point pairs with some b, splitting [1, b) and (b, end)
    std::function<cplx(std::size_t, std::size_t)> rec = [&](std::size_t lo, std::size_t hi) -> cplx {
        if (lo >= hi) return 1.0;
        cplx s = 0.0;
        for (std::size_t b = lo + 1; b < hi; b += 2)
            s += vdot(Tz[word[lo]], gens[word[b]]) * rec(lo + 1, b) * rec(b + 1, hi);
        return s;
    };
    return rec(0, p);
}

inline std::size_t count_nc_pairings(std::size_t p) {
    if (p % 2) return 0;
    std::vector<std::size_t> c(p / 2 + 1, 0);
    c[0] = 1;
    for (std::size_t n = 1; n <= p / 2; ++n)
        for (std::size_t i = 0; i < n; ++i) c[n] += c[i] * c[n - 1 - i];
    return c[p / 2];
}

/// max |omega(w1 w2) - omega(w2 w1)| over the given word pairs.
inline double trace_check(const TruncatedFock& f, const std::vector<Vec>& gens, const std::vector<std::vector<std::size_t>>& words) {
    if (!f.is_tracial()) fail(ErrorKind::Contract, "NotTracial", "trace_check needs Q = I");
    const auto ops = generator_ops(f, gens);
    double worst = 0.0;
    for (const auto& a : words)
        for (const auto& b : words) {
            if (static_cast<int>(a.size() + b.size()) > f.depth())
                fail(ErrorKind::Resource, "DepthExceeded", "word pair exceeds the truncation depth");
            std::vector<std::size_t> ab = a, ba = b;
            ab.insert(ab.end(), b.begin(), b.end());
            ba.insert(ba.end(), a.begin(), a.end());
            worst = std::max(worst, std::abs(vacuum_word(f, ops, ab) - vacuum_word(f, ops, ba)));
        }
    return worst;
}

/// All words of length 1..max_len over g letters.
inline std::vector<std::vector<std::size_t>> all_words(std::size_t letters, std::size_t max_len) {
    std::vector<std::vector<std::size_t>> out, layer{{}};
    for (std::size_t l = 1; l <= max_len; ++l) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& w : layer)
            for (std::size_t a = 0; a < letters; ++a) {
                auto x = w;
                x.push_back(a);
                next.push_back(x);
            }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

// ---------------------------------------------------------------- F(U) and the induced action

struct LiftedRep {
    const TruncatedFock* f;
    const Corep* u;
    AMat U;                   // U on K
    std::vector<AMat> block;  // degree n: U_{1(n+1)} ... U_{12} on K^{(x)n}
    double unitarity = 0.0, corep_identity = 0.0, compatibility = 0.0;

    struct Entry {
        std::size_t r, c;
        cplx v;
    };
    // nonzeros of block[n].c[i]; empty with sparse_ok false means use the dense block
    std::vector<std::vector<std::vector<Entry>>> nz;
    std::vector<std::vector<char>> sparse_ok, zero;

    void index_blocks() {
        const std::size_t d = U.c.size();
        nz.assign(block.size(), std::vector<std::vector<Entry>>(d));
        sparse_ok.assign(block.size(), std::vector<char>(d, 0));
        zero.assign(block.size(), std::vector<char>(d, 0));
        for (std::size_t n = 0; n < block.size(); ++n)
            for (std::size_t i = 0; i < d; ++i) {
                const CMatrix& B = block[n].c[i];
                std::size_t count = 0;
                for (std::size_t r = 0; r < B.rows(); ++r)
                    for (std::size_t c = 0; c < B.cols(); ++c) count += B(r, c) != cplx(0.0);
                zero[n][i] = count == 0;
                if (count == 0 || 4 * count > B.rows() * B.cols()) continue;
                sparse_ok[n][i] = 1;
                nz[n][i].reserve(count);
                for (std::size_t r = 0; r < B.rows(); ++r)
                    for (std::size_t c = 0; c < B.cols(); ++c)
                        if (B(r, c) != cplx(0.0)) nz[n][i].push_back({r, c, B(r, c)});
            }
    }

    /// Degree-n slice i (or its adjoint) on a vector of K^{(x)n}.
    Vec block_apply(std::size_t n, std::size_t i, const Vec& x, bool adjoint = false) const {
        Vec out(x.size());
        if (zero[n][i]) return out;
        if (sparse_ok[n][i]) {
            for (const auto& e : nz[n][i]) {
                if (adjoint)
                    out[e.c] += std::conj(e.v) * x[e.r];
                else
                    out[e.r] += e.v * x[e.c];
            }
            return out;
        }
        return adjoint ? block[n].c[i].adjoint() * x : block[n].c[i] * x;
    }

    /// Unitarity and corep-identity residuals of block n applied to the unit vector xi.
    std::pair<double, double> probe_residuals(const FiniteQG& g, std::size_t n, const Vec& xi) const {
        const FiniteAlgebra& alg = g.alg();
        const std::size_t d = alg.dim();
        std::vector<Vec> X(d), Xa(d);
        for (std::size_t j = 0; j < d; ++j) {
            X[j] = block_apply(n, j, xi);
            Xa[j] = block_apply(n, j, xi, true);
        }
        std::vector<Vec> first(d, Vec(xi.size())), second(d, Vec(xi.size()));
        for (std::size_t k = 0; k < d; ++k) {
            vaxpy(first[k], -alg.unit()[k], xi);
            vaxpy(second[k], -alg.unit()[k], xi);
        }
        for (std::size_t i = 0; i < d; ++i) {
            if (zero[n][i]) continue;
            for (const auto& [a, s] : alg.adj_basis(i))
                for (std::size_t j = 0; j < d; ++j) {
                    if (zero[n][j]) continue;
                    const auto& pf = alg.product(a, j);  // e_i^* e_j
                    const auto& ps = alg.product(j, a);  // e_j e_i^*
                    if (!pf.empty()) {
                        const Vec v = block_apply(n, i, X[j], true);
                        for (const auto& [k, w] : pf) vaxpy(first[k], s * w, v);
                    }
                    if (!ps.empty()) {
                        const Vec v = block_apply(n, j, Xa[i]);
                        for (const auto& [k, w] : ps) vaxpy(second[k], s * w, v);
                    }
                }
        }
        double u1 = 0.0, u2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            u1 += std::pow(vnorm(first[k]), 2);
            u2 += std::pow(vnorm(second[k]), 2);
        }
        double c = 0.0;
        std::map<std::size_t, Vec> slot;
        for (std::size_t i = 0; i < d; ++i)
            if (!zero[n][i])
                for (const auto& t : g.comult_of(i)) {
                    auto [it, fresh] = slot.try_emplace(t.j * d + t.k, Vec(xi.size()));
                    vaxpy(it->second, t.v, X[i]);
                }
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) {
                const auto it = slot.find(j * d + k);
                Vec r = it == slot.end() ? Vec(xi.size()) : it->second;
                if (!zero[n][j] && !zero[n][k]) vaxpy(r, -1.0, block_apply(n, j, X[k]));
                c += std::pow(vnorm(r), 2);
            }
        return {std::sqrt(std::max(u1, u2)), std::sqrt(c)};
    }

    /// F_i v, with F = sum_i e_i (x) F_i.
    Vec apply_slice(std::size_t i, const Vec& v, bool adjoint = false) const {
        Vec out(f->total_dim());
        for (int n = 0; n <= f->depth(); ++n) {
            const std::size_t dn = static_cast<std::size_t>(n);
            if (zero[dn][i]) continue;
            const std::size_t o = f->offset(n), m = f->degree_dim(n);
            if (sparse_ok[dn][i]) {
                for (const auto& e : nz[dn][i]) {
                    if (adjoint)
                        out[o + e.c] += std::conj(e.v) * v[o + e.r];
                    else
                        out[o + e.r] += e.v * v[o + e.c];
                }
                continue;
            }
            const CMatrix& B = block[dn].c[i];
            Vec part(v.begin() + static_cast<std::ptrdiff_t>(o), v.begin() + static_cast<std::ptrdiff_t>(o + m));
            const Vec r = adjoint ? B.adjoint() * part : B * part;
            for (std::size_t x = 0; x < m; ++x) out[o + x] = r[x];
        }
        return out;
    }
};

inline LiftedRep lift_rep(const TruncatedFock& f, const Corep& u, std::size_t entry_cap = 8000000, double tol = 1e-8) {
    const FiniteQG& g = u.parent();
    if (u.space_dim() != f.base_dim()) fail(ErrorKind::Schema, "SchemaError", "corep space differs from K");
    LiftedRep L{&f, &u, u.assemble(), {}, 0.0, 0.0, 0.0, {}, {}, {}};
    std::size_t nz = 0;
    for (std::size_t i = 0; i < g.dim(); ++i)
        if (max_abs(L.U.c[i]) > 0.0) ++nz;
    std::size_t entries = 0;
    for (int n = 0; n <= f.depth(); ++n) entries += nz * f.degree_dim(n) * f.degree_dim(n);
    if (entries > entry_cap) fail(ErrorKind::Resource, "DepthExceeded", "F(U) would need " + std::to_string(entries) + " entries");
    if (g.is_kac()) {
        L.compatibility = condition_R_residual(u, f.J());
        if (L.compatibility > tol)
            fail(ErrorKind::Contract, "CompatibilityFailed", "condition R residual " + std::to_string(L.compatibility));
    } else {
        fail(ErrorKind::Contract, "CompatibilityFailed", "compatibility is only checked for Kac parents");
    }
    L.block.push_back(amat_unit(g.alg(), 1));
    for (int n = 1; n <= f.depth(); ++n) {
        const AMat& prev = L.block.back();
        AMat next = amat_zero(g.alg(), f.degree_dim(n));
        std::vector<char> uz(g.dim()), pz(g.dim());
        for (std::size_t i = 0; i < g.dim(); ++i) {
            uz[i] = max_abs(L.U.c[i]) == 0.0;
            pz[i] = max_abs(prev.c[i]) == 0.0;
        }
        for (const auto& t : g.alg().mult()) {
            if (uz[t.i] || pz[t.j]) continue;
            kron_axpy(next.c[t.k], t.v, prev.c[t.j], L.U.c[t.i]);
        }
        L.block.push_back(std::move(next));
    }
    L.index_blocks();
    // exact residuals on small blocks, seeded random unit probes on large ones
    CounterRng rng(0, 0x11F7);
    for (std::size_t n = 0; n < L.block.size(); ++n) {
        const AMat& b = L.block[n];
        if (b.space_dim() <= 64) {
            L.unitarity = std::max(L.unitarity, unitarity_residual(g, b));
            L.corep_identity = std::max(L.corep_identity, corep_identity_residual(g, b));
            continue;
        }
        for (int t = 0; t < 2; ++t) {
            Vec xi = rng.cvector(b.space_dim());
            xi = vscale(xi, 1.0 / vnorm(xi));
            const auto [ur, cr] = L.probe_residuals(g, n, xi);
            L.unitarity = std::max(L.unitarity, ur);
            L.corep_identity = std::max(L.corep_identity, cr);
        }
    }
    return L;
}

/// sum_ij omega(e_i^* e_j) F_i^* y_j, given y_j = W F_j v.
inline Vec induced_slice_combine(const LiftedRep& L, const Vec& omega, const std::vector<Vec>& WFv) {
    const FiniteQG& g = L.u->parent();
    const std::size_t d = g.dim();
    Vec out(L.f->total_dim());
    for (std::size_t i = 0; i < d; ++i) {
        Vec acc;
        for (const auto& [a, s] : g.alg().adj_basis(i))
            for (std::size_t j = 0; j < d; ++j) {
                cplx c = 0.0;
                for (const auto& [k, w] : g.alg().product(a, j)) c += s * w * omega[k];
                if (std::abs(c) < 1e-15 || WFv[j].empty()) continue;
                if (acc.empty()) acc.assign(out.size(), 0.0);
                vaxpy(acc, c, WFv[j]);
            }
        if (!acc.empty()) out = vadd(out, L.apply_slice(i, acc, true));
    }
    return out;
}

/// W F_j v for every j (empty where F_j vanishes).
inline std::vector<Vec> induced_word_images(const LiftedRep& L, const std::vector<FockOp>& W, const Vec& v) {
    const std::size_t d = L.u->parent().dim();
    std::vector<Vec> out(d);
    for (std::size_t j = 0; j < d; ++j) {
        bool all_zero = true;
        for (const auto& z : L.zero) all_zero = all_zero && z[j];
        if (!all_zero) out[j] = apply_word(W, L.apply_slice(j, v));
    }
    return out;
}

/// (omega (x) id)alpha_U(W) v = sum_ij omega(e_i^* e_j) F_i^* W F_j v for a word W.
inline Vec induced_slice_apply(const LiftedRep& L, const Vec& omega, const std::vector<FockOp>& W, const Vec& v) {
    return induced_slice_combine(L, omega, induced_word_images(L, W, v));
}

/// max over basis functionals omega and test vectors of
/// ||(omega (x) id)alpha_U(s(zeta)) v - s((omega (x) id)(U^*)zeta) v||.
inline double intertwining_residual(const LiftedRep& L, const Vec& zeta, std::uint64_t seed = 0, int trials = 3) {
    const TruncatedFock& f = *L.f;
    const FiniteQG& g = L.u->parent();
    const AMat Us = amat_adj(g.alg(), L.U);
    const FockOp s = f.s(zeta);
    CounterRng rng(seed, 0xF0C);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Vec v = rng.cvector(f.total_dim());
        const std::vector<Vec> images = induced_word_images(L, {s}, v);
        for (std::size_t k = 0; k < g.dim(); ++k) {
            const Vec om = unit_vec(g.dim(), k);
            const FockOp rhs = f.s(amat_slice(Us, om) * zeta);
            worst = std::max(worst, vnorm(vsub(induced_slice_combine(L, om, images), rhs.apply(v))));
        }
    }
    return worst;
}

/// ||(id (x) omega_Omega)alpha_U(W) - omega_Omega(W) 1||.
inline double vacuum_invariance_residual(const LiftedRep& L, const std::vector<FockOp>& W) {
    const FiniteQG& g = L.u->parent();
    const std::size_t d = g.dim();
    const Vec Om = L.f->vacuum();
    const cplx w = apply_word(W, Om)[0];
    Vec lhs(d);
    std::vector<Vec> F(d), WF(d);
    for (std::size_t j = 0; j < d; ++j) {
        F[j] = L.apply_slice(j, Om);
        WF[j] = apply_word(W, F[j]);
    }
    for (std::size_t i = 0; i < d; ++i)
        for (const auto& [a, s] : g.alg().adj_basis(i))
            for (std::size_t j = 0; j < d; ++j) {
                const cplx c = vdot(F[i], WF[j]);
                if (c == cplx(0.0)) continue;
                // <F_i Omega, W F_j Omega> e_i^* e_j; adj_basis gives e_i^* = sum s e_a
                for (const auto& [k, v] : g.alg().product(a, j)) lhs[k] += s * v * c;
            }
    return vnorm(vsub(lhs, vscale(g.one(), w)));
}

/// ||(omega (x) id)alpha_U(xy) - sum over e_a e_b of alpha_a(x) alpha_b(y)|| on random vectors.
inline double induced_multiplicativity_residual(const LiftedRep& L, const std::vector<FockOp>& x, const std::vector<FockOp>& y,
                                                std::uint64_t seed = 0) {
    const FiniteQG& g = L.u->parent();
    const std::size_t d = g.dim();
    std::vector<FockOp> xy = x;
    xy.insert(xy.end(), y.begin(), y.end());
    CounterRng rng(seed, 0xAB);
    const Vec v = rng.cvector(L.f->total_dim());
    double worst = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        const Vec lhs = induced_slice_apply(L, unit_vec(d, k), xy, v);
        Vec rhs(v.size());
        for (const auto& t : g.alg().mult()) {
            if (t.k != k) continue;
            const Vec yv = induced_slice_apply(L, unit_vec(d, t.j), y, v);
            vaxpy(rhs, t.v, induced_slice_apply(L, unit_vec(d, t.i), x, yv));
        }
        worst = std::max(worst, vnorm(vsub(lhs, rhs)));
    }
    return worst;
}

/// Vectors fixed by J: (v + Jv)/||v + Jv|| for seeded random v.
inline std::vector<Vec> j_real_vectors(const TruncatedFock& f, std::size_t count, std::uint64_t seed = 0) {
    CounterRng rng(seed, 0x7EA1);
    std::vector<Vec> out;
    while (out.size() < count) {
        const Vec v = rng.cvector(f.base_dim());
        Vec w = vadd(v, f.J_apply(v));
        const double n = vnorm(w);
        if (n > 1e-6) out.push_back(vscale(w, 1.0 / n));
    }
    return out;
}

// ---------------------------------------------------------------- Connes-Weiss

struct ConnesWeissRow {
    double trace;           // |tau(s(zeta))|
    double gns_norm;        // ||s(zeta) Omega||
    double corep_defect;    // ||(omega (x) id)(U^*)zeta - zeta||
    double action_defect;   // ||((omega (x) id)alpha_U(s(zeta)) - s(zeta)) Omega||
    double operator_defect; // operator norm of the same difference (NaN when not computed)
};

inline std::vector<ConnesWeissRow> connes_weiss_experiment(const LiftedRep& L, const std::vector<Vec>& zetas, const Vec& omega,
                                                            std::size_t dense_cap = 1024) {
    const TruncatedFock& f = *L.f;
    if (!f.is_tracial()) fail(ErrorKind::Contract, "NotTracial", "Connes-Weiss experiment needs Q = I");
    const FiniteQG& g = L.u->parent();
    const AMat Us = amat_adj(g.alg(), L.U);
    const CMatrix Uw = amat_slice(Us, omega);
    const Vec Om = f.vacuum();
    std::vector<ConnesWeissRow> rows;
    for (const auto& z : zetas) {
        const FockOp s = f.s(z);
        const Vec sO = s.apply(Om);
        ConnesWeissRow r{std::abs(sO[0]), vnorm(sO), vnorm(vsub(Uw * z, z)), 0.0, std::numeric_limits<double>::quiet_NaN()};
        r.action_defect = vnorm(vsub(induced_slice_apply(L, omega, {s}, Om), sO));
        if (f.total_dim() <= dense_cap) {
            CMatrix D(f.total_dim(), f.total_dim());
            for (std::size_t c = 0; c < f.total_dim(); ++c) {
                const Vec e = unit_vec(f.total_dim(), c);
                D.set_col(c, vsub(induced_slice_apply(L, omega, {s}, e), s.apply(e)));
            }
            r.operator_defect = op_norm(D);
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace qgwb
