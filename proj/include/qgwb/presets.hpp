#pragma once

// Built-in finite quantum groups: dual-Z(n), fun-Z(n), grp-S3, fun-S3, kac-paljutkin.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qg.hpp"

namespace qgwb {

/// Finite group by multiplication table; element 0 is the identity.
struct GroupTable {
    std::size_t order;
    std::vector<std::size_t> table;  // table[g*order+h] = gh

    std::size_t mul(std::size_t g, std::size_t h) const { return table[g * order + h]; }
    std::size_t inv(std::size_t g) const {
        for (std::size_t h = 0; h < order; ++h)
            if (mul(g, h) == 0) return h;
        fail(ErrorKind::Schema, "SchemaError", "group table has no inverse");
    }
};

inline GroupTable cyclic_group(std::size_t n) {
    GroupTable t{n, std::vector<std::size_t>(n * n)};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) t.table[a * n + b] = (a + b) % n;
    return t;
}

/// S_3 as permutations of {0,1,2} in lexicographic order; (gh)(x) = g(h(x)).
inline std::vector<std::array<int, 3>> s3_elements() {
    return {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
}

inline GroupTable s3_group() {
    auto el = s3_elements();
    GroupTable t{6, std::vector<std::size_t>(36)};
    for (std::size_t g = 0; g < 6; ++g)
        for (std::size_t h = 0; h < 6; ++h) {
            std::array<int, 3> c{el[g][el[h][0]], el[g][el[h][1]], el[g][el[h][2]]};
            for (std::size_t k = 0; k < 6; ++k)
                if (el[k] == c) t.table[g * 6 + h] = k;
        }
    return t;
}

/// Irreducible unitary matrices of S_3: trivial, sign, standard (real orthogonal).
inline std::vector<std::vector<CMatrix>> s3_irrep_matrices() {
    auto el = s3_elements();
    std::vector<CMatrix> triv, sgn, stdr;
    const double r2 = std::sqrt(2.0), r6 = std::sqrt(6.0);
    const double f[2][3] = {{1 / r2, -1 / r2, 0.0}, {1 / r6, 1 / r6, -2 / r6}};
    for (const auto& p : el) {
        triv.push_back(CMatrix::identity(1));
        int inversions = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (p[i] > p[j]) ++inversions;
        CMatrix s(1, 1);
        s(0, 0) = inversions % 2 ? -1.0 : 1.0;
        sgn.push_back(s);
        // permutation matrix sends basis vector x to p(x)
        CMatrix m(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double v = 0.0;
                for (int x = 0; x < 3; ++x) v += f[i][p[x]] * f[j][x];
                m(i, j) = v;
            }
        stdr.push_back(m);
    }
    return {triv, sgn, stdr};
}

/// Group C*-algebra: basis lambda_g, Delta lambda_g = lambda_g (x) lambda_g, irreps lambda_g.
inline FiniteQG group_algebra(const std::string& id, const GroupTable& G) {
    const std::size_t n = G.order;
    std::vector<Triple> mult, comult;
    Vec unit(n), counit(n, 1.0), haar(n);
    CMatrix star(n, n), S(n, n);
    unit[0] = 1.0;
    haar[0] = 1.0;
    std::vector<Irrep> irreps;
    for (std::size_t g = 0; g < n; ++g) {
        for (std::size_t h = 0; h < n; ++h) mult.push_back({g, h, G.mul(g, h), 1.0});
        comult.push_back({g, g, g, 1.0});
        star(G.inv(g), g) = 1.0;
        S(G.inv(g), g) = 1.0;
        irreps.push_back(Irrep{1, {unit_vec(n, g)}});
    }
    return FiniteQG(id, FiniteAlgebra(n, std::move(mult), std::move(unit), std::move(star)), std::move(comult),
                    std::move(counit), std::move(S), std::move(haar), std::move(irreps));
}

/// Function algebra C(G): basis delta_g, Delta delta_g = sum_{hk=g} delta_h (x) delta_k,
/// irreps u_ij = sum_g pi(g)_ij delta_g from the supplied unitary matrices.
inline FiniteQG function_algebra(const std::string& id, const GroupTable& G, const std::vector<std::vector<CMatrix>>& reps) {
    const std::size_t n = G.order;
    std::vector<Triple> mult, comult;
    Vec unit(n, 1.0), counit(n), haar(n, 1.0 / static_cast<double>(n));
    CMatrix star = CMatrix::identity(n), S(n, n);
    counit[0] = 1.0;
    for (std::size_t g = 0; g < n; ++g) {
        mult.push_back({g, g, g, 1.0});
        S(G.inv(g), g) = 1.0;
        for (std::size_t h = 0; h < n; ++h) comult.push_back({g, h, G.mul(G.inv(h), g), 1.0});
    }
    std::vector<Irrep> irreps;
    for (const auto& rep : reps) {
        const std::size_t k = rep.front().rows();
        Irrep r{k, std::vector<Vec>(k * k, Vec(n))};
        for (std::size_t g = 0; g < n; ++g)
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) r.u[i * k + j][g] = rep[g](i, j);
        irreps.push_back(std::move(r));
    }
    return FiniteQG(id, FiniteAlgebra(n, std::move(mult), std::move(unit), std::move(star)), std::move(comult),
                    std::move(counit), std::move(S), std::move(haar), std::move(irreps));
}

inline FiniteQG dual_Zn(std::size_t n) { return group_algebra("dual-Z(" + std::to_string(n) + ")", cyclic_group(n)); }

inline FiniteQG fun_Zn(std::size_t n) {
    std::vector<std::vector<CMatrix>> reps;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<CMatrix> r;
        for (std::size_t g = 0; g < n; ++g) {
            CMatrix m(1, 1);
            m(0, 0) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(g * k % n) / static_cast<double>(n));
            r.push_back(m);
        }
        reps.push_back(r);
    }
    return function_algebra("fun-Z(" + std::to_string(n) + ")", cyclic_group(n), reps);
}

inline FiniteQG grp_S3() { return group_algebra("grp-S3", s3_group()); }
inline FiniteQG fun_S3() { return function_algebra("fun-S3", s3_group(), s3_irrep_matrices()); }

/// Kac-Paljutkin algebra C^4 (+) M_2 with basis e1..e4, E11, E12, E21, E22.
inline FiniteQG kac_paljutkin() {
    const std::size_t d = 8;
    enum { e1, e2, e3, e4, E11, E12, E21, E22 };
    auto E = [](int i, int j) { return static_cast<std::size_t>(4 + 2 * i + j); };
    std::vector<Triple> mult;
    for (std::size_t k = 0; k < 4; ++k) mult.push_back({k, k, k, 1.0});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int l = 0; l < 2; ++l) mult.push_back({E(i, j), E(j, l), E(i, l), 1.0});
    Vec unit{1, 1, 1, 1, 1, 0, 0, 1};
    CMatrix star(d, d);
    for (std::size_t k = 0; k < 4; ++k) star(k, k) = 1.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) star(E(j, i), E(i, j)) = 1.0;

    const cplx I(0.0, 1.0);
    std::vector<Triple> c;
    auto add = [&](std::size_t i, std::size_t j, std::size_t k, cplx v) { c.push_back({i, j, k, v}); };
    for (std::size_t a = 0; a < 4; ++a) add(e1, a, a, 1.0);
    for (std::size_t p : {E11, E12, E21, E22}) add(e1, p, p, 0.5);
    for (auto [a, b] : {std::pair{e1, e2}, {e2, e1}, {e3, e4}, {e4, e3}}) add(e2, a, b, 1.0);
    add(e2, E11, E22, 0.5);
    add(e2, E22, E11, 0.5);
    add(e2, E21, E12, 0.5 * I);
    add(e2, E12, E21, -0.5 * I);
    for (auto [a, b] : {std::pair{e1, e3}, {e3, e1}, {e2, e4}, {e4, e2}}) add(e3, a, b, 1.0);
    add(e3, E11, E22, 0.5);
    add(e3, E22, E11, 0.5);
    add(e3, E21, E12, -0.5 * I);
    add(e3, E12, E21, 0.5 * I);
    for (auto [a, b] : {std::pair{e1, e4}, {e4, e1}, {e2, e3}, {e3, e2}}) add(e4, a, b, 1.0);
    add(e4, E11, E11, 0.5);
    add(e4, E22, E22, 0.5);
    add(e4, E12, E12, -0.5);
    add(e4, E21, E21, -0.5);
    for (auto [a, b] : {std::pair{e1, E11}, {E11, e1}, {e2, E22}, {E22, e2}, {e3, E22}, {E22, e3}, {e4, E11}, {E11, e4}})
        add(E11, a, b, 1.0);
    for (auto [a, b] : {std::pair{e1, E22}, {E22, e1}, {e2, E11}, {E11, e2}, {e3, E11}, {E11, e3}, {e4, E22}, {E22, e4}})
        add(E22, a, b, 1.0);
    add(E12, e1, E12, 1.0);
    add(E12, E12, e1, 1.0);
    add(E12, e2, E21, I);
    add(E12, E21, e2, -I);
    add(E12, e3, E21, -I);
    add(E12, E21, e3, I);
    add(E12, e4, E12, -1.0);
    add(E12, E12, e4, -1.0);
    add(E21, e1, E21, 1.0);
    add(E21, E21, e1, 1.0);
    add(E21, e2, E12, -I);
    add(E21, E12, e2, I);
    add(E21, e3, E12, I);
    add(E21, E12, e3, -I);
    add(E21, e4, E21, -1.0);
    add(E21, E21, e4, -1.0);

    Vec counit(d);
    counit[e1] = 1.0;
    CMatrix S = CMatrix::identity(d);
    S(E12, E12) = 0.0;
    S(E21, E21) = 0.0;
    S(E21, E12) = 1.0;
    S(E12, E21) = 1.0;
    Vec haar{0.125, 0.125, 0.125, 0.125, 0.25, 0, 0, 0.25};

    auto v = [](std::initializer_list<cplx> l) { return Vec(l); };
    std::vector<Irrep> irreps;
    irreps.push_back({1, {v({1, 1, 1, 1, 1, 0, 0, 1})}});
    irreps.push_back({1, {v({1, -1, -1, 1, 1, 0, 0, -1})}});
    irreps.push_back({1, {v({1, 1, 1, 1, -1, 0, 0, -1})}});
    irreps.push_back({1, {v({1, -1, -1, 1, -1, 0, 0, 1})}});
    irreps.push_back({2,
                      {v({1, 1, -1, -1, 0, 0, 0, 0}), v({0, 0, 0, 0, 0, 1, I, 0}), v({0, 0, 0, 0, 0, 1, -I, 0}),
                       v({1, -1, 1, -1, 0, 0, 0, 0})}});
    return FiniteQG("kac-paljutkin", FiniteAlgebra(d, std::move(mult), std::move(unit), std::move(star)), std::move(c),
                    std::move(counit), std::move(S), std::move(haar), std::move(irreps));
}

struct PresetInfo {
    std::string name;
    std::size_t dim;
    bool kac;
    std::size_t max_irrep_dim;
};

inline std::vector<std::string> finite_preset_names() {
    std::vector<std::string> names{"fun-S3", "grp-S3", "kac-paljutkin"};
    for (std::size_t n = 1; n <= 64; ++n) names.push_back("dual-Z(" + std::to_string(n) + ")");
    for (std::size_t n = 1; n <= 8; ++n) names.push_back("fun-Z(" + std::to_string(n) + ")");
    std::sort(names.begin(), names.end());
    return names;
}

/// Parses "prefix(n)" returning n, or 0 when the name does not match.
inline std::size_t parse_indexed(const std::string& name, const std::string& prefix) {
    if (name.rfind(prefix + "(", 0) != 0 || name.back() != ')') return 0;
    const std::string mid = name.substr(prefix.size() + 1, name.size() - prefix.size() - 2);
    if (mid.empty() || mid.find_first_not_of("0123456789") != std::string::npos) return 0;
    return static_cast<std::size_t>(std::stoul(mid));
}

inline bool has_finite_preset(const std::string& name) {
    if (name == "fun-S3" || name == "grp-S3" || name == "kac-paljutkin") return true;
    const std::size_t n = parse_indexed(name, "dual-Z");
    if (n >= 1 && n <= 64) return true;
    const std::size_t m = parse_indexed(name, "fun-Z");
    return m >= 1 && m <= 8;
}

inline FiniteQG make_preset(const std::string& name) {
    if (name == "fun-S3") return fun_S3();
    if (name == "grp-S3") return grp_S3();
    if (name == "kac-paljutkin") return kac_paljutkin();
    if (std::size_t n = parse_indexed(name, "dual-Z"); n >= 1 && n <= 64) return dual_Zn(n);
    if (std::size_t n = parse_indexed(name, "fun-Z"); n >= 1 && n <= 8) return fun_Zn(n);
    fail(ErrorKind::Schema, "UnknownPreset", name);
}

}  // namespace qgwb
