#pragma once

// JSON documents: structure constants, functionals, coreps and actions.
// Complex numbers are written as [re, im]; on input a bare number is also accepted.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "actions.hpp"
#include "coreps.hpp"
#include "functionals.hpp"
#include "presets.hpp"

namespace qgwb {

using json = nlohmann::json;

namespace io_detail {

[[noreturn]] inline void schema(const std::string& what) { fail(ErrorKind::Schema, "SchemaError", what); }

inline const json& field(const json& doc, const char* key) {
    if (!doc.is_object()) schema("expected an object");
    auto it = doc.find(key);
    if (it == doc.end()) schema(std::string("missing field '") + key + "'");
    return *it;
}

inline double real(const json& v, const std::string& where) {
    if (!v.is_number()) schema(where + ": expected a number");
    return v.get<double>();
}

inline std::size_t index(const json& v, std::size_t bound, const std::string& where) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) schema(where + ": expected an integer index");
    const auto k = v.get<std::int64_t>();
    if (k < 0 || static_cast<std::size_t>(k) >= bound) schema(where + ": index " + std::to_string(k) + " out of range");
    return static_cast<std::size_t>(k);
}

inline std::size_t count(const json& v, const std::string& where) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) schema(where + ": expected a positive integer");
    const auto k = v.get<std::int64_t>();
    if (k <= 0) schema(where + ": expected a positive integer");
    return static_cast<std::size_t>(k);
}

}  // namespace io_detail

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx cplx_from_json(const json& v, const std::string& where = "value") {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2) return {io_detail::real(v[0], where), io_detail::real(v[1], where)};
    io_detail::schema(where + ": expected a number or [re, im]");
}

inline json to_json(const Vec& x) {
    json a = json::array();
    for (const auto& z : x) a.push_back(to_json(z));
    return a;
}

inline Vec vec_from_json(const json& v, std::size_t n, const std::string& where) {
    if (!v.is_array() || v.size() != n) io_detail::schema(where + ": expected " + std::to_string(n) + " coefficients");
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = cplx_from_json(v[i], where);
    return x;
}

inline json to_json(const CMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(to_json(m(i, j)));
        rows.push_back(std::move(r));
    }
    return rows;
}

inline CMatrix matrix_from_json(const json& v, std::size_t r, std::size_t c, const std::string& where) {
    if (!v.is_array() || v.size() != r) io_detail::schema(where + ": expected " + std::to_string(r) + " rows");
    CMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (!v[i].is_array() || v[i].size() != c) io_detail::schema(where + ": expected " + std::to_string(c) + " columns");
        for (std::size_t j = 0; j < c; ++j) m(i, j) = cplx_from_json(v[i][j], where);
    }
    return m;
}

inline std::vector<Triple> triples_from_json(const json& v, std::size_t d, const std::string& where) {
    if (!v.is_array()) io_detail::schema(where + ": expected an array of [i,j,k,re,im]");
    std::vector<Triple> out;
    for (const auto& e : v) {
        if (!e.is_array() || (e.size() != 5 && e.size() != 4)) io_detail::schema(where + ": entries are [i,j,k,re,im]");
        const double im = e.size() == 5 ? io_detail::real(e[4], where) : 0.0;
        out.push_back({io_detail::index(e[0], d, where), io_detail::index(e[1], d, where), io_detail::index(e[2], d, where),
                       cplx(io_detail::real(e[3], where), im)});
    }
    return out;
}

inline json triples_to_json(const std::vector<Triple>& ts) {
    json a = json::array();
    for (const auto& t : ts) a.push_back(json::array({t.i, t.j, t.k, t.v.real(), t.v.imag()}));
    return a;
}

// ---------------------------------------------------------------- structure-constant documents

/// Parses and validates a structure-constant document. A missing `haar` is solved for.
inline FiniteQG load_qg(const json& doc, const std::string& fallback_id = "document", double tol = 1e-9) {
    using namespace io_detail;
    const std::size_t d = count(field(doc, "dim"), "dim");
    std::string id = fallback_id;
    if (auto it = doc.find("id"); it != doc.end()) {
        if (!it->is_string()) schema("id: expected a string");
        id = it->get<std::string>();
    }
    if (auto it = doc.find("basis"); it != doc.end())
        if (!it->is_array() || it->size() != d) schema("basis: expected " + std::to_string(d) + " names");
    auto mult = triples_from_json(field(doc, "mult"), d, "mult");
    Vec unit = vec_from_json(field(doc, "unit"), d, "unit");
    auto comult = triples_from_json(field(doc, "comult"), d, "comult");
    Vec counit = vec_from_json(field(doc, "counit"), d, "counit");
    CMatrix star = matrix_from_json(field(doc, "star"), d, d, "star");
    for (const auto& z : star.data())
        if (z.imag() != 0.0) schema("star: the involution matrix must be real");
    CMatrix S = matrix_from_json(field(doc, "antipode"), d, d, "antipode");

    const json& irr = field(doc, "irreps");
    if (!irr.is_array() || irr.empty()) schema("irreps: expected a non-empty array");
    std::vector<Irrep> irreps;
    for (std::size_t a = 0; a < irr.size(); ++a) {
        const std::string where = "irreps[" + std::to_string(a) + "]";
        const std::size_t n = count(field(irr[a], "dim"), where + ".dim");
        const json& m = field(irr[a], "matrix");
        if (!m.is_array() || m.size() != n) schema(where + ".matrix: expected " + std::to_string(n) + " rows");
        Irrep r;
        r.n = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!m[i].is_array() || m[i].size() != n) schema(where + ".matrix: expected " + std::to_string(n) + " columns");
            for (std::size_t j = 0; j < n; ++j) r.u.push_back(vec_from_json(m[i][j], d, where + ".matrix"));
        }
        irreps.push_back(std::move(r));
    }

    FiniteAlgebra alg(d, std::move(mult), std::move(unit), std::move(star));
    Vec haar;
    if (auto it = doc.find("haar"); it != doc.end() && !it->is_null())
        haar = vec_from_json(*it, d, "haar");
    else
        haar = solve_haar(alg, comult);
    FiniteQG g(id, std::move(alg), std::move(comult), std::move(counit), std::move(S), std::move(haar), std::move(irreps));
    validate(g, tol);
    return g;
}

inline json qg_to_json(const FiniteQG& g) {
    const std::size_t d = g.dim();
    json doc;
    doc["id"] = g.id();
    doc["dim"] = d;
    json names = json::array();
    for (std::size_t i = 0; i < d; ++i) names.push_back("e" + std::to_string(i));
    doc["basis"] = names;
    doc["mult"] = triples_to_json(g.alg().mult());
    doc["unit"] = to_json(g.one());
    doc["comult"] = triples_to_json(g.comult());
    doc["counit"] = to_json(g.counit());
    json star = json::array();
    for (std::size_t i = 0; i < d; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < d; ++j) row.push_back(g.alg().star_matrix()(i, j).real());
        star.push_back(std::move(row));
    }
    doc["star"] = star;
    doc["antipode"] = to_json(g.antipode());
    doc["haar"] = to_json(g.haar());
    json irr = json::array();
    for (const auto& r : g.irreps()) {
        json m = json::array();
        for (std::size_t i = 0; i < r.n; ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < r.n; ++j) row.push_back(to_json(r.at(i, j)));
            m.push_back(std::move(row));
        }
        irr.push_back({{"dim", r.n}, {"matrix", m}});
    }
    doc["irreps"] = irr;
    return doc;
}

inline json read_json_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) fail(ErrorKind::Schema, "SchemaError", "cannot open " + p.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Schema, "SchemaError", p.string() + ": " + e.what());
    }
}

inline FiniteQG load_qg_file(const std::filesystem::path& p) { return load_qg(read_json_file(p), p.stem().string()); }

/// Directories listed in QGWB_PRESET_DIR (':'-separated).
inline std::vector<std::filesystem::path> preset_search_path() {
    std::vector<std::filesystem::path> dirs;
    if (const char* env = std::getenv("QGWB_PRESET_DIR")) {
        std::stringstream ss(env);
        std::string item;
        while (std::getline(ss, item, ':'))
            if (!item.empty()) dirs.emplace_back(item);
    }
    return dirs;
}

/// Built-in preset, else `<name>.json` in the preset search path, else a document path.
inline FiniteQG resolve_qg(const std::string& spec) {
    if (has_finite_preset(spec)) return make_preset(spec);
    for (const auto& dir : preset_search_path()) {
        const auto p = dir / (spec + ".json");
        if (std::filesystem::exists(p)) return load_qg(read_json_file(p), spec);
    }
    if (std::filesystem::exists(spec)) return load_qg_file(spec);
    fail(ErrorKind::Schema, "UnknownPreset", spec);
}

/// Built-ins plus documents found in the preset search path, sorted by name.
inline std::vector<PresetInfo> list_presets() {
    std::vector<PresetInfo> out;
    for (const auto& n : finite_preset_names()) {
        const FiniteQG g = make_preset(n);
        out.push_back({n, g.dim(), g.is_kac(), g.max_irrep_dim()});
    }
    for (const auto& dir : preset_search_path()) {
        if (!std::filesystem::is_directory(dir)) continue;
        for (const auto& ent : std::filesystem::directory_iterator(dir)) {
            if (ent.path().extension() != ".json") continue;
            const std::string n = ent.path().stem().string();
            if (has_finite_preset(n)) continue;
            const FiniteQG g = load_qg(read_json_file(ent.path()), n);
            out.push_back({n, g.dim(), g.is_kac(), g.max_irrep_dim()});
        }
    }
    std::sort(out.begin(), out.end(), [](const PresetInfo& a, const PresetInfo& b) { return a.name < b.name; });
    return out;
}

// ---------------------------------------------------------------- functionals and coreps

inline json functional_to_json(const Functional& f) {
    return {{"parent_id", f.parent().id()}, {"coeffs", to_json(f.values())}};
}

inline Functional functional_from_json(const FiniteQG& g, const json& doc) {
    const json& pid = io_detail::field(doc, "parent_id");
    if (!pid.is_string() || pid.get<std::string>() != g.id())
        fail(ErrorKind::Contract, "ParentMismatch", "functional belongs to another quantum group");
    return Functional(g, vec_from_json(io_detail::field(doc, "coeffs"), g.dim(), "coeffs"));
}

inline json corep_to_json(const Corep& u) {
    const FiniteQG& g = u.parent();
    json blocks = json::array();
    for (std::size_t a = 0; a < g.num_irreps(); ++a) {
        const std::size_t n = g.irrep(a).n;
        json rows = json::array();
        for (std::size_t i = 0; i < n; ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < n; ++j) row.push_back(to_json(u.phi(g.flat(a, i, j))));
            rows.push_back(std::move(row));
        }
        blocks.push_back(std::move(rows));
    }
    return {{"parent_id", g.id()}, {"space_dim", u.space_dim()}, {"blocks", blocks}};
}

inline Corep corep_from_json(const FiniteQG& g, const json& doc) {
    using namespace io_detail;
    const json& pid = field(doc, "parent_id");
    if (!pid.is_string() || pid.get<std::string>() != g.id())
        fail(ErrorKind::Contract, "ParentMismatch", "corep belongs to another quantum group");
    const std::size_t m = count(field(doc, "space_dim"), "space_dim");
    const json& blocks = field(doc, "blocks");
    if (!blocks.is_array() || blocks.size() != g.num_irreps()) schema("blocks: one entry per irrep expected");
    std::vector<CMatrix> phi(g.dim());
    for (std::size_t a = 0; a < g.num_irreps(); ++a) {
        const std::size_t n = g.irrep(a).n;
        if (!blocks[a].is_array() || blocks[a].size() != n) schema("blocks: wrong block size");
        for (std::size_t i = 0; i < n; ++i) {
            if (!blocks[a][i].is_array() || blocks[a][i].size() != n) schema("blocks: wrong block size");
            for (std::size_t j = 0; j < n; ++j) phi[g.flat(a, i, j)] = matrix_from_json(blocks[a][i][j], m, m, "blocks");
        }
    }
    Corep u(g, std::move(phi));
    for (const auto& r : u.check())
        if (!r.pass()) fail(ErrorKind::Axiom, "AxiomViolation", "corep " + r.name + " residual " + std::to_string(r.value));
    return u;
}

// ---------------------------------------------------------------- action documents

/// alpha is the (d*D) x D matrix whose row block i is the slice alpha_i, D = dim of the block algebra.
inline json action_to_json(const Action& a, const std::vector<std::size_t>& pattern) {
    const std::size_t d = a.parent().dim(), D = a.dim_N();
    CMatrix big(d * D, D);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t r = 0; r < D; ++r)
            for (std::size_t s = 0; s < D; ++s) big(i * D + r, s) = a.slice(i)(r, s);
    json doc{{"parent_id", a.parent().id()}, {"block_pattern", pattern}, {"alpha", to_json(big)}};
    if (a.theta()) doc["theta_state"] = to_json(*a.theta());
    return doc;
}

inline Action action_from_json(const FiniteQG& g, const json& doc) {
    using namespace io_detail;
    const json& pid = field(doc, "parent_id");
    if (!pid.is_string() || pid.get<std::string>() != g.id())
        fail(ErrorKind::Contract, "ParentMismatch", "action belongs to another quantum group");
    const json& pat = field(doc, "block_pattern");
    if (!pat.is_array() || pat.empty()) schema("block_pattern: expected a non-empty array");
    std::vector<std::size_t> pattern;
    for (const auto& n : pat) pattern.push_back(count(n, "block_pattern"));
    FiniteAlgebra N = FiniteAlgebra::matrix_blocks(pattern);
    const std::size_t d = g.dim(), D = N.dim();
    const CMatrix big = matrix_from_json(field(doc, "alpha"), d * D, D, "alpha");
    std::vector<CMatrix> slices(d, CMatrix(D, D));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t r = 0; r < D; ++r)
            for (std::size_t s = 0; s < D; ++s) slices[i](r, s) = big(i * D + r, s);
    Action act(g, std::move(N), std::move(slices), "document");
    if (auto it = doc.find("theta"); it != doc.end() && !it->is_null()) {
        std::size_t n = 0;
        for (auto b : pattern) n += b;
        act.set_theta(density_to_state(pattern, matrix_from_json(*it, n, n, "theta")));
    } else if (auto jt = doc.find("theta_state"); jt != doc.end() && !jt->is_null()) {
        act.set_theta(vec_from_json(*jt, D, "theta_state"));
    }
    return act;
}

}  // namespace qgwb
