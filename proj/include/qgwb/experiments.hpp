#pragma once

// Scenario runner: named experiment suites over presets, documents and windows, producing Reports.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <numbers>
#include <thread>

#include "actions.hpp"
#include "fock.hpp"
#include "genfun.hpp"
#include "io.hpp"
#include "report.hpp"

namespace qgwb {

inline constexpr const char* version_string = "0.1.0";

// ---------------------------------------------------------------- parameter schemas

enum class ParamType { Int, Real, Str, RealList };

struct ParamSpec {
    std::string name;
    ParamType type;
    json def;  // null: chosen from the parent
};

struct ExperimentSpec {
    std::string id;
    bool finite_parent;
    bool window_parent;
    std::vector<ParamSpec> params;
};

inline const std::vector<ExperimentSpec>& experiment_table() {
    using P = ParamType;
    static const std::vector<ExperimentSpec> table{
        {"axioms", true, true, {{"radius", P::Int, 4}}},
        {"semigroup", true, true,
         {{"lambda", P::Real, 3.0}, {"ts", P::RealList, nullptr}, {"h", P::Real, 1e-4}, {"radius", P::Int, 6}}},
        {"kazhdan", true, false, {{"q", P::Str, "auto"}, {"corep", P::Str, "nontrivial-irreps"}, {"max_pairs", P::Int, 400}}},
        {"v_matrices", true, true, {{"c", P::RealList, nullptr}, {"max_irreps", P::Int, 8}, {"radius", P::Int, 12}, {"lmax", P::Int, 10}}},
        {"theorem69", false, true, {{"eps", P::Real, 0.5}, {"stages", P::Int, 8}, {"eval_radii", P::RealList, json::array({4, 8, 16})}}},
        {"lemma74", false, true, {{"radius", P::Int, 6}, {"t", P::Real, 1.0}, {"lmax", P::Int, 3}}},
        {"action_suite", true, false, {{"trials", P::Int, 24}}},
        {"fock_suite", true, false,
         {{"depth", P::Int, 8}, {"base_dim", P::Int, 2}, {"word_len", P::Int, 4}, {"lift_depth", P::Int, 2}}},
        {"dense_image", true, false, {{"morphism", P::Str, "identity"}, {"m", P::Int, 2}}},
    };
    return table;
}

inline const ExperimentSpec& experiment_spec(const std::string& id) {
    for (const auto& e : experiment_table())
        if (e.id == id) return e;
    fail(ErrorKind::Schema, "UnknownExperiment", id);
}

namespace exp_detail {

inline json coerce(const ParamSpec& p, const json& v) {
    auto bad = [&]() -> json { fail(ErrorKind::Schema, "BadParameter", p.name + ": cannot read " + v.dump()); };
    try {
        switch (p.type) {
            case ParamType::Int:
                if (v.is_number_integer()) return v;
                if (v.is_string()) {
                    std::size_t pos = 0;
                    const long long x = std::stoll(v.get<std::string>(), &pos);
                    if (pos != v.get<std::string>().size()) return bad();
                    return x;
                }
                return bad();
            case ParamType::Real:
                if (v.is_number()) return v.get<double>();
                if (v.is_string()) {
                    std::size_t pos = 0;
                    const double x = std::stod(v.get<std::string>(), &pos);
                    if (pos != v.get<std::string>().size()) return bad();
                    return x;
                }
                return bad();
            case ParamType::Str:
                if (v.is_string()) return v;
                return bad();
            case ParamType::RealList: {
                json out = json::array();
                if (v.is_array()) {
                    for (const auto& x : v) {
                        if (!x.is_number()) return bad();
                        out.push_back(x.get<double>());
                    }
                    return out;
                }
                if (v.is_string()) {
                    std::stringstream ss(v.get<std::string>());
                    std::string item;
                    while (std::getline(ss, item, ',')) {
                        std::size_t pos = 0;
                        out.push_back(std::stod(item, &pos));
                        if (pos != item.size()) return bad();
                    }
                    return out;
                }
                return bad();
            }
        }
    } catch (const std::logic_error&) {
        return bad();
    }
    return bad();
}

inline std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace exp_detail

/// Fills defaults and converts every value to its declared type; unknown keys are schema errors.
inline json normalize_params(const ExperimentSpec& spec, const json& raw) {
    if (!raw.is_null() && !raw.is_object()) fail(ErrorKind::Schema, "BadParameter", "parameters must be an object");
    json out = json::object();
    if (raw.is_object())
        for (const auto& [k, v] : raw.items()) {
            auto it = std::find_if(spec.params.begin(), spec.params.end(), [&](const ParamSpec& p) { return p.name == k; });
            if (it == spec.params.end()) fail(ErrorKind::Schema, "UnknownParameter", spec.id + " has no parameter '" + k + "'");
            out[k] = exp_detail::coerce(*it, v);
        }
    for (const auto& p : spec.params)
        if (!out.contains(p.name)) out[p.name] = p.def;
    return out;
}

// ---------------------------------------------------------------- scenarios

struct Scenario {
    std::string name;
    std::string parent;
    std::string experiment;
    json params = json::object();
    std::filesystem::path out_dir = ".";
    double tol_scale = 1.0;
    std::uint64_t seed = 0;
    std::map<std::string, double> tolerances;
};

inline Scenario scenario_from_json(const json& j) {
    auto str = [&](const char* k) -> std::string {
        const auto it = j.find(k);
        if (it == j.end() || !it->is_string()) fail(ErrorKind::Schema, "SchemaError", std::string("scenario needs a string '") + k + "'");
        return it->get<std::string>();
    };
    if (!j.is_object()) fail(ErrorKind::Schema, "SchemaError", "scenario must be an object");
    Scenario s;
    s.name = str("name");
    s.experiment = str("experiment");
    if (j.contains("preset"))
        s.parent = str("preset");
    else if (j.contains("document"))
        s.parent = str("document");
    else
        s.parent = str("parent");
    if (auto it = j.find("parameters"); it != j.end()) s.params = *it;
    if (auto it = j.find("out"); it != j.end()) {
        if (!it->is_string()) fail(ErrorKind::Schema, "SchemaError", "out must be a path");
        s.out_dir = it->get<std::string>();
    }
    if (auto it = j.find("tol_scale"); it != j.end()) {
        if (!it->is_number() || it->get<double>() <= 0) fail(ErrorKind::Schema, "SchemaError", "tol_scale must be positive");
        s.tol_scale = it->get<double>();
    }
    if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_unsigned()) fail(ErrorKind::Schema, "SchemaError", "seed must be a non-negative integer");
        s.seed = it->get<std::uint64_t>();
    }
    if (auto it = j.find("tolerances"); it != j.end()) {
        if (!it->is_object()) fail(ErrorKind::Schema, "SchemaError", "tolerances must map check names to numbers");
        for (const auto& [k, v] : it->items()) {
            if (!v.is_number()) fail(ErrorKind::Schema, "SchemaError", "tolerance for " + k + " must be a number");
            s.tolerances[k] = v.get<double>();
        }
    }
    for (char ch : s.name)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.'))
            fail(ErrorKind::Schema, "SchemaError", "scenario name may use letters, digits, '-', '_' and '.' only");
    return s;
}

inline std::vector<Scenario> batch_from_json(const json& j) {
    std::vector<Scenario> out;
    if (j.is_array())
        for (const auto& s : j) out.push_back(scenario_from_json(s));
    else
        out.push_back(scenario_from_json(j));
    return out;
}

// ---------------------------------------------------------------- shared helpers

/// mu = h(b^* . b)/h(b^* b) for a random b.
inline Functional random_state(const FiniteQG& g, std::uint64_t seed) {
    CounterRng rng(seed, 1);
    const Vec b = rng.cvector(g.dim());
    const Vec bs = g.adj(b);
    Vec f(g.dim());
    for (std::size_t i = 0; i < g.dim(); ++i) f[i] = FiniteQG::apply(g.haar(), g.mul(g.mul(bs, g.basis(i)), b));
    Functional mu(g, f);
    return (1.0 / mu(g.one())) * mu;
}

/// c_a = a for non-trivial irreps, 0 for the trivial one.
inline std::vector<double> index_weighted(const FiniteQG& g) {
    std::vector<double> c(g.num_irreps());
    for (std::size_t a = 0; a < c.size(); ++a) c[a] = a == g.trivial() ? 0.0 : static_cast<double>(a);
    return c;
}

/// For dual-Z(n): the generator of Z_n as an element of the dual block algebra (sum_k omega^k e_k).
inline std::optional<Vec> cyclic_generator(const FiniteQG& g) {
    const std::size_t n = parse_indexed(g.id(), "dual-Z");
    if (n == 0 || n != g.dim()) return std::nullopt;
    Vec x(n);
    for (std::size_t k = 0; k < n; ++k)
        x[g.flat(k, 0, 0)] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    return x;
}

/// Corep together with the anti-unitary J (J v = M conj v) that makes it compatible with a Fock lift.
struct CompatibleCorep {
    std::string label;
    Corep corep;
    CMatrix M;
};

/// GNS coreps of R-hat invariant dual states (counit, tracial) and irreps satisfying condition R with J = conj.
inline std::vector<CompatibleCorep> compatible_coreps(const FiniteQG& g, double tol = 1e-8) {
    std::vector<CompatibleCorep> out;
    if (!g.is_kac()) return out;
    const std::pair<const char*, Vec> states[] = {{"gns-counit", dual_counit_state(g)}, {"gns-tracial", dual_tracial_state(g)}};
    for (const auto& [name, st] : states) {
        GnsResult r = gns(g, st);
        if (r.J && r.condition_R <= tol) out.push_back({name, r.corep, *r.J});
    }
    for (std::size_t a = 0; a < g.num_irreps(); ++a) {
        if (a == g.trivial()) continue;
        Corep u = irrep_corep(g, a);
        const CMatrix I = CMatrix::identity(u.space_dim());
        if (condition_R_residual(u, I) <= tol) out.push_back({"irrep-" + std::to_string(a), u, I});
    }
    return out;
}

/// Largest depth <= want with the lifted blocks under the entry cap.
inline int fit_lift_depth(std::size_t dim_k, std::size_t d, int want, double cap = 8e6) {
    int depth = want;
    while (depth > 1) {
        const double n = std::pow(static_cast<double>(dim_k), depth);
        if (n * n * static_cast<double>(d) <= cap) break;
        --depth;
    }
    return depth;
}

/// Element (g_1)^l of a window, or WindowTruncation.
inline std::size_t window_power(const GroupDualWindow& w, int l) {
    Key gen;
    if (w.kind() == WindowKind::Lattice) {
        gen = Key(parse_indexed(w.label(), "Z"), 0);
        gen.at(0) = 1;
    } else {
        gen = Key{1};
    }
    auto g1 = w.find(gen);
    if (!g1) fail(ErrorKind::Resource, "WindowTruncation", "generator outside the window");
    std::size_t x = w.identity();
    for (int i = 0; i < l; ++i) {
        auto y = w.product(x, *g1);
        if (!y) fail(ErrorKind::Resource, "WindowTruncation", "g^" + std::to_string(l) + " leaves the window");
        x = *y;
    }
    return x;
}

inline WindowFunction word_length(const GroupDualWindow& w) {
    return window_function(w, [&](std::size_t g) { return cplx(static_cast<double>(w.length(g))); });
}

// ---------------------------------------------------------------- experiments

struct RunContext {
    const json& p;
    std::uint64_t seed;
    Report& r;

    long long i(const char* k) const { return p.at(k).get<long long>(); }
    double x(const char* k) const { return p.at(k).get<double>(); }
    std::string s(const char* k) const { return p.at(k).get<std::string>(); }
    std::vector<double> list(const char* k) const {
        std::vector<double> v;
        for (const auto& e : p.at(k)) v.push_back(e.get<double>());
        return v;
    }
    bool has(const char* k) const { return !p.at(k).is_null(); }
};

inline int window_radius(const RunContext& c, const char* key) {
    const long long r = c.i(key);
    if (r < 1 || r > 100000) fail(ErrorKind::Schema, "BadParameter", std::string(key) + " must be in [1, 100000]");
    return static_cast<int>(r);
}

inline void exp_axioms(const FiniteQG& g, RunContext& c) {
    for (const auto& x : check_axioms(g)) c.r.le("axioms", x.name, g.id(), x.value, x.tol);
    for (const auto& x : check_w(g)) c.r.le("multiplicative_unitary", x.name, g.id(), x.value, x.tol);
    const DualBlockAlgebra D(g);
    for (const auto& x : D.check()) c.r.le("dual", x.name, g.id(), x.value, x.tol);
    c.r.info("structure", "dim", g.id(), static_cast<double>(g.dim()));
    c.r.info("structure", "irreps", g.id(), static_cast<double>(g.num_irreps()));
    c.r.info("structure", "max_irrep_dim", g.id(), static_cast<double>(g.max_irrep_dim()));
    c.r.info("structure", "kac_residual", g.id(), g.kac_residual());
}

inline void exp_axioms(const GroupDualWindow& w, RunContext& c) {
    const auto bad = w.invariant_violations();
    c.r.flag("window", "invariants", w.label(), bad.empty());
    for (const auto& b : bad) c.r.flag("window", "violation", b, false);
    c.r.info("window", "elements", w.label(), static_cast<double>(w.size()));
    if (w.kind() == WindowKind::Free) {
        const double k = static_cast<double>(parse_indexed(w.label(), "free"));
        double expect = 1.0, shell = 2.0 * k;
        for (int l = 1; l <= w.radius(); ++l, shell *= 2.0 * k - 1.0) expect += shell;
        c.r.eq("window", "reduced_word_count", w.label(), static_cast<double>(w.size()), expect, 0.0);
    }
}

inline void exp_semigroup(const FiniteQG& g, RunContext& c) {
    const double lambda = c.x("lambda"), h = c.x("h");
    const std::vector<double> ts = c.has("ts") ? c.list("ts") : std::vector<double>{0.1, 0.5, 1.0};
    const Functional mu = random_state(g, c.seed);
    const Functional L = lambda * (counit_functional(g) - mu);
    const auto d = generating_defects(L);
    c.r.le("generator", "unit", "", d.unit, 1e-10);
    c.r.le("generator", "selfadjoint", "", d.selfadjoint, 1e-10);
    c.r.ge("generator", "cnd_min_eig", "", d.cnd_min_eig, 0.0, 1e-9);
    require_generating(L);
    std::vector<double> grid{0.0};
    for (double t : ts) grid.push_back(t);
    for (double t : grid) {
        const Functional m = semigroup_at(L, t);
        const std::string lt = "t=" + exp_detail::label(t);
        c.r.ge("states", "positivity_min_eig", lt, min_eigenvalue(positivity_matrix(m)), 0.0, 1e-9);
        c.r.eq("states", "mass", lt, m(g.one()).real(), 1.0, 1e-9);
        for (double s : ts)
            c.r.le("semigroup", "law", "s=" + exp_detail::label(s) + "," + lt,
                   distance(convolve(semigroup_at(L, s), m), semigroup_at(L, s + t)), 1e-9);
    }
    c.r.le("semigroup", "mu0_is_counit", "", distance(semigroup_at(L, 0.0), counit_functional(g)), 1e-12);
    const double normL = vnorm(L.values());
    const std::string lh = "h=" + exp_detail::label(h);
    c.r.le("derivative", "richardson_error", lh, distance(richardson_quotient(L, h), L), 1e-5);
    c.r.le("derivative", "one_sided_error", lh, distance(derivative_quotient(L, h), L), 5.0 * h * (1.0 + normL));
}

inline void exp_semigroup(const GroupDualWindow& w, RunContext& c) {
    const std::vector<double> ts = c.has("ts") ? c.list("ts") : std::vector<double>{0.1, 1.0, 10.0};
    const WindowFunction L = word_length(w);
    const auto gl = validate_generating(L);
    c.r.ge("generator", "cnd_min_eig", w.label(), gl.cnd_min_eig, 0.0, 1e-9);
    for (double t : ts) {
        const WindowFunction m = window_semigroup_at(L, t);
        const std::string lt = "t=" + exp_detail::label(t);
        c.r.ge("states", "gram_min_eig", lt, min_eigenvalue(window_gram(m)), 0.0, 1e-9);
        c.r.eq("states", "mass", lt, m(w.identity()).real(), 1.0, 1e-12);
        for (double s : ts) {
            const WindowFunction a = convolve(window_semigroup_at(L, s), m), b = window_semigroup_at(L, s + t);
            double res = 0.0;
            for (std::size_t x = 0; x < w.size(); ++x) res = std::max(res, std::abs(a(x) - b(x)));
            c.r.le("semigroup", "law", "s=" + exp_detail::label(s) + "," + lt, res, 1e-9);
        }
    }
}

inline void exp_kazhdan(const FiniteQG& g, RunContext& c) {
    const std::string which = c.s("corep");
    Corep u = which == "regular" ? regular_corep(g)
              : which == "nontrivial-irreps"
                  ? nontrivial_irreps_corep(g)
                  : (fail(ErrorKind::Schema, "BadParameter", "corep must be nontrivial-irreps or regular"), trivial_corep(g));
    std::string q = c.s("q");
    const auto gen = cyclic_generator(g);
    if (q == "auto") q = gen ? "generator" : "matrix-units";
    std::vector<Vec> Q;
    if (q == "generator") {
        if (!gen) fail(ErrorKind::Schema, "BadParameter", "q=generator needs a dual-Z(n) parent");
        Q = {*gen};
    } else if (q == "matrix-units") {
        Q = all_matrix_units(g);
    } else {
        fail(ErrorKind::Schema, "BadParameter", "q must be auto, generator or matrix-units");
    }
    const double gap = kazhdan_gap(u, Q);
    if (q == "generator" && which == "nontrivial-irreps")
        c.r.eq("kazhdan", "gap_closed_form", g.id(), gap, 2.0 * std::sin(std::numbers::pi / static_cast<double>(g.dim())), 1e-9);
    else
        c.r.info("kazhdan", "gap", g.id() + "/" + q, gap);
    c.r.flag("kazhdan", "gap_positive", g.id(), gap > 0.0);

    auto oracle = [&](const Corep& v, const std::string& lbl) {
        const CMatrix p = invariant_projection(v), b = brute_force_invariant_projection(v);
        c.r.le("projection", "oracle", lbl, frob_norm(p - b), 1e-8);
    };
    oracle(regular_corep(g), "regular");
    oracle(trivial_corep(g, 2), "trivial2");
    const std::size_t n = g.num_irreps();
    const std::size_t cap = static_cast<std::size_t>(std::max(1LL, c.i("max_pairs")));
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (pairs >= cap && a != b) continue;
            ++pairs;
            const Corep t = tensor(irrep_corep(g, a), contragredient(irrep_corep(g, b)));
            const std::string lbl = std::to_string(a) + "x" + std::to_string(b) + "c";
            const CMatrix p = invariant_projection(t);
            c.r.le("projection", "oracle", lbl, frob_norm(p - brute_force_invariant_projection(t)), 1e-8);
            c.r.eq("schur", "rank", lbl, static_cast<double>(projection_rank(p)), a == b ? 1.0 : 0.0, 0.0);
        }
}

inline void exp_v_matrices(const FiniteQG& g, RunContext& c) {
    const std::vector<double> cs = c.has("c") ? c.list("c") : index_weighted(g);
    if (cs.size() != g.num_irreps()) fail(ErrorKind::Schema, "BadParameter", "c needs one value per irrep");
    const GenFunctional gl = validate_generating(central_generator(g, cs));
    require_central_kac(gl);
    const SchurmannTriple t = schurmann_triple(gl);
    c.r.le("schurmann", "cocycle", "", t.cocycle_residual, 1e-9);
    c.r.le("schurmann", "identity", "", t.identity_residual, 1e-9);
    c.r.le("schurmann", "reality", "", t.reality_residual, 1e-8);
    const std::size_t n = std::min<std::size_t>(g.num_irreps(), static_cast<std::size_t>(std::max(1LL, c.i("max_irreps"))));
    std::vector<std::size_t> gammas;
    for (std::size_t a = 0; a < n; ++a) gammas.push_back(a);
    for (std::size_t a = 0; a < n; ++a) c.r.le("T", "norm_identity", "g=" + std::to_string(a), check_T_norms(t, gl, a), 1e-8);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const auto vs = build_V_matrices(gl, a, b, gammas);
            for (std::size_t q = 0; q < vs.size(); ++q) {
                const std::string lbl = std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(q);
                c.r.le("V", "hermitian", lbl, vs[q].hermitian_residual, 1e-10);
                c.r.le("V", "oracle", lbl, vs[q].oracle_residual, 1e-10);
                c.r.ge("V", "derived_bound", lbl, vs[q].min_eig, vs[q].derived_bound, 1e-9);
                c.r.ge("V", "spec_bound", lbl, vs[q].min_eig, vs[q].spec_bound, 1e-9);
            }
        }
}

inline void exp_v_matrices(const GroupDualWindow& w, RunContext& c) {
    const WindowFunction L = word_length(w);
    validate_generating(L);
    const long long lmax = c.i("lmax");
    for (int l = 1; l <= lmax; ++l) {
        const std::size_t m = window_power(w, l);
        const VMatrix v = window_V(L, w.identity(), w.identity(), m);
        const std::string lbl = "l=" + std::to_string(l);
        c.r.le("V", "hermitian", lbl, v.hermitian_residual, 1e-10);
        c.r.eq("V", "min_eig", lbl, v.min_eig, static_cast<double>(l), 0.0);
        c.r.ge("V", "derived_bound", lbl, v.min_eig, v.derived_bound, 1e-9);
    }
}

inline void exp_theorem69(const std::string& parent, RunContext& c) {
    const int d = static_cast<int>(parse_indexed(parent, "Z"));
    if (d < 1) fail(ErrorKind::Schema, "BadParameter", "theorem69 runs on Z(d) windows");
    const double eps = c.x("eps");
    if (!(eps > 0.0 && eps < 1.0)) fail(ErrorKind::Schema, "BadParameter", "eps must be in (0, 1)");
    Theorem69Options opt;
    opt.stages = static_cast<int>(c.i("stages"));
    const auto res = theorem69_constructor(exp_decay_sequence_Zd(d), eps, opt);
    c.r.ge("stages", "completed", "", static_cast<double>(res.stages.size()), static_cast<double>(opt.stages), 0.0);
    for (const auto& st : res.stages) {
        const std::string lbl = "l=" + std::to_string(st.l);
        c.r.ge("stages", "witness_bound", lbl, st.L_at_witness, st.bound, 0.0);
        c.r.ge("stages", "witness_gap", lbl, st.witness_gap, eps, 0.0);
        c.r.le("stages", "small_on_ball", lbl, st.small_sup, eps / std::ldexp(1.0, 2 * st.l));
    }
    for (double rr : c.list("eval_radii")) {
        const int radius = static_cast<int>(rr);
        const GroupDualWindow w = GroupDualWindow::lattice(d, radius);
        const auto gl = validate_generating(restrict_to(w, res.L));
        c.r.ge("generating", "cnd_min_eig", "radius=" + std::to_string(radius), gl.cnd_min_eig, 0.0, 1e-9);
    }
}

inline void exp_lemma74(const GroupDualWindow& w, RunContext& c) {
    const double t = c.x("t");
    const WindowFunction L = word_length(w);
    std::vector<std::size_t> gammas;
    for (int l = 1; l <= c.i("lmax"); ++l) gammas.push_back(window_power(w, l));
    const auto st = lemma74_experiment(L, t, {{1.0, w.identity(), w.identity()}}, gammas);
    for (std::size_t k = 0; k < st.size(); ++k) {
        const std::string lbl = st[k].gamma_name;
        c.r.eq("bounds", "closed_form", lbl, st[k].bound, 1.0 - 2.0 * std::exp(-2.0 * t * st[k].gamma_length), 1e-12);
        if (k > 0) c.r.flag("bounds", "increasing", lbl, st[k].bound > st[k - 1].bound);
    }
}

inline FixedPoints report_action(const Action& a, RunContext& c) {
    const FiniteQG& g = a.parent();
    const std::string lbl = a.label();
    for (const auto& x : a.check()) c.r.le("action", x.name, lbl, x.value, x.tol);
    const Implementation im = implement(a);
    c.r.le("implementation", "unitarity", lbl, im.unitarity, 1e-9);
    c.r.le("implementation", "implements", lbl, im.implements, 1e-9);
    c.r.le("implementation", "corep_identity", lbl, im.corep_identity, 1e-9);
    if (g.is_kac()) c.r.le("implementation", "condition_R", lbl, im.condition_R, 1e-8);
    const FixedPoints fp = fixed_point_expectation(a, im, c.seed);
    c.r.le("expectation", "idempotent", lbl, fp.idempotent, 1e-9);
    c.r.le("expectation", "unital", lbl, fp.unital, 1e-9);
    c.r.le("expectation", "positivity", lbl, fp.positivity, 1e-9);
    c.r.le("expectation", "compression", lbl, fp.compression, 1e-9);
    c.r.le("expectation", "invariance", lbl, fp.invariance, 1e-9);
    c.r.le("expectation", "slice_invariance", lbl, fp.slice_invariance, 1e-9);
    const SpectralGapReport sg = spectral_gap_report(a, im);
    c.r.flag("spectral_gap", "consistent", lbl, sg.consistent);
    c.r.ge("spectral_gap", "gap", lbl, sg.gap, 0.0, 0.0);
    c.r.eq("spectral_gap", "rank_vs_fixed_dim", lbl, static_cast<double>(sg.rank_p), static_cast<double>(sg.fixed_dim), 0.0);
    if (g.is_kac()) {
        const std::vector<Vec> xi{g.one(), g.basis(1 % g.dim())};
        const int trials = static_cast<int>(c.i("trials"));
        const ConeReport cr = cone_preservation_check(im, im.U, xi, c.seed, trials);
        c.r.flag("cone", "preserved", lbl, cr.preserved);
        c.r.ge("cone", "worst_min_eig", lbl, cr.worst_min_eig, 0.0, cr.tol);
        const ConeReport adv = cone_preservation_check(im, twisted_implementation(im, vscale(a.N().unit(), -1.0)), xi, c.seed, trials);
        c.r.flag("cone", "twisted_rejected", lbl, !adv.preserved);
    }
    return fp;
}

inline void exp_action_suite(const FiniteQG& g, RunContext& c) {
    std::vector<Action> acts;
    acts.push_back(trivial_action(g, {2}));
    const std::vector<int> weights{0, 1};
    if (cyclic_generator(g)) {
        const Action gr = grading_action(g, weights);
        const FixedPoints fp = report_action(gr, c);
        // E keeps E_ij exactly when w_i = w_j mod m
        const std::size_t n = weights.size();
        const long m = static_cast<long>(g.dim());
        CMatrix expect(n * n, n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if ((weights[i] - weights[j]) % m == 0) expect(i * n + j, i * n + j) = 1.0;
        c.r.le("expectation", "grading_compression", gr.label(), max_abs(fp.E - expect), 1e-10);
        const Vec p = unit_vec(n * n, 0);  // E_00 lies in the fixed-point algebra
        double bimod = 0.0;
        for (std::size_t x = 0; x < n * n; ++x) {
            const Vec ex = unit_vec(n * n, x);
            const Vec lhs = gr.N().mul(fp.E * ex, p);
            const Vec rhs = gr.N().mul(gr.N().mul(p, ex), p);
            bimod = std::max(bimod, vnorm(vsub(lhs, rhs)));
        }
        c.r.le("expectation", "E(a)p_equals_pap", gr.label(), bimod, 1e-9);
    }
    acts.push_back(comultiplication_action(g));
    std::vector<Corep> keep;
    keep.reserve(g.num_irreps());
    for (std::size_t a = 0; a < g.num_irreps(); ++a)
        if (g.irrep(a).n > 1) keep.push_back(irrep_corep(g, a));
    for (const auto& v : keep) acts.push_back(adjoint_action(v));
    for (const auto& a : acts) report_action(a, c);
    if (g.is_kac())
        for (std::size_t k = 0; k < keep.size(); ++k) {
            const VVbarReport vv = v_vbar_implementation_check(keep[k]);
            const std::string lbl = "adjoint-" + std::to_string(k);
            c.r.flag("v_vbar", "equivalent", lbl, vv.equivalent);
            c.r.le("v_vbar", "intertwiner_residual", lbl, vv.intertwiner_residual, 1e-8);
            c.r.info("v_vbar", "canonical_residual", lbl, vv.canonical_residual);
        }
}

inline void exp_fock_suite(const FiniteQG& g, RunContext& c) {
    const int depth = static_cast<int>(c.i("depth"));
    const long long kk = c.i("base_dim");
    if (depth < 1 || kk < 1) fail(ErrorKind::Schema, "BadParameter", "depth and base_dim must be positive");
    const std::size_t k = static_cast<std::size_t>(kk);
    const TruncatedFock f = TruncatedFock::tracial(k, depth, CMatrix::identity(k));
    const auto inv = f.involution_residuals();
    c.r.le("fock", "J_squared", "", inv.J2, 1e-12);
    c.r.le("fock", "T_squared", "", inv.T2, 1e-12);
    const Vec z(k, cplx(1.0 / std::sqrt(static_cast<double>(k))));
    const auto m = vacuum_moments(f, z, depth);
    for (int p = 1; p <= depth; ++p) {
        const double expect = p % 2 ? 0.0 : static_cast<double>(count_nc_pairings(static_cast<std::size_t>(p)));
        c.r.eq("moments", "vacuum_moment", "p=" + std::to_string(p), m[static_cast<std::size_t>(p)].real(), expect, 1e-12);
    }
    std::vector<Vec> gens;
    for (std::size_t i = 0; i < std::min<std::size_t>(k, 2); ++i) gens.push_back(unit_vec(k, i));
    double orc = 0.0;
    const auto ops = generator_ops(f, gens);
    for (const auto& w : all_words(gens.size(), static_cast<std::size_t>(depth)))
        orc = std::max(orc, std::abs(vacuum_word(f, ops, w) - nc_pairing_moment(f, gens, w)));
    c.r.le("moments", "nc_pairing_oracle", "", orc, 1e-12);
    const auto words = all_words(gens.size(), static_cast<std::size_t>(c.i("word_len")));
    c.r.le("trace", "traciality", "", trace_check(f, gens, words), 1e-9);

    const int want = static_cast<int>(c.i("lift_depth"));
    for (const auto& cc : compatible_coreps(g)) {
        const std::size_t dk = cc.corep.space_dim();
        const TruncatedFock fk = TruncatedFock::tracial(dk, fit_lift_depth(dk, g.dim(), want), cc.M);
        const LiftedRep L = lift_rep(fk, cc.corep);
        c.r.le("lift", "unitarity", cc.label, L.unitarity, 1e-8);
        c.r.le("lift", "corep_identity", cc.label, L.corep_identity, 1e-8);
        c.r.le("lift", "compatibility", cc.label, L.compatibility, 1e-8);
        double it = 0.0, iv = 0.0;
        for (const auto& zeta : j_real_vectors(fk, 2, c.seed)) {
            it = std::max(it, intertwining_residual(L, zeta, c.seed));
            iv = std::max(iv, vacuum_invariance_residual(L, {fk.s(zeta), fk.s(zeta)}));
        }
        c.r.le("lift", "intertwining", cc.label, it, 1e-9);
        c.r.le("lift", "vacuum_invariance", cc.label, iv, 1e-8);
    }

    if (const auto gen = cyclic_generator(g); gen && g.dim() >= 3) {
        const std::size_t n = g.dim();
        const Corep u = regular_corep(g);
        CMatrix M(n, n);
        for (std::size_t j = 0; j < n; ++j) M((n - j) % n, j) = 1.0;
        const TruncatedFock f1 = TruncatedFock::tracial(n, 1, M);
        const LiftedRep L = lift_rep(f1, u);
        std::vector<Vec> zs;
        for (std::size_t j = 1; j <= std::min<std::size_t>(4, (n - 1) / 2); ++j) {
            Vec v(n);
            v[j] = 1.0 / std::sqrt(2.0);
            v[n - j] += 1.0 / std::sqrt(2.0);
            zs.push_back(v);
        }
        const auto rows = connes_weiss_experiment(L, zs, *gen);
        for (std::size_t q = 0; q < rows.size(); ++q) {
            const std::string lbl = "k=" + std::to_string(q + 1);
            c.r.le("connes_weiss", "trace", lbl, rows[q].trace, 1e-10);
            c.r.eq("connes_weiss", "gns_norm", lbl, rows[q].gns_norm, 1.0, 1e-9);
            c.r.eq("connes_weiss", "action_vs_corep_defect", lbl, rows[q].action_defect, rows[q].corep_defect, 1e-9);
        }
    }
}

inline void exp_dense_image(const FiniteQG& g, RunContext& c) {
    const std::string kind = c.s("morphism");
    auto run = [&](const FiniteQG& G, const FiniteQG& H, const CMatrix& pi) {
        c.r.le("morphism", "intertwining", G.id() + "->" + H.id(), morphism_residual(G, H, pi), 1e-9);
        const DenseImageReport d = dense_image_report(G, H, pi);
        const std::string lbl = G.id() + "->" + H.id();
        c.r.flag("conditions", "agree", lbl, d.agree());
        c.r.info("conditions", "cond1_injective", lbl, d.cond1_injective_alpha);
        c.r.info("conditions", "cond2_injective_reduced", lbl, d.cond2_injective_beta);
        c.r.info("conditions", "cond3_AV_dense", lbl, d.cond3_AV_dense);
        c.r.info("conditions", "cond4_dual_surjective", lbl, d.cond4_dual_surjective);
        c.r.info("conditions", "dense", lbl, d.dense());
        c.r.info("ranks", "rank1", lbl, static_cast<double>(d.rank1));
        c.r.info("ranks", "target", lbl, static_cast<double>(d.target_rank));
    };
    if (kind == "identity") {
        run(g, g, CMatrix::identity(g.dim()));
        return;
    }
    const std::size_t n = parse_indexed(g.id(), "fun-Z");
    const long long mm = c.i("m");
    if (n == 0 || mm < 1 || n % static_cast<std::size_t>(mm) != 0)
        fail(ErrorKind::Schema, "BadParameter", "restriction/pullback need a fun-Z(n) parent and m dividing n");
    const std::size_t m = static_cast<std::size_t>(mm);
    const FiniteQG small = fun_Zn(m);
    if (kind == "subgroup-restriction") {
        // Z_m inside Z_n as multiples of n/m
        CMatrix pi(m, n);
        for (std::size_t h = 0; h < m; ++h) pi(h, h * (n / m)) = 1.0;
        run(g, small, pi);
    } else if (kind == "quotient-pullback") {
        CMatrix pi(n, m);
        for (std::size_t j = 0; j < n; ++j) pi(j, j % m) = 1.0;
        run(small, g, pi);
    } else {
        fail(ErrorKind::Schema, "BadParameter", "morphism must be identity, subgroup-restriction or quotient-pullback");
    }
}

// ---------------------------------------------------------------- running

struct Outcome {
    std::optional<Report> report;  // absent when the scenario was rejected before any computation
    int exit_code = 0;
    std::string message;
    double elapsed_ms = 0.0;
};

inline Outcome run_scenario(const Scenario& sc) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    auto finish = [&]() {
        out.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return out;
    };
    json params;
    const ExperimentSpec* spec = nullptr;
    const bool window = GroupDualWindow::is_window_name(sc.parent);
    std::optional<FiniteQG> g;
    try {
        spec = &experiment_spec(sc.experiment);
        params = normalize_params(*spec, sc.params);
        if (window && !spec->window_parent) fail(ErrorKind::Schema, "BadParent", sc.experiment + " needs a finite quantum group");
        if (!window && !spec->finite_parent) fail(ErrorKind::Schema, "BadParent", sc.experiment + " needs a window family");
        if (!window) g = resolve_qg(sc.parent);
    } catch (const Error& e) {
        out.exit_code = exit_code(e.kind());
        out.message = e.what();
        if (e.kind() == ErrorKind::Schema) return finish();
        out.report.emplace(sc.experiment, sc.parent, sc.tol_scale);
        out.report->set_error(e);
        return finish();
    }
    Report& r = out.report.emplace(sc.experiment, g ? g->id() : sc.parent, sc.tol_scale);
    for (const auto& [k, v] : params.items()) r.param(k, v.is_string() ? v.get<std::string>() : v.dump());
    r.param("seed", std::to_string(sc.seed));
    for (const auto& [k, v] : sc.tolerances) r.override_tol(k, v);
    RunContext c{params, sc.seed, r};
    try {
        const std::string& id = sc.experiment;
        auto win = [&](const char* key) { return GroupDualWindow::parse(sc.parent, window_radius(c, key)); };
        if (id == "axioms") {
            if (window) exp_axioms(win("radius"), c); else exp_axioms(*g, c);
        } else if (id == "semigroup") {
            if (window) exp_semigroup(win("radius"), c); else exp_semigroup(*g, c);
        } else if (id == "kazhdan") {
            exp_kazhdan(*g, c);
        } else if (id == "v_matrices") {
            if (window) exp_v_matrices(win("radius"), c); else exp_v_matrices(*g, c);
        } else if (id == "theorem69") {
            exp_theorem69(sc.parent, c);
        } else if (id == "lemma74") {
            exp_lemma74(win("radius"), c);
        } else if (id == "action_suite") {
            exp_action_suite(*g, c);
        } else if (id == "fock_suite") {
            exp_fock_suite(*g, c);
        } else if (id == "dense_image") {
            exp_dense_image(*g, c);
        }
    } catch (const Error& e) {
        r.set_error(e);
        out.message = e.what();
    }
    out.exit_code = r.exit_status();
    if (out.message.empty() && out.exit_code != 0) out.message = "contract checks failed";
    return finish();
}

/// <name>.report.json, <name>.report.csv and the <name>.meta.json sidecar (timings live only there).
inline void write_outputs(const Scenario& sc, const Outcome& o) {
    if (!o.report) return;
    std::filesystem::create_directories(sc.out_dir);
    const auto base = sc.out_dir / sc.name;
    {
        std::ofstream js(base.string() + ".report.json", std::ios::binary);
        js << o.report->to_json().dump(2) << '\n';
    }
    {
        std::ofstream csv(base.string() + ".report.csv", std::ios::binary);
        csv << o.report->to_csv();
    }
    nlohmann::ordered_json meta;
    meta["name"] = sc.name;
    meta["versions"] = {{"qgwb", version_string},
                        {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                     std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                        {"compiler", __VERSION__}};
    meta["timings_ms"] = {{"total", o.elapsed_ms}};
    meta["exit_code"] = o.exit_code;
    std::ofstream ms(base.string() + ".meta.json", std::ios::binary);
    ms << meta.dump(2) << '\n';
}

/// Runs independent scenarios on a small worker pool; results come back in input order.
inline std::vector<Outcome> run_batch(const std::vector<Scenario>& batch, unsigned workers = 0) {
    if (workers == 0) workers = std::max(1u, std::min(4u, std::thread::hardware_concurrency()));
    std::vector<Outcome> out(batch.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < batch.size(); i = next++) {
            out[i] = run_scenario(batch[i]);
            write_outputs(batch[i], out[i]);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(workers, batch.size()); ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace qgwb
