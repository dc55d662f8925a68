// Acceptance runner: one line per criterion, exit status 0 iff every selected criterion passed.
//
//   acceptance            all twelve
//   acceptance --only 7   a single criterion

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "qgwb/experiments.hpp"

using namespace qgwb;

namespace {

/// Accumulates sub-checks of one criterion; the first failing one is kept for the summary line.
struct Verdict {
    bool ok = true;
    std::string first_failure;
    std::ostringstream notes;

    void need(bool cond, const std::string& what) {
        if (!cond && ok) first_failure = what;
        ok = ok && cond;
    }
    void le(double v, double tol, const std::string& what) {
        std::ostringstream s;
        s << what << " = " << v << " (limit " << tol << ")";
        need(std::isfinite(v) && v < tol, s.str());
    }
};

struct Criterion {
    int id;
    const char* title;
    double limit_s;  // runtime limit, 0 when the criterion has none
    std::function<void(Verdict&)> body;
};

std::string fmt(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

void c1(Verdict& v) {
    double worst = 0.0, slowest = 0.0;
    std::string slow_name;
    for (const auto& name : finite_preset_names()) {
        const auto t0 = std::chrono::steady_clock::now();
        const FiniteQG g = make_preset(name);
        double r = 0.0;
        for (const auto& x : check_axioms(g)) r = std::max(r, x.value);
        for (const auto& x : check_w(g)) r = std::max(r, x.value);
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s > slowest) slowest = s, slow_name = name;
        worst = std::max(worst, r);
        v.le(r, 1e-9, name + " residual");
        v.le(s, 1.0, name + " seconds");
    }
    v.notes << finite_preset_names().size() << " presets, max residual " << fmt(worst) << ", slowest " << slow_name << " "
            << fmt(slowest) << " s";
}

void c2(Verdict& v) {
    const FiniteQG g = kac_paljutkin();
    const Functional mu = random_state(g, 0);
    const Functional L = 3.0 * (counit_functional(g) - mu);
    validate_generating(L);
    const std::vector<double> grid{0.1, 0.5, 1.0};
    double law = 0.0;
    for (double s : grid)
        for (double t : grid) law = std::max(law, distance(convolve(semigroup_at(L, s), semigroup_at(L, t)), semigroup_at(L, s + t)));
    const double rich = distance(richardson_quotient(L, 1e-4), L);
    const double one = distance(derivative_quotient(L, 1e-4), L);
    v.le(law, 1e-9, "semigroup law");
    v.le(rich, 1e-5, "derivative recovery");
    v.notes << "law " << fmt(law) << ", derivative error " << fmt(rich) << " (one-sided " << fmt(one) << ")";
}

void c3(Verdict& v) {
    const GroupDualWindow w = GroupDualWindow::free_group(2, 6);
    const WindowFunction L = word_length(w);
    const auto gl = validate_generating(L);
    double worst = 1e300;
    for (double t : {0.1, 1.0, 10.0}) {
        const double m = min_eigenvalue(window_gram(window_semigroup_at(L, t)));
        worst = std::min(worst, m);
        v.need(m >= -1e-9, "Gram min eigenvalue at t=" + fmt(t) + " is " + fmt(m));
    }
    v.notes << w.size() << " elements, CND min eig " << fmt(gl.cnd_min_eig) << ", Gram min eig " << fmt(worst);
}

void c4(Verdict& v) {
    const FiniteQG g = kac_paljutkin();
    const GenFunctional gl = validate_generating(central_generator(g, index_weighted(g)));
    require_central_kac(gl);
    v.need(gl.central && gl.S_invariant, "L central and S-invariant");
    const SchurmannTriple t = schurmann_triple(gl);
    std::vector<std::size_t> gammas;
    for (std::size_t a = 0; a < g.num_irreps(); ++a) gammas.push_back(a);
    double herm = 0.0, orc = 0.0, tn = 0.0;
    for (std::size_t a = 0; a < g.num_irreps(); ++a) {
        tn = std::max(tn, check_T_norms(t, gl, a));
        for (std::size_t b = 0; b < g.num_irreps(); ++b)
            for (const auto& m : build_V_matrices(gl, a, b, gammas)) {
                herm = std::max(herm, m.hermitian_residual);
                orc = std::max(orc, m.oracle_residual);
            }
    }
    v.le(herm, 1e-10, "V hermitian residual");
    v.le(orc, 1e-10, "V oracle residual");
    v.le(tn, 1e-8, "T-norm residual");
    const GroupDualWindow w = GroupDualWindow::lattice(1, 12);
    const WindowFunction Lw = word_length(w);
    validate_generating(Lw);
    for (int l = 1; l <= 10; ++l) {
        const VMatrix m = window_V(Lw, w.identity(), w.identity(), window_power(w, l));
        v.need(m.min_eig == static_cast<double>(l), "Z(1) min eig at l=" + std::to_string(l) + " is " + fmt(m.min_eig));
    }
    v.notes << "hermitian " << fmt(herm) << ", oracle " << fmt(orc) << ", T-norm " << fmt(tn) << ", Z(1) min eig = l for l <= 10";
}

void c5(Verdict& v) {
    const auto res = theorem69_constructor(exp_decay_sequence_Zd(1), 0.5, {.stages = 8});
    v.need(res.stages.size() >= 8, "only " + std::to_string(res.stages.size()) + " stages");
    for (const auto& st : res.stages)
        v.need(st.L_at_witness >= st.bound, "witness bound at l=" + std::to_string(st.l) + ": " + fmt(st.L_at_witness) + " < " + fmt(st.bound));
    double worst = 1e300;
    for (int radius : {4, 8, 16}) {
        const GroupDualWindow w = GroupDualWindow::lattice(1, radius);
        const auto gl = validate_generating(restrict_to(w, res.L));
        worst = std::min(worst, gl.cnd_min_eig);
    }
    v.notes << res.stages.size() << " stages, k = [";
    for (std::size_t i = 0; i < res.ks.size(); ++i) v.notes << (i ? "," : "") << res.ks[i];
    v.notes << "], CND min eig on windows " << fmt(worst);
}

void c6(Verdict& v) {
    const GroupDualWindow w = GroupDualWindow::free_group(2, 6);
    const WindowFunction L = word_length(w);
    std::vector<std::size_t> gammas;
    for (int l = 1; l <= 3; ++l) gammas.push_back(window_power(w, l));
    const auto st = lemma74_experiment(L, 1.0, {{1.0, w.identity(), w.identity()}}, gammas);
    double worst = 0.0;
    for (std::size_t k = 0; k < st.size(); ++k) {
        const double err = std::abs(st[k].bound - (1.0 - 2.0 * std::exp(-2.0 * static_cast<double>(k + 1))));
        worst = std::max(worst, err);
        v.le(err, 1e-12, "closed form at l=" + std::to_string(k + 1));
        if (k > 0) v.need(st[k].bound > st[k - 1].bound, "bounds not strictly increasing");
    }
    v.notes << "bounds " << fmt(st[0].bound) << ", " << fmt(st[1].bound) << ", " << fmt(st[2].bound) << "; max error " << fmt(worst);
}

void c7(Verdict& v) {
    const TruncatedFock f = TruncatedFock::tracial(2, 8, CMatrix::identity(2));
    const Vec z{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    v.le(vnorm(vsub(f.T(z), z)), 1e-15, "J zeta - zeta");
    const auto m = vacuum_moments(f, z, 8);
    const double expect[] = {1, 2, 5, 14};
    double err = 0.0;
    for (int k = 1; k <= 4; ++k) err = std::max(err, std::abs(m[static_cast<std::size_t>(2 * k)] - expect[k - 1]));
    v.le(err, 1e-12, "moment error");
    const double tr = trace_check(f, {unit_vec(2, 0), unit_vec(2, 1)}, all_words(2, 4));
    v.le(tr, 1e-9, "traciality residual");
    v.notes << "moments (" << m[2].real() << ", " << m[4].real() << ", " << m[6].real() << ", " << m[8].real() << "), error "
            << fmt(err) << ", traciality " << fmt(tr);
}

void c8(Verdict& v) {
    double inv = 0.0, itw = 0.0;
    std::size_t count = 0;
    for (const auto& name : finite_preset_names()) {
        const FiniteQG g = make_preset(name);
        for (const auto& cc : compatible_coreps(g)) {
            const std::size_t dk = cc.corep.space_dim();
            const TruncatedFock fk = TruncatedFock::tracial(dk, fit_lift_depth(dk, g.dim(), 2), cc.M);
            const LiftedRep L = lift_rep(fk, cc.corep);
            for (const auto& zeta : j_real_vectors(fk, 2, 0)) {
                const double a = vacuum_invariance_residual(L, {fk.s(zeta), fk.s(zeta)});
                const double b = intertwining_residual(L, zeta, 0);
                inv = std::max(inv, a);
                itw = std::max(itw, b);
                v.le(a, 1e-8, name + "/" + cc.label + " vacuum invariance");
                v.le(b, 1e-9, name + "/" + cc.label + " intertwining");
            }
            ++count;
        }
    }
    const FiniteQG g = dual_Zn(32);
    const std::size_t n = 32;
    CMatrix M(n, n);
    for (std::size_t j = 0; j < n; ++j) M((n - j) % n, j) = 1.0;
    const TruncatedFock f1 = TruncatedFock::tracial(n, 1, M);
    const Corep u = regular_corep(g);
    const LiftedRep L = lift_rep(f1, u);
    std::vector<Vec> zs;
    for (std::size_t j = 1; j <= 4; ++j) {
        Vec z(n);
        z[j] = z[n - j] = 1.0 / std::sqrt(2.0);
        zs.push_back(z);
    }
    double tr = 0.0, nrm = 0.0, dd = 0.0;
    for (const auto& row : connes_weiss_experiment(L, zs, *cyclic_generator(g))) {
        tr = std::max(tr, row.trace);
        nrm = std::max(nrm, std::abs(row.gns_norm - 1.0));
        dd = std::max(dd, std::abs(row.action_defect - row.corep_defect));
    }
    v.need(tr <= 1e-10, "Connes-Weiss trace " + fmt(tr));
    v.le(nrm, 1e-9, "Connes-Weiss GNS norm - 1");
    v.le(dd, 1e-9, "action defect - corep defect");
    v.notes << count << " compatible coreps, invariance " << fmt(inv) << ", intertwining " << fmt(itw) << "; dual-Z(32): trace "
            << fmt(tr) << ", |norm-1| " << fmt(nrm) << ", defect gap " << fmt(dd);
}

void c9(Verdict& v) {
    double worst = 0.0;
    std::size_t coreps = 0;
    for (const auto& name : finite_preset_names()) {
        const FiniteQG g = make_preset(name);
        std::vector<std::pair<std::string, Corep>> us{{"trivial", trivial_corep(g, 2)}, {"regular", regular_corep(g)}};
        if (g.num_irreps() > 1) us.emplace_back("nontrivial", nontrivial_irreps_corep(g));
        for (std::size_t a = 0; a < g.num_irreps(); ++a) us.emplace_back("irrep-" + std::to_string(a), irrep_corep(g, a));
        for (const auto& [lbl, u] : us) {
            const double r = frob_norm(invariant_projection(u) - brute_force_invariant_projection(u));
            worst = std::max(worst, r);
            v.le(r, 1e-8, name + "/" + lbl + " projection");
            ++coreps;
        }
    }
    std::size_t pairs = 0;
    for (const char* name : {"fun-S3", "grp-S3", "kac-paljutkin"}) {
        const FiniteQG g = make_preset(name);
        for (std::size_t a = 0; a < g.num_irreps(); ++a)
            for (std::size_t b = 0; b < g.num_irreps(); ++b) {
                const std::size_t r = projection_rank(invariant_projection(tensor(irrep_corep(g, a), contragredient(irrep_corep(g, b)))));
                v.need(r == (a == b ? 1u : 0u), std::string(name) + " Schur rank " + std::to_string(a) + "," + std::to_string(b));
                ++pairs;
            }
    }
    v.notes << coreps << " coreps, max oracle gap " << fmt(worst) << "; " << pairs << " Schur pairs";
}

void c10(Verdict& v) {
    for (std::size_t n : {3u, 8u, 32u}) {
        const FiniteQG g = dual_Zn(n);
        const double gap = kazhdan_gap(nontrivial_irreps_corep(g), {*cyclic_generator(g)});
        const double ref = 2.0 * std::sin(std::numbers::pi / static_cast<double>(n));
        v.le(std::abs(gap - ref), 1e-9, "n=" + std::to_string(n) + " gap error");
        v.notes << "n=" << n << ": " << gap << " (err " << fmt(std::abs(gap - ref)) << ") ";
    }
}

void c11(Verdict& v) {
    {
        const FiniteQG g = dual_Zn(2);
        const Action a = grading_action(g, {0, 1});
        const Implementation im = implement(a);
        v.le(im.unitarity, 1e-9, "grading unitarity");
        const FixedPoints fp = fixed_point_expectation(a, im);
        CMatrix diag(4, 4);
        diag(0, 0) = diag(3, 3) = 1.0;
        v.le(max_abs(fp.E - diag), 1e-10, "E vs diagonal compression");
        double bimod = 0.0;
        for (std::size_t pi : {0u, 3u}) {
            const Vec p = unit_vec(4, pi);
            for (std::size_t x = 0; x < 4; ++x) {
                const Vec e = unit_vec(4, x);
                bimod = std::max(bimod, vnorm(vsub(a.N().mul(fp.E * e, p), a.N().mul(a.N().mul(p, e), p))));
            }
        }
        v.le(bimod, 1e-9, "E(a)p - pap");
        const ConeReport cr = cone_preservation_check(im, im.U, {g.one(), g.basis(1)});
        v.need(cr.preserved, "grading cone preservation");
        v.notes << "grading: unitarity " << fmt(im.unitarity) << ", E(a)p " << fmt(bimod) << ", cone " << cr.preserved << "; ";
    }
    {
        const FiniteQG g = fun_S3();
        std::size_t two = g.num_irreps();
        for (std::size_t a = 0; a < g.num_irreps(); ++a)
            if (g.irrep(a).n == 2) two = a;
        const VVbarReport vv = v_vbar_implementation_check(irrep_corep(g, two));
        v.need(vv.equivalent, "v_vbar equivalence");
        v.le(vv.intertwiner_residual, 1e-8, "v_vbar intertwiner residual");
        v.notes << "v_vbar intertwiner " << fmt(vv.intertwiner_residual) << "; ";
    }
    std::size_t actions = 0;
    for (const auto& name : finite_preset_names()) {
        const FiniteQG g = make_preset(name);
        std::vector<Action> acts;
        acts.push_back(trivial_action(g, {2}));
        acts.push_back(comultiplication_action(g));
        if (cyclic_generator(g)) acts.push_back(grading_action(g, {0, 1}));
        std::vector<Corep> keep;
        keep.reserve(g.num_irreps());
        for (std::size_t a = 0; a < g.num_irreps(); ++a)
            if (g.irrep(a).n > 1) keep.push_back(irrep_corep(g, a));
        for (const auto& u : keep) acts.push_back(adjoint_action(u));
        for (const auto& a : acts) {
            const Implementation im = implement(a);
            const SpectralGapReport sg = spectral_gap_report(a, im);
            v.need(sg.consistent, name + "/" + a.label() + " spectral gap indicators");
            ++actions;
        }
    }
    v.notes << actions << " actions with consistent gap indicators";
}

void c12(Verdict& v) {
    const FiniteQG z4 = fun_Zn(4), z2 = fun_Zn(2);
    CMatrix restrict(2, 4), pull(4, 2);
    for (std::size_t h = 0; h < 2; ++h) restrict(h, 2 * h) = 1.0;
    for (std::size_t j = 0; j < 4; ++j) pull(j, j % 2) = 1.0;
    struct Ex {
        const char* name;
        const FiniteQG& G;
        const FiniteQG& H;
        CMatrix pi;
        bool expect;
    };
    const Ex ex[] = {{"identity", z4, z4, CMatrix::identity(4), true},
                     {"Z2<Z4 restriction", z4, z2, restrict, true},
                     {"Z4->Z2 pullback", z2, z4, pull, false}};
    for (const auto& e : ex) {
        v.le(morphism_residual(e.G, e.H, e.pi), 1e-9, std::string(e.name) + " morphism residual");
        const DenseImageReport d = dense_image_report(e.G, e.H, e.pi);
        v.need(d.agree(), std::string(e.name) + ": condition verdicts disagree");
        v.need(d.dense() == e.expect, std::string(e.name) + ": dense=" + (d.dense() ? "true" : "false") + ", expected " +
                                          (e.expect ? "true" : "false"));
        v.notes << e.name << " -> " << (d.dense() ? "true" : "false") << (d.agree() ? " (agree) " : " (disagree) ");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    app.add_option("--only", only, "Run a single criterion (1-12)")->check(CLI::Range(1, 12));
    CLI11_PARSE(app, argc, argv);

    const Criterion all[] = {
        {1, "preset validation", 0.0, c1},
        {2, "semigroup round trip", 2.0, c2},
        {3, "Schoenberg window", 10.0, c3},
        {4, "V-matrix suite", 5.0, c4},
        {5, "unbounded generator constructor", 5.0, c5},
        {6, "zeta bounds", 2.0, c6},
        {7, "Catalan moments", 10.0, c7},
        {8, "Fock lifts and Connes-Weiss", 20.0, c8},
        {9, "projection oracle", 0.0, c9},
        {10, "Kazhdan gap closed form", 0.0, c10},
        {11, "action suite", 0.0, c11},
        {12, "dense image analyzer", 0.0, c12},
    };
    bool every = true;
    for (const auto& c : all) {
        if (only && c.id != only) continue;
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.body(v);
        } catch (const Error& e) {
            v.need(false, std::string("error: ") + e.what());
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_s > 0.0) v.need(s < c.limit_s, "runtime " + fmt(s) + " s over " + fmt(c.limit_s) + " s");
        std::printf("criterion %2d %-32s %s  %.3f s  %s%s%s\n", c.id, c.title, v.ok ? "PASS" : "FAIL", s, v.notes.str().c_str(),
                    v.ok ? "" : " | first failure: ", v.first_failure.c_str());
        every = every && v.ok;
    }
    return every ? 0 : 1;
}
