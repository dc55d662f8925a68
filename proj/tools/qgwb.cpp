// qgwb: batch scenario runner.
//
//   qgwb run scenarios/kp-axioms.json
//   qgwb run --preset kac-paljutkin --experiment axioms --out reports
//   qgwb run --preset 'free(2)' --experiment lemma74 --param radius=6 --param t=1.0
//   qgwb list-presets

#include <iomanip>
#include <iostream>

#include "CLI11.hpp"

#include "qgwb/experiments.hpp"

namespace {

int cmd_list_presets(bool as_json) {
    const auto presets = qgwb::list_presets();
    if (as_json) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (const auto& p : presets) a.push_back({{"name", p.name}, {"dim", p.dim}, {"kac", p.kac}, {"max_irrep_dim", p.max_irrep_dim}});
        std::cout << a.dump(2) << '\n';
        return 0;
    }
    std::cout << std::left << std::setw(16) << "name" << std::setw(6) << "dim" << std::setw(6) << "kac" << "max_n\n";
    for (const auto& p : presets)
        std::cout << std::setw(16) << p.name << std::setw(6) << p.dim << std::setw(6) << (p.kac ? "yes" : "no") << p.max_irrep_dim
                  << '\n';
    return 0;
}

int cmd_list_experiments() {
    for (const auto& e : qgwb::experiment_table()) {
        std::cout << e.id << " (" << (e.finite_parent ? "finite" : "") << (e.finite_parent && e.window_parent ? ", " : "")
                  << (e.window_parent ? "window" : "") << "):";
        for (const auto& p : e.params) std::cout << ' ' << p.name << '=' << (p.def.is_null() ? "auto" : p.def.dump());
        std::cout << '\n';
    }
    return 0;
}

struct RunArgs {
    std::string file;
    std::string preset, experiment, name;
    std::vector<std::string> params;
    std::string out;
    double tol_scale = 1.0;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 0;
};

int cmd_run(const RunArgs& a) {
    std::vector<qgwb::Scenario> batch;
    try {
        if (!a.file.empty()) {
            if (!a.preset.empty() || !a.experiment.empty())
                qgwb::fail(qgwb::ErrorKind::Schema, "SchemaError", "give either a scenario file or --preset/--experiment");
            batch = qgwb::batch_from_json(qgwb::read_json_file(a.file));
        } else {
            if (a.preset.empty() || a.experiment.empty())
                qgwb::fail(qgwb::ErrorKind::Schema, "SchemaError", "inline runs need --preset and --experiment");
            qgwb::Scenario s;
            s.parent = a.preset;
            s.experiment = a.experiment;
            s.name = a.name.empty() ? a.experiment : a.name;
            for (const auto& kv : a.params) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos || eq == 0) qgwb::fail(qgwb::ErrorKind::Schema, "BadParameter", "expected k=v, got " + kv);
                s.params[kv.substr(0, eq)] = kv.substr(eq + 1);
            }
            batch.push_back(std::move(s));
        }
    } catch (const qgwb::Error& e) {
        std::cerr << "qgwb: " << e.what() << '\n';
        return qgwb::exit_code(e.kind());
    }
    for (auto& s : batch) {
        if (!a.out.empty()) s.out_dir = a.out;
        s.tol_scale *= a.tol_scale;
        if (a.seed) s.seed = *a.seed;
    }
    const auto outcomes = qgwb::run_batch(batch, a.jobs);
    int status = 0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto& o = outcomes[i];
        std::cout << batch[i].name << ": " << (o.exit_code == 0 ? "pass" : "FAIL") << " (exit " << o.exit_code << ", "
                  << std::fixed << std::setprecision(1) << o.elapsed_ms << " ms)";
        if (o.report) std::cout << " -> " << (batch[i].out_dir / batch[i].name).string() << ".report.json";
        std::cout << '\n';
        if (!o.message.empty() && o.exit_code != 0) std::cerr << batch[i].name << ": " << o.message << '\n';
        status = std::max(status, o.exit_code);
    }
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite quantum group workbench: scenario runner"};
    app.require_subcommand(1);

    RunArgs ra;
    auto* run = app.add_subcommand("run", "Run a scenario file (object or array) or an inline scenario");
    run->add_option("scenario", ra.file, "Scenario JSON file");
    run->add_option("--preset", ra.preset, "Preset name, window family (free(k), Z(d), cyclic(n)) or document path");
    run->add_option("--experiment", ra.experiment, "Experiment id");
    run->add_option("--param", ra.params, "Experiment parameter k=v (repeatable)");
    run->add_option("--name", ra.name, "Report base name for inline runs");
    run->add_option("--out", ra.out, "Output directory (overrides the scenario)");
    run->add_option("--tol-scale", ra.tol_scale, "Multiplies every default tolerance")->check(CLI::PositiveNumber);
    run->add_option("--seed", ra.seed, "Seed for randomized test families");
    run->add_option("--jobs", ra.jobs, "Worker threads for batches (0 = auto)");

    bool as_json = false;
    auto* lp = app.add_subcommand("list-presets", "List built-in presets and documents on QGWB_PRESET_DIR");
    lp->add_flag("--json", as_json, "Print as JSON");

    app.add_subcommand("list-experiments", "List experiment ids and their parameters");

    std::string export_name;
    auto* ex = app.add_subcommand("export", "Print the structure-constant document of a preset");
    ex->add_option("preset", export_name)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*run) return cmd_run(ra);
        if (*lp) return cmd_list_presets(as_json);
        if (app.got_subcommand("list-experiments")) return cmd_list_experiments();
        if (*ex) {
            std::cout << qgwb::qg_to_json(qgwb::resolve_qg(export_name)).dump(1) << '\n';
            return 0;
        }
    } catch (const qgwb::Error& e) {
        std::cerr << "qgwb: " << e.what() << '\n';
        return qgwb::exit_code(e.kind());
    }
    return 0;
}
