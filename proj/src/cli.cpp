#include "pvc/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pvc/ea.hpp"
#include "pvc/experiment.hpp"
#include "pvc/oracle.hpp"
#include "pvc/planted_model.hpp"

namespace pvc::cli {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

// Raised for bad input that passed CLI parsing (missing files, invalid combinations).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path.string() + "'");
    out << text;
}

ordered_json vertex_list(const Bitset& bits) { return bits.indices(); }

struct LoadedInstance {
    InstanceFile file;
    std::optional<ModelParams> params;
};

LoadedInstance load_instance(const std::string& path) {
    std::istringstream in(read_file(path));
    LoadedInstance loaded{read_instance(in), std::nullopt};
    const std::string sidecar = path + ".json";
    if (fs::exists(sidecar)) loaded.params = params_from_json(read_file(sidecar));
    return loaded;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    std::size_t n = 0;
    std::size_t k = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::string out;
};

int do_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
    const ModelParams params{a.n, a.k, a.p, a.seed};
    params.validate();
    const PlantedInstance inst = sample_instance(params);

    std::ostringstream text;
    write_instance(text, inst);
    ordered_json report;
    report["n"] = a.n;
    report["k"] = a.k;
    report["p"] = a.p;
    report["seed"] = a.seed;
    report["edges"] = inst.graph.num_edges();
    report["core"] = vertex_list(inst.core);
    if (a.out.empty()) {
        out << text.str();
    } else {
        write_file(a.out, text.str());
        write_file(a.out + ".json", params_to_json(params));
        report["instance"] = a.out;
        report["sidecar"] = a.out + ".json";
        out << report.dump(2) << '\n';
    }
    err << "generated M(" << a.n << "," << a.k << "," << a.p << ") with " << inst.graph.num_edges()
        << " edges\n";
    return kSuccess;
}

// ---------------------------------------------------------------- run

struct RunArgs {
    std::string instance;
    std::size_t n = 0;
    std::size_t k = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t ea_seed = 0;
    std::optional<std::uint64_t> target;
    std::string policy = "target";
    std::optional<std::uint64_t> budget;
    std::optional<double> rate;
    std::string restart_len;
    std::string trace;
};

int do_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
    std::optional<Graph> graph;
    std::optional<Bitset> core;
    if (!a.instance.empty()) {
        LoadedInstance loaded = load_instance(a.instance);
        graph = std::move(loaded.file.graph);
        core = std::move(loaded.file.core);
    } else {
        if (a.n == 0) throw UsageError("run needs --instance or the model flags --n --k --p");
        PlantedInstance inst = sample_instance(ModelParams{a.n, a.k, a.p, a.seed});
        graph = std::move(inst.graph);
        core = std::move(inst.core);
    }
    const std::size_t n = graph->num_vertices();

    EAConfig cfg;
    cfg.seed = a.ea_seed;
    cfg.mutation_rate = a.rate;
    cfg.trace = !a.trace.empty();
    if (a.policy == "target") {
        cfg.termination.rule = StopRule::TargetFitness;
    } else if (a.policy == "budget") {
        cfg.termination.rule = StopRule::Budget;
    } else if (a.policy == "first-feasible") {
        cfg.termination.rule = StopRule::FirstFeasible;
    } else {
        throw UsageError("unknown --policy '" + a.policy + "' (target, budget, first-feasible)");
    }
    if (a.target) {
        cfg.termination.target = *a.target;
    } else if (core) {
        cfg.termination.target = core->count();
    } else if (cfg.termination.rule == StopRule::TargetFitness) {
        throw UsageError("--target is required when the instance has no core line");
    }
    cfg.termination.max_evaluations = a.budget.value_or(default_budget(n));
    if (!a.restart_len.empty()) {
        if (a.restart_len == "auto") {
            cfg.restart_length = auto_restart_length(n);
        } else {
            std::size_t used = 0;
            unsigned long long len = 0;
            try {
                len = std::stoull(a.restart_len, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != a.restart_len.size() || len == 0)
                throw UsageError("--restart-len must be 'auto' or a positive integer");
            cfg.restart_length = len;
        }
    }
    cfg.validate(n);

    const Bitset* core_ptr = core ? &*core : nullptr;
    const RunResult result = cfg.restart_length ? run_ea_with_restarts(*graph, cfg, core_ptr)
                                                : run_ea(*graph, cfg, core_ptr);

    if (cfg.trace) {
        std::ofstream trace(a.trace, std::ios::binary);
        if (!trace) throw UsageError("cannot write '" + a.trace + "'");
        write_trace_csv(trace, result.trace);
    }

    ordered_json report;
    report["n"] = n;
    report["m"] = graph->num_edges();
    report["target"] = cfg.termination.target;
    report["policy"] = a.policy;
    report["budget"] = cfg.termination.max_evaluations;
    report["mutation_rate"] = cfg.rate_for(n);
    report["restart_length"] = cfg.restart_length ? ordered_json(*cfg.restart_length) : ordered_json(nullptr);
    report["iterations"] = result.iterations;
    report["first_feasible_at"] =
        result.first_feasible_at ? ordered_json(*result.first_feasible_at) : ordered_json(nullptr);
    report["fitness"] = result.final_fitness();
    report["cover_size"] = result.final.ones;
    report["uncovered"] = result.final.uncovered;
    report["success"] = result.success;
    report["core_recovered"] = core ? ordered_json(result.core_recovered) : ordered_json(nullptr);
    report["overshoot"] = result.overshoot;
    report["restarts_used"] = result.restarts_used;
    report["cover"] = vertex_list(result.final.bits);
    out << report.dump(2) << '\n';

    err << (result.success ? "reached" : "did not reach") << " the stop rule after " << result.iterations
        << " evaluations; f = " << result.final_fitness() << '\n';
    return result.success ? kSuccess : kBudgetExhausted;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    std::string instance;
    double delta = 0.5;
    std::optional<double> p;
    std::vector<std::string> checks;
    std::size_t max_n = oracle::OracleLimit{}.max_n_exhaustive;
    std::uint64_t max_subsets = oracle::OracleLimit{}.max_subsets;
};

int do_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    LoadedInstance loaded = load_instance(a.instance);
    if (!loaded.file.core) throw UsageError("'" + a.instance + "' has no core line; verify needs a planted instance");
    const std::size_t n = loaded.file.graph.num_vertices();
    const std::size_t k = loaded.file.core->count();
    std::optional<double> p = a.p;
    if (!p && loaded.params) p = loaded.params->p;

    const PlantedInstance inst{std::move(loaded.file.graph), std::move(*loaded.file.core),
                               loaded.params.value_or(ModelParams{n, k, p.value_or(1.0), 0})};
    const oracle::OracleLimit limit{a.max_n, a.max_subsets};

    std::vector<std::string> checks = a.checks;
    if (checks.empty()) checks = {"fringe-edges", "delta-heavy", "delta-heavy-exhaustive", "core-mis"};

    ordered_json report;
    report["instance"] = a.instance;
    report["n"] = n;
    report["k"] = k;
    report["checks"] = ordered_json::array();
    bool all_passed = true;
    std::optional<bool> closed_form;

    auto skipped = [](const std::string& name, const std::string& why) {
        ordered_json c;
        c["name"] = name;
        c["status"] = "skipped";
        c["reason"] = why;
        return c;
    };

    for (const std::string& name : checks) {
        ordered_json c;
        c["name"] = name;
        try {
            if (name == "fringe-edges") {
                const Bitset fringe = inst.fringe();
                std::size_t count = 0;
                for (const auto& [u, v] : inst.graph.edges())
                    if (fringe.test(u) && fringe.test(v)) ++count;
                c["value"] = count;
                c["pass"] = count == 0;
            } else if (name == "delta-heavy") {
                const bool heavy = is_delta_heavy(inst, a.delta);
                closed_form = heavy;
                c["delta"] = a.delta;
                c["subset_size"] = heavy_subset_size(n, k, a.delta);
                c["threshold"] = std::log(static_cast<double>(n));
                c["value"] = heavy;
                c["pass"] = heavy;
            } else if (name == "delta-heavy-exhaustive") {
                const bool heavy = oracle::is_delta_heavy_exhaustive(inst, a.delta, limit);
                c["delta"] = a.delta;
                c["value"] = heavy;
                if (!closed_form && k >= 1 && k < n && heavy_subset_size(n, k, a.delta) > 0)
                    closed_form = is_delta_heavy(inst, a.delta);
                if (closed_form) c["agrees_with_closed_form"] = *closed_form == heavy;
                c["pass"] = heavy && (!closed_form || *closed_form == heavy);
            } else if (name == "core-mis") {
                if (!p) throw UsageError("core-mis needs p: pass --p or keep the .json sidecar");
                if (k == 0) {
                    report["checks"].push_back(skipped(name, "empty core"));
                    continue;
                }
                const std::size_t mis = max_core_independent_set(inst, IndependentSetOptions{32, true});
                const double bound = core_independent_set_bound(k, *p);
                c["value"] = mis;
                c["bound"] = bound;
                if (k <= limit.max_n_exhaustive)
                    c["agrees_with_enumeration"] = oracle::max_independent_set_exact(inst.graph, inst.core, limit) == mis;
                c["pass"] = static_cast<double>(mis) <= bound && c.value("agrees_with_enumeration", true);
            } else {
                throw UsageError("unknown check '" + name +
                                 "' (fringe-edges, delta-heavy, delta-heavy-exhaustive, core-mis)");
            }
        } catch (const std::invalid_argument& e) {
            report["checks"].push_back(skipped(name, e.what()));
            continue;
        }
        if (!c.at("pass").get<bool>()) all_passed = false;
        err << name << ": " << (c.at("pass").get<bool>() ? "pass" : "FAIL") << '\n';
        report["checks"].push_back(c);
    }
    report["all_passed"] = all_passed;
    out << report.dump(2) << '\n';
    return kSuccess;
}

// ---------------------------------------------------------------- experiment

struct ExperimentArgs {
    std::string preset;
    std::string spec;
    std::size_t scale = 1;
    std::string out_dir = ".";
    std::optional<std::size_t> workers;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> master_seed;
};

std::size_t resolve_workers(const std::optional<std::size_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("PVC_WORKERS"); env != nullptr && *env != '\0') {
        try {
            return static_cast<std::size_t>(std::stoul(env));
        } catch (const std::exception&) {
            throw UsageError(std::string("PVC_WORKERS='") + env + "' is not a number");
        }
    }
    return 0;
}

int do_experiment(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
    using namespace pvc::experiment;
    if (a.preset.empty() == a.spec.empty()) throw UsageError("experiment needs exactly one of --preset or --spec");
    ExperimentSpec spec = a.preset.empty() ? spec_from_json(read_file(a.spec)) : preset(a.preset);
    if (a.scale != 1) spec = spec.scaled(a.scale);
    if (a.trials) spec.trials = *a.trials;
    if (a.master_seed) spec.master_seed = *a.master_seed;
    spec.validate();

    const ExperimentResult result = run_experiment(spec, resolve_workers(a.workers));

    fs::create_directories(a.out_dir);
    const fs::path trials_path = fs::path(a.out_dir) / (spec.name + "_trials.csv");
    const fs::path summary_path = fs::path(a.out_dir) / (spec.name + "_summary.csv");
    std::ostringstream trials_csv, summary_csv;
    write_trials_csv(trials_csv, result.trials);
    write_summary_csv(summary_csv, result.cells);
    write_file(trials_path, trials_csv.str());
    write_file(summary_path, summary_csv.str());

    std::size_t failures = 0;
    for (const auto& cell : result.cells) failures += cell.failures;
    ordered_json report;
    report["name"] = spec.name;
    report["cells"] = result.cells.size();
    report["trials"] = result.trials.size();
    report["failures"] = failures;
    report["trials_csv"] = trials_path.string();
    report["summary_csv"] = summary_path.string();
    out << report.dump(2) << '\n';
    err << spec.name << ": " << result.cells.size() << " cells, " << result.trials.size() << " trials, "
        << failures << " budget exhaustions\n";
    return kSuccess;
}

// ---------------------------------------------------------------- presets

int do_presets(const std::string& show, std::ostream& out) {
    using namespace pvc::experiment;
    if (!show.empty()) {
        out << spec_to_json(preset(show));
        return kSuccess;
    }
    ordered_json list = ordered_json::array();
    for (const auto& name : preset_names()) {
        ordered_json entry;
        entry["name"] = name;
        entry["description"] = preset_description(name);
        list.push_back(entry);
    }
    out << list.dump(2) << '\n';
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Planted vertex cover: sample M(n,k,p), run the (1+1) EA, verify, experiment", "pvc"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Sample an instance from M(n,k,p)");
    generate->add_option("--n", gen.n, "vertex count")->required();
    generate->add_option("--k", gen.k, "core size")->required();
    generate->add_option("--p", gen.p, "edge probability in (0,1]")->required();
    generate->add_option("--seed", gen.seed, "64-bit seed");
    generate->add_option("--out", gen.out, "instance path (sidecar written to <out>.json); stdout if omitted");

    RunArgs ra;
    auto* run_cmd = app.add_subcommand("run", "Run the (1+1) EA on an instance");
    auto* instance_opt = run_cmd->add_option("--instance", ra.instance, "instance or edge-list file");
    auto* n_opt = run_cmd->add_option("--n", ra.n, "sample a fresh instance with this n");
    auto* k_opt = run_cmd->add_option("--k", ra.k, "core size for a sampled instance");
    auto* p_opt = run_cmd->add_option("--p", ra.p, "edge probability for a sampled instance");
    auto* seed_opt = run_cmd->add_option("--seed", ra.seed, "seed for a sampled instance");
    instance_opt->excludes(n_opt)->excludes(k_opt)->excludes(p_opt)->excludes(seed_opt);
    n_opt->needs(k_opt)->needs(p_opt);
    run_cmd->add_option("--ea-seed", ra.ea_seed, "seed of the EA's random stream");
    run_cmd->add_option("--target", ra.target, "target fitness k (default: core size)");
    run_cmd->add_option("--policy", ra.policy, "stop rule: target, budget or first-feasible");
    run_cmd->add_option("--budget", ra.budget, "maximum fitness evaluations");
    run_cmd->add_option("--rate", ra.rate, "mutation rate (default 1/n)");
    run_cmd->add_option("--restart-len", ra.restart_len, "cold-restart period: integer or 'auto' (3e n ln n)");
    run_cmd->add_option("--trace", ra.trace, "write the per-iteration trace CSV here");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Check structural properties of a planted instance");
    verify->add_option("--instance", va.instance, "instance file with a core line")->required();
    verify->add_option("--delta", va.delta, "delta for the heaviness checks");
    verify->add_option("--p", va.p, "edge probability for the independent-set bound (default: sidecar)");
    verify->add_option("--checks", va.checks, "fringe-edges, delta-heavy, delta-heavy-exhaustive, core-mis")
        ->delimiter(',');
    verify->add_option("--max-n", va.max_n, "vertex cap for exhaustive enumeration");
    verify->add_option("--max-subsets", va.max_subsets, "subset cap for exhaustive delta-heaviness");

    ExperimentArgs ea;
    auto* experiment = app.add_subcommand("experiment", "Run an experiment grid and write CSVs");
    auto* preset_opt = experiment->add_option("--preset", ea.preset, "named preset (see `presets`)");
    auto* spec_opt = experiment->add_option("--spec", ea.spec, "JSON experiment spec");
    preset_opt->excludes(spec_opt);
    experiment->add_option("--scale", ea.scale, "desk-scale divisor for n and k")->check(CLI::PositiveNumber);
    experiment->add_option("--out-dir", ea.out_dir, "directory for <name>_trials.csv and <name>_summary.csv");
    experiment->add_option("--workers", ea.workers, "worker threads (default: PVC_WORKERS or all cores)");
    experiment->add_option("--trials", ea.trials, "override trials per cell")->check(CLI::PositiveNumber);
    experiment->add_option("--master-seed", ea.master_seed, "override the master seed");

    std::string show;
    auto* presets = app.add_subcommand("presets", "List experiment presets");
    presets->add_option("--show", show, "print one preset as a JSON spec");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (generate->parsed()) return do_generate(gen, out, err);
        if (run_cmd->parsed()) return do_run(ra, out, err);
        if (verify->parsed()) return do_verify(va, out, err);
        if (experiment->parsed()) return do_experiment(ea, out, err);
        if (presets->parsed()) return do_presets(show, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace pvc::cli
