#include "pvc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "pvc/ea.hpp"
#include "pvc/planted_model.hpp"
#include "pvc/rng.hpp"

namespace pvc::experiment {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<std::size_t> KRule::expand(std::size_t n) const {
    const double size = static_cast<double>(n);
    switch (kind) {
        case Kind::Constant: return {value};
        case Kind::CeilLn: return {static_cast<std::size_t>(std::ceil(std::log(size)))};
        case Kind::CeilSqrt: return {static_cast<std::size_t>(std::ceil(std::sqrt(size)))};
        case Kind::Range: {
            if (step == 0) throw std::invalid_argument("k range step must be positive");
            std::vector<std::size_t> out;
            for (std::size_t k = from; k <= to; k += step) out.push_back(k);
            return out;
        }
    }
    return {};
}

std::string KRule::label() const {
    switch (kind) {
        case Kind::Constant: return "k=" + std::to_string(value);
        case Kind::CeilLn: return "k=ceil-ln";
        case Kind::CeilSqrt: return "k=ceil-sqrt";
        case Kind::Range:
            return "k=" + std::to_string(from) + ".." + std::to_string(to) + ":" + std::to_string(step);
    }
    return {};
}

std::vector<double> PRule::expand(std::size_t n) const {
    switch (kind) {
        case Kind::Constant: return {value};
        case Kind::InverseN: return {1.0 / static_cast<double>(n)};
        case Kind::Range: {
            if (!(step > 0.0)) throw std::invalid_argument("p range step must be positive");
            std::vector<double> out;
            const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
            for (std::size_t i = 0; i < count; ++i) {
                const double p = from + static_cast<double>(i) * step;
                out.push_back(std::round(p * 1e12) / 1e12);
            }
            return out;
        }
    }
    return {};
}

std::vector<Cell> expand_cells(const ExperimentSpec& spec) {
    std::vector<Cell> cells;
    const bool tag_rule = spec.k_rules.size() > 1;
    for (std::size_t n : spec.n_values) {
        for (const KRule& k_rule : spec.k_rules) {
            const std::string label = tag_rule ? spec.name + "/" + k_rule.label() : spec.name;
            for (std::size_t k : k_rule.expand(n)) {
                for (const PRule& p_rule : spec.p_rules) {
                    for (double p : p_rule.expand(n)) {
                        cells.push_back(Cell{cells.size(), label, n, k, p});
                    }
                }
            }
        }
    }
    return cells;
}

void ExperimentSpec::validate() const {
    if (name.empty()) throw std::invalid_argument("experiment: name must not be empty");
    if (n_values.empty() || k_rules.empty() || p_rules.empty())
        throw std::invalid_argument("experiment '" + name + "': n, k and p grids must be non-empty");
    if (trials < 1) throw std::invalid_argument("experiment '" + name + "': trials must be >= 1");
    if (budget && *budget == 0) throw std::invalid_argument("experiment '" + name + "': budget must be positive");
    if (algorithm.restart_length && *algorithm.restart_length == 0)
        throw std::invalid_argument("experiment '" + name + "': restart length must be positive");
    for (std::size_t n : n_values)
        if (n < 1) throw std::invalid_argument("experiment '" + name + "': n must be >= 1");
    for (const Cell& cell : expand_cells(*this)) {
        if (cell.k > cell.n) {
            throw std::invalid_argument("experiment '" + name + "': cell n=" + std::to_string(cell.n) +
                                        " has k=" + std::to_string(cell.k) + " > n");
        }
        if (!(cell.p > 0.0 && cell.p <= 1.0)) {
            throw std::invalid_argument("experiment '" + name + "': cell n=" + std::to_string(cell.n) +
                                        " has p=" + format_real(cell.p) + " outside (0, 1]");
        }
    }
}

ExperimentSpec ExperimentSpec::scaled(std::size_t divisor) const {
    if (divisor == 0) throw std::invalid_argument("scale divisor must be positive");
    auto shrink = [divisor](std::size_t v) { return std::max<std::size_t>(1, v / divisor); };
    ExperimentSpec out = *this;
    for (auto& n : out.n_values) n = shrink(n);
    for (auto& rule : out.k_rules) {
        if (rule.kind == KRule::Kind::Constant && rule.value > 0) rule.value = shrink(rule.value);
        if (rule.kind == KRule::Kind::Range) {
            rule.from = shrink(rule.from);
            rule.to = shrink(rule.to);
            rule.step = shrink(rule.step);
        }
    }
    return out;
}

TrialRecord run_trial(const ExperimentSpec& spec, const Cell& cell, std::size_t trial) {
    const std::uint64_t seed = derive_seed(spec.master_seed, cell.ordinal, trial);
    Rng instance_rng(seed, 0);
    Rng search_rng(seed, 1);

    const PlantedInstance inst = sample_instance(ModelParams{cell.n, cell.k, cell.p, seed}, instance_rng);

    EAConfig cfg;
    cfg.seed = seed;
    cfg.termination.rule = StopRule::TargetFitness;
    cfg.termination.target = cell.k;
    cfg.termination.max_evaluations = spec.budget.value_or(default_budget(cell.n));
    RunResult run;
    if (spec.algorithm.restarts) {
        cfg.restart_length = spec.algorithm.restart_length.value_or(auto_restart_length(cell.n));
        run = run_ea_with_restarts(inst.graph, cfg, search_rng, &inst.core);
    } else {
        run = run_ea(inst.graph, cfg, search_rng, &inst.core);
    }

    TrialRecord record;
    record.experiment = cell.label;
    record.n = cell.n;
    record.k = cell.k;
    record.p = cell.p;
    record.trial = trial;
    record.seed = seed;
    record.runtime = run.iterations;
    record.first_feasible = run.first_feasible_at;
    record.success = run.success;
    record.recovered = run.core_recovered;
    record.overshoot = run.overshoot;
    record.restarts = run.restarts_used;
    record.final_uncovered = count_uncovered_edges(inst.graph, run.final.bits);
    record.final_fitness = fitness(inst.graph, run.final.bits);
    return record;
}

CellSummary aggregate(std::span<const TrialRecord> records) {
    if (records.empty()) throw std::invalid_argument("aggregate: cell has no trial records");
    const TrialRecord& head = records.front();
    CellSummary out;
    out.experiment = head.experiment;
    out.n = head.n;
    out.k = head.k;
    out.p = head.p;
    out.trials = records.size();

    std::vector<double> runtimes;
    double overshoot_sum = 0.0;
    double feasible_sum = 0.0;
    std::size_t feasible_count = 0;
    std::size_t recovered = 0;
    for (const TrialRecord& r : records) {
        if (r.experiment != head.experiment || r.n != head.n || r.k != head.k || r.p != head.p)
            throw std::invalid_argument("aggregate: records span more than one cell");
        if (r.success && (r.final_uncovered != 0 || r.final_fitness > r.k)) {
            throw std::logic_error("aggregate: trial " + std::to_string(r.trial) +
                                   " is marked successful but its final bitstring is not a cover of size <= k");
        }
        if (r.recovered) ++recovered;
        if (r.first_feasible) {
            feasible_sum += static_cast<double>(*r.first_feasible);
            ++feasible_count;
        }
        if (!r.success) {
            ++out.failures;
            continue;
        }
        runtimes.push_back(static_cast<double>(r.runtime));
        overshoot_sum += static_cast<double>(r.overshoot);
    }

    out.recovery_rate = static_cast<double>(recovered) / static_cast<double>(records.size());
    if (feasible_count > 0) out.mean_first_feasible = feasible_sum / static_cast<double>(feasible_count);
    out.degenerate = runtimes.size() < 2;
    if (!runtimes.empty()) {
        double sum = 0.0;
        for (double v : runtimes) sum += v;
        const double mean = sum / static_cast<double>(runtimes.size());
        double squares = 0.0;
        for (double v : runtimes) squares += (v - mean) * (v - mean);
        out.mean_runtime = mean;
        out.std_runtime = runtimes.size() > 1 ? std::sqrt(squares / static_cast<double>(runtimes.size() - 1)) : 0.0;
        out.mean_overshoot = overshoot_sum / static_cast<double>(runtimes.size());
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, std::size_t workers) {
    spec.validate();
    const std::vector<Cell> cells = expand_cells(spec);
    const std::size_t total = cells.size() * spec.trials;

    if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(total, 1));

    ExperimentResult result;
    result.trials.resize(total);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        while (true) {
            const std::size_t job = next.fetch_add(1);
            if (job >= total) return;
            try {
                result.trials[job] = run_trial(spec, cells[job / spec.trials], job % spec.trials);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(total);
                return;
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    result.cells.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        result.cells.push_back(aggregate(
            std::span<const TrialRecord>(result.trials).subspan(c * spec.trials, spec.trials)));
    }
    return result;
}

namespace {

constexpr std::string_view kScalingDense = "scaling-dense";
constexpr std::string_view kScalingSparse = "scaling-sparse";
constexpr std::string_view kRuntimeVsP = "runtime-vs-p";
constexpr std::string_view kRuntimeVsK = "runtime-vs-k";
constexpr std::string_view kHeatmapKP = "heatmap-kp";
constexpr std::string_view kCoreRecovery = "core-recovery";
constexpr std::string_view kOvershoot = "overshoot";

ExperimentSpec fixed_n_grid(std::string_view name) {
    ExperimentSpec spec;
    spec.name = std::string(name);
    spec.n_values = {200, 1000};
    spec.k_rules = {KRule::range(10, 100, 10)};
    spec.p_rules = {PRule::range(0.05, 0.95, 0.05)};
    return spec;
}

ExperimentSpec scaling(std::string_view name, PRule p_rule) {
    ExperimentSpec spec;
    spec.name = std::string(name);
    for (std::size_t n = 100; n <= 1000; n += 100) spec.n_values.push_back(n);
    spec.k_rules = {KRule::ceil_ln(), KRule::ceil_sqrt()};
    spec.p_rules = {p_rule};
    return spec;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {std::string(kScalingDense), std::string(kScalingSparse), std::string(kRuntimeVsP),
            std::string(kRuntimeVsK),   std::string(kHeatmapKP),     std::string(kCoreRecovery),
            std::string(kOvershoot)};
}

ExperimentSpec preset(std::string_view name) {
    if (name == kScalingDense) return scaling(name, PRule::constant(0.5));
    if (name == kScalingSparse) return scaling(name, PRule::inverse_n());
    if (name == kRuntimeVsP || name == kRuntimeVsK || name == kHeatmapKP || name == kCoreRecovery ||
        name == kOvershoot)
        return fixed_n_grid(name);

    std::string valid;
    for (const auto& known : preset_names()) valid += (valid.empty() ? "" : ", ") + known;
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'; valid presets: " + valid);
}

std::string preset_description(std::string_view name) {
    if (name == kScalingDense) return "runtime vs n = 100..1000, p = 0.5, k = ceil(ln n) and ceil(sqrt n)";
    if (name == kScalingSparse) return "runtime vs n = 100..1000, p = 1/n, k = ceil(ln n) and ceil(sqrt n)";
    if (name == kRuntimeVsP) return "runtime vs p (k aggregated), n in {200, 1000}, k = 10..100, p = 0.05..0.95";
    if (name == kRuntimeVsK) return "runtime vs k (p aggregated), n in {200, 1000}, k = 10..100, p = 0.05..0.95";
    if (name == kHeatmapKP) return "runtime over the k x p grid, n in {200, 1000}";
    if (name == kCoreRecovery) return "fraction of runs returning exactly the planted core, k x p grid";
    if (name == kOvershoot) return "mean k - f(final) over the k x p grid";
    preset(name);  // throws with the valid list
    return {};
}

namespace {

ordered_json k_rule_to_json(const KRule& rule) {
    ordered_json j;
    switch (rule.kind) {
        case KRule::Kind::Constant: j["rule"] = "constant"; j["value"] = rule.value; break;
        case KRule::Kind::CeilLn: j["rule"] = "ceil-ln"; break;
        case KRule::Kind::CeilSqrt: j["rule"] = "ceil-sqrt"; break;
        case KRule::Kind::Range:
            j["rule"] = "range";
            j["from"] = rule.from;
            j["to"] = rule.to;
            j["step"] = rule.step;
            break;
    }
    return j;
}

KRule k_rule_from_json(const json& j) {
    const auto rule = j.at("rule").get<std::string>();
    if (rule == "constant") return KRule::constant(j.at("value").get<std::size_t>());
    if (rule == "ceil-ln") return KRule::ceil_ln();
    if (rule == "ceil-sqrt") return KRule::ceil_sqrt();
    if (rule == "range")
        return KRule::range(j.at("from").get<std::size_t>(), j.at("to").get<std::size_t>(),
                            j.value("step", std::size_t{1}));
    throw std::invalid_argument("unknown k rule '" + rule + "'");
}

ordered_json p_rule_to_json(const PRule& rule) {
    ordered_json j;
    switch (rule.kind) {
        case PRule::Kind::Constant: j["rule"] = "constant"; j["value"] = rule.value; break;
        case PRule::Kind::InverseN: j["rule"] = "inverse-n"; break;
        case PRule::Kind::Range:
            j["rule"] = "range";
            j["from"] = rule.from;
            j["to"] = rule.to;
            j["step"] = rule.step;
            break;
    }
    return j;
}

PRule p_rule_from_json(const json& j) {
    const auto rule = j.at("rule").get<std::string>();
    if (rule == "constant") return PRule::constant(j.at("value").get<double>());
    if (rule == "inverse-n") return PRule::inverse_n();
    if (rule == "range")
        return PRule::range(j.at("from").get<double>(), j.at("to").get<double>(), j.at("step").get<double>());
    throw std::invalid_argument("unknown p rule '" + rule + "'");
}

}  // namespace

std::string spec_to_json(const ExperimentSpec& spec) {
    ordered_json j;
    j["name"] = spec.name;
    j["n"] = spec.n_values;
    j["k"] = ordered_json::array();
    for (const auto& rule : spec.k_rules) j["k"].push_back(k_rule_to_json(rule));
    j["p"] = ordered_json::array();
    for (const auto& rule : spec.p_rules) j["p"].push_back(p_rule_to_json(rule));
    j["trials"] = spec.trials;
    ordered_json algorithm;
    algorithm["kind"] = spec.algorithm.restarts ? "restarts" : "plain";
    if (spec.algorithm.restarts) {
        if (spec.algorithm.restart_length)
            algorithm["restart_length"] = *spec.algorithm.restart_length;
        else
            algorithm["restart_length"] = "auto";
    }
    j["algorithm"] = algorithm;
    ordered_json termination;
    termination["rule"] = "target-fitness";
    if (spec.budget)
        termination["budget"] = *spec.budget;
    else
        termination["budget"] = "auto";
    j["termination"] = termination;
    j["master_seed"] = spec.master_seed;
    return j.dump(2) + "\n";
}

ExperimentSpec spec_from_json(const std::string& text) {
    const json j = json::parse(text);
    ExperimentSpec spec;
    spec.name = j.at("name").get<std::string>();
    spec.n_values = j.at("n").get<std::vector<std::size_t>>();
    for (const auto& rule : j.at("k")) spec.k_rules.push_back(k_rule_from_json(rule));
    for (const auto& rule : j.at("p")) spec.p_rules.push_back(p_rule_from_json(rule));
    spec.trials = j.value("trials", std::size_t{100});
    if (j.contains("algorithm")) {
        const auto& a = j.at("algorithm");
        const auto kind = a.value("kind", std::string("plain"));
        if (kind == "restarts") {
            spec.algorithm.restarts = true;
            if (a.contains("restart_length") && !a.at("restart_length").is_string())
                spec.algorithm.restart_length = a.at("restart_length").get<std::uint64_t>();
            else if (a.contains("restart_length") && a.at("restart_length").get<std::string>() != "auto")
                throw std::invalid_argument("restart_length must be an integer or \"auto\"");
        } else if (kind != "plain") {
            throw std::invalid_argument("unknown algorithm kind '" + kind + "'");
        }
    }
    if (j.contains("termination")) {
        const auto& t = j.at("termination");
        const auto rule = t.value("rule", std::string("target-fitness"));
        if (rule != "target-fitness")
            throw std::invalid_argument("experiments only support the target-fitness rule");
        if (t.contains("budget") && !t.at("budget").is_string())
            spec.budget = t.at("budget").get<std::uint64_t>();
        else if (t.contains("budget") && t.at("budget").get<std::string>() != "auto")
            throw std::invalid_argument("budget must be an integer or \"auto\"");
    }
    spec.master_seed = j.value("master_seed", spec.master_seed);
    return spec;
}

std::string format_real(double value) {
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    if (ec != std::errc{}) throw std::runtime_error("format_real: conversion failed");
    return std::string(buffer, end);
}

namespace {

std::string format_optional(const std::optional<double>& value) {
    return value ? format_real(*value) : "NA";
}

}  // namespace

void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records) {
    out << "experiment,n,k,p,trial,seed,runtime,first_feasible,success,recovered,overshoot,restarts\n";
    for (const TrialRecord& r : records) {
        out << r.experiment << ',' << r.n << ',' << r.k << ',' << format_real(r.p) << ',' << r.trial
            << ',' << r.seed << ',' << r.runtime << ','
            << (r.first_feasible ? std::to_string(*r.first_feasible) : std::string("NA")) << ','
            << (r.success ? 1 : 0) << ',' << (r.recovered ? 1 : 0) << ',' << r.overshoot << ','
            << r.restarts << '\n';
    }
}

void write_summary_csv(std::ostream& out, std::span<const CellSummary> cells) {
    out << "experiment,n,k,p,trials,failures,mean_runtime,std_runtime,mean_overshoot,recovery_rate,"
           "mean_first_feasible\n";
    for (const CellSummary& c : cells) {
        out << c.experiment << ',' << c.n << ',' << c.k << ',' << format_real(c.p) << ',' << c.trials
            << ',' << c.failures << ',' << format_optional(c.mean_runtime) << ','
            << format_optional(c.std_runtime) << ',' << format_optional(c.mean_overshoot) << ','
            << format_real(c.recovery_rate) << ',' << format_optional(c.mean_first_feasible) << '\n';
    }
}

}  // namespace pvc::experiment
