#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pvc::experiment {

/// How the core size is chosen for a given n.
struct KRule {
    enum class Kind { Constant, CeilLn, CeilSqrt, Range };
    Kind kind = Kind::Constant;
    std::size_t value = 0;
    std::size_t from = 0, to = 0, step = 1;

    static KRule constant(std::size_t k) { return {Kind::Constant, k, 0, 0, 1}; }
    static KRule ceil_ln() { return {Kind::CeilLn, 0, 0, 0, 1}; }
    static KRule ceil_sqrt() { return {Kind::CeilSqrt, 0, 0, 0, 1}; }
    static KRule range(std::size_t from, std::size_t to, std::size_t step) {
        return {Kind::Range, 0, from, to, step};
    }

    std::vector<std::size_t> expand(std::size_t n) const;
    std::string label() const;
};

/// How the edge probability is chosen for a given n.
struct PRule {
    enum class Kind { Constant, InverseN, Range };
    Kind kind = Kind::Constant;
    double value = 0.5;
    double from = 0.0, to = 0.0, step = 1.0;

    static PRule constant(double p) { return {Kind::Constant, p, 0.0, 0.0, 1.0}; }
    static PRule inverse_n() { return {Kind::InverseN, 0.0, 0.0, 0.0, 1.0}; }
    static PRule range(double from, double to, double step) { return {Kind::Range, 0.0, from, to, step}; }

    /// Range values are from + i*step rounded to 12 decimals, up to `to` inclusive.
    std::vector<double> expand(std::size_t n) const;
};

struct Algorithm {
    bool restarts = false;
    /// Fixed period; unset means floor(3 e n ln n).
    std::optional<std::uint64_t> restart_length;
};

struct ExperimentSpec {
    std::string name;
    std::vector<std::size_t> n_values;
    std::vector<KRule> k_rules;
    std::vector<PRule> p_rules;
    std::size_t trials = 100;
    Algorithm algorithm;
    /// Evaluation cap per trial; unset means 10^4 * n * ceil(ln n).
    std::optional<std::uint64_t> budget;
    std::uint64_t master_seed = 0x5EED;

    /// Rejects the spec before any work: empty grids, trials == 0, any cell with k > n or
    /// p outside (0, 1].
    void validate() const;

    /// Desk-scale copy: n values and explicit k values divided by `divisor` (floored, at least 1).
    ExperimentSpec scaled(std::size_t divisor) const;
};

/// One (n, k, p) grid point. `label` is the experiment column: the spec name, suffixed with
/// "/<k-rule>" when the spec has several k-rules.
struct Cell {
    std::size_t ordinal = 0;
    std::string label;
    std::size_t n = 0;
    std::size_t k = 0;
    double p = 0.0;
};

/// Cells in order: n, then k-rule, then k value, then p-rule, then p value.
std::vector<Cell> expand_cells(const ExperimentSpec& spec);

struct TrialRecord {
    std::string experiment;
    std::size_t n = 0;
    std::size_t k = 0;
    double p = 0.0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::uint64_t runtime = 0;
    std::optional<std::uint64_t> first_feasible;
    bool success = false;
    bool recovered = false;
    std::uint64_t overshoot = 0;
    std::uint64_t restarts = 0;
    /// Recounted from the final bitstring without the EA's incremental caches.
    std::uint64_t final_fitness = 0;
    std::uint64_t final_uncovered = 0;

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct CellSummary {
    std::string experiment;
    std::size_t n = 0;
    std::size_t k = 0;
    double p = 0.0;
    std::size_t trials = 0;
    std::size_t failures = 0;
    /// Over successful trials; absent when every trial failed.
    std::optional<double> mean_runtime;
    std::optional<double> std_runtime;
    std::optional<double> mean_overshoot;
    double recovery_rate = 0.0;
    std::optional<double> mean_first_feasible;
    /// Fewer than two successful trials, so std_runtime is reported as 0.
    bool degenerate = false;

    friend bool operator==(const CellSummary&, const CellSummary&) = default;
};

struct ExperimentResult {
    std::vector<TrialRecord> trials;
    std::vector<CellSummary> cells;
};

/// Samples a fresh instance from stream 0 of the trial seed and runs the EA on stream 1.
TrialRecord run_trial(const ExperimentSpec& spec, const Cell& cell, std::size_t trial);

/// Runs every (cell, trial) on `workers` threads (0 = hardware concurrency). Output order is
/// by cell ordinal then trial ordinal, independent of scheduling.
ExperimentResult run_experiment(const ExperimentSpec& spec, std::size_t workers = 0);

/// Mean and sample (n-1) standard deviation over successful trials of one cell. Throws on an
/// empty span, on records from different cells, or on a success record whose final bitstring
/// is not a cover of size <= k.
CellSummary aggregate(std::span<const TrialRecord> records);

std::vector<std::string> preset_names();
/// Throws std::invalid_argument listing the valid names for an unknown one.
ExperimentSpec preset(std::string_view name);
std::string preset_description(std::string_view name);

std::string spec_to_json(const ExperimentSpec& spec);
ExperimentSpec spec_from_json(const std::string& text);

void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records);
void write_summary_csv(std::ostream& out, std::span<const CellSummary> cells);

/// Shortest decimal that round-trips to the same double, e.g. 0.05.
std::string format_real(double value);

}  // namespace pvc::experiment
