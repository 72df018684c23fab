#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "pvc/experiment.hpp"
#include "pvc/rng.hpp"

namespace pvc::experiment {
namespace {

TrialRecord record(std::uint64_t runtime, bool success, bool recovered = false, std::uint64_t overshoot = 0) {
    TrialRecord r;
    r.experiment = "unit";
    r.n = 50;
    r.k = 5;
    r.p = 0.5;
    r.runtime = runtime;
    r.first_feasible = runtime / 2;
    r.success = success;
    r.recovered = recovered;
    r.overshoot = overshoot;
    r.final_fitness = success ? 5 - overshoot : 60;
    r.final_uncovered = success ? 0 : 1;
    return r;
}

ExperimentSpec tiny_spec() {
    ExperimentSpec spec;
    spec.name = "tiny";
    spec.n_values = {20, 30};
    spec.k_rules = {KRule::constant(3), KRule::ceil_ln()};
    spec.p_rules = {PRule::constant(0.5), PRule::inverse_n()};
    spec.trials = 4;
    spec.master_seed = 99;
    return spec;
}

std::string trials_csv(const ExperimentResult& result) {
    std::ostringstream out;
    write_trials_csv(out, result.trials);
    return out.str();
}

TEST(Aggregate, MeanAndSampleStd) {
    const std::vector<TrialRecord> records{record(10, true, true), record(20, true)};
    const CellSummary s = aggregate(records);
    EXPECT_DOUBLE_EQ(*s.mean_runtime, 15.0);
    EXPECT_NEAR(*s.std_runtime, std::sqrt(50.0), 1e-12);
    EXPECT_NEAR(*s.std_runtime, 7.071, 5e-4);
    EXPECT_DOUBLE_EQ(s.recovery_rate, 0.5);
    EXPECT_EQ(s.failures, 0U);
    EXPECT_FALSE(s.degenerate);
}

TEST(Aggregate, SingleTrialIsDegenerate) {
    const std::vector<TrialRecord> records{record(10, true)};
    const CellSummary s = aggregate(records);
    EXPECT_DOUBLE_EQ(*s.std_runtime, 0.0);
    EXPECT_TRUE(s.degenerate);
}

TEST(Aggregate, AllFailedHasNoMean) {
    const std::vector<TrialRecord> records{record(100, false), record(100, false), record(100, false)};
    const CellSummary s = aggregate(records);
    EXPECT_FALSE(s.mean_runtime.has_value());
    EXPECT_FALSE(s.std_runtime.has_value());
    EXPECT_EQ(s.failures, s.trials);
    EXPECT_TRUE(s.mean_first_feasible.has_value());
}

TEST(Aggregate, FailuresExcludedFromRuntimeStats) {
    const std::vector<TrialRecord> records{record(10, true, false, 2), record(1000, false), record(30, true)};
    const CellSummary s = aggregate(records);
    EXPECT_DOUBLE_EQ(*s.mean_runtime, 20.0);
    EXPECT_DOUBLE_EQ(*s.mean_overshoot, 1.0);
    EXPECT_EQ(s.failures, 1U);
    EXPECT_DOUBLE_EQ(s.recovery_rate, 0.0);
}

TEST(Aggregate, Rejections) {
    EXPECT_THROW(aggregate(std::span<const TrialRecord>{}), std::invalid_argument);
    std::vector<TrialRecord> mixed{record(10, true), record(20, true)};
    mixed[1].k = 6;
    EXPECT_THROW(aggregate(mixed), std::invalid_argument);
    std::vector<TrialRecord> bogus{record(10, true)};
    bogus[0].final_uncovered = 2;
    EXPECT_THROW(aggregate(bogus), std::logic_error);
    bogus[0].final_uncovered = 0;
    bogus[0].final_fitness = 6;
    EXPECT_THROW(aggregate(bogus), std::logic_error);
}

TEST(Rules, Expansion) {
    EXPECT_EQ(KRule::ceil_ln().expand(100), (std::vector<std::size_t>{5}));
    EXPECT_EQ(KRule::ceil_sqrt().expand(200), (std::vector<std::size_t>{15}));
    EXPECT_EQ(KRule::range(10, 100, 10).expand(200).size(), 10U);
    EXPECT_DOUBLE_EQ(PRule::inverse_n().expand(200)[0], 1.0 / 200);
    const auto ps = PRule::range(0.05, 0.95, 0.05).expand(100);
    ASSERT_EQ(ps.size(), 19U);
    EXPECT_EQ(format_real(ps[2]), "0.15");
    EXPECT_EQ(format_real(ps.back()), "0.95");
    EXPECT_EQ(format_real(0.5), "0.5");
}

TEST(Presets, NamesAndShapes) {
    const auto names = preset_names();
    EXPECT_EQ(names.size(), 7U);
    for (const auto& name : names) {
        const ExperimentSpec spec = preset(name);
        EXPECT_EQ(spec.name, name);
        EXPECT_EQ(spec.trials, 100U);
        EXPECT_NO_THROW(spec.validate()) << name;
        EXPECT_FALSE(preset_description(name).empty());
    }

    const ExperimentSpec heat = preset("heatmap-kp");
    EXPECT_EQ(heat.n_values, (std::vector<std::size_t>{200, 1000}));
    const auto cells = expand_cells(heat);
    EXPECT_EQ(cells.size(), 2U * 10U * 19U);
    EXPECT_EQ(cells.front().k, 10U);
    EXPECT_EQ(cells[19 * 10 - 1].k, 100U);

    const ExperimentSpec dense = preset("scaling-dense");
    EXPECT_EQ(dense.n_values.size(), 10U);
    EXPECT_EQ(dense.n_values.front(), 100U);
    EXPECT_EQ(dense.n_values.back(), 1000U);
    EXPECT_EQ(dense.k_rules.size(), 2U);
    EXPECT_DOUBLE_EQ(expand_cells(dense).front().p, 0.5);

    const auto sparse = expand_cells(preset("scaling-sparse"));
    EXPECT_DOUBLE_EQ(sparse.front().p, 1.0 / 100);
    EXPECT_EQ(sparse.front().label, "scaling-sparse/k=ceil-ln");
    EXPECT_EQ(sparse[1].label, "scaling-sparse/k=ceil-sqrt");
}

TEST(Presets, UnknownNameListsValidOnes) {
    try {
        preset("nope");
        FAIL();
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        for (const auto& name : preset_names()) EXPECT_NE(msg.find(name), std::string::npos);
    }
}

TEST(Presets, DeskScale) {
    const ExperimentSpec dense = preset("scaling-dense").scaled(10);
    EXPECT_EQ(dense.n_values.front(), 10U);
    EXPECT_EQ(dense.n_values.back(), 100U);
    const ExperimentSpec heat = preset("heatmap-kp").scaled(10);
    EXPECT_EQ(heat.n_values, (std::vector<std::size_t>{20, 100}));
    const auto ks = heat.k_rules.front().expand(20);
    EXPECT_EQ(ks.front(), 1U);
    EXPECT_EQ(ks.back(), 10U);
    EXPECT_NO_THROW(heat.validate());
    EXPECT_THROW(preset("heatmap-kp").scaled(0), std::invalid_argument);
}

TEST(Spec, JsonRoundTrip) {
    for (const auto& name : preset_names()) {
        const std::string text = spec_to_json(preset(name));
        EXPECT_EQ(spec_to_json(spec_from_json(text)), text) << name;
    }
    ExperimentSpec spec = tiny_spec();
    spec.algorithm = Algorithm{true, 500};
    spec.budget = 12345;
    const std::string text = spec_to_json(spec);
    const ExperimentSpec back = spec_from_json(text);
    EXPECT_TRUE(back.algorithm.restarts);
    EXPECT_EQ(back.algorithm.restart_length, std::optional<std::uint64_t>(500));
    EXPECT_EQ(back.budget, std::optional<std::uint64_t>(12345));
    EXPECT_EQ(spec_to_json(back), text);
    EXPECT_THROW(spec_from_json(R"({"name":"x","n":[5],"k":[{"rule":"cubic"}],"p":[]})"), std::invalid_argument);
}

TEST(Spec, ValidationRejectsBadCellsBeforeWork) {
    ExperimentSpec spec = tiny_spec();
    spec.k_rules = {KRule::constant(25)};
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    EXPECT_THROW(run_experiment(spec, 1), std::invalid_argument);
    spec = tiny_spec();
    spec.p_rules = {PRule::constant(0.0)};
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec = tiny_spec();
    spec.trials = 0;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec = tiny_spec();
    spec.n_values.clear();
    EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(RunExperiment, ReproducibleAcrossWorkerCounts) {
    const ExperimentSpec spec = tiny_spec();
    const ExperimentResult one = run_experiment(spec, 1);
    const std::string reference = trials_csv(one);
    for (std::size_t workers : {1U, 3U, 8U}) {
        const ExperimentResult again = run_experiment(spec, workers);
        EXPECT_EQ(trials_csv(again), reference) << workers;
        EXPECT_EQ(again.cells, one.cells);
    }
    ExperimentSpec reseeded = spec;
    reseeded.master_seed = 100;
    EXPECT_NE(trials_csv(run_experiment(reseeded, 2)), reference);
}

TEST(RunExperiment, LayoutAggregatesAndReplay) {
    const ExperimentSpec spec = tiny_spec();
    const ExperimentResult result = run_experiment(spec, 2);
    const auto cells = expand_cells(spec);
    ASSERT_EQ(result.cells.size(), cells.size());
    ASSERT_EQ(result.trials.size(), cells.size() * spec.trials);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const std::span<const TrialRecord> slice(result.trials.data() + c * spec.trials, spec.trials);
        EXPECT_EQ(aggregate(slice), result.cells[c]);
        for (std::size_t t = 0; t < spec.trials; ++t) {
            const TrialRecord& r = slice[t];
            EXPECT_EQ(r.trial, t);
            EXPECT_EQ(r.seed, derive_seed(spec.master_seed, c, t));
            EXPECT_EQ(r.n, cells[c].n);
            if (r.success) {
                EXPECT_EQ(r.final_uncovered, 0U);
                EXPECT_LE(r.final_fitness, r.k);
            }
        }
        EXPECT_EQ(run_trial(spec, cells[c], 1), slice[1]);
    }
}

TEST(RunExperiment, RestartVariantCountsRestarts) {
    ExperimentSpec spec;
    spec.name = "restart";
    spec.n_values = {40};
    spec.k_rules = {KRule::constant(20)};
    spec.p_rules = {PRule::constant(0.1)};
    spec.trials = 3;
    spec.algorithm = Algorithm{true, 30};
    spec.budget = 200;
    const ExperimentResult result = run_experiment(spec, 1);
    for (const auto& r : result.trials) {
        if (!r.success) EXPECT_EQ(r.restarts, (200 - 1) / 30);
        EXPECT_LE(r.runtime, 200U);
    }
}

TEST(Csv, HeadersAndNA) {
    std::ostringstream trials, summary;
    write_trials_csv(trials, std::vector<TrialRecord>{});
    EXPECT_EQ(trials.str(),
              "experiment,n,k,p,trial,seed,runtime,first_feasible,success,recovered,overshoot,restarts\n");
    const std::vector<TrialRecord> failed{record(100, false), record(100, false)};
    write_summary_csv(summary, std::vector<CellSummary>{aggregate(failed)});
    EXPECT_EQ(summary.str(),
              "experiment,n,k,p,trials,failures,mean_runtime,std_runtime,mean_overshoot,recovery_rate,"
              "mean_first_feasible\nunit,50,5,0.5,2,2,NA,NA,NA,0,50\n");
}

}  // namespace
}  // namespace pvc::experiment
