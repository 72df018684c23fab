#include "pvc/ea.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace pvc {

CoverCandidate CoverCandidate::evaluate(const Graph& g, Bitset bits) {
    CoverCandidate x;
    x.uncovered = count_uncovered_edges(g, bits);
    x.ones = bits.count();
    x.bits = std::move(bits);
    return x;
}

std::uint64_t fitness(const Graph& g, const Bitset& x) {
    const std::size_t uncovered = count_uncovered_edges(g, x);
    return x.count() + static_cast<std::uint64_t>(g.num_vertices()) * uncovered;
}

std::uint64_t potential(const Graph& g, const Bitset& x, std::uint64_t k) {
    return potential_of(fitness(g, x), k);
}

void flip_vertex(const Graph& g, CoverCandidate& x, Vertex position) {
    if (x.bits.test(position)) {
        x.bits.reset(position);
        --x.ones;
        x.uncovered += uncovered_neighbors(g, position, x.bits);
    } else {
        x.uncovered -= uncovered_neighbors(g, position, x.bits);
        x.bits.set(position);
        ++x.ones;
    }
}

namespace {

// Reusable buffers for drawing distinct flip positions.
struct MutationScratch {
    std::vector<Vertex> positions;
    Bitset chosen;
};

void mutate_into(const Graph& g, CoverCandidate& child, double rate, Rng& rng,
                 MutationScratch& scratch) {
    const std::size_t n = g.num_vertices();
    const auto flips = static_cast<std::size_t>(rng.binomial(n, rate));
    if (flips == 0) return;

    // Floyd's sampling of `flips` distinct positions out of n.
    auto& positions = scratch.positions;
    positions.clear();
    if (scratch.chosen.size() != n) scratch.chosen = Bitset(n);
    for (std::size_t j = n - flips; j < n; ++j) {
        auto t = static_cast<Vertex>(rng.uniform_below(j + 1));
        if (scratch.chosen.test(t)) t = static_cast<Vertex>(j);
        scratch.chosen.set(t);
        positions.push_back(t);
    }
    for (Vertex v : positions) {
        scratch.chosen.reset(v);
        flip_vertex(g, child, v);
    }
}

CoverCandidate draw_uniform(const Graph& g, Rng& rng) {
    const std::size_t n = g.num_vertices();
    Bitset bits(n);
    for (std::size_t i = 0; i < n; i += Bitset::kWordBits) {
        const std::uint64_t word = rng();
        const std::size_t span = std::min<std::size_t>(Bitset::kWordBits, n - i);
        for (std::size_t b = 0; b < span; ++b)
            if ((word >> b) & 1U) bits.set(i + b);
    }
    return CoverCandidate::evaluate(g, std::move(bits));
}

RunResult run_impl(const Graph& g, const EAConfig& cfg, Rng& rng, const Bitset* core,
                   std::uint64_t period) {
    const std::size_t n = g.num_vertices();
    cfg.validate(n);
    if (core != nullptr && core->size() != n)
        throw std::invalid_argument("core bitset size does not match the graph");

    const double rate = cfg.rate_for(n);
    const Termination& stop = cfg.termination;
    const std::uint64_t stride =
        cfg.trace_stride != 0 ? cfg.trace_stride : (n <= 1000 ? 1 : (n + 999) / 1000);

    RunResult result;
    MutationScratch scratch;

    CoverCandidate x = draw_uniform(g, rng);
    CoverCandidate y = x;

    auto record = [&](std::uint64_t t) {
        if (x.feasible() && !result.first_feasible_at) result.first_feasible_at = t;
        if (cfg.trace && t % stride == 0) {
            const std::uint64_t f = x.fitness();
            result.trace.push_back(TracePoint{
                t, f, potential_of(f, stop.target), x.uncovered,
                core != nullptr ? static_cast<std::int64_t>(core->count_and_not(x.bits)) : -1});
        }
    };
    auto reached = [&]() {
        switch (stop.rule) {
            case StopRule::TargetFitness: return x.feasible() && x.fitness() <= stop.target;
            case StopRule::FirstFeasible: return x.feasible();
            case StopRule::Budget: return false;
        }
        return false;
    };

    std::uint64_t evaluations = 1;
    record(0);
    bool done = reached();
    while (!done && evaluations < stop.max_evaluations) {
        const std::uint64_t t = evaluations;
        if (period != 0 && t % period == 0) {
            x = draw_uniform(g, rng);
            ++result.restarts_used;
            result.restart_iterations.push_back(t);
        } else {
            y.bits = x.bits;
            y.ones = x.ones;
            y.uncovered = x.uncovered;
            mutate_into(g, y, rate, rng, scratch);
            if (y.fitness() <= x.fitness()) std::swap(x, y);
        }
        ++evaluations;
        record(t);
        done = reached();
    }

    result.iterations = evaluations;
    result.success = stop.rule == StopRule::Budget ? true : done;
    const std::uint64_t f = x.fitness();
    result.overshoot = stop.target > f ? stop.target - f : 0;
    result.core_recovered = core != nullptr && x.bits == *core;
    result.final = std::move(x);
    return result;
}

}  // namespace

CoverCandidate mutate(const Graph& g, const CoverCandidate& parent, double rate, Rng& rng) {
    if (!(rate > 0.0 && rate < 1.0)) throw std::invalid_argument("mutation rate must lie in (0, 1)");
    if (parent.bits.size() != g.num_vertices())
        throw std::invalid_argument("candidate length does not match the graph");
    CoverCandidate child = parent;
    MutationScratch scratch;
    mutate_into(g, child, rate, rng, scratch);
    return child;
}

CoverCandidate random_candidate(const Graph& g, Rng& rng) { return draw_uniform(g, rng); }

double EAConfig::rate_for(std::size_t n) const {
    if (mutation_rate) return *mutation_rate;
    return n >= 2 ? 1.0 / static_cast<double>(n) : 0.5;
}

void EAConfig::validate(std::size_t n) const {
    const double rate = rate_for(n);
    if (!(rate > 0.0 && rate < 1.0))
        throw std::invalid_argument("mutation rate " + std::to_string(rate) + " outside (0, 1)");
    if (termination.max_evaluations == 0)
        throw std::invalid_argument("evaluation budget must be positive");
    if (restart_length && *restart_length == 0)
        throw std::invalid_argument("restart length must be at least 1");
}

std::uint64_t default_budget(std::size_t n) {
    const double log_n = std::ceil(std::log(static_cast<double>(n)));
    return 10000ULL * n * std::max<std::uint64_t>(1, static_cast<std::uint64_t>(log_n));
}

std::uint64_t auto_restart_length(std::size_t n) {
    const double len = 3.0 * std::numbers::e * static_cast<double>(n) * std::log(static_cast<double>(n));
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(len)));
}

RunResult run_ea(const Graph& g, const EAConfig& cfg, const Bitset* core) {
    Rng rng(cfg.seed, 0);
    return run_ea(g, cfg, rng, core);
}

RunResult run_ea(const Graph& g, const EAConfig& cfg, Rng& rng, const Bitset* core) {
    return run_impl(g, cfg, rng, core, 0);
}

RunResult run_ea_with_restarts(const Graph& g, const EAConfig& cfg, const Bitset* core) {
    Rng rng(cfg.seed, 0);
    return run_ea_with_restarts(g, cfg, rng, core);
}

RunResult run_ea_with_restarts(const Graph& g, const EAConfig& cfg, Rng& rng, const Bitset* core) {
    if (!cfg.restart_length) throw std::invalid_argument("cold restarts need a restart length");
    return run_impl(g, cfg, rng, core, *cfg.restart_length);
}

void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace) {
    out << "iter,f,phi,uncovered,z\n";
    for (const auto& point : trace) {
        out << point.iteration << ',' << point.fitness << ',' << point.potential << ','
            << point.uncovered << ',' << point.core_missing << '\n';
    }
}

}  // namespace pvc
