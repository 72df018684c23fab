#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pvc/bitset.hpp"
#include "pvc/graph.hpp"
#include "pvc/rng.hpp"

namespace pvc {

/// Bitstring x over the vertices with cached |x| and uncovered-edge count.
struct CoverCandidate {
    Bitset bits;
    std::size_t ones = 0;
    std::size_t uncovered = 0;

    /// Full evaluation of both caches.
    static CoverCandidate evaluate(const Graph& g, Bitset bits);

    bool feasible() const noexcept { return uncovered == 0; }
    /// |x| + n * uncovered from the caches.
    std::uint64_t fitness() const noexcept {
        return ones + static_cast<std::uint64_t>(bits.size()) * uncovered;
    }

    friend bool operator==(const CoverCandidate&, const CoverCandidate&) = default;
};

/// f(x) = |x| + n * |{uv in E : x[u] = x[v] = 0}|, evaluated from scratch.
std::uint64_t fitness(const Graph& g, const Bitset& x);
inline std::uint64_t fitness(const Graph& g, const CoverCandidate& x) { return fitness(g, x.bits); }

/// max(0, f(x) - k).
std::uint64_t potential(const Graph& g, const Bitset& x, std::uint64_t k);
inline std::uint64_t potential_of(std::uint64_t f, std::uint64_t k) noexcept { return f > k ? f - k : 0; }

/// Flips `position` and updates the caches from that vertex's neighbourhood only.
void flip_vertex(const Graph& g, CoverCandidate& x, Vertex position);

/// Standard bit mutation: draws the flip count from Binomial(n, rate), then that many
/// distinct positions uniformly; caches are updated incrementally.
CoverCandidate mutate(const Graph& g, const CoverCandidate& parent, double rate, Rng& rng);

/// Uniform point of {0,1}^n with evaluated caches.
CoverCandidate random_candidate(const Graph& g, Rng& rng);

enum class StopRule {
    TargetFitness,  ///< stop once x is feasible with f(x) <= target
    Budget,         ///< always spend max_evaluations
    FirstFeasible,  ///< stop at the first feasible x
};

struct Termination {
    StopRule rule = StopRule::TargetFitness;
    /// The k that f is compared against; also the reference for potential and overshoot.
    std::uint64_t target = 0;
    /// Safety cap on fitness evaluations (initial evaluation included).
    std::uint64_t max_evaluations = 0;
};

struct EAConfig {
    /// Defaults to 1/n (0.5 when n == 1).
    std::optional<double> mutation_rate;
    Termination termination;
    /// Cold-restart period; only read by run_ea_with_restarts.
    std::optional<std::uint64_t> restart_length;
    std::uint64_t seed = 0;
    bool trace = false;
    /// Record every stride-th iteration; 0 picks 1 for n <= 1000 and ceil(n/1000) above.
    std::uint64_t trace_stride = 0;

    /// Throws std::invalid_argument on a rate outside (0,1), a zero budget or a zero period.
    void validate(std::size_t n) const;
    double rate_for(std::size_t n) const;
};

struct TracePoint {
    std::uint64_t iteration = 0;
    std::uint64_t fitness = 0;
    std::uint64_t potential = 0;
    std::uint64_t uncovered = 0;
    /// Core vertices outside the cover, or -1 when no core was supplied.
    std::int64_t core_missing = -1;

    friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct RunResult {
    /// Total fitness evaluations; the initial candidate is iteration 0.
    std::uint64_t iterations = 0;
    std::optional<std::uint64_t> first_feasible_at;
    CoverCandidate final;
    bool success = false;
    bool core_recovered = false;
    std::uint64_t overshoot = 0;
    std::uint64_t restarts_used = 0;
    /// Iterations at which the candidate was re-drawn (cold restarts only).
    std::vector<std::uint64_t> restart_iterations;
    std::vector<TracePoint> trace;

    std::uint64_t final_fitness() const noexcept { return final.fitness(); }

    friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// 10^4 * n * max(1, ceil(ln n)).
std::uint64_t default_budget(std::size_t n);

/// floor(3 e n ln n), at least 1.
std::uint64_t auto_restart_length(std::size_t n);

/// The (1+1) EA: uniform start, standard bit mutation, accept iff f(y) <= f(x).
/// `core`, when given, enables recovery detection and the |Z| trace column.
RunResult run_ea(const Graph& g, const EAConfig& cfg, const Bitset* core = nullptr);
RunResult run_ea(const Graph& g, const EAConfig& cfg, Rng& rng, const Bitset* core = nullptr);

/// The (1+1) EA with cold restarts: at every iteration t > 0 with t mod l == 0 the candidate
/// is re-drawn uniformly at random (that draw is the iteration's evaluation).
RunResult run_ea_with_restarts(const Graph& g, const EAConfig& cfg, const Bitset* core = nullptr);
RunResult run_ea_with_restarts(const Graph& g, const EAConfig& cfg, Rng& rng,
                               const Bitset* core = nullptr);

/// CSV with header iter,f,phi,uncovered,z.
void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace);

}  // namespace pvc
