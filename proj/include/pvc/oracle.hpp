#pragma once

#include <cstddef>
#include <cstdint>

#include "pvc/bitset.hpp"
#include "pvc/graph.hpp"
#include "pvc/planted_model.hpp"

// Brute-force references. Nothing here is used by the EA or the experiment harness;
// tests and the `verify` subcommand compare the fast paths against these.
namespace pvc::oracle {

struct OracleLimit {
    std::size_t max_n_exhaustive = 20;
    std::uint64_t max_subsets = 10'000'000;
};

struct CoverWitness {
    std::size_t size = 0;
    Bitset cover;
};

/// Smallest vertex cover by enumerating all 2^n masks in increasing numeric order
/// (bit i = vertex i). The witness is the first minimum mask in that order.
CoverWitness min_vertex_cover_exact(const Graph& g, const OracleLimit& limit = {});

/// Largest independent set inside `restrict`, by enumerating every subset of it.
std::size_t max_independent_set_exact(const Graph& g, const Bitset& restrict,
                                      const OracleLimit& limit = {});

/// Literal evaluation of delta-heaviness: every size-floor(delta(n-k)) fringe subset,
/// every core vertex, at least ln n neighbours.
bool is_delta_heavy_exhaustive(const PlantedInstance& inst, double delta,
                               const OracleLimit& limit = {});

/// |x| + n * uncovered by a plain loop over the edge list; shares no code with count_uncovered_edges.
std::uint64_t fitness_reference(const Graph& g, const Bitset& x);

/// Binomial coefficient saturating at UINT64_MAX.
std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t r);

/// The induced subgraph on `subset`, relabelled 0..|subset|-1 in increasing order.
Graph induced_subgraph(const Graph& g, const Bitset& subset);

}  // namespace pvc::oracle
