#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "pvc/bitset.hpp"
#include "pvc/graph.hpp"
#include "pvc/rng.hpp"

namespace pvc {

/// Parameters of the planted vertex cover model M(n, k, p).
struct ModelParams {
    std::size_t n = 1;
    std::size_t k = 0;
    double p = 0.5;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument unless n >= 1, k <= n and 0 < p <= 1.
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// A graph from M(n, k, p) together with its planted core C.
///
/// Every edge has an endpoint in the core, so the core is a k-vertex cover.
struct PlantedInstance {
    Graph graph;
    Bitset core;
    ModelParams params;

    std::size_t n() const noexcept { return graph.num_vertices(); }
    std::size_t k() const noexcept { return params.k; }
    /// V \ C.
    Bitset fringe() const { return ~core; }
};

/// Samples with Rng(params.seed, 0).
PlantedInstance sample_instance(const ModelParams& params);

/// Draws the core as a Fisher-Yates prefix, then flips a p-coin for each core-incident pair
/// in order (core vertex ascending, partner ascending). Fringe-fringe pairs are never edges.
PlantedInstance sample_instance(const ModelParams& params, Rng& rng);

/// floor(delta * (n - k)), the size of the fringe subsets quantified over by delta-heaviness.
std::size_t heavy_subset_size(std::size_t n, std::size_t k, double delta);

/// True iff every core vertex has at least ln n neighbours in every fringe subset of size
/// floor(delta*(n-k)). Uses the adversarial-subset closed form: the worst subset takes all
/// fringe non-neighbours first, leaving max(0, d_v - ((n-k) - s)) neighbours.
/// Throws std::invalid_argument for delta outside (0,1), k == 0, k == n, or s == 0.
bool is_delta_heavy(const PlantedInstance& inst, double delta);

struct IndependentSetOptions {
    /// Largest restricted vertex set solved exactly by default.
    std::size_t exact_limit = 32;
    /// Permit sets above exact_limit (up to 64 vertices).
    bool allow_large = false;
};

/// Exact maximum independent set size of the subgraph induced by `restrict`, by
/// branch-and-bound over 64-bit vertex masks.
std::size_t max_independent_set(const Graph& g, const Bitset& restrict,
                                const IndependentSetOptions& options = {});

std::size_t max_core_independent_set(const PlantedInstance& inst,
                                     const IndependentSetOptions& options = {});

/// (1 + 2/p) ln k + 1: with high probability no independent set in the core is larger.
double core_independent_set_bound(std::size_t k, double p);

/// sqrt((1 - ln delta) / 2) for delta in (1/e, 1); throws std::invalid_argument otherwise.
double small_k_density_threshold(double delta);

/// Contents of an instance file: the graph and, when present, its `core:` line.
struct InstanceFile {
    Graph graph;
    std::optional<Bitset> core;
};

/// Edge list followed by "core: v1 v2 ... vk" (sorted).
void write_instance(std::ostream& out, const PlantedInstance& inst);
InstanceFile read_instance(std::istream& in);

/// JSON sidecar with the generating parameters.
std::string params_to_json(const ModelParams& params);
ModelParams params_from_json(const std::string& text);

}  // namespace pvc
