#include "pvc/oracle.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace pvc::oracle {

namespace {

void check_cap(std::size_t size, const OracleLimit& limit, const char* what) {
    if (size > limit.max_n_exhaustive || size > 30) {
        throw std::invalid_argument(std::string(what) + ": " + std::to_string(size) +
                                    " vertices exceed the exhaustive cap of " +
                                    std::to_string(std::min<std::size_t>(limit.max_n_exhaustive, 30)));
    }
}

}  // namespace

CoverWitness min_vertex_cover_exact(const Graph& g, const OracleLimit& limit) {
    const std::size_t n = g.num_vertices();
    check_cap(n, limit, "min vertex cover");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_masks;
    for (const auto& [u, v] : g.edges()) edge_masks.emplace_back(1U << u, 1U << v);

    std::size_t best = n + 1;
    std::uint32_t witness = 0;
    const std::uint32_t end = n == 32 ? 0 : (1U << n);
    for (std::uint32_t mask = 0; mask < end; ++mask) {
        const auto size = static_cast<std::size_t>(std::popcount(mask));
        if (size >= best) continue;
        bool covers = true;
        for (const auto& [mu, mv] : edge_masks) {
            if ((mask & (mu | mv)) == 0) {
                covers = false;
                break;
            }
        }
        if (covers) {
            best = size;
            witness = mask;
        }
    }
    CoverWitness out{best, Bitset(n)};
    for (std::size_t v = 0; v < n; ++v)
        if ((witness >> v) & 1U) out.cover.set(v);
    return out;
}

std::size_t max_independent_set_exact(const Graph& g, const Bitset& restrict,
                                      const OracleLimit& limit) {
    if (restrict.size() != g.num_vertices())
        throw std::invalid_argument("restriction set size does not match the graph");
    const std::vector<Vertex> local = restrict.indices();
    check_cap(local.size(), limit, "max independent set");

    std::vector<std::uint32_t> adj(local.size(), 0);
    for (std::size_t i = 0; i < local.size(); ++i)
        for (std::size_t j = 0; j < local.size(); ++j)
            if (g.has_edge(local[i], local[j])) adj[i] |= 1U << j;

    std::size_t best = 0;
    const std::uint32_t end = 1U << local.size();
    for (std::uint32_t subset = 0; subset < end; ++subset) {
        const auto size = static_cast<std::size_t>(std::popcount(subset));
        if (size <= best) continue;
        bool independent = true;
        for (std::uint32_t rest = subset; rest != 0 && independent; rest &= rest - 1)
            independent = (adj[std::countr_zero(rest)] & subset) == 0;
        if (independent) best = size;
    }
    return best;
}

bool is_delta_heavy_exhaustive(const PlantedInstance& inst, double delta, const OracleLimit& limit) {
    const std::size_t n = inst.n();
    const std::vector<Vertex> core = inst.core.indices();
    const std::vector<Vertex> fringe = inst.fringe().indices();
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    const auto s = static_cast<std::size_t>(std::floor(delta * static_cast<double>(fringe.size())));
    if (binomial_saturating(fringe.size(), s) > limit.max_subsets) {
        throw std::invalid_argument("delta-heaviness: C(" + std::to_string(fringe.size()) + "," +
                                    std::to_string(s) + ") subsets exceed the enumeration cap");
    }
    const double threshold = std::log(static_cast<double>(n));

    // Lexicographic walk over index combinations pick[0] < ... < pick[s-1].
    std::vector<std::size_t> pick(s);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    while (true) {
        for (Vertex v : core) {
            std::size_t hits = 0;
            for (std::size_t idx : pick)
                if (inst.graph.has_edge(v, fringe[idx])) ++hits;
            if (static_cast<double>(hits) < threshold) return false;
        }
        std::size_t i = s;
        while (i > 0 && pick[i - 1] == fringe.size() - s + (i - 1)) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < s; ++j) pick[j] = pick[j - 1] + 1;
    }
    return true;
}

std::uint64_t fitness_reference(const Graph& g, const Bitset& x) {
    if (x.size() != g.num_vertices()) throw std::invalid_argument("candidate length mismatch");
    std::uint64_t uncovered = 0;
    for (const auto& [u, v] : g.edges())
        if (!x.test(u) && !x.test(v)) ++uncovered;
    std::uint64_t ones = 0;
    for (std::size_t i = 0; i < x.size(); ++i) ones += x.test(i) ? 1 : 0;
    return ones + g.num_vertices() * uncovered;
}

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t r) {
    if (r > n) return 0;
    r = std::min(r, n - r);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        const std::uint64_t factor = n - r + i;
        // result * factor / i is exact at each step; guard the multiplication.
        if (result > std::numeric_limits<std::uint64_t>::max() / factor)
            return std::numeric_limits<std::uint64_t>::max();
        result = result * factor / i;
    }
    return result;
}

Graph induced_subgraph(const Graph& g, const Bitset& subset) {
    const std::vector<Vertex> local = subset.indices();
    if (local.empty()) throw std::invalid_argument("induced subgraph of an empty set");
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < local.size(); ++i)
        for (std::size_t j = i + 1; j < local.size(); ++j)
            if (g.has_edge(local[i], local[j]))
                edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
    return Graph(local.size(), edges);
}

}  // namespace pvc::oracle
