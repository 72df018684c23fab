#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "pvc/bitset.hpp"

namespace pvc {

using Edge = std::pair<Vertex, Vertex>;

/// Immutable simple undirected graph on vertices 0..n-1 with packed adjacency rows.
///
/// Rows are symmetric with empty diagonals. Safe to share read-only across threads.
class Graph {
public:
    /// Builds from an edge list. Duplicate pairs collapse; out-of-range endpoints and
    /// self-loops throw std::invalid_argument naming the pair.
    Graph(std::size_t n, std::span<const Edge> edges);

    std::size_t num_vertices() const noexcept { return adjacency_.size(); }
    std::size_t num_edges() const noexcept { return edge_count_; }

    const Bitset& neighbors(Vertex v) const { return adjacency_.at(v); }
    bool has_edge(Vertex u, Vertex v) const { return adjacency_.at(u).test(v); }
    std::size_t degree(Vertex v) const { return adjacency_.at(v).count(); }

    /// Edges with u < v in lexicographic order.
    std::vector<Edge> edges() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<Bitset> adjacency_;
    std::size_t edge_count_ = 0;
};

inline Graph build_graph(std::size_t n, std::span<const Edge> edges) { return Graph(n, edges); }

/// Number of edges with both endpoints outside `cover`.
std::size_t count_uncovered_edges(const Graph& g, const Bitset& cover);

/// Number of uncovered edges incident to v when v itself is outside `cover`:
/// popcount(adj[v] AND NOT cover).
inline std::size_t uncovered_neighbors(const Graph& g, Vertex v, const Bitset& cover) {
    return g.neighbors(v).count_and_not(cover);
}

/// popcount(adj[v] AND fringe).
std::size_t fringe_degree(const Graph& g, Vertex v, const Bitset& fringe);

/// Edge-list text format: header "n m", then one "u v" line per edge (u < v, sorted).
void write_edge_list(std::ostream& out, const Graph& g);

/// Reads the header and exactly m edge lines. Stops after the last edge line so callers
/// can parse trailing sections. Throws std::runtime_error on malformed input.
Graph read_edge_list(std::istream& in);

}  // namespace pvc
