#include "pvc/graph.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pvc {

Graph::Graph(std::size_t n, std::span<const Edge> edges) {
    if (n == 0) throw std::invalid_argument("graph must have at least one vertex");
    adjacency_.assign(n, Bitset(n));
    for (const auto& [u, v] : edges) {
        if (u >= n || v >= n || u == v) {
            std::ostringstream msg;
            msg << "invalid edge (" << u << "," << v << ") for n=" << n
                << (u == v ? ": self-loop" : ": vertex out of range");
            throw std::invalid_argument(msg.str());
        }
        if (!adjacency_[u].test(v)) {
            adjacency_[u].set(v);
            adjacency_[v].set(u);
            ++edge_count_;
        }
    }
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    const std::size_t n = num_vertices();
    for (std::size_t u = 0; u < n; ++u) {
        const Bitset& row = adjacency_[u];
        for (std::size_t v = row.find_next(u + 1); v < n; v = row.find_next(v + 1))
            out.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    return out;
}

std::size_t count_uncovered_edges(const Graph& g, const Bitset& cover) {
    const std::size_t n = g.num_vertices();
    if (cover.size() != n) {
        throw std::invalid_argument("candidate length " + std::to_string(cover.size()) +
                                    " does not match vertex count " + std::to_string(n));
    }
    // Each uncovered edge is seen from both endpoints.
    std::size_t twice = 0;
    const auto& words = cover.words();
    for (std::size_t wi = 0; wi < words.size(); ++wi) {
        std::uint64_t outside = ~words[wi];
        if (wi + 1 == words.size() && n % Bitset::kWordBits != 0)
            outside &= (std::uint64_t{1} << (n % Bitset::kWordBits)) - 1;
        while (outside != 0) {
            const auto bit = static_cast<std::size_t>(std::countr_zero(outside));
            outside &= outside - 1;
            twice += g.neighbors(static_cast<Vertex>(wi * Bitset::kWordBits + bit)).count_and_not(cover);
        }
    }
    return twice / 2;
}

std::size_t fringe_degree(const Graph& g, Vertex v, const Bitset& fringe) {
    if (v >= g.num_vertices()) throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
    return g.neighbors(v).count_and(fringe);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << g.num_vertices() << ' ' << g.num_edges() << '\n';
    for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("edge list: missing header line");
    std::istringstream header(line);
    long long n = -1, m = -1;
    if (!(header >> n >> m) || n < 1 || m < 0)
        throw std::runtime_error("edge list: malformed header '" + line + "'");

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        if (!std::getline(in, line))
            throw std::runtime_error("edge list: expected " + std::to_string(m) + " edges, got " +
                                     std::to_string(i));
        std::istringstream row(line);
        long long u = -1, v = -1;
        if (!(row >> u >> v) || u < 0 || v < 0)
            throw std::runtime_error("edge list: malformed edge line '" + line + "'");
        edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    try {
        Graph g(static_cast<std::size_t>(n), edges);
        if (g.num_edges() != static_cast<std::size_t>(m))
            throw std::runtime_error("edge list: duplicate edges in file");
        return g;
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("edge list: ") + e.what());
    }
}

}  // namespace pvc
