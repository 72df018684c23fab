#pragma once

#include <vector>

#include "pvc/bitset.hpp"
#include "pvc/graph.hpp"
#include "pvc/rng.hpp"

namespace pvc::testing {

inline Graph random_graph(std::size_t n, double p, Rng& rng) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (rng.bernoulli(p)) edges.emplace_back(u, v);
    return Graph(n, edges);
}

inline Bitset random_bits(std::size_t n, Rng& rng, double density = 0.5) {
    Bitset bits(n);
    for (std::size_t i = 0; i < n; ++i)
        if (rng.bernoulli(density)) bits.set(i);
    return bits;
}

inline Graph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph(n, edges);
}

inline Graph cycle_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u) edges.emplace_back(u, static_cast<Vertex>((u + 1) % n));
    return Graph(n, edges);
}

inline Graph triangle() { return complete_graph(3); }

inline Graph path3() {
    const std::vector<Edge> edges{{0, 1}, {1, 2}};
    return Graph(3, edges);
}

}  // namespace pvc::testing
