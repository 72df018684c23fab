#include <gtest/gtest.h>

#include "pvc/ea.hpp"
#include "pvc/oracle.hpp"
#include "test_support.hpp"

namespace pvc::oracle {
namespace {

TEST(MinVertexCover, Examples) {
    EXPECT_EQ(min_vertex_cover_exact(testing::complete_graph(4)).size, 3U);
    EXPECT_EQ(min_vertex_cover_exact(Graph(5, {})).size, 0U);
    const auto path = min_vertex_cover_exact(testing::path3());
    EXPECT_EQ(path.size, 1U);
    EXPECT_EQ(path.cover.to_string(), "010");
    EXPECT_EQ(min_vertex_cover_exact(testing::cycle_graph(5)).size, 3U);
}

TEST(MinVertexCover, WitnessIsFeasibleAndMinimal) {
    Rng rng(17);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 1 + rng.uniform_below(12);
        const Graph g = testing::random_graph(n, rng.uniform01(), rng);
        const auto w = min_vertex_cover_exact(g);
        ASSERT_EQ(count_uncovered_edges(g, w.cover), 0U);
        ASSERT_EQ(w.cover.count(), w.size);
        // Removing any single vertex of a minimum cover breaks it.
        for (Vertex v : w.cover.indices()) {
            Bitset smaller = w.cover;
            smaller.reset(v);
            ASSERT_GT(count_uncovered_edges(g, smaller), 0U);
        }
    }
}

TEST(MinVertexCover, CapEnforced) {
    EXPECT_THROW(min_vertex_cover_exact(Graph(21, {})), std::invalid_argument);
    EXPECT_NO_THROW(min_vertex_cover_exact(Graph(8, {}), OracleLimit{8, 10}));
    EXPECT_THROW(min_vertex_cover_exact(Graph(9, {}), OracleLimit{8, 10}), std::invalid_argument);
}

TEST(MaxIndependentSet, Examples) {
    const Graph k6 = testing::complete_graph(6);
    EXPECT_EQ(max_independent_set_exact(k6, Bitset(6, true)), 1U);
    EXPECT_EQ(max_independent_set_exact(Graph(6, {}), Bitset(6, true)), 6U);
    EXPECT_EQ(max_independent_set_exact(testing::cycle_graph(5), Bitset(5, true)), 2U);
    EXPECT_EQ(max_independent_set_exact(k6, Bitset(6)), 0U);
    EXPECT_THROW(max_independent_set_exact(Graph(25, {}), Bitset(25, true)), std::invalid_argument);
}

TEST(MaxIndependentSet, GallaiIdentity) {
    Rng rng(23);
    for (int rep = 0; rep < 150; ++rep) {
        const std::size_t n = 1 + rng.uniform_below(16);
        const Graph g = testing::random_graph(n, rng.uniform01(), rng);
        const Bitset restrict = testing::random_bits(n, rng, 0.8);
        if (restrict.none()) continue;
        const Graph induced = induced_subgraph(g, restrict);
        ASSERT_EQ(max_independent_set_exact(g, restrict) + min_vertex_cover_exact(induced).size,
                  restrict.count());
    }
}

TEST(DeltaHeavyExhaustive, Examples) {
    // Core vertex 1 has fringe degree 0.
    std::vector<Edge> edges;
    for (Vertex f = 2; f < 10; ++f) edges.emplace_back(0, f);
    Bitset core(10);
    core.set(0);
    core.set(1);
    const PlantedInstance lonely{Graph(10, edges), core, ModelParams{10, 2, 0.5, 0}};
    EXPECT_FALSE(is_delta_heavy_exhaustive(lonely, 0.5));

    const auto dense = sample_instance(ModelParams{12, 2, 1.0, 8});
    EXPECT_TRUE(is_delta_heavy_exhaustive(dense, 0.5));
}

TEST(DeltaHeavyExhaustive, SubsetCap) {
    const auto inst = sample_instance(ModelParams{40, 2, 0.9, 1});
    EXPECT_THROW(is_delta_heavy_exhaustive(inst, 0.5), std::invalid_argument);  // C(38,19) > 1e7
}

TEST(Binomial, Values) {
    EXPECT_EQ(binomial_saturating(8, 4), 70U);
    EXPECT_EQ(binomial_saturating(10, 5), 252U);
    EXPECT_EQ(binomial_saturating(5, 7), 0U);
    EXPECT_EQ(binomial_saturating(1000, 500), UINT64_MAX);
}

TEST(FitnessReference, AgreesWithFitness) {
    Rng rng(31);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + rng.uniform_below(40);
        const Graph g = testing::random_graph(n, 0.3, rng);
        const Bitset x = testing::random_bits(n, rng);
        ASSERT_EQ(fitness_reference(g, x), fitness(g, x));
    }
}

}  // namespace
}  // namespace pvc::oracle
