#include <rglab/connectivity.hpp>
#include <rglab/generators.hpp>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace rglab {
namespace {

Graph cycle(std::size_t n)
{
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i) e.push_back({i, static_cast<NodeId>((i + 1) % n)});
    return Graph(n, e);
}

Graph star(std::size_t n)
{
    std::vector<Edge> e;
    for (NodeId i = 1; i < n; ++i) e.push_back({0, i});
    return Graph(n, e);
}

Graph hypercube(unsigned dim)
{
    const std::size_t n = std::size_t{1} << dim;
    std::vector<Edge> e;
    for (NodeId v = 0; v < n; ++v)
        for (unsigned b = 0; b < dim; ++b)
            if (!(v >> b & 1u)) e.push_back({v, v | (1u << b)});
    return Graph(n, e);
}

// Harary graph H_{k,n} for even k: each node joined to its k/2 nearest
// neighbours on either side of a cycle. Its connectivity is exactly k.
Graph harary_even(std::size_t k, std::size_t n)
{
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i)
        for (std::size_t j = 1; j <= k / 2; ++j) e.push_back({i, static_cast<NodeId>((i + j) % n)});
    return Graph(n, e);
}

Graph complete_bipartite(std::size_t a, std::size_t b)
{
    std::vector<Edge> e;
    for (NodeId i = 0; i < a; ++i)
        for (NodeId j = 0; j < b; ++j) e.push_back({i, static_cast<NodeId>(a + j)});
    return Graph(a + b, e);
}

Graph petersen()
{
    std::vector<Edge> e;
    for (NodeId i = 0; i < 5; ++i) {
        e.push_back({i, static_cast<NodeId>((i + 1) % 5)});
        e.push_back({i, static_cast<NodeId>(i + 5)});
        e.push_back({static_cast<NodeId>(i + 5), static_cast<NodeId>(5 + (i + 2) % 5)});
    }
    return Graph(10, e);
}

TEST(Connectivity, HandExamples)
{
    EXPECT_TRUE(is_connected(Graph(1)));
    EXPECT_TRUE(is_connected(Graph(0)));
    EXPECT_FALSE(is_connected(Graph(2)));

    const Graph c5 = cycle(5);
    EXPECT_TRUE(is_k_connected(c5, 1));
    EXPECT_TRUE(is_k_connected(c5, 2));
    EXPECT_FALSE(is_k_connected(c5, 3));
    EXPECT_EQ(vertex_connectivity(c5), 2u);

    const Graph s = star(6);
    EXPECT_TRUE(is_k_connected(s, 1));
    EXPECT_FALSE(is_k_connected(s, 2));
    EXPECT_TRUE(has_articulation_point(s));
    EXPECT_EQ(vertex_connectivity(s), 1u);

    std::vector<Edge> k4 = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}};
    const Graph k4_minus = Graph(4, k4); // K4 without {2,3}
    EXPECT_TRUE(is_k_connected(k4_minus, 2));
    EXPECT_FALSE(is_k_connected(k4_minus, 3));
    EXPECT_EQ(vertex_connectivity(k4_minus), 2u);

    const Graph k5 = Graph::complete(5);
    EXPECT_TRUE(is_k_connected(k5, 4));
    EXPECT_FALSE(is_k_connected(k5, 5)); // needs n >= k+1
    EXPECT_EQ(vertex_connectivity(k5), 4u);

    EXPECT_TRUE(is_k_connected(Graph(1), 1));
    EXPECT_FALSE(is_k_connected(Graph(1), 2));
    EXPECT_THROW(is_k_connected(k5, 0), InvalidInput);
}

TEST(Connectivity, KnownFamilies)
{
    EXPECT_EQ(vertex_connectivity(petersen()), 3u);
    EXPECT_EQ(vertex_connectivity(hypercube(3)), 3u);
    EXPECT_EQ(vertex_connectivity(hypercube(4)), 4u);
    EXPECT_EQ(vertex_connectivity(hypercube(5)), 5u);
    EXPECT_EQ(vertex_connectivity(complete_bipartite(3, 7)), 3u);
    for (std::size_t k : {2u, 4u, 6u, 8u}) {
        const Graph h = harary_even(k, 41);
        EXPECT_EQ(vertex_connectivity(h), k);
        EXPECT_TRUE(is_k_connected(h, k));
        EXPECT_FALSE(is_k_connected(h, k + 1));
    }
}

TEST(Connectivity, TwoCliquesJoinedThroughACut)
{
    // Two K6 blocks sharing nothing, bridged by edges from 3 nodes of the
    // first block to every node of the second: the 3 nodes form a cut.
    std::vector<Edge> e;
    for (NodeId i = 0; i < 6; ++i)
        for (NodeId j = i + 1; j < 6; ++j) {
            e.push_back({i, j});
            e.push_back({static_cast<NodeId>(i + 6), static_cast<NodeId>(j + 6)});
        }
    for (NodeId i = 0; i < 3; ++i)
        for (NodeId j = 6; j < 12; ++j) e.push_back({i, j});
    const Graph g(12, e);
    EXPECT_EQ(min_degree(g), 5u);
    EXPECT_EQ(vertex_connectivity(g), 3u);
    EXPECT_TRUE(brute_force_k_connected(g, 3));
    EXPECT_FALSE(brute_force_k_connected(g, 4));
}

TEST(Connectivity, AgreesWithEnumerationOnRandomGraphs)
{
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        Rng rng(seed, 11);
        const std::size_t n = 2 + uniform_below(rng, 9);
        const double p = 0.2 + 0.7 * uniform01(rng);
        const Graph g = gen_er(n, p, rng);
        for (std::size_t k = 1; k <= 5; ++k) {
            const bool fast = is_k_connected(g, k);
            EXPECT_EQ(fast, brute_force_k_connected(g, k)) << "seed " << seed << " k " << k;
            EXPECT_EQ(fast, oracle::survives_all_removals(g, k - 1)) << "seed " << seed << " k " << k;
            EXPECT_EQ(fast, survives_node_failures(g, k - 1));
        }
        const std::size_t kappa = vertex_connectivity(g);
        if (kappa > 0) {
            EXPECT_TRUE(brute_force_k_connected(g, kappa));
        }
        if (kappa + 1 < n) {
            EXPECT_FALSE(brute_force_k_connected(g, kappa + 1));
        }
    }
}

TEST(Connectivity, AgreesWithEnumerationOnRingGraphs)
{
    // Intersection graphs are denser and more clustered than ER graphs.
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed, 12);
        const Graph g = graph_from_rings(gen_object_rings_uniform(14, 4, 12, rng), 1 + seed % 2);
        for (std::size_t k = 1; k <= 6; ++k) EXPECT_EQ(is_k_connected(g, k), brute_force_k_connected(g, k));
    }
}

TEST(Connectivity, MonotoneInKAndBelowMinDegree)
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        Rng rng(seed, 13);
        const Graph g = gen_er(30, 0.15 + 0.01 * static_cast<double>(seed), rng);
        const std::size_t kappa = vertex_connectivity(g);
        EXPECT_LE(kappa, min_degree(g));
        for (std::size_t k = 1; k <= 8; ++k) {
            EXPECT_EQ(is_k_connected(g, k), k <= kappa) << "seed " << seed << " k " << k;
            if (is_k_connected(g, k + 1)) {
                EXPECT_TRUE(is_k_connected(g, k));
            }
        }
    }
}

TEST(Connectivity, DeletingAnEdgeNeverRaisesConnectivity)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Rng rng(seed, 14);
        const Graph g = gen_er(25, 0.4, rng);
        if (g.edge_count() == 0) continue;
        const auto all = g.edges();
        const std::size_t drop = uniform_below(rng, all.size());
        std::vector<Edge> kept;
        for (std::size_t i = 0; i < all.size(); ++i)
            if (i != drop) kept.push_back(all[i]);
        const Graph h(25, kept);
        const std::size_t before = vertex_connectivity(g);
        const std::size_t after = vertex_connectivity(h);
        EXPECT_LE(after, before);
        EXPECT_GE(after + 1, before);
    }
}

TEST(RemoveNodes, RelabelsInOrder)
{
    const Graph p5(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    const std::vector<NodeId> mid{2};
    const Graph r = remove_nodes(p5, mid);
    EXPECT_EQ(r, Graph(4, {{0, 1}, {2, 3}}));
    EXPECT_FALSE(is_connected(r));
    const std::vector<NodeId> none;
    EXPECT_EQ(remove_nodes(p5, none), p5);
    const std::vector<NodeId> ends{4, 0};
    EXPECT_EQ(remove_nodes(p5, ends), Graph(3, {{0, 1}, {1, 2}}));
}

TEST(BruteForce, RefusesLargeGraphs)
{
    EXPECT_THROW(brute_force_k_connected(Graph(17), 1), OracleRefused);
    EXPECT_NO_THROW(brute_force_k_connected(Graph::complete(16), 3));
    EXPECT_TRUE(brute_force_k_connected(Graph::complete(16), 15));
}

TEST(SampledFailures, NeverContradictsTheExactAnswer)
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed, 15);
        const Graph g = gen_er(40, 0.12, rng);
        for (std::size_t m = 0; m <= 3; ++m) {
            // Sampling can miss a cut but cannot invent one.
            if (survives_node_failures(g, m)) {
                EXPECT_TRUE(survives_sampled_failures(g, m, 200, rng));
            }
        }
    }
    Rng rng(1, 1);
    EXPECT_FALSE(survives_sampled_failures(star(10), 1, 200, rng));
    EXPECT_FALSE(survives_sampled_failures(Graph::complete(3), 3, 5, rng));
}

TEST(ResilienceVerdict, Fields)
{
    const auto v = resilience_verdict(hypercube(4), 3);
    EXPECT_TRUE(v.connected);
    EXPECT_EQ(v.min_degree, 4u);
    EXPECT_EQ(v.k_connected_up_to, 4u);
    EXPECT_EQ(v.query_k, 3u);
    EXPECT_TRUE(v.k_connected);
    const auto w = resilience_verdict(Graph(4, {{0, 1}}), 1);
    EXPECT_FALSE(w.connected);
    EXPECT_EQ(w.k_connected_up_to, 0u);
    EXPECT_FALSE(w.k_connected);
}

TEST(Connectivity, ScalesToModelSizedGraphs)
{
    ModelParams p;
    p.n = 2000;
    p.K = 40;
    p.P = 10000;
    p.d = 2;
    Rng rng(2024, 0);
    const Graph g = gen_model_graph(p, rng);
    const std::size_t kappa = vertex_connectivity(g);
    EXPECT_LE(kappa, min_degree(g));
    EXPECT_EQ(is_k_connected(g, kappa), kappa > 0);
    EXPECT_FALSE(is_k_connected(g, kappa + 1));
}

} // namespace
} // namespace rglab
