#include <rglab/generators.hpp>
#include <rglab/graph.hpp>

#include <gtest/gtest.h>

#include <sstream>

namespace rglab {
namespace {

Graph triangle() { return Graph(3, {{0, 1}, {1, 2}, {2, 0}}); }
Graph path(std::size_t n)
{
    std::vector<Edge> e;
    for (NodeId i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return Graph(n, e);
}
Graph star(std::size_t n)
{
    std::vector<Edge> e;
    for (NodeId i = 1; i < n; ++i) e.push_back({0, i});
    return Graph(n, e);
}

TEST(Graph, NormalizesAndDeduplicates)
{
    const Graph g(4, {{2, 1}, {1, 2}, {3, 0}});
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_TRUE(g.has_edge(1, 2));
    EXPECT_TRUE(g.has_edge(2, 1));
    EXPECT_TRUE(g.has_edge(0, 3));
    EXPECT_FALSE(g.has_edge(0, 1));
    EXPECT_FALSE(g.has_edge(1, 1));
    EXPECT_EQ(g.edges()[0], (Edge{0, 3}));
}

TEST(Graph, RejectsSelfLoopsAndOutOfRange)
{
    EXPECT_THROW(Graph(3, {{1, 1}}), InvalidInput);
    EXPECT_THROW(Graph(3, {{0, 3}}), InvalidInput);
}

TEST(Graph, NeighborListsSortedAndSymmetric)
{
    const Graph g(5, {{4, 0}, {2, 0}, {3, 2}, {1, 4}, {0, 1}});
    for (NodeId v = 0; v < 5; ++v) {
        const auto nb = g.neighbors(v);
        EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
        for (NodeId w : nb) EXPECT_TRUE(g.has_edge(w, v));
    }
}

TEST(IntersectGraphs, HandExamples)
{
    const Graph t = triangle();
    EXPECT_EQ(intersect_graphs(t, t), t);
    EXPECT_EQ(intersect_graphs(t, Graph(3)).edge_count(), 0u);
    const Graph i = intersect_graphs(t, path(3));
    EXPECT_EQ(i, Graph(3, {{0, 1}, {1, 2}}));
}

TEST(IntersectGraphs, MismatchedNodeCounts)
{
    EXPECT_THROW(intersect_graphs(Graph(3), Graph(4)), InvalidInput);
}

TEST(IntersectGraphs, CommutativeAssociativeIdempotent)
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed, 0);
        const Graph a = gen_er(20, 0.3, rng);
        const Graph b = gen_er(20, 0.5, rng);
        const Graph c = gen_er(20, 0.7, rng);
        EXPECT_EQ(intersect_graphs(a, a), a);
        EXPECT_EQ(intersect_graphs(a, b), intersect_graphs(b, a));
        EXPECT_EQ(intersect_graphs(intersect_graphs(a, b), c), intersect_graphs(a, intersect_graphs(b, c)));
        const Graph ab = intersect_graphs(a, b);
        for (const auto& e : ab.edges()) {
            EXPECT_TRUE(a.has_edge(e.u, e.v));
            EXPECT_TRUE(b.has_edge(e.u, e.v));
        }
    }
}

TEST(MinDegree, HandExamples)
{
    EXPECT_EQ(min_degree(Graph::complete(4)), 3u);
    EXPECT_EQ(min_degree(Graph(4, {{0, 1}, {1, 2}})), 0u);
    EXPECT_EQ(min_degree(path(3)), 1u);
    EXPECT_THROW(min_degree(Graph(0)), InvalidInput);
}

TEST(DegreeHistogram, HandExamples)
{
    EXPECT_EQ(degree_histogram(Graph(5)), (DegreeHistogram{{0, 5}}));
    EXPECT_EQ(degree_histogram(Graph::complete(4)), (DegreeHistogram{{3, 4}}));
    EXPECT_EQ(degree_histogram(star(5)), (DegreeHistogram{{4, 1}, {1, 4}}));
}

TEST(DegreeHistogram, TotalsMatchNodeAndEdgeCounts)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed, 7);
        const Graph g = gen_er(40, 0.1 + 0.015 * static_cast<double>(seed), rng);
        std::size_t nodes = 0;
        std::size_t half_degree = 0;
        for (const auto& [h, c] : degree_histogram(g)) {
            nodes += c;
            half_degree += h * c;
        }
        EXPECT_EQ(nodes, g.node_count());
        EXPECT_EQ(half_degree, 2 * g.edge_count());
        EXPECT_LE(static_cast<double>(min_degree(g)), 2.0 * static_cast<double>(g.edge_count()) / 40.0);
    }
}

TEST(ConnectedComponents, HandExamples)
{
    using Blocks = std::vector<std::vector<NodeId>>;
    EXPECT_EQ(connected_components(Graph(3)), (Blocks{{0}, {1}, {2}}));
    EXPECT_EQ(connected_components(Graph::complete(4)), (Blocks{{0, 1, 2, 3}}));
    EXPECT_EQ(connected_components(Graph(4, {{0, 1}, {2, 3}})), (Blocks{{0, 1}, {2, 3}}));
}

TEST(ConnectedComponents, BlocksPartitionNodesAndRespectEdges)
{
    Rng rng(3, 3);
    const Graph g = gen_er(60, 0.03, rng);
    const auto blocks = connected_components(g);
    std::vector<int> seen(60, 0);
    for (const auto& b : blocks)
        for (NodeId v : b) ++seen[v];
    for (int s : seen) EXPECT_EQ(s, 1);
    const auto label = component_labels(g);
    for (const auto& e : g.edges()) EXPECT_EQ(label[e.u], label[e.v]);
}

TEST(EdgeList, WriteThenReadGivesSameGraph)
{
    Rng rng(11, 0);
    const Graph g = gen_er(30, 0.2, rng);
    std::stringstream ss;
    write_edge_list(ss, g);
    EXPECT_EQ(ss.str().substr(0, 5), "n=30\n");
    EXPECT_EQ(read_edge_list(ss), g);
}

TEST(EdgeList, RejectsMissingHeader)
{
    std::stringstream ss("0 1\n");
    EXPECT_THROW(read_edge_list(ss), InvalidInput);
}

} // namespace
} // namespace rglab
