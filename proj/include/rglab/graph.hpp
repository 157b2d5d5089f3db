// Immutable undirected simple graph on nodes 0..n-1.
//
// Adjacency is kept twice: sorted per-node neighbor lists for traversal and a
// hash set of packed pairs for O(1) membership. Every "failure" or
// intersection produces a new Graph.
#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace rglab {

using NodeId = std::uint32_t;

struct Edge {
    NodeId u;
    NodeId v;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

class Graph {
public:
    Graph() = default;

    /// n nodes, no edges.
    explicit Graph(std::size_t node_count) : adjacency_(node_count) {}

    /// Builds from an edge list. Pairs are normalized to u < v and
    /// deduplicated; self-loops and out-of-range ids are rejected.
    Graph(std::size_t node_count, std::vector<Edge> edges) : adjacency_(node_count)
    {
        for (auto& e : edges) {
            if (e.u >= node_count || e.v >= node_count) {
                throw InvalidInput("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                   ") out of range for n=" + std::to_string(node_count));
            }
            if (e.u == e.v) {
                throw InvalidInput("self-loop at node " + std::to_string(e.u));
            }
            if (e.u > e.v) std::swap(e.u, e.v);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        adopt_sorted_unique(std::move(edges));
    }

    /// Trusted construction from edges already normalized, sorted and unique.
    static Graph from_sorted_unique(std::size_t node_count, std::vector<Edge> edges)
    {
        Graph g(node_count);
        g.adopt_sorted_unique(std::move(edges));
        return g;
    }

    static Graph complete(std::size_t n)
    {
        std::vector<Edge> edges;
        edges.reserve(n * (n > 0 ? n - 1 : 0) / 2);
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = i + 1; j < n; ++j) edges.push_back({i, j});
        return from_sorted_unique(n, std::move(edges));
    }

    std::size_t node_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    /// Edges with u < v in lexicographic order.
    std::span<const Edge> edges() const noexcept { return edges_; }

    std::span<const NodeId> neighbors(NodeId v) const noexcept { return adjacency_[v]; }
    std::size_t degree(NodeId v) const noexcept { return adjacency_[v].size(); }

    bool has_edge(NodeId u, NodeId v) const noexcept
    {
        if (u == v || u >= node_count() || v >= node_count()) return false;
        return pairs_.contains(pack(u, v));
    }

    friend bool operator==(const Graph& a, const Graph& b)
    {
        return a.node_count() == b.node_count() && a.edges_ == b.edges_;
    }

private:
    static std::uint64_t pack(NodeId u, NodeId v) noexcept
    {
        if (u > v) std::swap(u, v);
        return (std::uint64_t{u} << 32) | v;
    }

    void adopt_sorted_unique(std::vector<Edge> edges)
    {
        edges_ = std::move(edges);
        pairs_.reserve(edges_.size());
        std::vector<std::uint32_t> deg(adjacency_.size(), 0);
        for (const auto& e : edges_) {
            ++deg[e.u];
            ++deg[e.v];
            pairs_.insert(pack(e.u, e.v));
        }
        for (std::size_t v = 0; v < adjacency_.size(); ++v) adjacency_[v].reserve(deg[v]);
        // Sorted edge order makes each neighbor list sorted as well: lower
        // neighbors arrive through e.v in increasing e.u, higher ones through e.u.
        for (const auto& e : edges_) adjacency_[e.v].push_back(e.u);
        for (const auto& e : edges_) adjacency_[e.u].push_back(e.v);
    }

    std::vector<std::vector<NodeId>> adjacency_;
    std::vector<Edge> edges_;
    std::unordered_set<std::uint64_t> pairs_;
};

/// counts[h] = number of nodes with degree h.
using DegreeHistogram = std::map<std::size_t, std::size_t>;

inline Graph intersect_graphs(const Graph& a, const Graph& b)
{
    if (a.node_count() != b.node_count()) {
        throw InvalidInput("intersect_graphs: node counts differ (" + std::to_string(a.node_count()) + " vs " +
                           std::to_string(b.node_count()) + ")");
    }
    const Graph& small = a.edge_count() <= b.edge_count() ? a : b;
    const Graph& large = &small == &a ? b : a;
    std::vector<Edge> kept;
    for (const auto& e : small.edges())
        if (large.has_edge(e.u, e.v)) kept.push_back(e);
    return Graph::from_sorted_unique(a.node_count(), std::move(kept));
}

inline std::size_t min_degree(const Graph& g)
{
    if (g.node_count() == 0) throw InvalidInput("min_degree: graph has no nodes");
    std::size_t best = g.degree(0);
    for (NodeId v = 1; v < g.node_count(); ++v) best = std::min(best, g.degree(v));
    return best;
}

inline DegreeHistogram degree_histogram(const Graph& g)
{
    DegreeHistogram counts;
    for (NodeId v = 0; v < g.node_count(); ++v) ++counts[g.degree(v)];
    return counts;
}

/// Number of nodes of degree exactly h.
inline std::size_t count_degree(const Graph& g, std::size_t h)
{
    std::size_t c = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) c += g.degree(v) == h;
    return c;
}

/// Component label per node, labels 0.. assigned in order of smallest member.
inline std::vector<std::uint32_t> component_labels(const Graph& g)
{
    constexpr auto unset = ~std::uint32_t{0};
    std::vector<std::uint32_t> label(g.node_count(), unset);
    std::vector<NodeId> stack;
    std::uint32_t next = 0;
    for (NodeId root = 0; root < g.node_count(); ++root) {
        if (label[root] != unset) continue;
        label[root] = next;
        stack.push_back(root);
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            for (NodeId w : g.neighbors(v)) {
                if (label[w] == unset) {
                    label[w] = next;
                    stack.push_back(w);
                }
            }
        }
        ++next;
    }
    return label;
}

/// Blocks of mutually reachable nodes; each block sorted, blocks ordered by
/// their smallest member.
inline std::vector<std::vector<NodeId>> connected_components(const Graph& g)
{
    const auto label = component_labels(g);
    std::uint32_t blocks = 0;
    for (auto l : label) blocks = std::max(blocks, l + 1);
    std::vector<std::vector<NodeId>> out(blocks);
    for (NodeId v = 0; v < g.node_count(); ++v) out[label[v]].push_back(v);
    return out;
}

// Edge-list text format: header "n=<count>", then one "i j" line per edge
// with i < j.

inline void write_edge_list(std::ostream& os, const Graph& g)
{
    os << "n=" << g.node_count() << '\n';
    for (const auto& e : g.edges()) os << e.u << ' ' << e.v << '\n';
}

inline Graph read_edge_list(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line.rfind("n=", 0) != 0) {
        throw InvalidInput("edge list: missing \"n=<count>\" header");
    }
    std::size_t n = 0;
    try {
        n = std::stoull(line.substr(2));
    } catch (const std::exception&) {
        throw InvalidInput("edge list: bad header \"" + line + "\"");
    }
    std::vector<Edge> edges;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream fields(line);
        long long u = -1;
        long long v = -1;
        if (!(fields >> u >> v) || u < 0 || v < 0) {
            throw InvalidInput("edge list line " + std::to_string(lineno) + ": expected \"i j\"");
        }
        edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
    }
    return Graph(n, std::move(edges));
}

} // namespace rglab
