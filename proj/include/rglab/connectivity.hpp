// Exact k-connectivity and node-failure resilience.
//
// k = 1 is a traversal, k = 2 an articulation-point search, and larger k go
// through unit-capacity max-flow on the node-split graph (Menger). A
// subset-enumeration oracle decides the same question by definition for
// small graphs.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "rng.hpp"

namespace rglab {

inline bool is_connected(const Graph& g)
{
    if (g.node_count() <= 1) return true;
    std::vector<char> seen(g.node_count(), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        for (NodeId w : g.neighbors(v)) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == g.node_count();
}

inline bool min_degree_at_least(const Graph& g, std::size_t k)
{
    if (k == 0) return true;
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (g.degree(v) < k) return false;
    return true;
}

/// Survivors keep their relative order: survivor ids are renumbered 0.. in
/// increasing original id.
inline Graph remove_nodes(const Graph& g, std::span<const NodeId> victims)
{
    constexpr auto gone = std::numeric_limits<NodeId>::max();
    std::vector<NodeId> relabel(g.node_count(), 0);
    for (NodeId v : victims) {
        if (v >= g.node_count()) throw InvalidInput("remove_nodes: node " + std::to_string(v) + " out of range");
        relabel[v] = gone;
    }
    NodeId next = 0;
    for (auto& r : relabel) r = (r == gone) ? gone : next++;
    std::vector<Edge> kept;
    for (const auto& e : g.edges())
        if (relabel[e.u] != gone && relabel[e.v] != gone) kept.push_back({relabel[e.u], relabel[e.v]});
    return Graph::from_sorted_unique(next, std::move(kept));
}

/// True iff the graph has a vertex whose removal disconnects it. Assumes g is
/// connected.
inline bool has_articulation_point(const Graph& g)
{
    const std::size_t n = g.node_count();
    if (n < 3) return false;
    constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> order(n, unset);
    std::vector<std::uint32_t> low(n, 0);
    std::vector<NodeId> parent(n, 0);
    struct Frame {
        NodeId v;
        std::size_t next;
    };
    std::vector<Frame> stack;
    std::uint32_t clock = 0;
    std::size_t root_children = 0;
    order[0] = low[0] = clock++;
    stack.push_back({0, 0});
    while (!stack.empty()) {
        auto& top = stack.back();
        const NodeId v = top.v;
        const auto nb = g.neighbors(v);
        if (top.next < nb.size()) {
            const NodeId w = nb[top.next++];
            if (order[w] == unset) {
                parent[w] = v;
                order[w] = low[w] = clock++;
                if (v == 0) ++root_children;
                stack.push_back({w, 0});
            } else if (!(v != 0 && w == parent[v])) {
                low[v] = std::min(low[v], order[w]);
            }
        } else {
            stack.pop_back();
            if (!stack.empty()) {
                const NodeId u = stack.back().v;
                low[u] = std::min(low[u], low[v]);
                if (u != 0 && low[v] >= order[u]) return true;
            }
        }
    }
    return root_children > 1;
}

namespace detail {

/// Node-split residual network: node v becomes v_in = 2v and v_out = 2v+1
/// joined by a unit arc; each undirected edge {u,v} becomes u_out -> v_in and
/// v_out -> u_in. Built once per graph, flows reset per query.
class SplitNetwork {
public:
    explicit SplitNetwork(const Graph& g) : nodes_(2 * g.node_count()), start_(nodes_ + 1, 0)
    {
        const std::size_t n = g.node_count();
        std::vector<std::uint32_t> deg(nodes_, 0);
        for (std::size_t v = 0; v < n; ++v) {
            deg[2 * v] += 1 + g.degree(static_cast<NodeId>(v));     // to v_out, reverses of incoming
            deg[2 * v + 1] += 1 + g.degree(static_cast<NodeId>(v)); // reverse of internal, outgoing
        }
        for (std::size_t x = 0; x < nodes_; ++x) start_[x + 1] = start_[x] + deg[x];
        head_.resize(start_[nodes_]);
        cap_.resize(start_[nodes_]);
        rev_.resize(start_[nodes_]);
        std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
        auto add = [&](std::uint32_t a, std::uint32_t b) {
            const std::uint32_t ia = fill[a]++;
            const std::uint32_t ib = fill[b]++;
            head_[ia] = b;
            cap_[ia] = 1;
            rev_[ia] = ib;
            head_[ib] = a;
            cap_[ib] = 0;
            rev_[ib] = ia;
        };
        for (std::size_t v = 0; v < n; ++v) add(2 * v, 2 * v + 1);
        for (const auto& e : g.edges()) {
            add(2 * e.u + 1, 2 * e.v);
            add(2 * e.v + 1, 2 * e.u);
        }
        base_cap_ = cap_;
        pred_.assign(nodes_, 0);
        seen_.assign(nodes_, 0);
    }

    /// Number of internally node-disjoint s-t paths, stopping at `limit`.
    /// s and t must be distinct and non-adjacent.
    std::uint32_t local_connectivity(NodeId s, NodeId t, std::uint32_t limit)
    {
        cap_ = base_cap_;
        const std::uint32_t source = 2 * s + 1;
        const std::uint32_t sink = 2 * t;
        std::uint32_t flow = 0;
        std::deque<std::uint32_t> queue;
        while (flow < limit) {
            ++stamp_;
            queue.clear();
            queue.push_back(source);
            seen_[source] = stamp_;
            bool found = false;
            while (!queue.empty() && !found) {
                const std::uint32_t x = queue.front();
                queue.pop_front();
                for (std::uint32_t a = start_[x]; a < start_[x + 1]; ++a) {
                    const std::uint32_t y = head_[a];
                    if (cap_[a] == 0 || seen_[y] == stamp_) continue;
                    seen_[y] = stamp_;
                    pred_[y] = a;
                    if (y == sink) {
                        found = true;
                        break;
                    }
                    queue.push_back(y);
                }
            }
            if (!found) break;
            for (std::uint32_t y = sink; y != source;) {
                const std::uint32_t a = pred_[y];
                cap_[a] -= 1;
                cap_[rev_[a]] += 1;
                y = head_[rev_[a]];
            }
            ++flow;
        }
        return flow;
    }

private:
    std::size_t nodes_;
    std::vector<std::uint32_t> start_;
    std::vector<std::uint32_t> head_;
    std::vector<std::uint8_t> cap_;
    std::vector<std::uint8_t> base_cap_;
    std::vector<std::uint32_t> rev_;
    std::vector<std::uint32_t> pred_;
    std::vector<std::uint32_t> seen_;
    std::uint32_t stamp_ = 0;
};

/// min(kappa(g), cap), for a graph that is not complete. Uses a
/// minimum-degree vertex v: a minimum separator either misses v (then it
/// separates v from some non-neighbor) or contains it (then it separates two
/// non-adjacent neighbors of v).
inline std::uint32_t connectivity_capped(const Graph& g, std::uint32_t cap)
{
    const std::size_t n = g.node_count();
    NodeId v = 0;
    for (NodeId u = 1; u < n; ++u)
        if (g.degree(u) < g.degree(v)) v = u;
    std::uint32_t best = std::min<std::uint32_t>(cap, static_cast<std::uint32_t>(g.degree(v)));
    if (best == 0) return 0;
    SplitNetwork net(g);
    for (NodeId w = 0; w < n && best > 0; ++w) {
        if (w == v || g.has_edge(v, w)) continue;
        best = std::min(best, net.local_connectivity(v, w, best));
    }
    const auto nb = g.neighbors(v);
    for (std::size_t i = 0; i < nb.size() && best > 0; ++i)
        for (std::size_t j = i + 1; j < nb.size() && best > 0; ++j)
            if (!g.has_edge(nb[i], nb[j])) best = std::min(best, net.local_connectivity(nb[i], nb[j], best));
    return best;
}

inline bool is_complete(const Graph& g)
{
    const std::size_t n = g.node_count();
    return g.edge_count() == n * (n > 0 ? n - 1 : 0) / 2;
}

} // namespace detail

/// Vertex connectivity kappa: the largest k for which g is k-connected
/// (n - 1 for complete graphs, 0 for disconnected ones).
inline std::size_t vertex_connectivity(const Graph& g)
{
    const std::size_t n = g.node_count();
    if (n <= 1) return 0;
    if (detail::is_complete(g)) return n - 1;
    if (!is_connected(g)) return 0;
    return detail::connectivity_capped(g, std::numeric_limits<std::uint32_t>::max());
}

/// True iff n >= k+1 and removing any k-1 nodes leaves g connected.
inline bool is_k_connected(const Graph& g, std::size_t k)
{
    if (k < 1) throw InvalidInput("k must be at least 1");
    const std::size_t n = g.node_count();
    if (n == 1 && k == 1) return true; // the single-node graph is connected
    if (n < k + 1) return false;
    if (!min_degree_at_least(g, k)) return false;
    if (k == 1) return is_connected(g);
    if (!is_connected(g)) return false;
    if (k == 2) return !has_articulation_point(g);
    if (detail::is_complete(g)) return true;
    return detail::connectivity_capped(g, static_cast<std::uint32_t>(k)) >= k;
}

/// Connected after any m node failures, i.e. (m+1)-connected.
inline bool survives_node_failures(const Graph& g, std::size_t m)
{
    return is_k_connected(g, m + 1);
}

/// Cheap necessary check: removes `samples` uniformly random m-subsets and
/// reports whether every residual graph stayed connected. Never a proof of
/// resilience.
inline bool survives_sampled_failures(const Graph& g, std::size_t m, std::size_t samples, Rng& rng)
{
    const std::size_t n = g.node_count();
    if (m >= n) return false;
    std::vector<NodeId> ids(n);
    for (NodeId v = 0; v < n; ++v) ids[v] = v;
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < m; ++i) std::swap(ids[i], ids[i + uniform_below(rng, n - i)]);
        if (!is_connected(remove_nodes(g, std::span<const NodeId>(ids.data(), m)))) return false;
    }
    return true;
}

/// Decides k-connectivity by enumerating every (k-1)-subset of nodes and
/// testing the residual graph. Independent of the flow code; n <= 16 only.
inline bool brute_force_k_connected(const Graph& g, std::size_t k)
{
    const std::size_t n = g.node_count();
    if (n > 16) throw OracleRefused("brute_force_k_connected refuses n=" + std::to_string(n) + " > 16");
    if (k < 1) throw InvalidInput("k must be at least 1");
    if (n == 1 && k == 1) return true;
    if (n < k + 1) return false;
    std::vector<std::uint32_t> adj(n, 0);
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = 0; v < n; ++v)
            if (g.has_edge(u, v)) adj[u] |= 1u << v;
    const std::uint32_t all = (n == 32) ? ~0u : ((1u << n) - 1);
    auto residual_connected = [&](std::uint32_t removed) {
        const std::uint32_t alive = all & ~removed;
        if (alive == 0) return true;
        std::uint32_t reached = alive & (~alive + 1); // lowest alive node
        std::uint32_t frontier = reached;
        while (frontier) {
            std::uint32_t next = 0;
            for (std::uint32_t f = frontier; f; f &= f - 1) next |= adj[std::countr_zero(f)];
            next &= alive & ~reached;
            reached |= next;
            frontier = next;
        }
        return reached == alive;
    };
    const std::size_t r = k - 1;
    if (r == 0) return residual_connected(0);
    // Gosper's hack over all r-bit masks of n bits.
    std::uint32_t mask = (1u << r) - 1;
    while (mask < (1u << n)) {
        if (!residual_connected(mask)) return false;
        const std::uint32_t c = mask & (~mask + 1);
        const std::uint32_t rr = mask + c;
        mask = (((rr ^ mask) >> 2) / c) | rr;
    }
    return true;
}

struct ResilienceVerdict {
    bool connected = false;
    std::size_t min_degree = 0;
    std::size_t k_connected_up_to = 0; // vertex connectivity kappa
    std::size_t query_k = 0;
    bool k_connected = false;
};

inline ResilienceVerdict resilience_verdict(const Graph& g, std::size_t k)
{
    ResilienceVerdict out;
    out.connected = is_connected(g);
    out.min_degree = g.node_count() > 0 ? min_degree(g) : 0;
    out.k_connected_up_to = vertex_connectivity(g);
    out.query_k = k;
    out.k_connected = is_k_connected(g, k);
    return out;
}

} // namespace rglab
