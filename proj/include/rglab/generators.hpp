// Samplers for uniform and binomial d-intersection graphs,
// Erdős–Rényi graphs, the composed interest-based model, multiset edge
// graphs L_d(n,b), and the binomial-to-uniform coupling.
//
// Every sampler takes its Rng stream explicitly and is otherwise pure.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "errors.hpp"
#include "graph.hpp"
#include "rng.hpp"
#include "theory.hpp"

namespace rglab {

using ObjectId = std::uint32_t;

/// Object rings S_i over a pool {0..pool_size-1}. Rings are sorted.
struct ObjectAssignment {
    enum class Variant { uniform, binomial };

    Variant variant = Variant::uniform;
    std::uint64_t pool_size = 0;
    std::vector<std::vector<ObjectId>> rings;

    std::size_t node_count() const noexcept { return rings.size(); }
};

/// Per-object holder counts U_i, halves W_i = floor(U_i/2) and Y = sum W_i.
struct HalfCountSummary {
    std::vector<std::uint64_t> holders;
    std::vector<std::uint64_t> halves;
    std::uint64_t total_halves = 0;
};

/// For each object, the sorted list of nodes whose ring contains it.
inline std::vector<std::vector<NodeId>> object_holders(const ObjectAssignment& assign)
{
    std::vector<std::uint32_t> count(assign.pool_size, 0);
    for (const auto& ring : assign.rings)
        for (ObjectId o : ring) ++count[o];
    std::vector<std::vector<NodeId>> holders(assign.pool_size);
    for (std::size_t o = 0; o < holders.size(); ++o) holders[o].reserve(count[o]);
    for (NodeId v = 0; v < assign.rings.size(); ++v)
        for (ObjectId o : assign.rings[v]) holders[o].push_back(v);
    return holders;
}

inline HalfCountSummary half_counts(const ObjectAssignment& assign)
{
    HalfCountSummary out;
    out.holders.assign(assign.pool_size, 0);
    for (const auto& ring : assign.rings)
        for (ObjectId o : ring) ++out.holders[o];
    out.halves.resize(out.holders.size());
    for (std::size_t i = 0; i < out.holders.size(); ++i) {
        out.halves[i] = out.holders[i] / 2;
        out.total_halves += out.halves[i];
    }
    return out;
}

namespace detail {

/// Uniform k-subset of {0..pool-1}, sorted. Rejection from a hash set when
/// k is small relative to the pool, sparse partial Fisher–Yates otherwise.
inline std::vector<ObjectId> sample_subset(Rng& rng, std::uint64_t pool, std::uint64_t k)
{
    std::vector<ObjectId> out;
    out.reserve(k);
    if (k * 10 < pool) {
        std::unordered_set<ObjectId> seen;
        seen.reserve(2 * k);
        while (out.size() < k) {
            const auto o = static_cast<ObjectId>(uniform_below(rng, pool));
            if (seen.insert(o).second) out.push_back(o);
        }
    } else {
        std::unordered_map<std::uint64_t, std::uint64_t> moved;
        moved.reserve(2 * k);
        auto at = [&](std::uint64_t i) {
            auto it = moved.find(i);
            return it == moved.end() ? i : it->second;
        };
        for (std::uint64_t i = 0; i < k; ++i) {
            const std::uint64_t j = i + uniform_below(rng, pool - i);
            const std::uint64_t vi = at(i);
            const std::uint64_t vj = at(j);
            moved[j] = vi;
            out.push_back(static_cast<ObjectId>(vj));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Adds uniformly chosen objects not yet in `ring` until it holds k objects.
inline void top_up_ring(Rng& rng, std::vector<ObjectId>& ring, std::uint64_t pool, std::uint64_t k)
{
    if (ring.size() >= k) return;
    const std::uint64_t missing = pool - ring.size();
    const std::uint64_t need = k - ring.size();
    // A uniform need-subset of the complement, addressed by rank.
    std::vector<ObjectId> ranks = sample_subset(rng, missing, need);
    std::vector<ObjectId> added;
    added.reserve(need);
    std::size_t r = 0;
    std::uint64_t skipped = 0; // ring members below the current candidate
    for (ObjectId rank : ranks) {
        // Smallest object o with o - |{ring members <= o}| == rank.
        std::uint64_t o = rank + skipped;
        while (r < ring.size() && ring[r] <= o) {
            ++r;
            ++skipped;
            o = rank + skipped;
        }
        added.push_back(static_cast<ObjectId>(o));
    }
    ring.insert(ring.end(), added.begin(), added.end());
    std::sort(ring.begin(), ring.end());
}

/// Row-major decoding of pair index -> (i, j), i < j, for n nodes.
inline Edge decode_pair(std::uint64_t n, std::uint64_t idx)
{
    auto row_start = [n](std::uint64_t i) { return i * (2 * n - i - 1) / 2; };
    const double nn = static_cast<double>(n);
    const double disc = (2 * nn - 1) * (2 * nn - 1) - 8.0 * static_cast<double>(idx);
    auto i = static_cast<std::uint64_t>(std::max(0.0, std::floor(((2 * nn - 1) - std::sqrt(std::max(0.0, disc))) / 2)));
    while (i > 0 && row_start(i) > idx) --i;
    while (row_start(i + 1) <= idx) ++i;
    const std::uint64_t j = i + 1 + (idx - row_start(i));
    return {static_cast<NodeId>(i), static_cast<NodeId>(j)};
}

} // namespace detail

inline ObjectAssignment gen_object_rings_uniform(std::uint64_t n, std::uint64_t K, std::uint64_t P, Rng& rng)
{
    if (K > P) throw InvalidInput("K exceeds P (" + std::to_string(K) + " > " + std::to_string(P) + ")");
    if (K < 1) throw InvalidInput("K must be at least 1");
    ObjectAssignment out;
    out.variant = ObjectAssignment::Variant::uniform;
    out.pool_size = P;
    out.rings.reserve(n);
    for (std::uint64_t v = 0; v < n; ++v) out.rings.push_back(detail::sample_subset(rng, P, K));
    return out;
}

/// Each (node, object) membership independently with probability x. Sampled
/// per object, so the holder lists U_i come out directly.
inline ObjectAssignment gen_object_rings_binomial(std::uint64_t n, double x, std::uint64_t P, Rng& rng)
{
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidInput("x must lie in [0,1]");
    ObjectAssignment out;
    out.variant = ObjectAssignment::Variant::binomial;
    out.pool_size = P;
    out.rings.resize(n);
    for (std::uint64_t o = 0; o < P; ++o)
        for_each_bernoulli(rng, n, x, [&](std::uint64_t v) { out.rings[v].push_back(static_cast<ObjectId>(o)); });
    return out;
}

/// Edge {i,j} iff |S_i ∩ S_j| >= d. Co-occurrences are counted through the
/// object -> holders index rather than by pairwise ring intersection.
inline Graph graph_from_rings(const ObjectAssignment& assign, std::uint64_t d)
{
    if (d < 1) throw InvalidInput("d must be at least 1");
    const std::size_t n = assign.node_count();
    const auto holders = object_holders(assign);
    std::vector<std::uint32_t> shared(n, 0);
    std::vector<NodeId> touched;
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) {
        for (ObjectId o : assign.rings[i]) {
            const auto& hs = holders[o];
            for (auto it = std::upper_bound(hs.begin(), hs.end(), i); it != hs.end(); ++it)
                if (shared[*it]++ == 0) touched.push_back(*it);
        }
        std::sort(touched.begin(), touched.end());
        for (NodeId j : touched) {
            if (shared[j] >= d) edges.push_back({i, j});
            shared[j] = 0;
        }
        touched.clear();
    }
    return Graph::from_sorted_unique(n, std::move(edges));
}

/// Erdős–Rényi G(n, p).
inline Graph gen_er(std::uint64_t n, double p, Rng& rng)
{
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("p must lie in [0,1]");
    std::vector<Edge> edges;
    if (n < 2) return Graph(n);
    const std::uint64_t pairs = n * (n - 1) / 2;
    edges.reserve(static_cast<std::size_t>(static_cast<double>(pairs) * p * 1.1) + 16);
    std::uint64_t row = 0;
    std::uint64_t row_start = 0;
    std::uint64_t row_len = n - 1;
    for_each_bernoulli(rng, pairs, p, [&](std::uint64_t idx) {
        while (idx >= row_start + row_len) {
            row_start += row_len;
            ++row;
            --row_len;
        }
        edges.push_back({static_cast<NodeId>(row), static_cast<NodeId>(row + 1 + (idx - row_start))});
    });
    return Graph::from_sorted_unique(n, std::move(edges));
}

/// How the friendship and link-failure layers are drawn in gen_model_graph.
enum class ModelLayers {
    /// Keep each d-intersection edge independently with probability f g.
    thinned,
    /// Intersect with one sampled G(n, f g).
    single_er,
    /// Intersect with independently sampled G(n, f) and G(n, g).
    two_er,
};

/// One sample of G_d(n,K,P) ∩ G(n,f) ∩ G(n,g).
inline Graph gen_model_graph(const ModelParams& params, Rng& rng, ModelLayers layers = ModelLayers::thinned)
{
    params.validate();
    const double p = params.p();
    if (p <= 0.0) return Graph(params.n);
    const auto rings = gen_object_rings_uniform(params.n, params.K, params.P, rng);
    Graph base = graph_from_rings(rings, params.d);
    switch (layers) {
    case ModelLayers::thinned: {
        if (p >= 1.0) return base;
        std::vector<Edge> kept;
        kept.reserve(static_cast<std::size_t>(static_cast<double>(base.edge_count()) * p * 1.1) + 16);
        const auto all = base.edges();
        for_each_bernoulli(rng, all.size(), p, [&](std::uint64_t i) { kept.push_back(all[i]); });
        return Graph::from_sorted_unique(params.n, std::move(kept));
    }
    case ModelLayers::single_er:
        return intersect_graphs(base, gen_er(params.n, p, rng));
    case ModelLayers::two_er: {
        const Graph friends = gen_er(params.n, params.f, rng);
        const Graph alive = gen_er(params.n, params.g, rng);
        return intersect_graphs(intersect_graphs(base, friends), alive);
    }
    }
    return base;
}

/// L_d(n, b): b pairs drawn uniformly with repetition, keeping those drawn
/// at least d times. d = 1 gives L(n, b).
inline Graph gen_multiset_graph(std::uint64_t n, std::uint64_t b, std::uint64_t d, Rng& rng)
{
    if (d < 1) throw InvalidInput("d must be at least 1");
    if (n < 2 || b == 0) return Graph(n);
    const std::uint64_t pairs = n * (n - 1) / 2;
    std::vector<std::uint64_t> draws(b);
    for (auto& x : draws) x = uniform_below(rng, pairs);
    std::sort(draws.begin(), draws.end());
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < draws.size();) {
        std::size_t j = i;
        while (j < draws.size() && draws[j] == draws[i]) ++j;
        if (j - i >= d) edges.push_back(detail::decode_pair(n, draws[i]));
        i = j;
    }
    return Graph::from_sorted_unique(n, std::move(edges));
}

// ---------------------------------------------------------------------------
// Binomial-to-uniform coupling

struct CouplingThreshold {
    double x = 0.0;
    /// K >= xP + sqrt(3 (xP + ln n) ln n).
    bool admissible = false;
    double admissibility_bound = 0.0;
};

/// x = (K/P)(1 - sqrt(3 ln n / K)), with the admissibility check on K.
inline CouplingThreshold coupling_threshold_x(std::uint64_t K, std::uint64_t P, std::uint64_t n)
{
    if (n < 2) throw InvalidInput("n must be at least 2");
    if (K > P) throw InvalidInput("K exceeds P");
    const double ln_n = std::log(static_cast<double>(n));
    const double k = static_cast<double>(K);
    if (!(k > 3.0 * ln_n)) {
        throw Infeasible("coupling infeasible: K=" + std::to_string(K) + " is not above 3 ln n = " +
                         std::to_string(3.0 * ln_n));
    }
    CouplingThreshold out;
    out.x = (k / static_cast<double>(P)) * (1.0 - std::sqrt(3.0 * ln_n / k));
    const double xp = out.x * static_cast<double>(P);
    out.admissibility_bound = xp + std::sqrt(3.0 * (xp + ln_n) * ln_n);
    out.admissible = k >= out.admissibility_bound;
    return out;
}

struct CoupledPair {
    Graph binomial_graph; // H_d(n, x, P)
    Graph uniform_graph;  // G_d(n, K, P)
    bool coupling_valid = false;
    double x = 0.0;
};

/// The coupled construction at an explicit binomial membership probability x.
inline CoupledPair gen_coupled_pair_at(std::uint64_t n, std::uint64_t K, std::uint64_t P, std::uint64_t d, double x,
                                       Rng& rng)
{
    if (K > P) throw InvalidInput("K exceeds P");
    CoupledPair out;
    out.x = x;
    const auto binomial = gen_object_rings_binomial(n, x, P, rng);
    out.binomial_graph = graph_from_rings(binomial, d);
    ObjectAssignment uniform;
    uniform.variant = ObjectAssignment::Variant::uniform;
    uniform.pool_size = P;
    uniform.rings = binomial.rings;
    out.coupling_valid = true;
    for (auto& ring : uniform.rings) {
        if (ring.size() <= K) {
            detail::top_up_ring(rng, ring, P, K);
        } else {
            out.coupling_valid = false;
            const auto pick = detail::sample_subset(rng, ring.size(), K);
            std::vector<ObjectId> cut;
            cut.reserve(K);
            for (ObjectId idx : pick) cut.push_back(ring[idx]);
            ring = std::move(cut);
        }
    }
    out.uniform_graph = graph_from_rings(uniform, d);
    return out;
}

/// Samples H_d(n,x,P) and G_d(n,K,P) on one probability space: each binomial
/// ring of size <= K is topped up with uniform missing objects, so H ⊆ G
/// whenever every ring fits. Oversized rings are cut to a uniform K-subset,
/// which keeps G's law exact but voids the containment.
inline CoupledPair gen_coupled_pair(std::uint64_t n, std::uint64_t K, std::uint64_t P, std::uint64_t d, Rng& rng)
{
    const auto threshold = coupling_threshold_x(K, P, n);
    return gen_coupled_pair_at(n, K, P, d, threshold.x, rng);
}

/// True iff every edge of `sub` is an edge of `super` on the same node set.
inline bool is_spanning_subgraph(const Graph& sub, const Graph& super)
{
    if (sub.node_count() != super.node_count()) return false;
    for (const auto& e : sub.edges())
        if (!super.has_edge(e.u, e.v)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Poissonization

struct Poissonization {
    double expected_half = 0.0;  // E[W_i]
    double expected_total = 0.0; // E[Y]
    double lambda = 0.0;         // E[Y] - E[Y]^{5/6}
    double mu = 0.0;             // lambda / C(n,2)
    double rho = 0.0;            // P[Poisson(mu) >= d]
};

/// Edge probability of the Erdős–Rényi graph reached by Poissonizing the
/// half-count multiset graph of H_d(n, x, P).
inline Poissonization poissonization_edge_prob(std::uint64_t n, std::uint64_t P, double x, std::uint64_t d)
{
    if (!(x > 0.0 && x < 1.0)) throw InvalidInput("x must lie in (0,1)");
    if (n < 3) throw InvalidInput("n must be at least 3");
    if (d < 1) throw InvalidInput("d must be at least 1");
    const double nn = static_cast<double>(n);
    Poissonization out;
    out.expected_half = 0.5 * nn * x - 0.25 + 0.25 * std::exp(nn * std::log1p(-2.0 * x));
    out.expected_total = static_cast<double>(P) * out.expected_half;
    if (!(out.expected_total > 1.0)) {
        throw DegenerateRegime("E[Y] = " + std::to_string(out.expected_total) +
                               " <= 1; the Poisson mean E[Y] - E[Y]^(5/6) would not be positive");
    }
    out.lambda = out.expected_total - std::pow(out.expected_total, 5.0 / 6.0);
    out.mu = out.lambda / (nn * (nn - 1.0) / 2.0);
    out.rho = boost::math::gamma_p(static_cast<double>(d), out.mu);
    return out;
}

} // namespace rglab
