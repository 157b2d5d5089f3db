// Test-only reference computations. Each one decides its question by
// enumeration or direct summation and shares no code path with the library
// routine it checks.
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include <rglab/graph.hpp>

namespace rglab::oracle {

/// counts[u] = number of ordered pairs (A, B) of K-subsets of {0..P-1} with
/// |A ∩ B| = u, by enumerating every pair of bitmasks. P <= 20.
inline std::vector<std::uint64_t> overlap_histogram(unsigned K, unsigned P)
{
    std::vector<std::uint32_t> subsets;
    for (std::uint32_t mask = 0; mask < (1u << P); ++mask)
        if (static_cast<unsigned>(std::popcount(mask)) == K) subsets.push_back(mask);
    std::vector<std::uint64_t> counts(K + 1, 0);
    for (auto a : subsets)
        for (auto b : subsets) ++counts[std::popcount(a & b)];
    return counts;
}

/// P[|A ∩ B| >= d] for independent uniform K-subsets, as an exact rational.
inline boost::multiprecision::cpp_rational overlap_probability(unsigned K, unsigned P, unsigned d)
{
    const auto counts = overlap_histogram(K, P);
    std::uint64_t hit = 0;
    std::uint64_t total = 0;
    for (unsigned u = 0; u < counts.size(); ++u) {
        total += counts[u];
        if (u >= d) hit += counts[u];
    }
    return boost::multiprecision::cpp_rational(hit, total);
}

/// n! / (k! (n-k)!) through full factorials.
inline boost::multiprecision::cpp_int factorial_binomial(unsigned n, unsigned k)
{
    if (k > n) return 0;
    auto fact = [](unsigned x) {
        boost::multiprecision::cpp_int r = 1;
        for (unsigned i = 2; i <= x; ++i) r *= i;
        return r;
    };
    return fact(n) / (fact(k) * fact(n - k));
}

/// Connectivity of g with the nodes in `removed` deleted, via union-find.
inline bool residual_connected(const Graph& g, const std::vector<bool>& removed)
{
    const std::size_t n = g.node_count();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : g.edges())
        if (!removed[e.u] && !removed[e.v]) parent[find(e.u)] = find(e.v);
    std::size_t roots = 0;
    for (std::size_t v = 0; v < n; ++v)
        if (!removed[v] && find(v) == v) ++roots;
    return roots <= 1;
}

/// Connected after deleting every m-subset of nodes, and more than m nodes remain.
inline bool survives_all_removals(const Graph& g, std::size_t m)
{
    const std::size_t n = g.node_count();
    if (n <= m + 1) return n == 1 && m == 0;
    std::vector<std::size_t> pick(m);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        std::vector<bool> removed(n, false);
        for (auto v : pick) removed[v] = true;
        if (!residual_connected(g, removed)) return false;
        // Next combination in lexicographic order.
        std::size_t i = m;
        while (i > 0 && pick[i - 1] == n - m + i - 1) --i;
        if (i == 0) return true;
        ++pick[i - 1];
        for (std::size_t j = i; j < m; ++j) pick[j] = pick[j - 1] + 1;
    }
}

/// P[Bin(trials, p) > k] by summing the pmf in log space.
inline double binomial_upper_tail(std::uint64_t trials, double p, std::uint64_t k)
{
    double tail = 0.0;
    const double nn = static_cast<double>(trials);
    for (std::uint64_t j = k + 1; j <= trials; ++j) {
        const double jj = static_cast<double>(j);
        const double logpmf = std::lgamma(nn + 1) - std::lgamma(jj + 1) - std::lgamma(nn - jj + 1) +
                              jj * std::log(p) + (nn - jj) * std::log1p(-p);
        const double term = std::exp(logpmf);
        tail += term;
        if (jj > nn * p && term < 1e-300) break;
    }
    return tail;
}

/// sum_{j=d}^{d+terms-1} mu^j e^-mu / j!, with terms built by recurrence.
inline double poisson_tail_series(double mu, unsigned d, unsigned terms = 50)
{
    double term = std::exp(-mu);
    for (unsigned j = 1; j <= d; ++j) term *= mu / j;
    double sum = 0.0;
    for (unsigned j = d; j < d + terms; ++j) {
        sum += term;
        term *= mu / (j + 1);
    }
    return sum;
}

} // namespace rglab::oracle
