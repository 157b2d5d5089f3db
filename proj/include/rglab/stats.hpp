#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "theory.hpp"

namespace rglab {

struct Interval {
    double low = 0.0;
    double high = 1.0;

    double half_width() const noexcept { return 0.5 * (high - low); }
};

inline constexpr double z95 = 1.959963984540054;

/// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = z95)
{
    if (trials == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (phat + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
    // Clamp so that low <= phat <= high survives rounding at phat = 0 or 1.
    return {std::clamp(std::min(center - half, phat), 0.0, 1.0), std::clamp(std::max(center + half, phat), 0.0, 1.0)};
}

/// Empirical law of a non-negative integer sample: value -> frequency.
inline std::map<std::uint64_t, double> empirical_law(const std::vector<std::uint64_t>& sample)
{
    std::map<std::uint64_t, double> law;
    for (auto v : sample) law[v] += 1.0;
    for (auto& [v, c] : law) c /= static_cast<double>(sample.size());
    return law;
}

/// Total-variation distance between an empirical law and Poisson(lambda).
inline double tv_distance_poisson(const std::map<std::uint64_t, double>& law, double lambda)
{
    std::uint64_t top = law.empty() ? 0 : law.rbegin()->first;
    top = std::max<std::uint64_t>(top, static_cast<std::uint64_t>(lambda + 12.0 * std::sqrt(lambda) + 20.0));
    double sum = 0.0;
    double covered = 0.0;
    for (std::uint64_t ell = 0; ell <= top; ++ell) {
        const double q = poisson_pmf(lambda, ell);
        covered += q;
        const auto it = law.find(ell);
        sum += std::abs((it == law.end() ? 0.0 : it->second) - q);
    }
    sum += std::max(0.0, 1.0 - covered);
    return 0.5 * sum;
}

struct ChiSquareResult {
    double statistic = std::numeric_limits<double>::quiet_NaN();
    std::size_t bins = 0;
    double p_value = std::numeric_limits<double>::quiet_NaN();
};

/// Pearson chi-square goodness of fit of an integer sample to Poisson(lambda).
/// Cells 0..L are merged left to right until each expects at least
/// `min_expected` observations; the last cell absorbs the upper tail.
inline ChiSquareResult chi_square_poisson(const std::vector<std::uint64_t>& sample, double lambda,
                                          double min_expected = 5.0)
{
    ChiSquareResult out;
    const double total = static_cast<double>(sample.size());
    if (sample.empty() || lambda <= 0.0) return out;
    std::map<std::uint64_t, double> observed;
    for (auto v : sample) observed[v] += 1.0;

    struct Cell {
        double expected = 0.0;
        double observed = 0.0;
    };
    std::vector<Cell> cells;
    Cell cur;
    double cdf = 0.0;
    std::uint64_t ell = 0;
    const auto top = static_cast<std::uint64_t>(lambda + 12.0 * std::sqrt(lambda) + 20.0);
    for (; ell <= top; ++ell) {
        const double q = poisson_pmf(lambda, ell);
        cdf += q;
        cur.expected += total * q;
        const auto it = observed.find(ell);
        if (it != observed.end()) cur.observed += it->second;
        if (cur.expected >= min_expected && total * (1.0 - cdf) >= min_expected) {
            cells.push_back(cur);
            cur = {};
        }
    }
    cur.expected += total * std::max(0.0, 1.0 - cdf);
    for (auto it = observed.upper_bound(top); it != observed.end(); ++it) cur.observed += it->second;
    if (!cells.empty() && cur.expected < min_expected) {
        cells.back().expected += cur.expected;
        cells.back().observed += cur.observed;
    } else {
        cells.push_back(cur);
    }
    out.bins = cells.size();
    out.statistic = 0.0;
    for (const auto& c : cells)
        if (c.expected > 0.0) out.statistic += (c.observed - c.expected) * (c.observed - c.expected) / c.expected;
    if (out.bins >= 2) {
        boost::math::chi_squared dist(static_cast<double>(out.bins - 1));
        out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
    }
    return out;
}

} // namespace rglab
