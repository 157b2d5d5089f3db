// Closed-form probabilities for the interest-based social graph
// G_d(n,K,P) ∩ G(n,f) ∩ G(n,g): exact edge probabilities, the scaling-law
// deviation alpha, limiting connectivity probabilities, the Poisson law for
// degree-h counts, regime advisories and critical-parameter solvers.
//
// All functions are pure.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace rglab {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// n nodes, object rings of size K from a pool of P objects, overlap
/// threshold d, friendship probability f and link-survival probability g.
struct ModelParams {
    std::uint64_t n = 2;
    std::uint64_t K = 1;
    std::uint64_t P = 1;
    std::uint64_t d = 1;
    double f = 1.0;
    double g = 1.0;

    /// Probability that a link both exists as a friendship and survives.
    double p() const noexcept { return f * g; }

    void validate() const
    {
        if (n < 2) throw InvalidInput("n must be at least 2 (got " + std::to_string(n) + ")");
        if (d < 1) throw InvalidInput("d must be at least 1");
        if (K < d) throw InvalidInput("d exceeds K (" + std::to_string(d) + " > " + std::to_string(K) + ")");
        if (K > P) throw InvalidInput("K exceeds P (" + std::to_string(K) + " > " + std::to_string(P) + ")");
        if (!(f >= 0.0 && f <= 1.0)) throw InvalidInput("f must lie in [0,1]");
        if (!(g >= 0.0 && g <= 1.0)) throw InvalidInput("g must lie in [0,1]");
    }
};

namespace detail {

inline BigInt binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

/// Nearest double to num/den for non-negative num and positive den, without
/// overflowing when either operand exceeds the double range.
inline double ratio_to_double(const BigInt& num, const BigInt& den)
{
    if (num == 0) return 0.0;
    const auto nb = static_cast<long>(boost::multiprecision::msb(num));
    const auto db = static_cast<long>(boost::multiprecision::msb(den));
    const long ns = std::max(0L, nb - 63);
    const long ds = std::max(0L, db - 63);
    const BigInt nt = num >> ns;
    const BigInt dt = den >> ds;
    const auto nv = static_cast<long double>(nt.convert_to<std::uint64_t>());
    const auto dv = static_cast<long double>(dt.convert_to<std::uint64_t>());
    return static_cast<double>(std::ldexp(nv / dv, static_cast<int>(ns - ds)));
}

inline void require_overlap_domain(std::uint64_t K, std::uint64_t P, std::uint64_t d)
{
    if (d < 1) throw InvalidInput("d must be at least 1");
    if (K < d) throw InvalidInput("d exceeds K (" + std::to_string(d) + " > " + std::to_string(K) + ")");
    if (K > P) throw InvalidInput("K exceeds P (" + std::to_string(K) + " > " + std::to_string(P) + ")");
}

} // namespace detail

struct OverlapProbability {
    BigRational exact;
    double value = 0.0;
};

/// Probability that two uniform K-subsets of a P-pool share at least d
/// objects: sum over u of C(K,u) C(P-K,K-u) / C(P,K). The support starts at
/// max(d, 2K-P), so P < 2K is legal too.
inline OverlapProbability edge_prob_overlap_exact(std::uint64_t K, std::uint64_t P, std::uint64_t d)
{
    detail::require_overlap_domain(K, P, d);
    const std::uint64_t lowest = std::max<std::uint64_t>(d, 2 * K > P ? 2 * K - P : 0);
    // term(u) = C(K,u) C(P-K,K-u); consecutive terms differ by the factor
    // (K-u)^2 / ((u+1)(P-2K+u+1)), and the division is exact.
    BigInt term = detail::binomial(K, lowest) * detail::binomial(P - K, K - lowest);
    BigInt numerator = term;
    for (std::uint64_t u = lowest; u < K; ++u) {
        term *= BigInt(K - u) * (K - u);
        term /= BigInt(u + 1) * (P - 2 * K + u + 1);
        numerator += term;
    }
    const BigInt denominator = detail::binomial(P, K);
    OverlapProbability out;
    out.exact = BigRational(numerator, denominator);
    out.value = detail::ratio_to_double(boost::multiprecision::numerator(out.exact),
                                        boost::multiprecision::denominator(out.exact));
    return out;
}

inline double edge_prob_overlap(std::uint64_t K, std::uint64_t P, std::uint64_t d)
{
    return edge_prob_overlap_exact(K, P, d).value;
}

/// Edge probability of the full model, t = f g s(K,P,d).
inline double edge_prob_model(const ModelParams& params)
{
    params.validate();
    return params.p() * edge_prob_overlap(params.K, params.P, params.d);
}

/// Asymptotic overlap probability (K^2/P)^d / d!, clamped to [0,1].
inline double approx_edge_prob_overlap(double K, double P, std::uint64_t d)
{
    const double dd = static_cast<double>(d);
    const double v = std::exp(dd * std::log(K * K / P) - std::lgamma(dd + 1.0));
    return std::clamp(v, 0.0, 1.0);
}

/// ln n + m ln ln n, the scaling-law offset; requires n >= 3.
inline double scaling_offset(double n, double m)
{
    return std::log(n) + m * std::log(std::log(n));
}

/// alpha such that t = (ln n + m ln ln n + alpha)/n, given the edge probability t.
inline double alpha_from_edge_prob(std::uint64_t n, double t, std::uint64_t m)
{
    if (n < 3) throw InvalidInput("scaling law needs n >= 3 so that ln ln n is defined (got n=" + std::to_string(n) + ")");
    const double nn = static_cast<double>(n);
    return nn * t - scaling_offset(nn, static_cast<double>(m));
}

inline double alpha_from_params(const ModelParams& params, std::uint64_t m)
{
    if (params.n < 3) throw InvalidInput("scaling law needs n >= 3 so that ln ln n is defined (got n=" + std::to_string(params.n) + ")");
    return alpha_from_edge_prob(params.n, edge_prob_model(params), m);
}

/// Edge probability that realizes a given alpha: the inverse of alpha_from_edge_prob.
inline double edge_prob_for_alpha(std::uint64_t n, double alpha, std::uint64_t m)
{
    if (n < 3) throw InvalidInput("scaling law needs n >= 3");
    const double nn = static_cast<double>(n);
    return (scaling_offset(nn, static_cast<double>(m)) + alpha) / nn;
}

/// Limit probability exp(-exp(-alpha)/m!) of staying connected after any m
/// node failures; 1 at alpha = +inf and 0 at alpha = -inf.
inline double predicted_limit_prob(double alpha, std::uint64_t m)
{
    if (std::isnan(alpha)) return std::numeric_limits<double>::quiet_NaN();
    if (alpha == std::numeric_limits<double>::infinity()) return 1.0;
    if (alpha == -std::numeric_limits<double>::infinity()) return 0.0;
    const double log_rate = -alpha - std::lgamma(static_cast<double>(m) + 1.0);
    return std::exp(-std::exp(log_rate));
}

/// Limiting probability that G(n, z) is k-connected when
/// z = (ln n + (k-1) ln ln n + alpha)/n.
inline double er_kconn_limit(double alpha, std::uint64_t k)
{
    if (k < 1) throw InvalidInput("k must be at least 1");
    return predicted_limit_prob(alpha, k - 1);
}

/// lambda^ell e^-lambda / ell!, evaluated in log space.
inline double poisson_pmf(double lambda, std::uint64_t ell)
{
    if (lambda < 0.0) throw InvalidInput("poisson_pmf: negative mean");
    if (lambda == 0.0) return ell == 0 ? 1.0 : 0.0;
    const double l = static_cast<double>(ell);
    return std::exp(l * std::log(lambda) - lambda - std::lgamma(l + 1.0));
}

/// Mean n (n t)^h e^{-n t} / h! of the number of degree-h nodes.
inline double poisson_degree_mean(std::uint64_t n, double t, std::uint64_t h)
{
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidInput("poisson_degree_mean: t must lie in [0,1]");
    const double nn = static_cast<double>(n);
    return nn * poisson_pmf(nn * t, h);
}

// ---------------------------------------------------------------------------
// Regime advisories

struct RegimeThresholds {
    double k_squared_log_n_over_p = 0.1;
    double k_n_log_n_over_p = 0.1;
    double k_min_exponent = 0.1;
};

struct RegimeReport {
    std::string condition;
    std::string proxy;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = true;
};

/// Finite-n proxies for the asymptotic conditions K = Omega(n^eps),
/// K^2/P = o(1/ln n) and K/P = o(1/(n ln n)). Advisory only.
inline std::vector<RegimeReport> check_regime(const ModelParams& params, const RegimeThresholds& th = {})
{
    params.validate();
    const double n = static_cast<double>(params.n);
    const double K = static_cast<double>(params.K);
    const double P = static_cast<double>(params.P);
    const double ln_n = std::log(n);
    std::vector<RegimeReport> out;

    const double k_floor = std::pow(n, th.k_min_exponent);
    out.push_back({"K = Omega(n^eps)", "K >= n^" + std::to_string(th.k_min_exponent), K, k_floor, K >= k_floor});

    const double sq = K * K * ln_n / P;
    out.push_back({"K^2/P = o(1/ln n)", "K^2 ln n / P", sq, th.k_squared_log_n_over_p,
                   sq <= th.k_squared_log_n_over_p});

    const double lin = K * n * ln_n / P;
    out.push_back({"K/P = o(1/(n ln n))", "K n ln n / P", lin, th.k_n_log_n_over_p, lin <= th.k_n_log_n_over_p});
    return out;
}

// ---------------------------------------------------------------------------
// Scaling diagnostics

struct ScalingDiagnostics {
    double s = 0.0;
    double t = 0.0;
    double alpha = 0.0;
    std::uint64_t m = 0;
    double predicted_limit = 0.0;
    std::vector<RegimeReport> regime_flags;
};

inline ScalingDiagnostics diagnose(const ModelParams& params, std::uint64_t m, const RegimeThresholds& th = {})
{
    ScalingDiagnostics out;
    out.s = edge_prob_overlap(params.K, params.P, params.d);
    out.t = params.p() * out.s;
    out.m = m;
    out.alpha = alpha_from_edge_prob(params.n, out.t, m);
    out.predicted_limit = predicted_limit_prob(out.alpha, m);
    for (auto& r : check_regime(params, th))
        if (!r.pass) out.regime_flags.push_back(std::move(r));
    return out;
}

// ---------------------------------------------------------------------------
// Critical parameters

enum class Axis { g, n, m, K, P, f };

inline const char* axis_name(Axis a)
{
    switch (a) {
    case Axis::g: return "g";
    case Axis::n: return "n";
    case Axis::m: return "m";
    case Axis::K: return "K";
    case Axis::P: return "P";
    case Axis::f: return "f";
    }
    return "?";
}

inline std::optional<Axis> parse_axis(const std::string& s)
{
    for (Axis a : {Axis::g, Axis::n, Axis::m, Axis::K, Axis::P, Axis::f})
        if (s == axis_name(a)) return a;
    return std::nullopt;
}

inline bool axis_is_integer(Axis a) { return a == Axis::n || a == Axis::m || a == Axis::K || a == Axis::P; }

struct CriticalValue {
    Axis axis = Axis::g;
    /// The critical value. For infeasible continuous axes this is the
    /// unclamped solution (possibly +inf); for infeasible integer axes NaN.
    double value = std::numeric_limits<double>::quiet_NaN();
    bool feasible = false;
    /// f g s equals the threshold at the returned integer value (within 1e-12 relative).
    bool boundary_hit = false;
    /// alpha of the parameters with the critical value substituted.
    double alpha_at_value = std::numeric_limits<double>::quiet_NaN();
    std::string note;
};

namespace detail {

struct CriticalProblem {
    ModelParams params;
    std::uint64_t m = 0;

    double lhs(std::uint64_t K, std::uint64_t P) const
    {
        return params.f * params.g * edge_prob_overlap(K, P, params.d);
    }
    static double rhs(std::uint64_t n, std::uint64_t m)
    {
        return scaling_offset(static_cast<double>(n), static_cast<double>(m)) / static_cast<double>(n);
    }
};

inline bool near_boundary(double lhs, double rhs) { return std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs); }

/// Smallest x in (lo, hi] with pred(x) true, given pred(lo) false, pred(hi)
/// true and pred monotone on [lo, hi].
template <class Pred>
std::uint64_t first_true(std::uint64_t lo, std::uint64_t hi, Pred pred)
{
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (pred(mid) ? hi : lo) = mid;
    }
    return hi;
}

} // namespace detail

/// Boundary value of one parameter at which f g s(K,P,d) meets
/// (ln n + m ln ln n)/n, all other parameters held fixed. f and g are solved
/// in closed form; n* and K* are the minimal, m* and P* the maximal integers
/// satisfying f g s >= (ln n + m ln ln n)/n.
inline CriticalValue solve_critical(Axis axis, const ModelParams& params, std::uint64_t m)
{
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    if (axis != Axis::n) {
        params.validate();
        if (params.n < 3) throw InvalidInput("scaling law needs n >= 3 (got n=" + std::to_string(params.n) + ")");
    } else {
        ModelParams probe = params;
        probe.n = 3;
        probe.validate();
    }
    detail::CriticalProblem prob{params, m};
    CriticalValue out;
    out.axis = axis;
    const ModelParams& p = params;

    auto alpha_with = [&](ModelParams q, std::uint64_t mm) {
        return alpha_from_edge_prob(q.n, q.f * q.g * edge_prob_overlap(q.K, q.P, q.d), mm);
    };

    switch (axis) {
    case Axis::g:
    case Axis::f: {
        const double s = edge_prob_overlap(p.K, p.P, p.d);
        const double other = axis == Axis::g ? p.f : p.g;
        const double target = detail::CriticalProblem::rhs(p.n, m);
        const double v = target / (other * s);
        out.value = v;
        out.feasible = std::isfinite(v) && v >= 0.0 && v <= 1.0;
        const double nn = static_cast<double>(p.n);
        out.alpha_at_value = std::isfinite(v) ? nn * other * v * s - scaling_offset(nn, static_cast<double>(m)) : nan;
        if (!out.feasible) out.note = "required value lies outside [0,1]";
        return out;
    }
    case Axis::m: {
        const double lhs = prob.lhs(p.K, p.P);
        const double nn = static_cast<double>(p.n);
        const double lnln = std::log(std::log(nn));
        const double raw = (nn * lhs - std::log(nn)) / lnln;
        if (!(raw >= 0.0) && !(lhs >= detail::CriticalProblem::rhs(p.n, 0))) {
            out.value = nan;
            out.note = "no m >= 0 satisfies the inequality (m=0 already fails)";
            return out;
        }
        if (raw > 9.0e18) {
            out.value = raw;
            out.note = "m* exceeds the 64-bit range";
            return out;
        }
        std::uint64_t mm = raw > 0.0 ? static_cast<std::uint64_t>(std::floor(raw)) : 0;
        while (mm > 0 && !(lhs >= detail::CriticalProblem::rhs(p.n, mm))) --mm;
        while (lhs >= detail::CriticalProblem::rhs(p.n, mm + 1)) ++mm;
        out.value = static_cast<double>(mm);
        out.feasible = true;
        out.boundary_hit = detail::near_boundary(lhs, detail::CriticalProblem::rhs(p.n, mm));
        out.alpha_at_value = alpha_with(p, mm);
        return out;
    }
    case Axis::n: {
        const double lhs = prob.lhs(p.K, p.P);
        auto sat = [&](std::uint64_t n) { return lhs >= detail::CriticalProblem::rhs(n, m); };
        if (!(lhs > 0.0)) {
            out.note = "f g s = 0; no n satisfies the inequality";
            return out;
        }
        // The threshold rises for small n when m >= 1, then decreases. Scan
        // the rising branch, then bisect the decreasing one.
        std::uint64_t n = 3;
        while (detail::CriticalProblem::rhs(n + 1, m) > detail::CriticalProblem::rhs(n, m)) {
            if (sat(n)) break;
            ++n;
        }
        std::uint64_t found = 0;
        if (sat(n)) {
            found = n;
        } else {
            std::uint64_t lo = n;
            std::uint64_t hi = n;
            constexpr std::uint64_t cap = std::uint64_t{1} << 62;
            while (!sat(hi)) {
                lo = hi;
                if (hi >= cap) break;
                hi = std::min(cap, hi * 2);
            }
            if (!sat(hi)) {
                out.note = "no n below 2^62 satisfies the inequality";
                return out;
            }
            found = detail::first_true(lo, hi, sat);
        }
        out.value = static_cast<double>(found);
        out.feasible = true;
        out.boundary_hit = detail::near_boundary(lhs, detail::CriticalProblem::rhs(found, m));
        ModelParams q = p;
        q.n = found;
        out.alpha_at_value = alpha_with(q, m);
        return out;
    }
    case Axis::K: {
        const double target = detail::CriticalProblem::rhs(p.n, m);
        auto sat = [&](std::uint64_t K) { return prob.lhs(K, p.P) >= target; };
        if (!sat(p.P)) {
            out.note = "even K = P does not satisfy the inequality";
            return out;
        }
        // Gallop up from d so the exact sums stay at small K.
        std::uint64_t lo = p.d;
        std::uint64_t found = p.d;
        if (!sat(lo)) {
            std::uint64_t hi = std::min(p.P, 2 * lo);
            while (!sat(hi)) {
                lo = hi;
                hi = std::min(p.P, 2 * hi);
            }
            found = detail::first_true(lo, hi, sat);
        }
        out.value = static_cast<double>(found);
        out.feasible = true;
        out.boundary_hit = detail::near_boundary(prob.lhs(found, p.P), target);
        ModelParams q = p;
        q.K = found;
        out.alpha_at_value = alpha_with(q, m);
        return out;
    }
    case Axis::P: {
        const double target = detail::CriticalProblem::rhs(p.n, m);
        auto fails = [&](std::uint64_t P) { return !(prob.lhs(p.K, P) >= target); };
        if (fails(p.K)) {
            out.note = "even P = K does not satisfy the inequality";
            return out;
        }
        constexpr std::uint64_t cap = std::uint64_t{1} << 53;
        std::uint64_t lo = p.K;
        std::uint64_t hi = std::max<std::uint64_t>(2 * p.K, 2);
        while (!fails(hi)) {
            lo = hi;
            if (hi >= cap) {
                out.note = "P* exceeds 2^53";
                out.value = static_cast<double>(cap);
                return out;
            }
            hi = std::min(cap, hi * 2);
        }
        const std::uint64_t found = detail::first_true(lo, hi, fails) - 1;
        out.value = static_cast<double>(found);
        out.feasible = true;
        out.boundary_hit = detail::near_boundary(prob.lhs(p.K, found), target);
        ModelParams q = p;
        q.P = found;
        out.alpha_at_value = alpha_with(q, m);
        return out;
    }
    }
    return out;
}

/// "a/b" if both fit in max_digits decimal digits, otherwise empty.
inline std::string rational_string(const BigRational& r, std::size_t max_digits = 64)
{
    const auto num = boost::multiprecision::numerator(r).str();
    const auto den = boost::multiprecision::denominator(r).str();
    if (num.size() > max_digits || den.size() > max_digits) return {};
    return num + "/" + den;
}

} // namespace rglab
