// Monte-Carlo harness: resilience trials, parameter
// sweeps, and the statistical checks of the proof constructions (Poisson law
// of degree-h counts, ER dominance, min-degree/k-connectivity gap, coupling
// validity).
//
// Trial i always draws from the stream (base_seed, i), and aggregation only
// adds counts, so results do not depend on the number of workers.
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "connectivity.hpp"
#include "errors.hpp"
#include "generators.hpp"
#include "graph.hpp"
#include "rng.hpp"
#include "stats.hpp"
#include "theory.hpp"

namespace rglab {

/// Worker count: RG_LAB_THREADS if set to a positive integer, otherwise the
/// number of logical cores.
inline unsigned default_workers()
{
    if (const char* env = std::getenv("RG_LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// results[i] = fn(i) for i in [0, count), computed on `workers` threads.
template <class T, class Fn>
std::vector<T> parallel_map(std::uint64_t count, unsigned workers, Fn&& fn)
{
    std::vector<T> results(count);
    if (workers == 0) workers = default_workers();
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(count, 1)));
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (std::uint64_t i = next++; i < count; i = next++) results[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(failure_lock);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return results;
}

template <class Fn>
std::uint64_t parallel_count(std::uint64_t trials, unsigned workers, Fn&& fn)
{
    const auto hits = parallel_map<std::uint8_t>(trials, workers, [&](std::uint64_t i) {
        return static_cast<std::uint8_t>(fn(i) ? 1 : 0);
    });
    std::uint64_t total = 0;
    for (auto h : hits) total += h;
    return total;
}

struct Sweep {
    Axis axis = Axis::g;
    std::vector<double> values;
};

struct ExperimentConfig {
    ModelParams params;
    std::uint64_t m = 0;
    std::uint64_t trials = 1;
    std::uint64_t base_seed = 1;
    std::optional<Sweep> sweep;
    unsigned workers = 0; // 0: default_workers()
    ModelLayers layers = ModelLayers::thinned;

    void validate() const
    {
        if (trials < 1) throw InvalidInput("trials must be at least 1");
        params.validate();
    }
};

struct ExperimentResult {
    std::string sweep_param = "none";
    std::optional<double> sweep_value;
    ModelParams params;
    std::uint64_t m = 0;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double empirical_prob = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double predicted_limit = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> critical_value;
    std::uint64_t seed = 0;
    double wall_time = 0.0;
};

/// Sets one parameter of (params, m). Integer axes must receive integral values.
inline void apply_axis(ModelParams& params, std::uint64_t& m, Axis axis, double value)
{
    auto as_count = [&](const char* name) {
        if (!(value >= 0.0) || value != std::floor(value) || value > 9.0e18) {
            throw InvalidInput(std::string("sweep value for ") + name + " must be a non-negative integer (got " +
                               std::to_string(value) + ")");
        }
        return static_cast<std::uint64_t>(value);
    };
    switch (axis) {
    case Axis::g: params.g = value; break;
    case Axis::f: params.f = value; break;
    case Axis::n: params.n = as_count("n"); break;
    case Axis::m: m = as_count("m"); break;
    case Axis::K: params.K = as_count("K"); break;
    case Axis::P: params.P = as_count("P"); break;
    }
}

/// Counts trials in which `success(graph)` holds for model graphs drawn from
/// the per-trial streams of cfg.base_seed.
template <class Success>
ExperimentResult run_trials(const ExperimentConfig& cfg, Success&& success)
{
    cfg.validate();
    const auto started = std::chrono::steady_clock::now();
    ExperimentResult out;
    out.params = cfg.params;
    out.m = cfg.m;
    out.trials = cfg.trials;
    out.seed = cfg.base_seed;
    out.successes = parallel_count(cfg.trials, cfg.workers, [&](std::uint64_t i) {
        Rng rng = trial_rng(cfg.base_seed, i);
        return success(gen_model_graph(cfg.params, rng, cfg.layers));
    });
    out.empirical_prob = static_cast<double>(out.successes) / static_cast<double>(out.trials);
    const auto ci = wilson_interval(out.successes, out.trials);
    out.ci_low = ci.low;
    out.ci_high = ci.high;
    if (cfg.params.n >= 3) {
        out.alpha = alpha_from_params(cfg.params, cfg.m);
        out.predicted_limit = predicted_limit_prob(out.alpha, cfg.m);
    }
    out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

/// Fraction of sampled graphs that stay connected after any m node failures.
inline ExperimentResult run_resilience_trials(const ExperimentConfig& cfg)
{
    const std::uint64_t m = cfg.m;
    return run_trials(cfg, [m](const Graph& g) { return survives_node_failures(g, m); });
}

/// One resilience estimate per sweep value; every row carries the critical
/// value of the swept axis for the base configuration.
inline std::vector<ExperimentResult> sweep_experiment(const ExperimentConfig& cfg)
{
    if (!cfg.sweep) throw InvalidInput("sweep_experiment: configuration has no sweep");
    const Sweep& sweep = *cfg.sweep;
    if (sweep.values.empty()) throw InvalidInput("sweep has no values");

    std::optional<double> critical;
    try {
        const auto c = solve_critical(sweep.axis, cfg.params, cfg.m);
        if (c.feasible || std::isfinite(c.value)) critical = c.value;
    } catch (const InvalidInput&) {
        // Base parameters outside the scaling-law domain (e.g. n < 3).
    }

    std::vector<ExperimentResult> rows;
    rows.reserve(sweep.values.size());
    for (double v : sweep.values) {
        ExperimentConfig point = cfg;
        point.sweep.reset();
        apply_axis(point.params, point.m, sweep.axis, v);
        auto row = run_resilience_trials(point);
        row.sweep_param = axis_name(sweep.axis);
        row.sweep_value = v;
        row.critical_value = critical;
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Degree-h counts versus Poisson(lambda_{n,h})

struct DegreeLawRow {
    std::uint64_t h = 0;
    double lambda = 0.0;
    double empirical_mean = 0.0;
    double tv_distance = 0.0;
    ChiSquareResult chi_square;
    std::vector<std::uint64_t> counts; // per trial, in trial order
};

struct DegreeLawReport {
    ModelParams params;
    std::uint64_t trials = 0;
    double t = 0.0;
    std::vector<DegreeLawRow> rows;
    std::vector<RegimeReport> regime;
    std::string note;
};

inline DegreeLawReport degree_law_test(const ModelParams& params, std::uint64_t trials, std::uint64_t seed,
                                       unsigned workers = 0, std::uint64_t max_h = 3)
{
    params.validate();
    if (trials < 1) throw InvalidInput("trials must be at least 1");
    DegreeLawReport out;
    out.params = params;
    out.trials = trials;
    out.t = edge_prob_model(params);
    out.regime = check_regime(params);
    if (out.t == 0.0) {
        out.note = "t = 0: every node is isolated, so the degree-0 count is n in every trial; the Poisson law "
                   "only describes the regime t ~ ln n / n";
    } else if (params.n >= 3) {
        const double nt = static_cast<double>(params.n) * out.t;
        const double ln_n = std::log(static_cast<double>(params.n));
        if (std::abs(nt - ln_n) > 0.5 * ln_n)
            out.note = "n t is far from ln n; the Poisson approximation is not expected to hold";
    }

    const auto per_trial = parallel_map<std::vector<std::uint64_t>>(trials, workers, [&](std::uint64_t i) {
        Rng rng = trial_rng(seed, i);
        const Graph g = gen_model_graph(params, rng);
        std::vector<std::uint64_t> c(max_h + 1, 0);
        for (NodeId v = 0; v < g.node_count(); ++v)
            if (g.degree(v) <= max_h) ++c[g.degree(v)];
        return c;
    });

    for (std::uint64_t h = 0; h <= max_h; ++h) {
        DegreeLawRow row;
        row.h = h;
        row.lambda = poisson_degree_mean(params.n, out.t, h);
        row.counts.reserve(trials);
        double sum = 0.0;
        for (const auto& c : per_trial) {
            row.counts.push_back(c[h]);
            sum += static_cast<double>(c[h]);
        }
        row.empirical_mean = sum / static_cast<double>(trials);
        row.tv_distance = tv_distance_poisson(empirical_law(row.counts), row.lambda);
        row.chi_square = chi_square_poisson(row.counts, row.lambda);
        out.rows.push_back(std::move(row));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dominance over an Erdős–Rényi graph

struct DominanceReport {
    std::uint64_t trials = 0;
    std::uint64_t k = 1;
    double slack = 0.02;
    double t = 0.0;
    double z = 0.0;
    std::uint64_t model_successes = 0;
    std::uint64_t er_successes = 0;
    double model_prob = 0.0;
    double er_prob = 0.0;
    Interval model_ci;
    Interval er_ci;
    double difference = 0.0; // model_prob - er_prob
    double allowance = 0.0;  // sum of the two Wilson half-widths
    bool holds = false;      // model_prob >= er_prob - allowance
};

/// Estimates P[model graph k-connected] and P[G(n, z) k-connected] with
/// z = t (1 - slack) on paired trial streams.
inline DominanceReport dominance_test(const ModelParams& params, std::uint64_t trials, std::uint64_t k,
                                      std::uint64_t seed, double slack = 0.02, unsigned workers = 0)
{
    params.validate();
    if (trials < 1) throw InvalidInput("trials must be at least 1");
    if (k < 1) throw InvalidInput("k must be at least 1");
    if (!(slack >= 0.0 && slack <= 1.0)) throw InvalidInput("slack must lie in [0,1]");
    DominanceReport out;
    out.trials = trials;
    out.k = k;
    out.slack = slack;
    out.t = edge_prob_model(params);
    out.z = out.t * (1.0 - slack);
    const auto both = parallel_map<std::uint8_t>(trials, workers, [&](std::uint64_t i) {
        Rng model_rng = trial_rng(seed, i, 0);
        Rng er_rng = trial_rng(seed, i, 1);
        const bool a = is_k_connected(gen_model_graph(params, model_rng), k);
        const bool b = is_k_connected(gen_er(params.n, out.z, er_rng), k);
        return static_cast<std::uint8_t>((a ? 1 : 0) | (b ? 2 : 0));
    });
    for (auto v : both) {
        out.model_successes += v & 1;
        out.er_successes += (v >> 1) & 1;
    }
    const double nn = static_cast<double>(trials);
    out.model_prob = static_cast<double>(out.model_successes) / nn;
    out.er_prob = static_cast<double>(out.er_successes) / nn;
    out.model_ci = wilson_interval(out.model_successes, trials);
    out.er_ci = wilson_interval(out.er_successes, trials);
    out.difference = out.model_prob - out.er_prob;
    out.allowance = out.model_ci.half_width() + out.er_ci.half_width();
    out.holds = out.model_prob >= out.er_prob - out.allowance;
    return out;
}

// ---------------------------------------------------------------------------
// Minimum degree >= k but not k-connected

struct GapReport {
    std::uint64_t trials = 0;
    std::uint64_t k = 1;
    std::uint64_t min_degree_ok = 0; // trials with min degree >= k
    std::uint64_t gap_events = 0;    // ... that were nonetheless not k-connected
    double frequency = 0.0;
    Interval ci;
};

inline bool gap_event(const Graph& g, std::uint64_t k)
{
    return min_degree_at_least(g, k) && !is_k_connected(g, k);
}

/// Gap frequency over graphs produced by sample(trial_index).
template <class Sampler>
GapReport gap_test_over(Sampler&& sample, std::uint64_t trials, std::uint64_t k, unsigned workers = 0)
{
    if (trials < 1) throw InvalidInput("trials must be at least 1");
    GapReport out;
    out.trials = trials;
    out.k = k;
    const auto flags = parallel_map<std::uint8_t>(trials, workers, [&](std::uint64_t i) {
        const Graph g = sample(i);
        const bool filtered = min_degree_at_least(g, k);
        const bool gap = filtered && !is_k_connected(g, k);
        return static_cast<std::uint8_t>((filtered ? 1 : 0) | (gap ? 2 : 0));
    });
    for (auto f : flags) {
        out.min_degree_ok += f & 1;
        out.gap_events += (f >> 1) & 1;
    }
    out.frequency = static_cast<double>(out.gap_events) / static_cast<double>(trials);
    out.ci = wilson_interval(out.gap_events, trials);
    return out;
}

inline GapReport gap_test(const ModelParams& params, std::uint64_t trials, std::uint64_t k, std::uint64_t seed,
                          unsigned workers = 0)
{
    params.validate();
    if (k < 1) throw InvalidInput("k must be at least 1");
    if (params.n >= 500 && k > 3) {
        throw InvalidInput("gap_test: k <= 3 is required at n >= 500 (got k=" + std::to_string(k) + ")");
    }
    return gap_test_over(
        [&](std::uint64_t i) {
            Rng rng = trial_rng(seed, i);
            return gen_model_graph(params, rng);
        },
        trials, k, workers);
}

// ---------------------------------------------------------------------------
// Coupling validity

struct CouplingReport {
    std::uint64_t trials = 0;
    CouplingThreshold threshold;
    std::uint64_t valid = 0;
    std::uint64_t containment_violations = 0; // among valid trials; 0 by construction
    double validity_rate = 0.0;
    Interval ci;
};

inline CouplingReport coupling_validity_rate(std::uint64_t n, std::uint64_t K, std::uint64_t P, std::uint64_t d,
                                             std::uint64_t trials, std::uint64_t seed, unsigned workers = 0)
{
    if (trials < 1) throw InvalidInput("trials must be at least 1");
    CouplingReport out;
    out.trials = trials;
    out.threshold = coupling_threshold_x(K, P, n);
    const auto flags = parallel_map<std::uint8_t>(trials, workers, [&](std::uint64_t i) {
        Rng rng = trial_rng(seed, i);
        const auto pair = gen_coupled_pair_at(n, K, P, d, out.threshold.x, rng);
        const bool contained = is_spanning_subgraph(pair.binomial_graph, pair.uniform_graph);
        return static_cast<std::uint8_t>((pair.coupling_valid ? 1 : 0) | (pair.coupling_valid && !contained ? 2 : 0));
    });
    for (auto f : flags) {
        out.valid += f & 1;
        out.containment_violations += (f >> 1) & 1;
    }
    out.validity_rate = static_cast<double>(out.valid) / static_cast<double>(trials);
    out.ci = wilson_interval(out.valid, trials);
    return out;
}

} // namespace rglab
