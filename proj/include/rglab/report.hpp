// Experiment config files, CSV rows and JSON summaries.
//
// Config files are flat `key = value` lines with an optional [sweep] section:
//
//     n = 1000
//     K = 36
//     P = 10000
//     d = 2
//     f = 1
//     g = 0.9
//     m = 0
//     trials = 500
//     seed = 7
//     [sweep]
//     axis = g
//     values = 0.7, 0.8, 0.9      # or: range = 0.5:1.0:0.05
#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "experiments.hpp"
#include "theory.hpp"

namespace rglab {

class ConfigError : public InvalidInput {
public:
    ConfigError(std::size_t line, const std::string& field, const std::string& message)
        : InvalidInput(format(line, field, message)), line_(line), field_(field)
    {
    }

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    static std::string format(std::size_t line, const std::string& field, const std::string& message)
    {
        std::string out = "config";
        if (line > 0) out += " line " + std::to_string(line);
        if (!field.empty()) out += " field '" + field + "'";
        return out + ": " + message;
    }

    std::size_t line_;
    std::string field_;
};

/// printf("%.{digits}g").
inline std::string format_g(double v, int digits = 9)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& text, std::size_t line, const std::string& field)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(line, field, "expected a number, got '" + text + "'");
    }
}

inline std::uint64_t parse_count(const std::string& text, std::size_t line, const std::string& field)
{
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        // Allow integral scientific notation such as 1e4.
        const double v = parse_real(text, line, field);
        if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e18)
            throw ConfigError(line, field, "expected a non-negative integer, got '" + text + "'");
        return static_cast<std::uint64_t>(v);
    }
    try {
        return std::stoull(text);
    } catch (const std::exception&) {
        throw ConfigError(line, field, "integer out of range: '" + text + "'");
    }
}

/// start:stop:step, inclusive of stop up to rounding.
inline std::vector<double> parse_range(const std::string& text, std::size_t line)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(trim(part));
    if (parts.size() != 3) throw ConfigError(line, "range", "expected start:stop:step");
    const double start = parse_real(parts[0], line, "range");
    const double stop = parse_real(parts[1], line, "range");
    const double step = parse_real(parts[2], line, "range");
    if (!(step > 0.0) || stop < start) throw ConfigError(line, "range", "need step > 0 and stop >= start");
    const double span = (stop - start) / step;
    const auto count = static_cast<std::uint64_t>(std::floor(span + 1e-9)) + 1;
    if (count > 1000000) throw ConfigError(line, "range", "more than 10^6 sweep points");
    std::vector<double> values;
    values.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const double v = start + static_cast<double>(i) * step;
        // Strip accumulated binary noise (0.6000000000000001 -> 0.6).
        values.push_back(std::stod(format_g(v, 12)));
    }
    return values;
}

} // namespace detail

inline ExperimentConfig parse_config(std::istream& in)
{
    ExperimentConfig cfg;
    std::string section;
    std::optional<Sweep> sweep;
    bool have_axis = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(lineno, "", "unterminated section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "sweep") throw ConfigError(lineno, section, "unknown section");
            if (!sweep) sweep.emplace();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(lineno, "", "expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (value.empty()) throw ConfigError(lineno, key, "missing value");

        if (section == "sweep") {
            if (key == "axis") {
                const auto axis = parse_axis(value);
                if (!axis) throw ConfigError(lineno, key, "axis must be one of g, n, m, K, P, f");
                sweep->axis = *axis;
                have_axis = true;
            } else if (key == "values") {
                std::stringstream ss(value);
                for (std::string item; std::getline(ss, item, ',');) {
                    item = detail::trim(item);
                    if (!item.empty()) sweep->values.push_back(detail::parse_real(item, lineno, key));
                }
            } else if (key == "range") {
                const auto r = detail::parse_range(value, lineno);
                sweep->values.insert(sweep->values.end(), r.begin(), r.end());
            } else {
                throw ConfigError(lineno, key, "unknown sweep key");
            }
            continue;
        }

        if (key == "n") cfg.params.n = detail::parse_count(value, lineno, key);
        else if (key == "K") cfg.params.K = detail::parse_count(value, lineno, key);
        else if (key == "P") cfg.params.P = detail::parse_count(value, lineno, key);
        else if (key == "d") cfg.params.d = detail::parse_count(value, lineno, key);
        else if (key == "f") cfg.params.f = detail::parse_real(value, lineno, key);
        else if (key == "g") cfg.params.g = detail::parse_real(value, lineno, key);
        else if (key == "m") cfg.m = detail::parse_count(value, lineno, key);
        else if (key == "trials") cfg.trials = detail::parse_count(value, lineno, key);
        else if (key == "seed") cfg.base_seed = detail::parse_count(value, lineno, key);
        else if (key == "workers") cfg.workers = static_cast<unsigned>(detail::parse_count(value, lineno, key));
        else throw ConfigError(lineno, key, "unknown key");
    }
    if (sweep) {
        if (!have_axis) throw ConfigError(0, "axis", "[sweep] section needs an axis");
        if (sweep->values.empty()) throw ConfigError(0, "values", "[sweep] section needs values or range");
        cfg.sweep = std::move(sweep);
    }
    return cfg;
}

/// Checks a parsed config, reporting problems by field name.
inline void validate_config(const ExperimentConfig& cfg)
{
    try {
        cfg.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(0, "", e.what());
    }
    if (cfg.sweep) {
        for (double v : cfg.sweep->values) {
            ModelParams p = cfg.params;
            std::uint64_t m = cfg.m;
            try {
                apply_axis(p, m, cfg.sweep->axis, v);
                p.validate();
            } catch (const InvalidInput& e) {
                throw ConfigError(0, "values", std::string("sweep value ") + format_g(v) + ": " + e.what());
            }
        }
    }
}

// ---------------------------------------------------------------------------
// CSV

inline const std::vector<std::string>& csv_columns()
{
    static const std::vector<std::string> cols = {
        "sweep_param", "sweep_value", "n",     "K",       "P",     "d",
        "f",           "g",           "m",     "trials",  "successes", "empirical_prob",
        "ci_low",      "ci_high",     "alpha", "predicted_limit", "critical_value", "seed"};
    return cols;
}

inline std::string csv_header()
{
    std::string out;
    for (const auto& c : csv_columns()) {
        if (!out.empty()) out += ',';
        out += c;
    }
    return out;
}

inline std::string csv_row(const ExperimentResult& r)
{
    std::ostringstream os;
    os << r.sweep_param << ',' << (r.sweep_value ? format_g(*r.sweep_value) : "") << ',' << r.params.n << ','
       << r.params.K << ',' << r.params.P << ',' << r.params.d << ',' << format_g(r.params.f) << ','
       << format_g(r.params.g) << ',' << r.m << ',' << r.trials << ',' << r.successes << ','
       << format_g(r.empirical_prob) << ',' << format_g(r.ci_low) << ',' << format_g(r.ci_high) << ','
       << format_g(r.alpha) << ',' << format_g(r.predicted_limit) << ','
       << (r.critical_value ? format_g(*r.critical_value) : "") << ',' << r.seed;
    return os.str();
}

inline void write_csv(std::ostream& os, const std::vector<ExperimentResult>& rows)
{
    os << csv_header() << '\n';
    for (const auto& r : rows) os << csv_row(r) << '\n';
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json json_number(double v)
{
    if (std::isfinite(v)) return v;
    return format_g(v); // "nan", "inf", "-inf"
}

inline nlohmann::json to_json(const ModelParams& p)
{
    return {{"n", p.n}, {"K", p.K}, {"P", p.P}, {"d", p.d}, {"f", p.f}, {"g", p.g}};
}

inline nlohmann::json to_json(const ExperimentResult& r)
{
    nlohmann::json j;
    j["sweep_param"] = r.sweep_param;
    j["sweep_value"] = r.sweep_value ? json_number(*r.sweep_value) : nlohmann::json(nullptr);
    j["params"] = to_json(r.params);
    j["m"] = r.m;
    j["trials"] = r.trials;
    j["successes"] = r.successes;
    j["empirical_prob"] = json_number(r.empirical_prob);
    j["ci_low"] = json_number(r.ci_low);
    j["ci_high"] = json_number(r.ci_high);
    j["alpha"] = json_number(r.alpha);
    j["predicted_limit"] = json_number(r.predicted_limit);
    j["critical_value"] = r.critical_value ? json_number(*r.critical_value) : nlohmann::json(nullptr);
    j["seed"] = r.seed;
    j["wall_time"] = r.wall_time;
    return j;
}

inline nlohmann::json to_json(const ExperimentConfig& cfg)
{
    nlohmann::json j;
    j["params"] = to_json(cfg.params);
    j["m"] = cfg.m;
    j["trials"] = cfg.trials;
    j["base_seed"] = cfg.base_seed;
    if (cfg.sweep) {
        nlohmann::json values = nlohmann::json::array();
        for (double v : cfg.sweep->values) values.push_back(v);
        j["sweep"] = {{"axis", axis_name(cfg.sweep->axis)}, {"values", values}};
    }
    return j;
}

inline nlohmann::json to_json(const RegimeReport& r)
{
    return {{"condition", r.condition}, {"proxy", r.proxy}, {"value", json_number(r.value)},
            {"threshold", r.threshold}, {"pass", r.pass}};
}

inline nlohmann::json to_json(const DegreeLawReport& rep)
{
    nlohmann::json j;
    j["params"] = to_json(rep.params);
    j["trials"] = rep.trials;
    j["t"] = rep.t;
    j["note"] = rep.note;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : rep.rows) {
        j["rows"].push_back({{"h", row.h},
                             {"lambda", json_number(row.lambda)},
                             {"empirical_mean", row.empirical_mean},
                             {"tv_distance", row.tv_distance},
                             {"chi_square", json_number(row.chi_square.statistic)},
                             {"chi_square_bins", row.chi_square.bins},
                             {"p_value", json_number(row.chi_square.p_value)}});
    }
    j["regime"] = nlohmann::json::array();
    for (const auto& r : rep.regime) j["regime"].push_back(to_json(r));
    return j;
}

inline nlohmann::json to_json(const DominanceReport& r)
{
    return {{"trials", r.trials},         {"k", r.k},
            {"slack", r.slack},           {"t", r.t},
            {"z", r.z},                   {"model_prob", r.model_prob},
            {"model_ci", {r.model_ci.low, r.model_ci.high}},
            {"er_prob", r.er_prob},       {"er_ci", {r.er_ci.low, r.er_ci.high}},
            {"difference", r.difference}, {"allowance", r.allowance},
            {"holds", r.holds}};
}

inline nlohmann::json to_json(const GapReport& r)
{
    return {{"trials", r.trials},       {"k", r.k},
            {"min_degree_ok", r.min_degree_ok}, {"gap_events", r.gap_events},
            {"frequency", r.frequency}, {"ci", {r.ci.low, r.ci.high}}};
}

inline nlohmann::json to_json(const CouplingReport& r)
{
    return {{"trials", r.trials},
            {"x", r.threshold.x},
            {"admissible", r.threshold.admissible},
            {"admissibility_bound", r.threshold.admissibility_bound},
            {"valid", r.valid},
            {"validity_rate", r.validity_rate},
            {"ci", {r.ci.low, r.ci.high}},
            {"containment_violations", r.containment_violations}};
}

} // namespace rglab
