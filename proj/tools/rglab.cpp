// Command-line front end for the interest-based social graph lab.
//
// Exit codes: 0 success, 2 validation error, 3 I/O error, 4 internal
// invariant violation.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <rglab/connectivity.hpp>
#include <rglab/experiments.hpp>
#include <rglab/generators.hpp>
#include <rglab/graph.hpp>
#include <rglab/report.hpp>
#include <rglab/theory.hpp>

namespace {

constexpr const char* tool_version = "1.0.0";

enum ExitCode { ok = 0, validation = 2, io = 3, invariant = 4 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelOptions {
    rglab::ModelParams params;
    std::uint64_t m = 0;
};

void add_model_options(CLI::App* cmd, ModelOptions& o, bool with_n = true)
{
    if (with_n) cmd->add_option("-n", o.params.n, "number of nodes");
    cmd->add_option("-K", o.params.K, "object ring size");
    cmd->add_option("-P", o.params.P, "object pool size");
    cmd->add_option("-d", o.params.d, "required number of shared objects");
    cmd->add_option("-f", o.params.f, "friendship probability");
    cmd->add_option("-g", o.params.g, "link survival probability");
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string utc_now()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string sha256_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read back " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream hex;
    for (unsigned i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return hex.str();
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

void print_regime(const std::vector<rglab::RegimeReport>& reports)
{
    for (const auto& r : reports) {
        if (r.pass) continue;
        std::cout << "warning: " << r.proxy << " = " << rglab::format_g(r.value) << " violates threshold "
                  << rglab::format_g(r.threshold) << " (" << r.condition << ")\n";
    }
}

// ---------------------------------------------------------------------------

int cmd_edge_prob(const ModelOptions& o)
{
    auto params = o.params;
    params.n = std::max<std::uint64_t>(params.n, 2);
    params.validate();
    const auto s = rglab::edge_prob_overlap_exact(params.K, params.P, params.d);
    const double t = params.p() * s.value;
    const double approx = rglab::approx_edge_prob_overlap(static_cast<double>(params.K),
                                                          static_cast<double>(params.P), params.d);
    std::cout << "s = " << rglab::format_g(s.value) << '\n';
    if (const auto exact = rglab::rational_string(s.exact); !exact.empty()) std::cout << "s_exact = " << exact << '\n';
    std::cout << "t = " << rglab::format_g(t) << '\n';
    std::cout << "approx = " << rglab::format_g(approx) << '\n';
    std::cout << "approx_rel_error = "
              << rglab::format_g(s.value > 0 ? std::abs(approx - s.value) / s.value : std::nan("")) << '\n';
    return ok;
}

int cmd_predict(const ModelOptions& o)
{
    const auto diag = rglab::diagnose(o.params, o.m);
    std::cout << "s = " << rglab::format_g(diag.s) << '\n';
    std::cout << "t = " << rglab::format_g(diag.t) << '\n';
    std::cout << "alpha = " << rglab::format_g(diag.alpha) << '\n';
    std::cout << "m = " << o.m << '\n';
    std::cout << "predicted_limit = " << rglab::format_g(diag.predicted_limit) << '\n';
    print_regime(diag.regime_flags);
    return ok;
}

int cmd_critical(const ModelOptions& o, const std::string& axis_text)
{
    const auto axis = rglab::parse_axis(axis_text);
    if (!axis) throw rglab::InvalidInput("unknown axis '" + axis_text + "' (expected g, n, m, K, P or f)");
    const auto c = rglab::solve_critical(*axis, o.params, o.m);
    std::cout << "axis = " << rglab::axis_name(c.axis) << '\n';
    std::cout << "value = " << rglab::format_g(c.value) << (c.feasible ? "" : " INFEASIBLE") << '\n';
    std::cout << "feasible = " << yes_no(c.feasible) << '\n';
    std::cout << "boundary_hit = " << yes_no(c.boundary_hit) << '\n';
    std::cout << "alpha_at_value = " << rglab::format_g(c.alpha_at_value) << '\n';
    if (!c.note.empty()) std::cout << "note = " << c.note << '\n';
    return ok;
}

struct RunOptions {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 1;
    std::uint64_t trials = 1;
    unsigned threads = 0;
    std::string axis;
    std::vector<double> values;
};

// True iff `cmd` defines the option and it was given on the command line.
bool given(CLI::App* cmd, const std::string& name)
{
    const auto* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

rglab::ExperimentConfig resolve_config(CLI::App* cmd, const ModelOptions& o, const RunOptions& r)
{
    rglab::ExperimentConfig cfg;
    if (!r.config_path.empty()) {
        std::ifstream in(r.config_path);
        if (!in) throw IoError("cannot open config " + r.config_path);
        cfg = rglab::parse_config(in);
    }
    // Explicit flags override the config file.
    if (given(cmd, "-n")) cfg.params.n = o.params.n;
    if (given(cmd, "-K")) cfg.params.K = o.params.K;
    if (given(cmd, "-P")) cfg.params.P = o.params.P;
    if (given(cmd, "-d")) cfg.params.d = o.params.d;
    if (given(cmd, "-f")) cfg.params.f = o.params.f;
    if (given(cmd, "-g")) cfg.params.g = o.params.g;
    if (given(cmd, "-m")) cfg.m = o.m;
    if (given(cmd, "--seed")) cfg.base_seed = r.seed;
    if (given(cmd, "--trials")) cfg.trials = r.trials;
    if (given(cmd, "--threads")) cfg.workers = r.threads;
    if (given(cmd, "--axis")) {
        const auto axis = rglab::parse_axis(r.axis);
        if (!axis) throw rglab::ConfigError(0, "axis", "axis must be one of g, n, m, K, P, f");
        if (!cfg.sweep) cfg.sweep.emplace();
        cfg.sweep->axis = *axis;
    }
    if (given(cmd, "--values")) {
        if (!cfg.sweep) throw rglab::ConfigError(0, "values", "--values needs --axis or a [sweep] section");
        cfg.sweep->values = r.values;
    }
    rglab::validate_config(cfg);
    return cfg;
}

int run_and_write(const rglab::ExperimentConfig& cfg, const std::string& out_path, bool sweep)
{
    const std::filesystem::path csv_path(out_path);
    // Fail before spending the simulation budget if the target is unwritable.
    {
        std::ofstream probe(csv_path, std::ios::binary | std::ios::app);
        if (!probe) throw IoError("cannot open " + csv_path.string() + " for writing");
    }
    const std::string started = utc_now();
    std::vector<rglab::ExperimentResult> rows;
    if (sweep) {
        rows = rglab::sweep_experiment(cfg);
    } else {
        rglab::ExperimentConfig single = cfg;
        single.sweep.reset();
        rows.push_back(rglab::run_resilience_trials(single));
    }

    std::ostringstream csv;
    rglab::write_csv(csv, rows);
    write_file(csv_path, csv.str());

    nlohmann::json summary = nlohmann::json::array();
    for (const auto& r : rows) summary.push_back(rglab::to_json(r));
    const std::filesystem::path summary_path = csv_path.string() + ".summary.json";
    write_file(summary_path, summary.dump(2) + "\n");

    nlohmann::json manifest;
    manifest["tool"] = "rglab";
    manifest["version"] = tool_version;
    manifest["command"] = sweep ? "sweep" : "simulate";
    manifest["config"] = rglab::to_json(cfg);
    manifest["base_seed"] = cfg.base_seed;
    manifest["started_at"] = started;
    manifest["finished_at"] = utc_now();
    manifest["outputs"] = nlohmann::json::array();
    for (const auto& p : {csv_path, summary_path})
        manifest["outputs"].push_back({{"path", p.filename().string()}, {"sha256", sha256_file(p)}});
    write_file(csv_path.string() + ".manifest.json", manifest.dump(2) + "\n");

    std::cout << csv.str();
    return ok;
}

// ---------------------------------------------------------------------------

struct VerifyOptions {
    std::uint64_t trials = 200;
    std::uint64_t seed = 1;
    std::uint64_t k = 1;
    double slack = 0.02;
    unsigned threads = 0;
    std::optional<double> t;
    std::optional<double> alpha;
};

/// Applies -t / --alpha by solving for g with everything else fixed.
rglab::ModelParams resolve_target(rglab::ModelParams p, const VerifyOptions& v, std::uint64_t m)
{
    std::optional<double> t = v.t;
    if (v.alpha) t = rglab::edge_prob_for_alpha(p.n, *v.alpha, m);
    if (!t) return p;
    const double s = rglab::edge_prob_overlap(p.K, p.P, p.d);
    if (*t == 0.0) {
        p.g = 0.0;
        return p;
    }
    const double g = *t / (p.f * s);
    if (!(g >= 0.0 && g <= 1.0))
        throw rglab::InvalidInput("target t = " + rglab::format_g(*t) + " needs g = " + rglab::format_g(g) +
                                  " outside [0,1]");
    p.g = g;
    return p;
}

int cmd_verify_degree(const ModelOptions& o, const VerifyOptions& v)
{
    const auto params = resolve_target(o.params, v, 0);
    const auto rep = rglab::degree_law_test(params, v.trials, v.seed, v.threads);
    std::cout << "degree law test: n=" << params.n << " t=" << rglab::format_g(rep.t) << " trials=" << rep.trials
              << '\n';
    if (!rep.note.empty()) std::cout << "regime guard: " << rep.note << '\n';
    print_regime(rep.regime);
    for (const auto& row : rep.rows) {
        std::cout << "h=" << row.h << " lambda=" << rglab::format_g(row.lambda)
                  << " mean=" << rglab::format_g(row.empirical_mean) << " tv=" << rglab::format_g(row.tv_distance)
                  << " chi2=" << rglab::format_g(row.chi_square.statistic)
                  << " p=" << rglab::format_g(row.chi_square.p_value) << '\n';
    }
    std::cout << rglab::to_json(rep).dump(2) << '\n';
    return ok;
}

int cmd_verify_dominance(const ModelOptions& o, const VerifyOptions& v)
{
    const auto params = resolve_target(o.params, v, v.k - 1);
    const auto rep = rglab::dominance_test(params, v.trials, v.k, v.seed, v.slack, v.threads);
    std::cout << "dominance test: k=" << rep.k << " t=" << rglab::format_g(rep.t) << " z=" << rglab::format_g(rep.z)
              << '\n';
    std::cout << "P[model k-connected] = " << rglab::format_g(rep.model_prob) << "  P[ER k-connected] = "
              << rglab::format_g(rep.er_prob) << '\n';
    std::cout << "difference = " << rglab::format_g(rep.difference) << " allowance = " << rglab::format_g(rep.allowance)
              << " holds = " << yes_no(rep.holds) << '\n';
    std::cout << rglab::to_json(rep).dump(2) << '\n';
    return ok;
}

int cmd_verify_gap(const ModelOptions& o, const VerifyOptions& v)
{
    const auto params = resolve_target(o.params, v, v.k - 1);
    const auto rep = rglab::gap_test(params, v.trials, v.k, v.seed, v.threads);
    std::cout << "gap test: k=" << rep.k << " trials=" << rep.trials << " min-degree>=k=" << rep.min_degree_ok
              << " gap events=" << rep.gap_events << " frequency=" << rglab::format_g(rep.frequency) << '\n';
    std::cout << rglab::to_json(rep).dump(2) << '\n';
    return ok;
}

int cmd_verify_coupling(const ModelOptions& o, const VerifyOptions& v)
{
    const auto& p = o.params;
    if (p.K > p.P) throw rglab::InvalidInput("K exceeds P");
    const auto rep = rglab::coupling_validity_rate(p.n, p.K, p.P, p.d, v.trials, v.seed, v.threads);
    std::cout << "coupling: x=" << rglab::format_g(rep.threshold.x)
              << " admissible=" << yes_no(rep.threshold.admissible) << '\n';
    std::cout << "validity rate = " << rglab::format_g(rep.validity_rate) << " (" << rep.valid << "/" << rep.trials
              << ")\n";
    std::cout << "containment violations = " << rep.containment_violations << '\n';
    std::cout << rglab::to_json(rep).dump(2) << '\n';
    if (rep.containment_violations > 0) {
        std::cerr << "internal invariant violated: H is not contained in G on a valid coupling\n";
        return invariant;
    }
    return ok;
}

int cmd_dump(const ModelOptions& o, std::uint64_t seed, const std::string& out_path)
{
    rglab::Rng rng = rglab::trial_rng(seed, 0);
    const auto g = rglab::gen_model_graph(o.params, rng);
    if (out_path.empty()) {
        rglab::write_edge_list(std::cout, g);
        return ok;
    }
    std::ostringstream os;
    rglab::write_edge_list(os, g);
    write_file(out_path, os.str());
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"rglab: interest-based social graph resilience lab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    ModelOptions model;
    RunOptions run;
    VerifyOptions verify;
    std::string axis_text;
    std::uint64_t dump_seed = 1;
    std::string dump_out;

    auto* edge_prob = app.add_subcommand("edge-prob", "exact and asymptotic edge probabilities");
    add_model_options(edge_prob, model);

    auto* predict = app.add_subcommand("predict", "scaling-law deviation alpha and limit probability");
    add_model_options(predict, model);
    predict->add_option("-m", model.m, "number of node failures");

    auto* critical = app.add_subcommand("critical", "critical value of one parameter");
    add_model_options(critical, model);
    critical->add_option("-m", model.m, "number of node failures");
    critical->add_option("--axis,-a", axis_text, "g, n, m, K, P or f")->required();

    auto add_run = [&](CLI::App* cmd) {
        add_model_options(cmd, model);
        cmd->add_option("-m", model.m, "number of node failures");
        cmd->add_option("--config,-c", run.config_path, "key=value config file");
        cmd->add_option("--out,-o", run.out_path, "output CSV path")->required();
        cmd->add_option("--seed", run.seed, "base seed");
        cmd->add_option("--trials", run.trials, "trials per point");
        cmd->add_option("--threads", run.threads, "worker threads (default RG_LAB_THREADS or all cores)");
    };
    auto* simulate = app.add_subcommand("simulate", "estimate the resilience probability at one point");
    add_run(simulate);
    auto* sweep = app.add_subcommand("sweep", "estimate the resilience probability along one axis");
    add_run(sweep);
    sweep->add_option("--axis", run.axis, "swept parameter");
    sweep->add_option("--values", run.values, "sweep values")->delimiter(',');

    auto* verify_cmd = app.add_subcommand("verify", "statistical checks of the proof constructions");
    verify_cmd->require_subcommand(1);
    auto add_verify = [&](const char* name, const char* help) {
        auto* cmd = verify_cmd->add_subcommand(name, help);
        add_model_options(cmd, model);
        cmd->add_option("--trials", verify.trials, "number of trials");
        cmd->add_option("--seed", verify.seed, "base seed");
        cmd->add_option("--threads", verify.threads, "worker threads");
        return cmd;
    };
    auto* v_degree = add_verify("degree", "Poisson law of degree-h node counts");
    v_degree->add_option("-t", verify.t, "target edge probability (solves for g)");
    v_degree->add_option("--alpha", verify.alpha, "target alpha with m=0 (solves for g)");
    auto* v_dominance = add_verify("dominance", "model k-connectivity dominates G(n, t(1-slack))");
    v_dominance->add_option("-k", verify.k, "connectivity order");
    v_dominance->add_option("--slack", verify.slack, "relative slack of the ER edge probability");
    auto* v_gap = add_verify("gap", "min degree >= k but not k-connected");
    v_gap->add_option("-k", verify.k, "connectivity order");
    auto* v_coupling = add_verify("coupling", "binomial-to-uniform coupling validity");

    auto* dump = app.add_subcommand("dump", "write one sampled model graph as an edge list");
    add_model_options(dump, model);
    dump->add_option("--seed", dump_seed, "seed");
    dump->add_option("--out,-o", dump_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : validation;
    }

    try {
        if (*edge_prob) return cmd_edge_prob(model);
        if (*predict) return cmd_predict(model);
        if (*critical) return cmd_critical(model, axis_text);
        if (*simulate) return run_and_write(resolve_config(simulate, model, run), run.out_path, false);
        if (*sweep) {
            const auto cfg = resolve_config(sweep, model, run);
            if (!cfg.sweep) throw rglab::ConfigError(0, "sweep", "sweep needs a [sweep] section or --axis/--values");
            return run_and_write(cfg, run.out_path, true);
        }
        if (*v_degree) return cmd_verify_degree(model, verify);
        if (*v_dominance) return cmd_verify_dominance(model, verify);
        if (*v_gap) return cmd_verify_gap(model, verify);
        if (*v_coupling) return cmd_verify_coupling(model, verify);
        if (*dump) return cmd_dump(model, dump_seed, dump_out);
    } catch (const rglab::Infeasible& e) {
        std::cerr << "error: " << e.what() << '\n';
        return validation;
    } catch (const rglab::InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return validation;
    } catch (const rglab::DegenerateRegime& e) {
        std::cerr << "error: " << e.what() << '\n';
        return validation;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return io;
    } catch (const rglab::InvariantViolation& e) {
        std::cerr << "internal invariant violated: " << e.what() << '\n';
        return invariant;
    }
    return ok;
}
