#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "d2dcache/caching.hpp"
#include "d2dcache/config.hpp"
#include "d2dcache/coverage.hpp"
#include "d2dcache/delay.hpp"
#include "d2dcache/errors.hpp"
#include "d2dcache/experiments.hpp"
#include "d2dcache/montecarlo.hpp"
#include "d2dcache/optimizer.hpp"
#include "d2dcache/queue_sim.hpp"

using namespace d2dcache;

namespace {

struct Common {
    std::string config;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> trials;
    std::vector<std::string> overrides;
};

unsigned env_threads()
{
    if (const char* s = std::getenv("D2DCACHE_THREADS")) {
        try {
            const long v = std::stol(s);
            if (v >= 1) {
                return static_cast<unsigned>(v);
            }
        } catch (const std::exception&) {
        }
        throw ConfigError(std::string("D2DCACHE_THREADS must be a positive integer, got '") + s + "'", 0,
                          "D2DCACHE_THREADS");
    }
    return 1;
}

// Defaults, then the config file, then --set, then the dedicated flags.
ExperimentConfig resolve(const Common& c, bool require_experiment, const std::string& recipe = {})
{
    ExperimentConfig cfg = recipe.empty() ? table_defaults() : recipe_defaults(parse_recipe(recipe));
    cfg.threads = env_threads();
    if (!c.config.empty()) {
        std::ifstream in(c.config);
        if (!in) {
            throw ConfigError("cannot open config file " + c.config);
        }
        const unsigned t = cfg.threads;
        cfg = require_experiment ? parse_config(in, c.config) : parse_config_lenient(in, c.config);
        if (cfg.threads == 1) {
            cfg.threads = t;
        }
        if (!recipe.empty() && parse_recipe(cfg.experiment) != parse_recipe(recipe)) {
            throw ConfigError("config experiment '" + cfg.experiment + "' differs from the requested figure " +
                                  recipe,
                              0, "experiment");
        }
    } else if (require_experiment) {
        throw ConfigError("missing mandatory field 'experiment' (pass a config file)", 0, "experiment");
    }
    if (!recipe.empty() && cfg.experiment.empty()) {
        cfg.experiment = recipe;
    }
    for (const auto& o : c.overrides) {
        apply_override(cfg, o);
    }
    if (c.seed) {
        cfg.seed = *c.seed;
    }
    if (c.threads) {
        cfg.threads = *c.threads;
    }
    if (c.trials) {
        cfg.trials = *c.trials;
    }
    try {
        cfg.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

void print_vector(std::ostream& os, const std::vector<double>& v)
{
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        os << (i ? ", " : "") << v[i];
    }
    os << ']';
}

int cmd_run(const Common& c, const std::string& recipe)
{
    const ExperimentConfig cfg = resolve(c, recipe.empty(), recipe);
    const RunArtifacts a = run_experiment(cfg, c.out_dir);
    std::cout << "wrote " << a.csv_path << " (" << a.rows << " rows)\n";
    std::cout << "wrote " << a.manifest_path << "\n";
    return 0;
}

int cmd_coverage(const Common& c, double b, bool with_mc)
{
    const ExperimentConfig cfg = resolve(c, false);
    std::cout.precision(10);
    const double ub = bs_coverage(cfg.radio.theta, cfg.radio.alpha, cfg.quad);
    if (cfg.radio.channel_mode == ChannelMode::RayleighNLoS) {
        std::cout << "d2d_coverage " << d2d_coverage(b, cfg.geometry, cfg.radio, cfg.quad) << "\n";
    } else {
        std::cout << "d2d_coverage n/a (no closed form for this channel mode)\n";
    }
    std::cout << "bs_coverage " << ub << "\n";
    if (with_mc) {
        MonteCarloConfig mc;
        mc.trials = cfg.trials;
        mc.seed = cfg.seed;
        mc.threads = cfg.threads;
        const CoverageEstimate e = estimate_coverage_variant(cfg.geometry, cfg.radio, b, mc);
        std::cout << "mc_mean " << e.mean << "\nmc_ci99 " << e.half_width_99 << "\nmc_trials " << e.trials_used
                  << "\nmc_window_m " << e.window_radius_final << (e.window_converged ? "" : " (not converged)")
                  << "\n";
    }
    return 0;
}

int cmd_delay(const Common& c, double split)
{
    const ExperimentConfig cfg = resolve(c, false);
    if (!(split >= 0.0 && split <= 1.0)) {
        throw ConfigError("--bandwidth-split must lie in [0, 1]", 0, "bandwidth-split");
    }
    const ContentModel content = cfg.content();
    const TrafficModel traffic = cfg.traffic();
    const CoverageTable cov = coverage_table(content.b, cfg.geometry, cfg.radio, cfg.quad);
    const double w_d = split * cfg.radio.bandwidth_hz;
    const StabilityReport s = stability_check(content, traffic, cfg.geometry, cov, cfg.radio, w_d);
    std::cout.precision(10);
    std::cout << "caching_policy " << to_string(cfg.policy) << "\n";
    std::cout << "w_d_hz " << w_d << "\n";
    if (s.stable_d && s.stable_b) {
        const DelaySummary d = weighted_delay(content, traffic, cfg.geometry, cov, cfg.radio, w_d);
        std::cout << "t_seconds " << d.t_weighted << "\n";
        std::cout << "t_d2d_seconds " << d.t_d << "\nt_bs_seconds " << d.t_b << "\n";
        std::cout << "rho_d " << d.rho_d << "\nrho_b " << d.rho_b << "\n";
    } else {
        std::cout << "t_seconds unstable (" << (s.stable_d ? "" : "d2d ") << (s.stable_b ? "" : "bs ")
                  << "queue)\n";
    }
    std::cout << "margin_d2d " << s.margin_d << "\nmargin_bs " << s.margin_b << "\n";
    return 0;
}

int cmd_optimize(const Common& c, const std::string& trace_path)
{
    const ExperimentConfig cfg = resolve(c, false);
    const ContentModel content = cfg.content();
    const OptimizationResult r = bcd_optimize(content, cfg.traffic(), cfg.geometry, cfg.radio, cfg.solver);
    std::cout.precision(10);
    std::cout << "b_star ";
    print_vector(std::cout, r.b_star);
    std::cout << "\nw_d_ratio " << r.w_d_star / cfg.radio.bandwidth_hz << "\n";
    std::cout << "t_star_seconds " << r.t_star << "\n";
    std::cout << "iterations " << r.iterations << (r.converged ? "" : " (iteration cap reached)") << "\n";
    if (!r.init_note.empty()) {
        std::cout << "note " << r.init_note << "\n";
    }
    if (!trace_path.empty()) {
        std::ofstream out(trace_path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot write " + trace_path);
        }
        write_optimization_trace(out, r);
    }
    return 0;
}

int cmd_simulate(const Common& c, double split, std::uint64_t requests, const std::string& trace_path)
{
    const ExperimentConfig cfg = resolve(c, false);
    const ContentModel content = cfg.content();
    const TrafficModel traffic = cfg.traffic();
    const CoverageTable cov = coverage_table(content.b, cfg.geometry, cfg.radio, cfg.quad);
    const double w_d = split * cfg.radio.bandwidth_hz;
    const ServiceRates rates = service_rates(cov, w_d, cfg.radio.bandwidth_hz - w_d, cfg.radio);
    const ArrivalSplit arr = split_arrivals(traffic, content, cfg.geometry);

    DesConfig des;
    des.horizon_requests = requests;
    des.seed = cfg.seed;
    std::ofstream trace;
    DesOptions opts;
    if (!trace_path.empty()) {
        trace.open(trace_path, std::ios::binary);
        if (!trace) {
            throw std::runtime_error("cannot write " + trace_path);
        }
        opts.trace = &trace;
    }
    std::cout.precision(10);
    const DesResult d = simulate_mpsq(arr.zeta_i, rates.mu_i, des, opts);
    des.seed = cfg.seed + 1;
    const DesResult b = simulate_bs_queue(traffic.eta, arr.zeta_b, rates.mu_b, des);
    auto report = [](const char* name, const DesResult& r, const std::optional<double>& model) {
        std::cout << name << "_des_mean ";
        if (r.empty) {
            std::cout << "none (no arrivals)\n";
        } else if (!r.stable) {
            std::cout << "unstable\n";
        } else {
            std::cout << r.mean << " +- " << r.ci95 << " (95%, " << r.samples << " requests)\n";
        }
        if (model) {
            std::cout << name << "_model " << *model << "\n";
        }
        if (!r.warning.empty()) {
            std::cout << name << "_warning " << r.warning << "\n";
        }
    };
    std::optional<double> md, mb;
    try {
        md = d2d_delay(arr, rates.mu_i);
    } catch (const UnstableQueue&) {
    }
    try {
        mb = bs_delay(arr, rates.mu_b, traffic.eta);
    } catch (const UnstableQueue&) {
    }
    report("d2d", d, md);
    report("bs", b, mb);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Clustered D2D caching: coverage, delay and caching optimization"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--config", common.config, "config file (key = value)");
    app.add_option("--out-dir", common.out_dir, "directory for CSV and manifest files");
    app.add_option("--seed", common.seed, "master seed");
    app.add_option("--threads", common.threads, "worker threads (default: $D2DCACHE_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    app.add_option("--trials", common.trials, "Monte Carlo trials per point");
    app.add_option("--set", common.overrides, "override a config key, key=value (repeatable)");

    auto* run = app.add_subcommand("run", "run the experiment described by a config file");
    std::string run_path;
    run->add_option("config_file", run_path, "config file; same as --config");

    auto* figure = app.add_subcommand("figure", "run a recipe with its defaults");
    std::string figure_id;
    figure->add_option("id", figure_id, "recipe id, e.g. Fig4_CoverageVsP or fig4")->required();

    auto* coverage = app.add_subcommand("coverage", "analytic (and optionally simulated) coverage");
    double cov_b = 1.0;
    bool cov_mc = false;
    coverage->add_option("--b", cov_b, "caching probability of the content")->check(CLI::Range(0.0, 1.0));
    coverage->add_flag("--mc", cov_mc, "also run the Monte Carlo estimator");

    auto* delay = app.add_subcommand("delay", "weighted delay at a fixed bandwidth split");
    double split = 0.5;
    delay->add_option("--bandwidth-split", split, "fraction of W given to D2D");

    auto* optimize = app.add_subcommand("optimize", "joint caching and bandwidth optimization");
    std::string trace_path;
    optimize->add_option("--trace", trace_path, "write the iterate trace as CSV");

    auto* simulate = app.add_subcommand("simulate-queue", "discrete-event simulation of both queues");
    double sim_split = 0.5;
    std::uint64_t requests = 1000000;
    std::string sim_trace;
    simulate->add_option("--bandwidth-split", sim_split, "fraction of W given to D2D");
    simulate->add_option("--requests", requests, "simulated requests per queue");
    simulate->add_option("--trace", sim_trace, "write the D2D event trace as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            if (!run_path.empty()) {
                common.config = run_path;
            }
            return cmd_run(common, {});
        }
        if (*figure) {
            return cmd_run(common, figure_id);
        }
        if (*coverage) {
            return cmd_coverage(common, cov_b, cov_mc);
        }
        if (*delay) {
            return cmd_delay(common, split);
        }
        if (*optimize) {
            return cmd_optimize(common, trace_path);
        }
        if (*simulate) {
            return cmd_simulate(common, sim_split, requests, sim_trace);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Infeasible& e) {
        std::cerr << "infeasible: " << e.what() << " (stability constraints need " << e.deficit()
                  << " Hz more than W)\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
