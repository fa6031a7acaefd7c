#include "d2dcache/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>

#include "json.hpp"

#include "d2dcache/coverage.hpp"
#include "d2dcache/delay.hpp"
#include "d2dcache/errors.hpp"
#include "d2dcache/montecarlo.hpp"
#include "d2dcache/optimizer.hpp"
#include "d2dcache/quadrature.hpp"
#include "d2dcache/rng.hpp"

#ifndef D2DCACHE_VERSION
#define D2DCACHE_VERSION "unknown"
#endif

namespace d2dcache {

namespace {

using Row = std::vector<std::string>;

constexpr double inf = std::numeric_limits<double>::infinity();

std::string num(double x)
{
    return std::isfinite(x) ? format_double(x) : std::string(unstable_sentinel);
}

std::string opt_num(const std::optional<double>& x)
{
    return x ? num(*x) : std::string();
}

// Inner Monte Carlo threads when the sweep itself has fewer points than
// workers.
unsigned inner_threads(const ExperimentConfig& cfg, std::size_t points)
{
    return points >= cfg.threads ? 1u : static_cast<unsigned>(cfg.threads / std::max<std::size_t>(points, 1));
}

MonteCarloConfig mc_for(const ExperimentConfig& cfg, std::size_t row, std::size_t points)
{
    MonteCarloConfig mc;
    mc.trials = cfg.trials;
    mc.seed = derive_seed(cfg.seed, row);
    mc.threads = inner_threads(cfg, points);
    return mc;
}

void require_grid(const std::vector<double>& v, const char* what)
{
    if (v.empty()) {
        throw ConfigError(std::string("recipe needs a non-empty ") + what, 0, what);
    }
}

// Everything the delay recipes need at one geometry.
struct DelayModel {
    NetworkGeometry geometry;
    RadioConfig radio;
    SolverConfig solver;
    int n_files;
    int cache_size;
    CachingPolicy policy;
    UpsilonMap map;
    double upsilon_b;

    static DelayModel make(const ExperimentConfig& cfg, const NetworkGeometry& g)
    {
        return {g,
                cfg.radio,
                cfg.solver,
                cfg.n_files,
                cfg.cache_size,
                cfg.policy,
                tabulate_upsilon(g, cfg.radio, cfg.solver.upsilon_grid_points, cfg.quad),
                bs_coverage(cfg.radio.theta, cfg.radio.alpha, cfg.quad)};
    }

    ContentModel content(double beta, CachingPolicy p) const
    {
        ContentModel c = ContentModel::zipf(n_files, cache_size, beta);
        c.b = baseline_caching(p, c);
        return c;
    }

    DelayConstants constants(const ContentModel& c) const
    {
        DelayConstants k = delay_constants(c, geometry, coverage_from_map(map, c.b, upsilon_b), radio);
        return k;
    }

    // Baseline caching at a fixed split; +inf when a queue is unstable.
    double baseline(double beta, const TrafficModel& t, CachingPolicy p, double w_d) const
    {
        return weighted_delay_value(constants(content(beta, p)), t, radio.bandwidth_hz, w_d);
    }

    std::optional<OptimizationResult> optimize(double beta, const TrafficModel& t) const
    {
        try {
            return bcd_optimize(content(beta, policy), t, geometry, radio, solver, map);
        } catch (const Infeasible&) {
            return std::nullopt;
        }
    }

    // Caching optimized at the equal split only.
    double caching_only(double beta, const TrafficModel& t) const
    {
        const double half = 0.5 * radio.bandwidth_hz;
        for (CachingPolicy p : {policy, CachingPolicy::ZipfProportional, CachingPolicy::Uniform}) {
            const ContentModel c = content(beta, p);
            if (std::isfinite(baseline(beta, t, p, half))) {
                return optimize_caching(half, c.b, c, t, geometry, radio, map, solver).t;
            }
        }
        return inf;
    }
};

NetworkGeometry with_lambda_p(NetworkGeometry g, double lambda_p, const ExperimentConfig& cfg)
{
    g.lambda_p_per_km2 = lambda_p;
    if (cfg.eta) {
        g.lambda_b_per_km2 = lambda_p / *cfg.eta;
    }
    return g;
}

TrafficModel traffic_at(const ExperimentConfig& cfg, const NetworkGeometry& g, double zeta)
{
    TrafficModel t{zeta, cfg.eta ? *cfg.eta : g.clients_per_bs()};
    t.validate();
    return t;
}

RecipeOutput fig3(const ExperimentConfig& cfg)
{
    require_grid(cfg.b_values, "b_values");
    if (cfg.trials == 0) {
        throw ConfigError("the nearest-distance recipe needs trials > 0", 0, "trials");
    }
    const std::size_t n = cfg.b_values.size();
    auto blocks = parallel_map<std::vector<Row>>(n, cfg.threads, [&](std::size_t k) {
        const double b = cfg.b_values[k];
        const Histogram h = estimate_nearest_pdf(cfg.geometry, b, cfg.bins, mc_for(cfg, k, n));
        const double mass = -std::expm1(-b * cfg.geometry.p * cfg.geometry.n_bar);
        const auto pdf = [&](double x) { return nearest_provider_pdf(x, b, cfg.geometry, cfg.quad) / mass; };
        std::vector<Row> rows;
        for (std::size_t j = 0; j + 1 < h.edges.size(); ++j) {
            const double lo = h.edges[j];
            const double hi = h.edges[j + 1];
            const double avg = integrate(pdf, lo, hi, cfg.quad) / (hi - lo);
            rows.push_back({num(b), num(lo), num(hi), num(0.5 * (lo + hi)), num(pdf(0.5 * (lo + hi))),
                            num(avg), num(h.density[j])});
        }
        return rows;
    });
    RecipeOutput out;
    out.table.header = {"b_i", "bin_lo_m", "bin_hi_m", "h_m", "analytic_pdf", "analytic_bin_mean", "mc_density"};
    for (auto& blk : blocks) {
        for (auto& r : blk) {
            out.table.rows.push_back(std::move(r));
        }
    }
    out.notes.push_back("analytic pdf normalized by the probability that a provider exists");
    out.notes.push_back("histogram over [0, largest sample], samples conditioned on a provider existing");
    return out;
}

RecipeOutput fig4(const ExperimentConfig& cfg)
{
    require_grid(cfg.sweep_values, "sweep_values");
    require_grid(cfg.b_values, "b_values");
    struct Point {
        double p;
        double b;
    };
    std::vector<Point> pts;
    for (double b : cfg.b_values) {
        for (double p : cfg.sweep_values) {
            pts.push_back({p, b});
        }
    }
    RecipeOutput out;
    out.table.header = {"p", "b_i", "analytic", "mc_mean", "mc_ci99"};
    out.table.rows = parallel_map<Row>(pts.size(), cfg.threads, [&](std::size_t k) {
        NetworkGeometry g = cfg.geometry;
        g.p = pts[k].p;
        const double an = d2d_coverage(pts[k].b, g, cfg.radio, cfg.quad);
        std::optional<double> mean, ci;
        if (cfg.trials > 0) {
            const CoverageEstimate e = estimate_d2d_coverage(g, cfg.radio, pts[k].b, mc_for(cfg, k, pts.size()));
            mean = e.mean;
            ci = e.half_width_99;
        }
        return Row{num(pts[k].p), num(pts[k].b), num(an), opt_num(mean), opt_num(ci)};
    });
    out.notes.push_back("coverage conditioned on a provider of the content existing in the cluster");
    out.notes.push_back("Monte Carlo: adaptive window, seed of row k = derive_seed(seed, k)");
    return out;
}

RecipeOutput fig5(const ExperimentConfig& cfg)
{
    require_grid(cfg.sweep_values, "sweep_values");
    const DelayModel model = DelayModel::make(cfg, cfg.geometry);
    struct Point {
        const char* axis;
        double beta;
        double zeta;
    };
    std::vector<Point> pts;
    for (double beta : cfg.sweep_values) {
        pts.push_back({"beta", beta, cfg.zeta});
    }
    for (double zeta : cfg.series_values) {
        pts.push_back({"zeta", cfg.beta, zeta});
    }
    RecipeOutput out;
    out.table.header = {"axis", "beta", "zeta", "w_d_ratio", "t_seconds", "iterations"};
    out.table.rows = parallel_map<Row>(pts.size(), cfg.threads, [&](std::size_t k) {
        const auto r = model.optimize(pts[k].beta, traffic_at(cfg, cfg.geometry, pts[k].zeta));
        if (!r) {
            return Row{pts[k].axis, num(pts[k].beta), num(pts[k].zeta), unstable_sentinel, unstable_sentinel, ""};
        }
        return Row{pts[k].axis, num(pts[k].beta), num(pts[k].zeta), num(r->w_d_star / cfg.radio.bandwidth_hz),
                   num(r->t_star), std::to_string(r->iterations)};
    });
    out.notes.push_back("beta rows use zeta = config zeta; zeta rows use beta = config beta");
    return out;
}

RecipeOutput fig6(const ExperimentConfig& cfg)
{
    require_grid(cfg.sweep_values, "sweep_values");
    require_grid(cfg.b_values, "b_values");
    const std::vector<double> lambdas =
        cfg.series_values.empty() ? std::vector<double>{cfg.geometry.lambda_p_per_km2} : cfg.series_values;
    struct Point {
        double sigma;
        double lambda;
        double b;
    };
    std::vector<Point> pts;
    for (double b : cfg.b_values) {
        for (double lambda : lambdas) {
            for (double sigma : cfg.sweep_values) {
                pts.push_back({sigma, lambda, b});
            }
        }
    }
    RecipeOutput out;
    out.table.header = {"sigma_m", "lambda_p_per_km2", "b_i", "analytic", "mc_mean", "mc_ci99"};
    out.table.rows = parallel_map<Row>(pts.size(), cfg.threads, [&](std::size_t k) {
        NetworkGeometry g = with_lambda_p(cfg.geometry, pts[k].lambda, cfg);
        g.sigma_m = pts[k].sigma;
        const double an = d2d_coverage(pts[k].b, g, cfg.radio, cfg.quad);
        std::optional<double> mean, ci;
        if (cfg.trials > 0) {
            const CoverageEstimate e = estimate_d2d_coverage(g, cfg.radio, pts[k].b, mc_for(cfg, k, pts.size()));
            mean = e.mean;
            ci = e.half_width_99;
        }
        return Row{num(pts[k].sigma), num(pts[k].lambda), num(pts[k].b), num(an), opt_num(mean), opt_num(ci)};
    });
    return out;
}

RecipeOutput fig8(const ExperimentConfig& cfg)
{
    require_grid(cfg.sweep_values, "sweep_values");
    require_grid(cfg.b_values, "b_values");
    if (cfg.trials == 0) {
        throw ConfigError("the variant recipe needs trials > 0", 0, "trials");
    }
    const std::vector<std::string> variants = {"tcp_nearest", "ppp_nearest", "mcp_nearest", "tcp_best_channel",
                                               "tcp_nakagami_los"};
    struct Point {
        double sigma;
        double b;
        std::size_t variant;
    };
    std::vector<Point> pts;
    for (double b : cfg.b_values) {
        for (double sigma : cfg.sweep_values) {
            for (std::size_t v = 0; v < variants.size(); ++v) {
                pts.push_back({sigma, b, v});
            }
        }
    }
    RecipeOutput out;
    out.table.header = {"sigma_m", "b_i", "variant", "mc_mean", "mc_ci99", "analytic"};
    out.table.rows = parallel_map<Row>(pts.size(), cfg.threads, [&](std::size_t k) {
        NetworkGeometry g = cfg.geometry;
        g.sigma_m = pts[k].sigma;
        RadioConfig radio = cfg.radio;
        radio.channel_mode = ChannelMode::RayleighNLoS;
        MonteCarloConfig mc = mc_for(cfg, k, pts.size());
        std::optional<double> an;
        switch (pts[k].variant) {
        case 0:
            an = d2d_coverage(pts[k].b, g, radio, cfg.quad);
            break;
        case 1:
            mc.process = PoissonKind{};
            break;
        case 2:
            mc.process = MaternKind{pts[k].sigma};
            break;
        case 3:
            mc.selection = ProviderSelection::BestChannel;
            break;
        default:
            radio.channel_mode = ChannelMode::NakagamiLoSIntra;
            if (!radio.alpha_los || !radio.nakagami_m) {
                throw ConfigError("tcp_nakagami_los needs alpha_los and nakagami_m", 0, "alpha_los");
            }
            break;
        }
        const CoverageEstimate e = estimate_coverage_variant(g, radio, pts[k].b, mc);
        return Row{num(pts[k].sigma), num(pts[k].b), variants[pts[k].variant], num(e.mean), num(e.half_width_99),
                   opt_num(an)};
    });
    out.notes.push_back("ppp_nearest: Poisson devices of density n_bar * lambda_p, same marks");
    out.notes.push_back("mcp_nearest: disc radius equal to sigma_m");
    return out;
}

RecipeOutput fig9(const ExperimentConfig& cfg)
{
    require_grid(cfg.sweep_values, "sweep_values");
    const DelayModel model = DelayModel::make(cfg, cfg.geometry);
    struct Point {
        const char* axis;
        double beta;
        double zeta;
    };
    std::vector<Point> pts;
    for (double beta : cfg.sweep_values) {
        pts.push_back({"beta", beta, cfg.zeta});
    }
    for (double zeta : cfg.series_values) {
        pts.push_back({"zeta", cfg.beta, zeta});
    }
    const double half = 0.5 * cfg.radio.bandwidth_hz;
    RecipeOutput out;
    out.table.header = {"axis", "beta", "zeta", "t_optimized", "w_d_ratio", "t_zipf_top_m", "t_uniform",
                        "t_zipf_proportional"};
    out.table.rows = parallel_map<Row>(pts.size(), cfg.threads, [&](std::size_t k) {
        const TrafficModel t = traffic_at(cfg, cfg.geometry, pts[k].zeta);
        const auto r = model.optimize(pts[k].beta, t);
        return Row{pts[k].axis,
                   num(pts[k].beta),
                   num(pts[k].zeta),
                   r ? num(r->t_star) : unstable_sentinel,
                   r ? num(r->w_d_star / cfg.radio.bandwidth_hz) : unstable_sentinel,
                   num(model.baseline(pts[k].beta, t, CachingPolicy::ZipfTopM, half)),
                   num(model.baseline(pts[k].beta, t, CachingPolicy::Uniform, half)),
                   num(model.baseline(pts[k].beta, t, CachingPolicy::ZipfProportional, half))};
    });
    out.notes.push_back("baselines use the equal split W_d = W / 2");
    return out;
}

RecipeOutput fig10(const ExperimentConfig& cfg)
{
    require_grid(cfg.sweep_values, "sweep_values");
    const std::vector<double> lambdas =
        cfg.series_values.empty() ? std::vector<double>{cfg.geometry.lambda_p_per_km2} : cfg.series_values;
    struct Point {
        double sigma;
        double lambda;
    };
    std::vector<Point> pts;
    for (double lambda : lambdas) {
        for (double sigma : cfg.sweep_values) {
            pts.push_back({sigma, lambda});
        }
    }
    const double half = 0.5 * cfg.radio.bandwidth_hz;
    RecipeOutput out;
    out.table.header = {"sigma_m", "lambda_p_per_km2", "t_optimized", "w_d_ratio", "t_zipf_top_m"};
    out.table.rows = parallel_map<Row>(pts.size(), cfg.threads, [&](std::size_t k) {
        NetworkGeometry g = with_lambda_p(cfg.geometry, pts[k].lambda, cfg);
        g.sigma_m = pts[k].sigma;
        const DelayModel model = DelayModel::make(cfg, g);
        const TrafficModel t = traffic_at(cfg, g, cfg.zeta);
        const auto r = model.optimize(cfg.beta, t);
        return Row{num(pts[k].sigma), num(pts[k].lambda), r ? num(r->t_star) : unstable_sentinel,
                   r ? num(r->w_d_star / cfg.radio.bandwidth_hz) : unstable_sentinel,
                   num(model.baseline(cfg.beta, t, CachingPolicy::ZipfTopM, half))};
    });
    return out;
}

RecipeOutput fig11(const ExperimentConfig& cfg)
{
    require_grid(cfg.sweep_values, "sweep_values");
    const double half = 0.5 * cfg.radio.bandwidth_hz;
    RecipeOutput out;
    out.table.header = {"p", "t_optimized", "w_d_ratio", "t_equal_split", "t_zipf_top_m"};
    out.table.rows = parallel_map<Row>(cfg.sweep_values.size(), cfg.threads, [&](std::size_t k) {
        NetworkGeometry g = cfg.geometry;
        g.p = cfg.sweep_values[k];
        const DelayModel model = DelayModel::make(cfg, g);
        const TrafficModel t = traffic_at(cfg, g, cfg.zeta);
        const auto r = model.optimize(cfg.beta, t);
        return Row{num(g.p), r ? num(r->t_star) : unstable_sentinel,
                   r ? num(r->w_d_star / cfg.radio.bandwidth_hz) : unstable_sentinel,
                   num(model.caching_only(cfg.beta, t)),
                   num(model.baseline(cfg.beta, t, CachingPolicy::ZipfTopM, half))};
    });
    out.notes.push_back("t_equal_split: caching optimized with W_d fixed at W / 2");
    return out;
}

}  // namespace

const char* library_version() noexcept
{
    return D2DCACHE_VERSION;
}

RecipeOutput run_recipe(const ExperimentConfig& cfg)
{
    cfg.validate();
    switch (parse_recipe(cfg.experiment)) {
    case FigureRecipe::Fig3_NearestPdf:
        return fig3(cfg);
    case FigureRecipe::Fig4_CoverageVsP:
        return fig4(cfg);
    case FigureRecipe::Fig5_OptBandwidth:
        return fig5(cfg);
    case FigureRecipe::Fig6_CoverageVsSigma:
        return fig6(cfg);
    case FigureRecipe::Fig8_Variants:
        return fig8(cfg);
    case FigureRecipe::Fig9_DelayCompare:
        return fig9(cfg);
    case FigureRecipe::Fig10_DelayVsGeometry:
        return fig10(cfg);
    case FigureRecipe::Fig11_DelayVsP:
        return fig11(cfg);
    }
    throw ConfigError("unknown experiment", 0, "experiment");
}

std::string manifest_json(const ExperimentConfig& cfg, const RecipeOutput& out, const std::string& csv_name)
{
    nlohmann::ordered_json j;
    j["tool"] = "d2dcache";
    j["version"] = library_version();
    j["experiment"] = recipe_name(parse_recipe(cfg.experiment));
    j["csv"] = csv_name;
    j["columns"] = out.table.header;
    j["rows"] = out.table.rows.size();
    nlohmann::ordered_json params;
    for (const auto& [k, v] : describe(cfg)) {
        params[k] = v;
    }
    j["parameters"] = params;
    j["seeds"] = {{"master", cfg.seed},
                  {"per_row", "derive_seed(master, row index); trial t of a row uses derive_seed(row seed, t)"}};
    j["notes"] = out.notes;
    return j.dump(2) + "\n";
}

RunArtifacts run_experiment(const ExperimentConfig& cfg, const std::string& out_dir)
{
    const RecipeOutput out = run_recipe(cfg);
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const std::string name = cfg.output.empty() ? std::string(recipe_short_name(parse_recipe(cfg.experiment))) + ".csv"
                                                : cfg.output;
    const fs::path csv = fs::path(out_dir) / name;
    const fs::path manifest = fs::path(out_dir) / (csv.stem().string() + ".manifest.json");
    write_csv_file(csv.string(), out.table);
    std::ofstream m(manifest, std::ios::binary);
    if (!m) {
        throw std::runtime_error("cannot write " + manifest.string());
    }
    m << manifest_json(cfg, out, name);
    return {csv.string(), manifest.string(), out.table.rows.size()};
}

}  // namespace d2dcache
