// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "d2dcache/caching.hpp"
#include "d2dcache/config.hpp"
#include "d2dcache/coverage.hpp"
#include "d2dcache/delay.hpp"
#include "d2dcache/errors.hpp"
#include "d2dcache/experiments.hpp"
#include "d2dcache/optimizer.hpp"
#include "d2dcache/queue_sim.hpp"

using namespace d2dcache;

namespace {

unsigned worker_threads()
{
    if (const char* env = std::getenv("D2DCACHE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            return static_cast<unsigned>(n);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Column access by header name; "unstable" and empty cells read as nullopt.
struct Table {
    CsvTable t;

    std::size_t col(const std::string& name) const
    {
        const auto it = std::find(t.header.begin(), t.header.end(), name);
        if (it == t.header.end()) {
            throw std::runtime_error("no column " + name);
        }
        return static_cast<std::size_t>(it - t.header.begin());
    }
    const std::string& str(std::size_t row, const std::string& name) const { return t.rows[row][col(name)]; }
    std::optional<double> num(std::size_t row, const std::string& name) const
    {
        const std::string& s = str(row, name);
        if (s.empty() || s == unstable_sentinel) {
            return std::nullopt;
        }
        return std::stod(s);
    }
    double at(std::size_t row, const std::string& name) const
    {
        const auto v = num(row, name);
        if (!v) {
            throw std::runtime_error("missing value in column " + name);
        }
        return *v;
    }
    std::size_t size() const { return t.rows.size(); }
};

Table recipe(FigureRecipe r)
{
    ExperimentConfig cfg = recipe_defaults(r);
    cfg.threads = worker_threads();
    return Table{run_recipe(cfg).table};
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [fail: " << what << "]";
        }
    }
};

int failures = 0;

void report(int id, const char* name, const std::function<void(Outcome&)>& body)
{
    Outcome o;
    o.detail.precision(6);
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) {
        ++failures;
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "):" << o.detail.str()
              << std::endl;
}

template <class F>
double golden_section(F f, double lo, double hi, double tol)
{
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Count of strict interior local maxima of a sequence (plateaus count once).
int interior_maxima(const std::vector<double>& y)
{
    int count = 0;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (y[i] <= y[i - 1]) {
            continue;
        }
        std::size_t j = i;
        while (j + 1 < y.size() && y[j + 1] == y[i]) {
            ++j;
        }
        if (j + 1 < y.size() && y[j + 1] < y[i]) {
            ++count;
        }
        i = j;
    }
    return count;
}

std::vector<double> random_caching(std::mt19937_64& rng, int n_files, int cache_size)
{
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<double> y(static_cast<std::size_t>(n_files));
    for (auto& v : y) {
        v = static_cast<double>(cache_size) / n_files + 0.5 * n(rng);
    }
    return project_capped_simplex(y, cache_size);
}

void criterion1(Outcome& o)
{
    const Table t = recipe(FigureRecipe::Fig4_CoverageVsP);
    double worst = -INFINITY;
    int bad = 0;
    for (std::size_t r = 0; r < t.size(); ++r) {
        const double gap = std::abs(t.at(r, "analytic") - t.at(r, "mc_mean"));
        const double tol = t.at(r, "mc_ci99") + 0.01;
        worst = std::max(worst, gap - tol);
        if (gap > tol) {
            ++bad;
            o.detail << " p=" << t.str(r, "p") << " b=" << t.str(r, "b_i") << " |diff|=" << gap << " > " << tol
                     << ";";
        }
    }
    o.detail << " " << t.size() << " points, " << bad << " outside, worst excess " << worst;
    o.require(bad == 0, "analytic outside MC half-width + 0.01");
}

void criterion2(Outcome& o)
{
    // Availability-weighted coverage (1 - e^{-b p n}) * coverage; the
    // provider-conditioned curve is printed for reference.
    const ExperimentConfig base = recipe_defaults(FigureRecipe::Fig4_CoverageVsP);
    for (double b : base.b_values) {
        std::vector<double> weighted, conditioned;
        for (double p : base.sweep_values) {
            NetworkGeometry g = base.geometry;
            g.p = p;
            CoverageOptions opt;
            opt.normalize = false;
            weighted.push_back(d2d_coverage(b, g, base.radio, base.quad, opt));
            conditioned.push_back(d2d_coverage(b, g, base.radio, base.quad));
        }
        const int peaks = interior_maxima(weighted);
        const auto top = std::max_element(weighted.begin(), weighted.end()) - weighted.begin();
        o.detail << " b=" << b << ": " << peaks << " interior max at p=" << base.sweep_values[top]
                 << " (conditioned curve: " << interior_maxima(conditioned) << " interior max);";
        o.require(peaks == 1 && top > 0 && top + 1 < static_cast<long>(weighted.size()),
                  "not unimodal for b=" + std::to_string(b));
    }
}

void criterion3(Outcome& o)
{
    const Table t = recipe(FigureRecipe::Fig3_NearestPdf);
    std::map<std::string, double> l1, inside;
    for (std::size_t r = 0; r < t.size(); ++r) {
        const double w = t.at(r, "bin_hi_m") - t.at(r, "bin_lo_m");
        const double a = t.at(r, "analytic_bin_mean");
        l1[t.str(r, "b_i")] += std::abs(a - t.at(r, "mc_density")) * w;
        inside[t.str(r, "b_i")] += a * w;
    }
    for (auto& [b, v] : l1) {
        // Analytic mass beyond the histogram range counts fully.
        v += std::max(0.0, 1.0 - inside[b]);
        o.detail << " b=" << b << " L1=" << v << ";";
        o.require(v <= 0.05, "L1 above 0.05 at b=" + b);
    }
    o.require(l1.count("0.5") == 1 && l1.count("1") == 1, "b_i grid must hold 0.5 and 1");
}

void criterion4(Outcome& o)
{
    const Table t = recipe(FigureRecipe::Fig6_CoverageVsSigma);
    // (lambda, sigma) -> coverage
    std::map<double, std::map<double, double>> cov;
    for (std::size_t r = 0; r < t.size(); ++r) {
        cov[t.at(r, "lambda_p_per_km2")][t.at(r, "sigma_m")] = t.at(r, "analytic");
    }
    int pairs = 0, violations = 0;
    for (const auto& [lambda, row] : cov) {
        double prev = INFINITY;
        for (const auto& [sigma, v] : row) {
            ++pairs;
            if (v > prev) {
                ++violations;
                o.detail << " sigma increase at lambda=" << lambda << " sigma=" << sigma << ";";
            }
            prev = v;
        }
    }
    for (auto it = cov.begin(); std::next(it) != cov.end(); ++it) {
        for (const auto& [sigma, v] : std::next(it)->second) {
            ++pairs;
            if (v > it->second.at(sigma)) {
                ++violations;
                o.detail << " lambda increase at sigma=" << sigma << ";";
            }
        }
    }
    o.detail << " " << pairs << " consecutive pairs, " << violations << " increases";
    o.require(violations == 0, "coverage increased");
}

void criterion5(Outcome& o)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const NetworkGeometry g;
    const RadioConfig radio;
    const UpsilonMap map = tabulate_upsilon(g, radio, 17);
    const double ub = bs_coverage(radio.theta, radio.alpha);
    const double w = radio.bandwidth_hz;
    int done = 0, draws = 0;
    double worst_gap = 0.0, worst_curv = INFINITY;
    while (done < 50) {
        ++draws;
        const int n_files = 3 + static_cast<int>(u01(rng) * 12);
        const int m = 1 + static_cast<int>(u01(rng) * std::min(3, n_files - 1));
        ContentModel c = ContentModel::zipf(n_files, m, 0.1 + 1.9 * u01(rng));
        c.b = random_caching(rng, n_files, m);
        const TrafficModel t{0.02 + 0.6 * u01(rng), 1.0 + 9.0 * u01(rng)};
        const DelayConstants k = delay_constants(c, g, coverage_from_map(map, c.b, ub), radio);
        double closed;
        try {
            closed = optimal_bandwidth(k, t, w);
        } catch (const Infeasible&) {
            continue;
        }
        const double lo = t.zeta * k.a / k.c;
        const double hi = w - t.eta * t.zeta * k.b / (k.c * k.upsilon_b);
        const auto f = [&](double x) { return weighted_delay_value(k, t, w, x); };
        const double gs = golden_section(f, lo + 1e-9 * w, hi - 1e-9 * w, 1e-6 * w);
        worst_gap = std::max(worst_gap, std::abs(gs - closed) / w);
        const int grid = 2000;
        const double h = (hi - lo) / grid;
        for (int i = 1; i < grid; ++i) {
            const double x = lo + i * h;
            const double d2 = f(x - h) - 2.0 * f(x) + f(x + h);
            worst_curv = std::min(worst_curv, d2);
        }
        ++done;
    }
    o.detail << " 50 feasible of " << draws << " draws, max |closed - golden|/W=" << worst_gap
             << ", min second difference=" << worst_curv;
    o.require(worst_gap <= 1e-4, "closed form away from the golden-section argmin");
    o.require(worst_curv >= -1e-9, "negative second difference");
}

void criterion6(Outcome& o)
{
    const Table t = recipe(FigureRecipe::Fig5_OptBandwidth);
    for (const char* axis : {"beta", "zeta"}) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t r = 0; r < t.size(); ++r) {
            if (t.str(r, "axis") != axis) {
                continue;
            }
            const auto ratio = t.num(r, "w_d_ratio");
            if (ratio) {
                pts.emplace_back(t.at(r, axis), *ratio);
            }
        }
        const bool up = std::string(axis) == "beta";
        int bad = 0;
        o.detail << " " << axis << ":";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            o.detail << " " << pts[i].second;
            if (i > 0 && (up ? pts[i].second < pts[i - 1].second : pts[i].second > pts[i - 1].second)) {
                ++bad;
            }
        }
        o.detail << " (" << bad << " reversals);";
        o.require(bad == 0, std::string("W_d*/W not ") + (up ? "non-decreasing in beta" : "non-increasing in zeta"));
    }
}

void criterion7(Outcome& o)
{
    const Table t = recipe(FigureRecipe::Fig9_DelayCompare);
    int checked = 0;
    for (std::size_t r = 0; r < t.size(); ++r) {
        if (t.str(r, "axis") != "beta" || t.at(r, "beta") > 0.4 + 1e-12) {
            continue;
        }
        ++checked;
        const auto opt = t.num(r, "t_optimized");
        const auto top = t.num(r, "t_zipf_top_m");
        const auto uni = t.num(r, "t_uniform");
        o.detail << " beta=" << t.str(r, "beta") << " opt=" << t.str(r, "t_optimized")
                 << " zipf_top_m=" << t.str(r, "t_zipf_top_m") << " uniform=" << t.str(r, "t_uniform") << ";";
        o.require(opt && top && uni, "unstable scheme at beta=" + t.str(r, "beta"));
        if (opt && top && uni) {
            o.require(*opt < *top, "optimized not below ZipfTopM");
            o.require(*top < *uni, "ZipfTopM not below Uniform at beta=" + t.str(r, "beta"));
            o.require(*top / *opt >= 1.5, "ZipfTopM / optimized below 1.5");
        }
    }
    o.require(checked > 0, "no beta <= 0.4 points");
}

void criterion8(Outcome& o)
{
    DesConfig des;
    des.horizon_requests = 1000000;
    for (double rho : {0.3, 0.5, 0.7}) {
        const double lam[] = {rho};
        const double mu[] = {1.0};
        des.seed = static_cast<std::uint64_t>(rho * 10);
        const DesResult r = simulate_mpsq(lam, mu, des);
        const double exact = 1.0 / (1.0 - rho);
        const double err = std::abs(r.mean - exact) / exact;
        o.detail << " M/M/1 rho=" << rho << " err=" << err << ";";
        o.require(err <= 0.05, "M/M/1 off by more than 5%");
    }
    // Two classes with equal arrival rates, service rates 4x and 2x apart,
    // total load 0.3.
    for (double spread : {2.0, 4.0}) {
        const double mu[] = {1.0, spread};
        const double share = 0.3 / (1.0 + 1.0 / spread);
        const double lam[] = {share, share};
        ArrivalSplit split;
        split.zeta_i = {share, share};
        split.zeta_d = 2 * share;
        const double model = d2d_delay(split, mu);
        des.seed = 100 + static_cast<std::uint64_t>(spread);
        const DesResult r = simulate_mpsq(lam, mu, des);
        const double err = std::abs(r.mean - model) / model;
        o.detail << " two-class spread=" << spread << " err=" << err << ";";
        o.require(err <= 0.15, "two-class approximation off by more than 15%");
    }
}

void criterion9(Outcome& o)
{
    const NetworkGeometry g;
    const RadioConfig radio;
    const SolverConfig solver;
    const UpsilonMap map = tabulate_upsilon(g, radio, solver.upsilon_grid_points);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int done = 0, draws = 0, bad = 0;
    while (done < 20) {
        ++draws;
        const int n_files = 3 + static_cast<int>(u01(rng) * 10);
        const int m = 1 + static_cast<int>(u01(rng) * std::min(3, n_files - 1));
        const ContentModel c = ContentModel::zipf(n_files, m, 0.2 + 1.8 * u01(rng));
        const TrafficModel t{0.05 + 0.5 * u01(rng), 5.0};
        OptimizationResult r;
        try {
            r = bcd_optimize(c, t, g, radio, solver, map);
        } catch (const Infeasible&) {
            continue;
        }
        for (std::size_t k = 1; k < r.objective_trace.size(); ++k) {
            if (r.objective_trace[k] > r.objective_trace[k - 1]) {
                ++bad;
            }
        }
        ++done;
    }
    o.detail << " 20 instances of " << draws << " draws, " << bad << " trace increases;";
    o.require(bad == 0, "objective trace increased");

    // N_f = 3, M = 1 against a grid over the caching simplex (step 0.02) and
    // the D2D bandwidth (step W/400). Coverage from direct quadrature on both
    // sides.
    const double ub = bs_coverage(radio.theta, radio.alpha);
    const int nb = 50, nw = 400;
    std::vector<double> cov_at(nb + 1);
    for (int i = 0; i <= nb; ++i) {
        cov_at[i] = coverage_table(std::vector<double>{i / double(nb)}, g, radio).upsilon_d[0];
    }
    const double w = radio.bandwidth_hz;
    for (const auto& [beta, zeta] : std::vector<std::pair<double, double>>{{0.5, 0.3}, {1.0, 0.3}, {1.5, 0.5}}) {
        ContentModel c = ContentModel::zipf(3, 1, beta);
        const TrafficModel t{zeta, 5.0};
        const OptimizationResult r = bcd_optimize(c, t, g, radio, solver, map);
        c.b = r.b_star;
        const double t_bcd =
            weighted_delay_value(delay_constants(c, g, coverage_table(c.b, g, radio), radio), t, w, r.w_d_star);
        double best = INFINITY;
        for (int i = 0; i <= nb; ++i) {
            for (int j = 0; i + j <= nb; ++j) {
                c.b = {i / double(nb), j / double(nb), (nb - i - j) / double(nb)};
                const CoverageTable ct{{cov_at[i], cov_at[j], cov_at[nb - i - j]}, ub};
                const DelayConstants k = delay_constants(c, g, ct, radio);
                for (int s = 1; s < nw; ++s) {
                    best = std::min(best, weighted_delay_value(k, t, w, s * w / nw));
                }
            }
        }
        const double rel = t_bcd / best - 1.0;
        o.detail << " beta=" << beta << " zeta=" << zeta << " bcd=" << t_bcd << " grid=" << best
                 << " (" << 100 * rel << "%);";
        o.require(rel <= 0.02, "BCD more than 2% above the grid optimum");
    }
}

void criterion10(Outcome& o)
{
    const Table t = recipe(FigureRecipe::Fig11_DelayVsP);
    std::vector<double> neg;
    int compared = 0;
    for (std::size_t r = 0; r < t.size(); ++r) {
        const auto opt = t.num(r, "t_optimized");
        if (!opt) {
            continue;
        }
        neg.push_back(-*opt);
        const auto eq = t.num(r, "t_equal_split");
        if (eq) {
            ++compared;
            o.require(*opt <= *eq, "optimized above equal split at p=" + t.str(r, "p"));
        }
    }
    const int minima = interior_maxima(neg);
    const auto best = std::max_element(neg.begin(), neg.end()) - neg.begin();
    o.detail << " " << neg.size() << " stable p, " << minima << " interior minimum, lowest T=" << -neg[best]
             << " at index " << best << ", " << compared << " equal-split comparisons";
    o.require(minima == 1 && best > 0 && best + 1 < static_cast<long>(neg.size()), "T over p not unimodal");
}

void criterion11(Outcome& o)
{
    const Table t = recipe(FigureRecipe::Fig8_Variants);
    std::map<double, std::map<std::string, std::pair<double, double>>> v;
    for (std::size_t r = 0; r < t.size(); ++r) {
        v[t.at(r, "sigma_m")][t.str(r, "variant")] = {t.at(r, "mc_mean"), t.at(r, "mc_ci99")};
    }
    // a above b with disjoint 99% intervals.
    auto above = [&](double sigma, const std::string& a, const std::string& b) {
        const auto& x = v.at(sigma).at(a);
        const auto& y = v.at(sigma).at(b);
        const bool ok = x.first - x.second > y.first + y.second;
        o.require(ok, a + " not above " + b + " at sigma=" + std::to_string(sigma));
    };
    o.require(v.size() >= 3, "fewer than three operating points");
    for (const auto& [sigma, m] : v) {
        above(sigma, "tcp_nearest", "ppp_nearest");
        above(sigma, "mcp_nearest", "tcp_nearest");
        above(sigma, "tcp_best_channel", "tcp_nearest");
        above(sigma, "tcp_nearest", "tcp_nakagami_los");
        o.detail << " sigma=" << sigma << ": tcp " << m.at("tcp_nearest").first << " ppp "
                 << m.at("ppp_nearest").first << " mcp " << m.at("mcp_nearest").first << " best "
                 << m.at("tcp_best_channel").first << " los " << m.at("tcp_nakagami_los").first << ";";
    }
}

}  // namespace

int main()
{
    report(1, "analytic vs Monte Carlo coverage", criterion1);
    report(2, "coverage unimodal in p", criterion2);
    report(3, "nearest-distance pdf L1", criterion3);
    report(4, "coverage monotone in sigma and lambda_p", criterion4);
    report(5, "closed-form bandwidth optimality", criterion5);
    report(6, "optimized bandwidth trends", criterion6);
    report(7, "delay scheme ordering", criterion7);
    report(8, "queueing formulas vs simulation", criterion8);
    report(9, "block coordinate descent", criterion9);
    report(10, "delay unimodal in p", criterion10);
    report(11, "model variant ordering", criterion11);
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
    return failures == 0 ? 0 : 1;
}
