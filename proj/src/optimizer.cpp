#include "d2dcache/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>

#include "d2dcache/errors.hpp"

namespace d2dcache {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

DelayConstants constants_from_map(const ContentModel& content, const NetworkGeometry& geometry,
                                  const UpsilonMap& map, double upsilon_b, double c,
                                  std::span<const double> b)
{
    const double active = geometry.p * geometry.n_bar;
    DelayConstants k;
    k.c = c;
    k.upsilon_b = upsilon_b;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double hit = -std::expm1(-b[i] * active);
        if (hit > 0.0) {
            const double u = map(b[i]);
            k.a += u > 0.0 ? content.q[i] * hit / u : inf;
        }
        k.b += content.q[i] * std::exp(-b[i] * active);
    }
    return k;
}

// Delay at fixed W_d plus a log barrier on the relative slack of each loaded
// queue's stability condition.
struct CachingObjective {
    const ContentModel& content;
    const TrafficModel& traffic;
    const NetworkGeometry& geometry;
    const UpsilonMap& map;
    double w_d = 0.0;
    double total_w = 0.0;
    double c = 0.0;
    double upsilon_b = 0.0;

    DelayConstants constants(std::span<const double> b) const
    {
        return constants_from_map(content, geometry, map, upsilon_b, c, b);
    }

    double delay(std::span<const double> b) const
    {
        return weighted_delay_value(constants(b), traffic, total_w, w_d);
    }

    double penalised(std::span<const double> b, double weight) const
    {
        const DelayConstants k = constants(b);
        const double t = weighted_delay_value(k, traffic, total_w, w_d);
        if (!std::isfinite(t) || weight == 0.0) {
            return t;
        }
        double barrier = 0.0;
        if (k.a > 0.0) {
            const double cap = w_d * k.c;
            barrier -= std::log((cap - traffic.zeta * k.a) / cap);
        }
        if (k.b > 0.0) {
            const double cap = (total_w - w_d) * k.c * k.upsilon_b;
            barrier -= std::log((cap - traffic.eta * traffic.zeta * k.b) / cap);
        }
        return t + weight * barrier;
    }
};

std::vector<double> fd_gradient(const CachingObjective& f, std::vector<double> b, double weight,
                                double step)
{
    std::vector<double> g(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double orig = b[i];
        const double lo = std::max(0.0, orig - step);
        const double hi = std::min(1.0, orig + step);
        b[i] = lo;
        const double f_lo = f.penalised(b, weight);
        b[i] = hi;
        const double f_hi = f.penalised(b, weight);
        b[i] = orig;
        if (std::isfinite(f_lo) && std::isfinite(f_hi) && hi > lo) {
            g[i] = (f_hi - f_lo) / (hi - lo);
        } else {
            const double f0 = f.penalised(b, weight);
            if (std::isfinite(f_hi) && hi > orig) {
                g[i] = (f_hi - f0) / (hi - orig);
            } else if (std::isfinite(f_lo) && orig > lo) {
                g[i] = (f0 - f_lo) / (orig - lo);
            }
        }
    }
    return g;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

}  // namespace

void SolverConfig::validate() const
{
    if (!(obj_tol > 0.0) || !(barrier_mu0 > 0.0) || !(grad_step_tol > 0.0) || !(fd_step > 0.0)) {
        throw InvalidArgument("solver tolerances must be positive");
    }
    if (!(barrier_shrink > 0.0 && barrier_shrink < 1.0)) {
        throw InvalidArgument("barrier shrink factor must lie in (0, 1)");
    }
    if (max_outer_iters < 1 || max_inner_iters < 1) {
        throw InvalidArgument("iteration limits must be positive");
    }
    if (upsilon_grid_points < 8) {
        throw InvalidArgument("coverage tabulation needs at least 8 points");
    }
}

UpsilonMap::UpsilonMap(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)),
      values_(std::move(values)),
      spline_(std::vector<double>(nodes_), std::vector<double>(values_))
{
    if (nodes_.size() != values_.size() || nodes_.size() < 4) {
        throw InvalidArgument("coverage map needs at least four matching nodes");
    }
    if (nodes_.front() != 0.0 || nodes_.back() != 1.0) {
        throw InvalidArgument("coverage map must span [0, 1]");
    }
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        if (!(nodes_[i] > nodes_[i - 1]) || values_[i] < values_[i - 1]) {
            throw InvalidArgument("coverage map nodes must increase and values must not decrease");
        }
    }
}

double UpsilonMap::operator()(double b) const
{
    b = std::clamp(b, 0.0, 1.0);
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), b);
    if (it != nodes_.end() && *it == b) {
        return values_[static_cast<std::size_t>(it - nodes_.begin())];
    }
    return std::clamp(spline_(b), 0.0, 1.0);
}

UpsilonMap tabulate_upsilon(const NetworkGeometry& geometry, const RadioConfig& radio,
                            int grid_points, const QuadratureConfig& quad)
{
    geometry.validate();
    radio.validate();
    if (grid_points < 8) {
        throw InvalidArgument("coverage tabulation needs at least 8 points");
    }
    if (radio.channel_mode != ChannelMode::RayleighNLoS) {
        throw Unsupported("analytic coverage assumes a Rayleigh-faded serving link");
    }
    const auto n = static_cast<std::size_t>(grid_points);
    std::vector<double> nodes(n);
    for (std::size_t k = 0; k < n; ++k) {
        nodes[k] = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(k) /
                                         static_cast<double>(n - 1)));
    }
    nodes.front() = 0.0;
    nodes.back() = 1.0;

    const InterLaplaceCache cache(geometry, radio.alpha, quad);
    std::vector<double> values(n);
    double running = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double u =
            detail::d2d_coverage_unchecked(nodes[k], geometry, radio, quad, {true, &cache});
        running = std::max(running, u);
        values[k] = running;
    }
    return UpsilonMap(std::move(nodes), std::move(values));
}

CoverageTable coverage_from_map(const UpsilonMap& map, std::span<const double> b, double upsilon_b)
{
    CoverageTable t;
    t.upsilon_b = upsilon_b;
    t.upsilon_d.reserve(b.size());
    for (double x : b) {
        t.upsilon_d.push_back(map(x));
    }
    return t;
}

double optimal_bandwidth(const DelayConstants& k, const TrafficModel& traffic, double total_w_hz)
{
    const double zeta = traffic.zeta;
    const double need_d = k.a > 0.0 ? zeta * k.a / k.c : 0.0;
    const double need_b =
        k.b > 0.0 ? (k.upsilon_b > 0.0 ? traffic.eta * zeta * k.b / (k.c * k.upsilon_b) : inf)
                  : 0.0;
    if (!(need_d + need_b < total_w_hz)) {
        throw Infeasible("no bandwidth split keeps both queues stable", need_d + need_b - total_w_hz);
    }
    double w_d = 0.0;
    if (k.a == 0.0 && k.b == 0.0) {
        w_d = 0.5 * total_w_hz;
    } else if (k.a == 0.0) {
        w_d = 0.0;
    } else if (k.b == 0.0) {
        w_d = total_w_hz;
    } else {
        const double s = std::sqrt(k.a / (k.b * k.upsilon_b));
        w_d = (zeta * k.a + s * (total_w_hz * k.c * k.upsilon_b - traffic.eta * zeta * k.b)) /
              (k.c + k.c * k.upsilon_b * s);
    }
    w_d = std::clamp(w_d, 0.0, total_w_hz);
    if (!std::isfinite(weighted_delay_value(k, traffic, total_w_hz, w_d))) {
        throw Infeasible("optimal split leaves a queue unstable", 0.0);
    }
    return w_d;
}

double optimal_bandwidth(const ContentModel& content, const TrafficModel& traffic,
                         const NetworkGeometry& geometry, const CoverageTable& coverage,
                         const RadioConfig& radio)
{
    traffic.validate();
    return optimal_bandwidth(delay_constants(content, geometry, coverage, radio), traffic,
                             radio.bandwidth_hz);
}

std::vector<double> project_capped_simplex(std::span<const double> y, int cache_size)
{
    const auto n = y.size();
    if (cache_size < 0 || static_cast<std::size_t>(cache_size) > n) {
        throw InvalidArgument("cache size must lie in [0, N_f]");
    }
    const double m = cache_size;
    const auto mass = [&](double tau) {
        double s = 0.0;
        for (double v : y) {
            s += std::clamp(v - tau, 0.0, 1.0);
        }
        return s;
    };
    double lo = *std::min_element(y.begin(), y.end()) - 1.0;  // mass n
    double hi = *std::max_element(y.begin(), y.end());        // mass 0
    for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (mass(mid) > m ? lo : hi) = mid;
    }
    const double tau = 0.5 * (lo + hi);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        b[i] = std::clamp(y[i] - tau, 0.0, 1.0);
    }
    // Spread the leftover rounding over the free coordinates.
    double residual = m - std::accumulate(b.begin(), b.end(), 0.0);
    std::size_t free_count = 0;
    for (double v : b) {
        free_count += (v > 0.0 && v < 1.0) ? 1 : 0;
    }
    if (free_count > 0 && residual != 0.0) {
        const double share = residual / static_cast<double>(free_count);
        for (double& v : b) {
            if (v > 0.0 && v < 1.0) {
                v = std::clamp(v + share, 0.0, 1.0);
            }
        }
    }
    return b;
}

CachingResult optimize_caching(double w_d_hz, std::span<const double> b_init,
                               const ContentModel& content, const TrafficModel& traffic,
                               const NetworkGeometry& geometry, const RadioConfig& radio,
                               const UpsilonMap& map, const SolverConfig& solver)
{
    content.validate();
    traffic.validate();
    radio.validate();
    solver.validate();
    if (b_init.size() != content.q.size()) {
        throw InvalidArgument("initial caching vector length differs from N_f");
    }
    require_caching_vector(b_init, content.cache_size);
    if (!(w_d_hz >= 0.0 && w_d_hz <= radio.bandwidth_hz)) {
        throw InvalidArgument("D2D bandwidth must lie in [0, W]");
    }

    const CachingObjective f{content,
                             traffic,
                             geometry,
                             map,
                             w_d_hz,
                             radio.bandwidth_hz,
                             radio.spectral_efficiency() / radio.mean_size_bits,
                             bs_coverage(radio.theta, radio.alpha)};

    CachingResult out;
    out.b.assign(b_init.begin(), b_init.end());
    out.t = f.delay(out.b);
    if (!std::isfinite(out.t)) {
        throw InvalidArgument("initial caching vector is unstable at this bandwidth split");
    }
    if (content.cache_size == 0 || content.cache_size == content.n_files) {
        return out;  // single feasible point
    }

    std::vector<double> b = out.b;
    double weight = solver.barrier_mu0 * out.t;
    const double weight_floor = 1e-12 * out.t;
    double step = 0.0;
    while (true) {
        double fb = f.penalised(b, weight);
        for (int it = 0; it < solver.max_inner_iters; ++it) {
            const std::vector<double> g = fd_gradient(f, b, weight, solver.fd_step);
            double g_max = 0.0;
            for (double v : g) {
                g_max = std::max(g_max, std::abs(v));
            }
            if (g_max == 0.0) {
                break;
            }
            if (step <= 0.0) {
                step = 0.1 / g_max;
            }
            bool accepted = false;
            bool tiny = false;
            std::vector<double> cand;
            double fc = inf;
            for (int bt = 0; bt < 60; ++bt) {
                std::vector<double> y(b.size());
                for (std::size_t i = 0; i < b.size(); ++i) {
                    y[i] = b[i] - step * g[i];
                }
                cand = project_capped_simplex(y, content.cache_size);
                if (max_abs_diff(cand, b) < solver.grad_step_tol) {
                    tiny = true;
                    break;
                }
                fc = f.penalised(cand, weight);
                double decrease = 0.0;
                for (std::size_t i = 0; i < b.size(); ++i) {
                    decrease += g[i] * (b[i] - cand[i]);
                }
                if (std::isfinite(fc) && fc <= fb - 1e-4 * decrease) {
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                if (tiny) {
                    step = 0.0;  // re-derive the scale next stage
                }
                break;
            }
            ++out.iterations;
            const double rel = (fb - fc) / std::abs(fb);
            b = std::move(cand);
            fb = fc;
            step *= 2.0;
            const double t = f.delay(b);
            if (t < out.t) {
                out.t = t;
                out.b = b;
            }
            if (rel < solver.obj_tol) {
                break;
            }
        }
        if (weight <= weight_floor) {
            break;
        }
        weight *= solver.barrier_shrink;
        if (weight < weight_floor) {
            weight = 0.0;
        }
    }
    out.stalled = out.b == std::vector<double>(b_init.begin(), b_init.end());
    return out;
}

OptimizationResult bcd_optimize(const ContentModel& content, const TrafficModel& traffic,
                                const NetworkGeometry& geometry, const RadioConfig& radio,
                                const SolverConfig& solver, const UpsilonMap& map)
{
    content.validate();
    traffic.validate();
    radio.validate();
    solver.validate();
    const double total_w = radio.bandwidth_hz;
    const double c = radio.spectral_efficiency() / radio.mean_size_bits;
    const double upsilon_b = bs_coverage(radio.theta, radio.alpha);
    const auto constants = [&](std::span<const double> b) {
        return constants_from_map(content, geometry, map, upsilon_b, c, b);
    };
    const auto delay = [&](std::span<const double> b, double w_d) {
        return weighted_delay_value(constants(b), traffic, total_w, w_d);
    };

    OptimizationResult out;
    std::vector<double> b =
        content.b.empty() ? baseline_caching(CachingPolicy::ZipfTopM, content) : content.b;
    require_caching_vector(b, content.cache_size);
    double w_d = 0.5 * total_w;
    double t = delay(b, w_d);

    if (!std::isfinite(t)) {
        // Equal split unstable: try the best split for the same caching, then
        // the other baselines.
        double deficit = 0.0;
        std::vector<std::vector<double>> starts = {b};
        for (auto policy : {CachingPolicy::ZipfProportional, CachingPolicy::Uniform}) {
            starts.push_back(baseline_caching(policy, content));
        }
        for (std::size_t s = 0; s < starts.size() && !std::isfinite(t); ++s) {
            if (s > 0 && std::isfinite(delay(starts[s], 0.5 * total_w))) {
                b = starts[s];
                w_d = 0.5 * total_w;
            } else {
                try {
                    const double w = optimal_bandwidth(constants(starts[s]), traffic, total_w);
                    b = starts[s];
                    w_d = w;
                } catch (const Infeasible& e) {
                    if (s == 0) {
                        deficit = e.deficit();
                    }
                    continue;
                }
            }
            t = delay(b, w_d);
            out.init_note = s == 0 ? "equal split unstable; started from the optimal split"
                                   : std::string("initial caching infeasible; started from ") +
                                         (s == 1 ? "zipf_proportional" : "uniform") + " caching";
        }
        if (!std::isfinite(t)) {
            throw Infeasible("no stable starting point for the caching vector", deficit);
        }
    }

    // Caching step first from (b, w_d), as the alternation is usually
    // written; the result is compared with a pass that starts with the
    // bandwidth step, since the two can settle in different local minima.
    const auto descend = [&](std::vector<double> b0, double w0, OptimizationResult r) {
        double tc = delay(b0, w0);
        r.objective_trace.push_back(tc);
        r.iterates.push_back({tc, w0, b0});
        double previous = tc;
        for (int iter = 1; iter <= solver.max_outer_iters; ++iter) {
            const CachingResult cr =
                optimize_caching(w0, b0, content, traffic, geometry, radio, map, solver);
            b0 = cr.b;
            tc = cr.t;
            const double w_new = optimal_bandwidth(constants(b0), traffic, total_w);
            const double t_new = delay(b0, w_new);
            if (t_new <= tc) {
                w0 = w_new;
                tc = t_new;
            }
            r.iterations = iter;
            r.objective_trace.push_back(tc);
            r.iterates.push_back({tc, w0, b0});
            if (previous - tc <= solver.obj_tol * previous) {
                r.converged = true;
                break;
            }
            previous = tc;
        }
        r.b_star = b0;
        r.w_d_star = w0;
        r.t_star = tc;
        return r;
    };

    OptimizationResult best = descend(b, w_d, out);
    try {
        const double w_first = optimal_bandwidth(constants(b), traffic, total_w);
        const double t_first = delay(b, w_first);
        if (w_first != w_d && t_first < t) {
            OptimizationResult alt = out;
            alt.objective_trace.push_back(t);
            alt.iterates.push_back({t, w_d, b});
            alt = descend(b, w_first, alt);
            if (alt.t_star < best.t_star) {
                if (!alt.init_note.empty()) {
                    alt.init_note += "; ";
                }
                alt.init_note += "bandwidth step first gave the lower delay";
                best = std::move(alt);
            }
        }
    } catch (const Infeasible&) {
    }
    return best;
}

OptimizationResult bcd_optimize(const ContentModel& content, const TrafficModel& traffic,
                                const NetworkGeometry& geometry, const RadioConfig& radio,
                                const SolverConfig& solver)
{
    solver.validate();
    const UpsilonMap map = tabulate_upsilon(geometry, radio, solver.upsilon_grid_points);
    return bcd_optimize(content, traffic, geometry, radio, solver, map);
}

void write_optimization_trace(std::ostream& out, const OptimizationResult& result)
{
    const auto prec = out.precision(17);
    out << "iter,t_seconds,w_d_hz";
    const std::size_t n = result.iterates.empty() ? 0 : result.iterates.front().b.size();
    for (std::size_t i = 1; i <= n; ++i) {
        out << ",b_" << i;
    }
    out << '\n';
    for (std::size_t k = 0; k < result.iterates.size(); ++k) {
        const auto& it = result.iterates[k];
        out << k << ',' << it.t_seconds << ',' << it.w_d_hz;
        for (double v : it.b) {
            out << ',' << v;
        }
        out << '\n';
    }
    out.precision(prec);
}

}  // namespace d2dcache
