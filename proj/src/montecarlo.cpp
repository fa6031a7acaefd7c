#include "d2dcache/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "d2dcache/errors.hpp"
#include "d2dcache/point_process.hpp"
#include "d2dcache/rng.hpp"

namespace d2dcache {

namespace {

constexpr std::uint64_t max_attempts_per_trial = 100000;

double draw_exp(SplitMix64& rng)
{
    return -std::log1p(-uniform01(rng));
}

int draw_poisson(SplitMix64& rng, double mean)
{
    if (mean <= 0.0) {
        return 0;
    }
    std::poisson_distribution<int> dist(mean);
    return dist(rng);
}

// Everything a trial needs, resolved once per estimate.
struct Model {
    NetworkGeometry geometry;
    ProcessKind kind;
    ClusterScatter scatter;
    double b = 0.0;
    double theta = 1.0;
    double alpha = 4.0;     // inter-cluster links
    double alpha_in = 4.0;  // links inside the serving cluster
    double nakagami_m = 0.0;  // 0 means Rayleigh inside the cluster
    ProviderSelection selection = ProviderSelection::Nearest;
    bool conditional = true;

    bool poisson() const { return std::holds_alternative<PoissonKind>(kind); }

    double intra_gain(SplitMix64& rng) const
    {
        if (nakagami_m > 0.0) {
            std::gamma_distribution<double> dist(nakagami_m, 1.0 / nakagami_m);
            return dist(rng);
        }
        return draw_exp(rng);
    }
};

Model make_model(const NetworkGeometry& geometry, const RadioConfig& radio, double b_i,
                 const MonteCarloConfig& mc)
{
    geometry.validate();
    radio.validate();
    mc.validate();
    validate(mc.process);
    if (!(b_i >= 0.0 && b_i <= 1.0)) {
        throw InvalidArgument("caching probability must lie in [0, 1]");
    }
    Model m;
    m.geometry = geometry;
    m.kind = mc.process;
    m.scatter = ClusterScatter::from(mc.process, geometry.sigma_m);
    m.b = b_i;
    m.theta = radio.theta;
    m.alpha = radio.alpha;
    m.alpha_in = radio.alpha;
    m.selection = mc.selection;
    m.conditional = mc.conditional;
    if (radio.channel_mode == ChannelMode::NakagamiLoSIntra && !m.poisson()) {
        m.alpha_in = *radio.alpha_los;
        m.nakagami_m = *radio.nakagami_m;
    }
    if (m.poisson()) {
        if (mc.selection == ProviderSelection::BestChannel) {
            throw Unsupported("best-channel selection needs a clustered process");
        }
        if (b_i * geometry.p * geometry.lambda_p_per_km2 == 0.0) {
            throw ProviderTooRare("no provider of the content can exist");
        }
    } else if (std::exp(-b_i * geometry.p * geometry.n_bar) > 0.999) {
        throw ProviderTooRare("a cluster holds a provider of the content in under 0.1% of draws");
    }
    return m;
}

struct Link {
    double distance;
    double gain;
};

struct ClusterDraw {
    std::vector<Link> providers;
    std::vector<double> others;  // distances of non-serving active devices
};

// Representative cluster around the typical device. Returns false when it
// holds no provider of the content.
bool draw_home_cluster(const Model& m, SplitMix64& rng, ClusterDraw& out)
{
    out.providers.clear();
    out.others.clear();
    const Point2 center = m.scatter.draw(rng);
    const int n = draw_poisson(rng, m.geometry.n_bar);
    const double p_provider = m.geometry.p * m.b;
    for (int j = 0; j < n; ++j) {
        const double d = (center + m.scatter.draw(rng)).norm();
        const double u = uniform01(rng);
        if (u < p_provider) {
            out.providers.push_back({d, 0.0});
        } else if (u < m.geometry.p) {
            out.others.push_back(d);
        }
    }
    return !out.providers.empty();
}

struct Trial {
    double signal_over_theta = -1.0;  // negative: no provider, never covered
    double interference = 0.0;
    RadialPoissonStream parents{0.0, 0};
    std::uint64_t cluster_root = 0;
    std::uint64_t next_cluster = 0;
    Point2 pending{};
    bool has_pending = false;

    bool covered() const { return signal_over_theta >= 0.0 && interference < signal_over_theta; }
};

double active_density_per_m2(const Model& m)
{
    // PPP variant: devices at n_bar lambda_p, thinned by p.
    return m.geometry.p * m.geometry.n_bar * m.geometry.parent_density_per_m2();
}

void init_clustered(const Model& m, Trial& t, SplitMix64& rng, std::uint64_t trial_seed,
                    std::uint64_t& attempts)
{
    ClusterDraw home;
    bool found = false;
    for (std::uint64_t a = 0; a < max_attempts_per_trial; ++a) {
        ++attempts;
        found = draw_home_cluster(m, rng, home);
        if (found || !m.conditional) {
            break;
        }
    }
    if (!found && m.conditional) {
        throw ProviderTooRare("no provider found after many redraws");
    }
    if (found) {
        std::size_t serving = 0;
        double best = -1.0;
        for (std::size_t j = 0; j < home.providers.size(); ++j) {
            auto& pr = home.providers[j];
            pr.gain = m.intra_gain(rng);
            const double score = m.selection == ProviderSelection::Nearest
                                     ? -pr.distance
                                     : pr.gain * std::pow(pr.distance, -m.alpha_in);
            if (j == 0 || score > best) {
                best = score;
                serving = j;
            }
        }
        const Link s = home.providers[serving];
        t.signal_over_theta = s.gain * std::pow(s.distance, -m.alpha_in) / m.theta;
        for (std::size_t j = 0; j < home.providers.size(); ++j) {
            if (j != serving) {
                const auto& pr = home.providers[j];
                t.interference += pr.gain * std::pow(pr.distance, -m.alpha_in);
            }
        }
    }
    for (double d : home.others) {
        t.interference += m.intra_gain(rng) * std::pow(d, -m.alpha_in);
    }
    t.parents = RadialPoissonStream(m.geometry.parent_density_per_m2(),
                                    derive_seed(trial_seed, stream::parents));
    t.cluster_root = derive_seed(trial_seed, stream::clusters);
}

void init_poisson(const Model& m, Trial& t, SplitMix64& rng, std::uint64_t trial_seed)
{
    t.parents = RadialPoissonStream(active_density_per_m2(m),
                                    derive_seed(trial_seed, stream::parents));
    for (;;) {
        const Point2 pt = t.parents.next();
        const double g = draw_exp(rng);
        const double d = pt.norm();
        if (uniform01(rng) < m.b) {
            t.signal_over_theta = g * std::pow(d, -m.alpha) / m.theta;
            break;
        }
        t.interference += g * std::pow(d, -m.alpha);
    }
}

// Adds remote interferers with parent distance up to `radius`.
void extend(const Model& m, Trial& t, double radius)
{
    for (;;) {
        if (!t.has_pending) {
            t.pending = t.parents.next();
            t.has_pending = true;
        }
        if (t.parents.last_radius() > radius) {
            return;
        }
        t.has_pending = false;
        SplitMix64 rng(derive_seed(t.cluster_root, t.next_cluster++));
        if (m.poisson()) {
            t.interference += draw_exp(rng) * std::pow(t.pending.norm(), -m.alpha);
            continue;
        }
        const int n = draw_poisson(rng, m.geometry.p * m.geometry.n_bar);
        for (int j = 0; j < n; ++j) {
            const double d = (t.pending + m.scatter.draw(rng)).norm();
            t.interference += draw_exp(rng) * std::pow(d, -m.alpha);
        }
    }
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        const std::size_t lo = std::min(n, w * chunk);
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([&, w, lo, hi] {
            try {
                body(lo, hi);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

double default_start_radius(const NetworkGeometry& g)
{
    double r = 20.0 * g.sigma_m;
    const double density = g.parent_density_per_m2();
    if (density > 0.0) {
        r = std::max(r, 3.0 / std::sqrt(std::numbers::pi * density));
    }
    return r;
}

CoverageEstimate run_estimate(const Model& m, const MonteCarloConfig& mc)
{
    const std::size_t n = mc.trials;
    std::vector<Trial> trials(n);
    std::vector<std::uint64_t> attempts(n, 0);
    const std::uint64_t root = derive_seed(mc.seed, stream::trials);

    parallel_for(n, mc.threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const std::uint64_t trial_seed = derive_seed(root, i);
            SplitMix64 rng(derive_seed(trial_seed, stream::representative));
            if (m.poisson()) {
                init_poisson(m, trials[i], rng, trial_seed);
                attempts[i] = 1;
            } else {
                init_clustered(m, trials[i], rng, trial_seed, attempts[i]);
            }
        }
    });

    std::uint64_t total_attempts = 0;
    for (auto a : attempts) {
        total_attempts += a;
    }
    if (static_cast<double>(total_attempts - n) > 0.999 * static_cast<double>(total_attempts)) {
        throw ProviderTooRare("over 99.9% of cluster draws held no provider of the content");
    }

    const auto estimate_at = [&](double radius) {
        std::vector<std::uint64_t> hits(mc.threads > 0 ? mc.threads : 1, 0);
        std::vector<unsigned char> covered(n, 0);
        parallel_for(n, mc.threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                extend(m, trials[i], radius);
                covered[i] = trials[i].covered() ? 1 : 0;
            }
        });
        std::uint64_t count = 0;
        for (auto c : covered) {
            count += c;
        }
        return static_cast<double>(count) / static_cast<double>(n);
    };

    CoverageEstimate out;
    out.trials_used = n;
    if (const auto* fixed = std::get_if<FixedWindow>(&mc.window)) {
        out.mean = estimate_at(fixed->radius_m);
        out.window_radius_final = fixed->radius_m;
        out.window_trace = {out.mean};
    } else {
        const auto& adaptive = std::get<AdaptiveWindow>(mc.window);
        double radius = adaptive.start_radius_m > 0.0 ? adaptive.start_radius_m
                                                      : default_start_radius(m.geometry);
        double current = estimate_at(radius);
        out.window_trace = {current};
        out.window_converged = false;
        for (int k = 0; k < adaptive.max_doublings; ++k) {
            const double next = estimate_at(2.0 * radius);
            out.window_trace.push_back(next);
            radius *= 2.0;
            const bool settled = std::abs(next - current) < adaptive.delta;
            current = next;
            if (settled) {
                out.window_converged = true;
                break;
            }
        }
        out.mean = current;
        out.window_radius_final = radius;
    }
    out.half_width_99 = bernoulli_half_width_99(out.mean, n);
    return out;
}

}  // namespace

void MonteCarloConfig::validate() const
{
    if (trials < 1) {
        throw InvalidArgument("Monte Carlo needs at least one trial");
    }
    if (const auto* fixed = std::get_if<FixedWindow>(&window)) {
        if (!(fixed->radius_m > 0.0)) {
            throw InvalidArgument("window radius must be positive");
        }
    } else {
        const auto& adaptive = std::get<AdaptiveWindow>(window);
        if (!(adaptive.delta > 0.0)) {
            throw InvalidArgument("adaptive window tolerance must be positive");
        }
        if (adaptive.max_doublings < 1 || adaptive.start_radius_m < 0.0) {
            throw InvalidArgument("adaptive window needs a non-negative start and a doubling budget");
        }
    }
}

double bernoulli_half_width_99(double mean, std::uint64_t n)
{
    if (n == 0) {
        return std::numeric_limits<double>::infinity();
    }
    return z99 * std::sqrt(std::max(0.0, mean * (1.0 - mean)) / static_cast<double>(n));
}

CoverageEstimate estimate_d2d_coverage(const NetworkGeometry& geometry, const RadioConfig& radio,
                                       double b_i, const MonteCarloConfig& mc)
{
    MonteCarloConfig tcp = mc;
    tcp.process = ThomasKind{};
    return run_estimate(make_model(geometry, radio, b_i, tcp), tcp);
}

CoverageEstimate estimate_coverage_variant(const NetworkGeometry& geometry,
                                           const RadioConfig& radio, double b_i,
                                           const MonteCarloConfig& mc)
{
    return run_estimate(make_model(geometry, radio, b_i, mc), mc);
}

Histogram estimate_nearest_pdf(const NetworkGeometry& geometry, double b_i, int bins,
                               const MonteCarloConfig& mc)
{
    if (bins < 10) {
        throw InvalidArgument("histogram needs at least 10 bins");
    }
    RadioConfig radio;
    MonteCarloConfig cfg = mc;
    cfg.conditional = true;
    cfg.selection = ProviderSelection::Nearest;
    const Model m = make_model(geometry, radio, b_i, cfg);

    const std::size_t n = cfg.trials;
    std::vector<double> distance(n, 0.0);
    std::vector<std::uint64_t> attempts(n, 0);
    const std::uint64_t root = derive_seed(cfg.seed, stream::trials);
    parallel_for(n, cfg.threads, [&](std::size_t lo, std::size_t hi) {
        ClusterDraw home;
        for (std::size_t i = lo; i < hi; ++i) {
            const std::uint64_t trial_seed = derive_seed(root, i);
            SplitMix64 rng(derive_seed(trial_seed, stream::representative));
            if (m.poisson()) {
                RadialPoissonStream s(active_density_per_m2(m), derive_seed(trial_seed, stream::parents));
                do {
                    s.next();
                } while (!(uniform01(rng) < m.b));
                distance[i] = s.last_radius();
                attempts[i] = 1;
                continue;
            }
            bool found = false;
            while (!found) {
                if (++attempts[i] > max_attempts_per_trial) {
                    throw ProviderTooRare("no provider found after many redraws");
                }
                found = draw_home_cluster(m, rng, home);
            }
            double nearest = std::numeric_limits<double>::infinity();
            for (const auto& pr : home.providers) {
                nearest = std::min(nearest, pr.distance);
            }
            distance[i] = nearest;
        }
    });

    Histogram h;
    h.samples = n;
    const double top = *std::max_element(distance.begin(), distance.end());
    const double width = (top > 0.0 ? top : 1.0) / bins;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int j = 0; j <= bins; ++j) {
        h.edges[static_cast<std::size_t>(j)] = j * width;
    }
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(bins), 0);
    for (double d : distance) {
        const auto j = std::min<std::size_t>(static_cast<std::size_t>(d / width),
                                             static_cast<std::size_t>(bins) - 1);
        ++counts[j];
    }
    h.density.resize(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j) {
        h.density[j] = static_cast<double>(counts[j]) / (static_cast<double>(n) * width);
    }
    return h;
}

}  // namespace d2dcache
