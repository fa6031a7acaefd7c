#include "d2dcache/delay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "d2dcache/errors.hpp"

namespace d2dcache {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void require_split(double w_d_hz, double total_w_hz)
{
    if (!(w_d_hz >= 0.0 && w_d_hz <= total_w_hz * (1.0 + 1e-12))) {
        throw InvalidArgument("D2D bandwidth must lie in [0, W]");
    }
}

void require_table(const CoverageTable& coverage, std::size_t n)
{
    if (coverage.upsilon_d.size() != n) {
        throw InvalidArgument("coverage table size differs from the library size");
    }
    for (double u : coverage.upsilon_d) {
        if (!(u >= 0.0 && u <= 1.0)) {
            throw InvalidArgument("coverage values must lie in [0, 1]");
        }
    }
    if (!(coverage.upsilon_b >= 0.0 && coverage.upsilon_b <= 1.0)) {
        throw InvalidArgument("coverage values must lie in [0, 1]");
    }
}

}  // namespace

ServiceRates service_rates(const CoverageTable& coverage, double w_d_hz, double w_b_hz,
                           const RadioConfig& radio)
{
    radio.validate();
    if (!(w_d_hz >= 0.0) || !(w_b_hz >= 0.0) ||
        w_d_hz + w_b_hz > radio.bandwidth_hz * (1.0 + 1e-12)) {
        throw InvalidArgument("bandwidths must be non-negative and fit in W");
    }
    const double per_hz = radio.spectral_efficiency() / radio.mean_size_bits;
    ServiceRates r;
    r.mu_i.reserve(coverage.upsilon_d.size());
    for (double u : coverage.upsilon_d) {
        r.mu_i.push_back(w_d_hz * per_hz * u);
    }
    r.mu_b = w_b_hz * per_hz * coverage.upsilon_b;
    return r;
}

double d2d_delay(const ArrivalSplit& split, std::span<const double> mu_i)
{
    if (mu_i.size() != split.zeta_i.size()) {
        throw InvalidArgument("one service rate per content is required");
    }
    double zeta_d = 0.0;
    double rho = 0.0;
    for (std::size_t i = 0; i < mu_i.size(); ++i) {
        const double z = split.zeta_i[i];
        if (z < 0.0) {
            throw InvalidArgument("arrival rates must be non-negative");
        }
        if (z == 0.0) {
            continue;
        }
        zeta_d += z;
        rho += mu_i[i] > 0.0 ? z / mu_i[i] : inf;
    }
    if (zeta_d == 0.0) {
        return 0.0;
    }
    if (!(rho < 1.0)) {
        throw UnstableQueue(QueueId::D2D, rho);
    }
    return rho / (zeta_d * (1.0 - rho));
}

double bs_delay(const ArrivalSplit& split, double mu_b, double eta)
{
    if (!(eta > 0.0) || !(mu_b >= 0.0)) {
        throw InvalidArgument("eta must be positive and mu_b non-negative");
    }
    const double load = eta * std::max(0.0, split.zeta_b);
    if (!(load < mu_b)) {
        throw UnstableQueue(QueueId::BS, mu_b > 0.0 ? load / mu_b : inf);
    }
    return 1.0 / (mu_b - load);
}

DelayConstants delay_constants(const ContentModel& content, const NetworkGeometry& geometry,
                               const CoverageTable& coverage, const RadioConfig& radio)
{
    content.validate();
    require_table(coverage, content.q.size());
    if (content.b.size() != content.q.size()) {
        throw InvalidArgument("content model has no caching vector");
    }
    const double active = geometry.p * geometry.n_bar;
    DelayConstants k;
    for (std::size_t i = 0; i < content.q.size(); ++i) {
        const double miss = std::exp(-content.b[i] * active);
        const double hit = -std::expm1(-content.b[i] * active);
        if (hit > 0.0) {
            k.a += coverage.upsilon_d[i] > 0.0 ? content.q[i] * hit / coverage.upsilon_d[i] : inf;
        }
        k.b += content.q[i] * miss;
    }
    k.c = radio.spectral_efficiency() / radio.mean_size_bits;
    k.upsilon_b = coverage.upsilon_b;
    return k;
}

double weighted_delay_value(const DelayConstants& k, const TrafficModel& traffic,
                            double total_w_hz, double w_d_hz)
{
    const double zeta = traffic.zeta;
    double t = 0.0;
    if (k.a > 0.0) {
        const double cap = w_d_hz * k.c - zeta * k.a;
        if (!(cap > 0.0)) {
            return inf;
        }
        t += k.a / cap;
    }
    if (k.b > 0.0) {
        const double cap = (total_w_hz - w_d_hz) * k.c * k.upsilon_b - traffic.eta * zeta * k.b;
        if (!(cap > 0.0)) {
            return inf;
        }
        t += k.b / cap;
    }
    return t;
}

StabilityReport stability_check(const ContentModel& content, const TrafficModel& traffic,
                                const NetworkGeometry& geometry, const CoverageTable& coverage,
                                const RadioConfig& radio, double w_d_hz)
{
    traffic.validate();
    require_split(w_d_hz, radio.bandwidth_hz);
    const DelayConstants k = delay_constants(content, geometry, coverage, radio);
    const ArrivalSplit split = split_arrivals(traffic, content, geometry);
    const double w_b = std::max(0.0, radio.bandwidth_hz - w_d_hz);

    StabilityReport s;
    // sum_i zeta_i / U_i < W_d C and zeta_b < W_b C Ub / eta.
    s.margin_d = w_d_hz * k.c - traffic.zeta * k.a;
    s.margin_b = w_b * k.c * k.upsilon_b / traffic.eta - std::max(0.0, split.zeta_b);
    s.stable_d = split.zeta_d == 0.0 || s.margin_d > 0.0;
    s.stable_b = split.zeta_b <= 0.0 || s.margin_b > 0.0;
    return s;
}

DelaySummary weighted_delay(const ContentModel& content, const TrafficModel& traffic,
                            const NetworkGeometry& geometry, const CoverageTable& coverage,
                            const RadioConfig& radio, double w_d_hz)
{
    traffic.validate();
    require_split(w_d_hz, radio.bandwidth_hz);
    const DelayConstants k = delay_constants(content, geometry, coverage, radio);
    const ArrivalSplit split = split_arrivals(traffic, content, geometry);
    const double w_b = std::max(0.0, radio.bandwidth_hz - w_d_hz);
    const ServiceRates rates = service_rates(coverage, w_d_hz, w_b, radio);

    DelaySummary d;
    const double zeta_b = std::max(0.0, split.zeta_b);
    for (std::size_t i = 0; i < split.zeta_i.size(); ++i) {
        if (split.zeta_i[i] > 0.0) {
            d.rho_d += rates.mu_i[i] > 0.0 ? split.zeta_i[i] / rates.mu_i[i] : inf;
        }
    }
    d.rho_b = zeta_b > 0.0 ? (rates.mu_b > 0.0 ? traffic.eta * zeta_b / rates.mu_b : inf) : 0.0;

    const StabilityReport s = stability_check(content, traffic, geometry, coverage, radio, w_d_hz);
    d.stable_d = s.stable_d;
    d.stable_b = s.stable_b;
    if (!d.stable_d) {
        throw UnstableQueue(QueueId::D2D, d.rho_d);
    }
    if (!d.stable_b) {
        throw UnstableQueue(QueueId::BS, d.rho_b);
    }
    d.t_d = split.zeta_d > 0.0 ? d2d_delay(split, rates.mu_i) : 0.0;
    d.t_b = zeta_b > 0.0 ? bs_delay(split, rates.mu_b, traffic.eta) : 0.0;
    d.t_weighted = weighted_delay_value(k, traffic, radio.bandwidth_hz, w_d_hz);
    return d;
}

}  // namespace d2dcache
