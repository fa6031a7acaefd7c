#include "d2dcache/queue_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "d2dcache/errors.hpp"

namespace d2dcache {

namespace {

double draw_exp(SplitMix64& rng, double rate)
{
    return -std::log1p(-uniform01(rng)) / rate;
}

}  // namespace

void DesConfig::validate() const
{
    if (horizon_requests <= warmup_requests) {
        throw InvalidArgument("DES horizon must exceed the warm-up");
    }
    if (batches < 2) {
        throw InvalidArgument("batch means need at least two batches");
    }
    if (horizon_requests - warmup_requests < static_cast<std::uint64_t>(batches)) {
        throw InvalidArgument("too few post-warm-up requests for the batch count");
    }
}

DesResult simulate_mpsq(std::span<const double> zeta_i, std::span<const double> mu_i,
                        const DesConfig& des, const DesOptions& options)
{
    des.validate();
    if (zeta_i.size() != mu_i.size() || zeta_i.empty()) {
        throw InvalidArgument("need matching, non-empty arrival and service rate vectors");
    }
    double total = 0.0;
    double rho = 0.0;
    for (std::size_t i = 0; i < zeta_i.size(); ++i) {
        if (!(zeta_i[i] >= 0.0) || !(mu_i[i] >= 0.0)) {
            throw InvalidArgument("rates must be non-negative");
        }
        if (zeta_i[i] > 0.0) {
            if (!(mu_i[i] > 0.0) && !options.service) {
                throw InvalidArgument("a class with arrivals needs a positive service rate");
            }
            total += zeta_i[i];
            if (mu_i[i] > 0.0) {
                rho += zeta_i[i] / mu_i[i];
            }
        }
    }

    DesResult out;
    if (total == 0.0) {
        out.empty = true;
        out.mean = std::numeric_limits<double>::quiet_NaN();
        out.ci95 = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    if (!(rho < 1.0)) {
        out.stable = false;
        out.warning = "load " + std::to_string(rho) +
                      " >= 1: queue grows without bound, estimate covers the finite horizon only";
    }

    std::vector<double> cumulative(zeta_i.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < zeta_i.size(); ++i) {
        acc += zeta_i[i] / total;
        cumulative[i] = acc;
    }

    SplitMix64 rng(des.seed);
    if (options.trace) {
        *options.trace << "event_time_s,class,event_kind\n";
        options.trace->precision(17);
    }
    std::deque<std::pair<double, std::size_t>> departures;  // FIFO, so already sorted

    const std::uint64_t kept = des.horizon_requests - des.warmup_requests;
    const std::uint64_t per_batch = kept / static_cast<std::uint64_t>(des.batches);
    std::vector<double> batch_sum(static_cast<std::size_t>(des.batches), 0.0);
    double kept_sum = 0.0;

    double now = 0.0;
    double wait = 0.0;  // waiting time of the current arrival
    double prev_service = 0.0;
    for (std::uint64_t n = 0; n < des.horizon_requests; ++n) {
        const double gap = draw_exp(rng, total);
        now += gap;
        if (n > 0) {
            wait = std::max(0.0, wait + prev_service - gap);
        }
        const double u = uniform01(rng);
        const std::size_t cls = static_cast<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end() - 1, u) - cumulative.begin());
        const double service = options.service ? options.service(cls, rng) : draw_exp(rng, mu_i[cls]);
        prev_service = service;
        const double sojourn = wait + service;

        if (options.trace) {
            while (!departures.empty() && departures.front().first <= now) {
                *options.trace << departures.front().first << ',' << departures.front().second
                               << ",departure\n";
                departures.pop_front();
            }
            *options.trace << now << ',' << cls << ",arrival\n";
            departures.emplace_back(now + sojourn, cls);
        }

        if (n >= des.warmup_requests) {
            const std::uint64_t k = n - des.warmup_requests;
            kept_sum += sojourn;
            const std::uint64_t batch = k / per_batch;
            if (batch < batch_sum.size()) {
                batch_sum[batch] += sojourn;
            }
        }
    }
    if (options.trace) {
        for (const auto& [t, cls] : departures) {
            *options.trace << t << ',' << cls << ",departure\n";
        }
    }

    out.samples = kept;
    out.mean = kept_sum / static_cast<double>(kept);
    const auto b = static_cast<double>(des.batches);
    double m = 0.0;
    for (double s : batch_sum) {
        m += s / static_cast<double>(per_batch);
    }
    m /= b;
    double var = 0.0;
    for (double s : batch_sum) {
        const double d = s / static_cast<double>(per_batch) - m;
        var += d * d;
    }
    var /= b - 1.0;
    const boost::math::students_t t(b - 1.0);
    out.ci95 = boost::math::quantile(boost::math::complement(t, 0.025)) * std::sqrt(var / b);
    return out;
}

DesResult simulate_bs_queue(double eta, double zeta_b, double mu_b, const DesConfig& des,
                            const DesOptions& options)
{
    if (!(eta > 0.0) || !(zeta_b >= 0.0)) {
        throw InvalidArgument("eta must be positive and zeta_b non-negative");
    }
    const double lambda[] = {eta * zeta_b};
    const double mu[] = {mu_b};
    return simulate_mpsq(lambda, mu, des, options);
}

}  // namespace d2dcache
