#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>

#include "d2dcache/rng.hpp"

namespace d2dcache {

struct DesConfig {
    std::uint64_t horizon_requests = 1000000;
    std::uint64_t warmup_requests = 10000;
    std::uint64_t seed = 1;
    int batches = 20;

    void validate() const;
};

struct DesResult {
    double mean = 0.0;  // mean sojourn over post-warmup requests, s
    double ci95 = 0.0;  // batch-means half-width
    std::uint64_t samples = 0;
    bool empty = false;   // no arrivals at all
    bool stable = true;   // load below one
    std::string warning;
};

/// Service time draw for a request of class `cls`; defaults to exponential.
using ServiceSampler = std::function<double(std::size_t cls, SplitMix64& rng)>;

struct DesOptions {
    ServiceSampler service;       // empty: Exp(mu_i)
    std::ostream* trace = nullptr;  // CSV event_time_s,class,event_kind
};

/// Single-server FIFO queue fed by independent Poisson classes.
DesResult simulate_mpsq(std::span<const double> zeta_i, std::span<const double> mu_i,
                        const DesConfig& des, const DesOptions& options = {});

/// BS queue: one class with arrival rate eta * zeta_b.
DesResult simulate_bs_queue(double eta, double zeta_b, double mu_b, const DesConfig& des,
                            const DesOptions& options = {});

}  // namespace d2dcache
