#pragma once

#include <span>
#include <vector>

#include "d2dcache/caching.hpp"
#include "d2dcache/coverage.hpp"
#include "d2dcache/geometry.hpp"

namespace d2dcache {

struct ServiceRates {
    std::vector<double> mu_i;  // requests/s, per content over D2D
    double mu_b = 0.0;         // requests/s at the BS
};

struct DelaySummary {
    double rho_d = 0.0;
    double rho_b = 0.0;
    double t_d = 0.0;  // s; 0 when nothing is D2D-served
    double t_b = 0.0;  // s; 0 when nothing is BS-served
    double t_weighted = 0.0;
    bool stable_d = true;
    bool stable_b = true;
};

struct StabilityReport {
    bool stable_d = true;
    bool stable_b = true;
    // Capacity minus load, in requests/s of D2D and BS traffic per client.
    double margin_d = 0.0;
    double margin_b = 0.0;
};

/// Lumped constants of the weighted delay: T = A / (W_d C - zeta A)
/// + B / (W_b C Ub - eta zeta B).
struct DelayConstants {
    double a = 0.0;  // sum_i q_i (1 - e^{-b_i p n}) / U_i
    double b = 0.0;  // sum_i q_i e^{-b_i p n}
    double c = 0.0;  // log2(1 + theta) / S
    double upsilon_b = 0.0;
};

ServiceRates service_rates(const CoverageTable& coverage, double w_d_hz, double w_b_hz,
                           const RadioConfig& radio);

/// MPSQ sojourn (1 / zeta_d) rho / (1 - rho) with rho = sum zeta_i / mu_i.
double d2d_delay(const ArrivalSplit& split, std::span<const double> mu_i);

/// M/M/1 sojourn 1 / (mu_b - eta zeta_b).
double bs_delay(const ArrivalSplit& split, double mu_b, double eta);

DelayConstants delay_constants(const ContentModel& content, const NetworkGeometry& geometry,
                               const CoverageTable& coverage, const RadioConfig& radio);

/// Weighted mean delay with the remaining W - w_d Hz at the BS. Throws
/// UnstableQueue naming the first unstable queue.
DelaySummary weighted_delay(const ContentModel& content, const TrafficModel& traffic,
                            const NetworkGeometry& geometry, const CoverageTable& coverage,
                            const RadioConfig& radio, double w_d_hz);

/// The same objective from the lumped constants; +infinity outside the
/// stability region. Cheap enough for inner optimisation loops.
double weighted_delay_value(const DelayConstants& k, const TrafficModel& traffic,
                            double total_w_hz, double w_d_hz);

StabilityReport stability_check(const ContentModel& content, const TrafficModel& traffic,
                                const NetworkGeometry& geometry, const CoverageTable& coverage,
                                const RadioConfig& radio, double w_d_hz);

}  // namespace d2dcache
