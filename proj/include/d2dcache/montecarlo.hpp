#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "d2dcache/coverage.hpp"
#include "d2dcache/geometry.hpp"

namespace d2dcache {

struct FixedWindow {
    double radius_m = 1000.0;
};

/// Start at `start_radius_m` (0 picks max(20 sigma, 3 / sqrt(pi lambda_p)))
/// and double until the estimate moves by less than `delta`.
struct AdaptiveWindow {
    double delta = 0.005;
    double start_radius_m = 0.0;
    int max_doublings = 6;
};

using WindowPolicy = std::variant<FixedWindow, AdaptiveWindow>;

enum class ProviderSelection { Nearest, BestChannel };

struct MonteCarloConfig {
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    WindowPolicy window = AdaptiveWindow{};
    ProcessKind process = ThomasKind{};
    ProviderSelection selection = ProviderSelection::Nearest;
    // Redraw trials whose cluster holds no provider of the content. When off,
    // such trials count as not covered.
    bool conditional = true;
    unsigned threads = 1;

    void validate() const;
};

struct CoverageEstimate {
    double mean = 0.0;
    double half_width_99 = 0.0;
    std::uint64_t trials_used = 0;
    double window_radius_final = 0.0;
    bool window_converged = true;
    // Estimates at each window tried, smallest first.
    std::vector<double> window_trace;
};

struct Histogram {
    std::vector<double> edges;    // bins + 1 entries
    std::vector<double> density;  // per bin, integrates to 1
    std::uint64_t samples = 0;

    double bin_width(std::size_t j) const { return edges[j + 1] - edges[j]; }
};

/// Two-sided 99% normal quantile.
inline constexpr double z99 = 2.5758293035489004;

/// Half-width of the normal-approximation 99% interval for a Bernoulli mean.
double bernoulli_half_width_99(double mean, std::uint64_t n);

/// SIR coverage under the clustered model with the typical device at the
/// origin. Always uses the Thomas process regardless of mc.process.
CoverageEstimate estimate_d2d_coverage(const NetworkGeometry& geometry, const RadioConfig& radio,
                                       double b_i, const MonteCarloConfig& mc);

/// Same pipeline under mc.process (TCP, MCP, or PPP of density n_bar lambda_p).
CoverageEstimate estimate_coverage_variant(const NetworkGeometry& geometry,
                                           const RadioConfig& radio, double b_i,
                                           const MonteCarloConfig& mc);

/// Histogram of the nearest-provider distance given that a provider exists,
/// over [0, largest sample].
Histogram estimate_nearest_pdf(const NetworkGeometry& geometry, double b_i, int bins,
                               const MonteCarloConfig& mc);

}  // namespace d2dcache
