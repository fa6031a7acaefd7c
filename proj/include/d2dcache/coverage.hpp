#pragma once

#include <cstddef>
#include <optional>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "d2dcache/geometry.hpp"
#include "d2dcache/quadrature.hpp"

namespace d2dcache {

enum class ChannelMode {
    RayleighNLoS,      // every link: Rayleigh fading, exponent alpha
    NakagamiLoSIntra,  // links inside the serving cluster: Nakagami-m, exponent alpha_los
};

struct RadioConfig {
    double bandwidth_hz = 20e6;
    double theta = 1.0;  // SIR threshold, linear
    double alpha = 4.0;
    std::optional<double> alpha_los;
    std::optional<double> nakagami_m;
    double mean_size_bits = 5e6;
    ChannelMode channel_mode = ChannelMode::RayleighNLoS;

    void validate() const;
    /// log2(1 + theta) bits/s/Hz.
    double spectral_efficiency() const;
};

struct CoverageTable {
    std::vector<double> upsilon_d;  // per content
    double upsilon_b = 0.0;
};

/// Memo of the inter-cluster Laplace transform for one (geometry, alpha, quad)
/// triple. Lookups take a shared lock; misses compute outside any lock and
/// insert under an exclusive one.
class InterLaplaceCache {
  public:
    InterLaplaceCache(const NetworkGeometry& geometry, double alpha, const QuadratureConfig& quad);

    double operator()(double s) const;
    std::size_t size() const;

  private:
    NetworkGeometry geometry_;
    double alpha_;
    QuadratureConfig quad_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<double, double> values_;
};

/// Defective density of the distance from the typical device to the nearest
/// active provider of a content cached with probability b_i. Its total mass is
/// 1 - exp(-b_i p n_bar), the probability such a provider exists.
double nearest_provider_pdf(double h_m, double b_i, const NetworkGeometry& geometry,
                            const QuadratureConfig& quad = {});

/// Laplace transform of intra-cluster interference seen at distance h_i from
/// the serving provider. Interferer distances are treated as independent
/// Rayleigh(sqrt(2) sigma) draws; closer than h_i only non-caching actives
/// transmit.
double intra_cluster_laplace(double s, double h_i_m, double b_i, const NetworkGeometry& geometry,
                             double alpha, const QuadratureConfig& quad = {});

/// Laplace transform of the aggregate interference from all other clusters,
/// via the PGFL of the parent PPP.
double inter_cluster_laplace(double s, const NetworkGeometry& geometry, double alpha,
                             const QuadratureConfig& quad = {});

struct CoverageOptions {
    // Condition on at least one provider of the content existing in the
    // cluster. When false the integral runs against the defective density and
    // the availability factor is folded into the result.
    bool normalize = true;
    const InterLaplaceCache* cache = nullptr;
};

/// D2D rate coverage of a content with caching probability b_i in (0, 1].
double d2d_coverage(double b_i, const NetworkGeometry& geometry, const RadioConfig& radio,
                    const QuadratureConfig& quad = {}, CoverageOptions options = {});

/// BS-to-device rate coverage, 1 / 2F1(1, -delta; 1 - delta; -theta).
double bs_coverage(double theta, double alpha, const QuadratureConfig& quad = {});

/// Gauss hypergeometric function restricted to the family (1, -d; 1 - d; z)
/// with d in (0, 1) and z <= 0, the only one BS coverage needs.
double hyp2f1(double a, double b, double c, double z, const QuadratureConfig& quad = {});

/// Per-content coverage for a caching vector. Entries with b_i = 0 hold the
/// rare-provider limit b -> 0+.
CoverageTable coverage_table(std::span<const double> b, const NetworkGeometry& geometry,
                             const RadioConfig& radio, const QuadratureConfig& quad = {});

namespace detail {
/// d2d_coverage without argument checks; b_i = 0 evaluates the b -> 0+ limit
/// of the normalized coverage.
double d2d_coverage_unchecked(double b_i, const NetworkGeometry& geometry,
                              const RadioConfig& radio, const QuadratureConfig& quad,
                              CoverageOptions options);
}  // namespace detail

}  // namespace d2dcache
