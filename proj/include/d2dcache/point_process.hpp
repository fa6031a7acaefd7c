#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "d2dcache/geometry.hpp"
#include "d2dcache/rng.hpp"

namespace d2dcache {

/// One draw of the device and BS layers inside a disc window centred at the
/// origin. Members are stored relative to their cluster centre and are not
/// clipped to the window.
struct SpatialRealization {
    ProcessKind kind;
    std::vector<Point2> cluster_centers;
    std::vector<std::vector<Point2>> members_per_cluster;
    std::vector<Point2> bs_locations;
    double window_radius_m = 0.0;

    std::size_t device_count() const;
    friend bool operator==(const SpatialRealization&, const SpatialRealization&) = default;
};

/// How daughter points spread around their parent.
struct ClusterScatter {
    enum class Shape { Gaussian, UniformDisc };

    Shape shape = Shape::Gaussian;
    double scale_m = 10.0;  // per-axis deviation, or disc radius

    static ClusterScatter from(const ProcessKind& kind, double sigma_m);
    Point2 draw(SplitMix64& rng) const;
};

/// Points of a homogeneous PPP emitted in order of increasing distance from
/// the origin. Squared radii are partial sums of Exp(pi * density) gaps, so
/// the prefix with radius below R is exactly a PPP restricted to the disc of
/// radius R and larger windows extend smaller ones draw for draw.
class RadialPoissonStream {
  public:
    RadialPoissonStream(double density_per_m2, std::uint64_t seed);

    /// Next point; its norm is non-decreasing across calls.
    Point2 next();
    double last_radius() const { return radius_; }

  private:
    double rate_;  // pi * density
    double radius_sq_ = 0.0;
    double radius_ = 0.0;
    SplitMix64 rng_;
};

SpatialRealization sample_tcp(const NetworkGeometry& geometry, double window_radius_m,
                              std::uint64_t seed);
SpatialRealization sample_mcp(const NetworkGeometry& geometry, double ball_radius_m,
                              double window_radius_m, std::uint64_t seed);
/// Each point is returned as its own singleton cluster with a zero offset.
SpatialRealization sample_ppp(double density_per_km2, double window_radius_m,
                              std::uint64_t seed);

/// CSV with columns kind,cluster_id,x_m,y_m (absolute coordinates). BS rows use
/// kind "BS" and cluster_id -1.
void write_realization_csv(std::ostream& out, const SpatialRealization& realization);

}  // namespace d2dcache
