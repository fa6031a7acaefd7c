#include "d2dcache/point_process.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include "d2dcache/errors.hpp"

namespace d2dcache {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_window(double window_radius_m)
{
    if (!(window_radius_m > 0.0) || !std::isfinite(window_radius_m)) {
        throw InvalidArgument("window radius must be positive and finite");
    }
}

std::vector<Point2> draw_parents(double density_per_m2, double window_radius_m, std::uint64_t seed)
{
    std::vector<Point2> out;
    if (density_per_m2 <= 0.0) {
        return out;
    }
    RadialPoissonStream stream(density_per_m2, seed);
    for (;;) {
        const Point2 pt = stream.next();
        if (stream.last_radius() > window_radius_m) {
            break;
        }
        out.push_back(pt);
    }
    return out;
}

SpatialRealization sample_clustered(const NetworkGeometry& geometry, const ProcessKind& kind,
                                    double window_radius_m, std::uint64_t seed)
{
    geometry.validate();
    validate(kind);
    require_window(window_radius_m);

    SpatialRealization out{kind, {}, {}, {}, window_radius_m};
    out.cluster_centers = draw_parents(geometry.parent_density_per_m2(), window_radius_m,
                                       derive_seed(seed, stream::parents));
    const ClusterScatter scatter = ClusterScatter::from(kind, geometry.sigma_m);
    const std::uint64_t cluster_root = derive_seed(seed, stream::clusters);

    out.members_per_cluster.resize(out.cluster_centers.size());
    for (std::size_t k = 0; k < out.cluster_centers.size(); ++k) {
        SplitMix64 rng(derive_seed(cluster_root, k));
        std::poisson_distribution<int> count(geometry.n_bar);
        const int n = count(rng);
        auto& members = out.members_per_cluster[k];
        members.reserve(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            members.push_back(scatter.draw(rng));
        }
    }
    out.bs_locations = draw_parents(geometry.bs_density_per_m2(), window_radius_m,
                                    derive_seed(seed, stream::base_stations));
    return out;
}

}  // namespace

void NetworkGeometry::validate() const
{
    if (!(lambda_p_per_km2 >= 0.0) || !std::isfinite(lambda_p_per_km2)) {
        throw InvalidArgument("cluster density must be non-negative");
    }
    if (!(lambda_b_per_km2 > 0.0)) {
        throw InvalidArgument("BS density must be positive");
    }
    if (!(sigma_m > 0.0)) {
        throw InvalidArgument("scattering deviation must be positive");
    }
    if (!(n_bar > 0.0)) {
        throw InvalidArgument("mean devices per cluster must be positive");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument("access probability must lie in [0, 1]");
    }
}

void validate(const ProcessKind& kind)
{
    if (const auto* mcp = std::get_if<MaternKind>(&kind); mcp && !(mcp->ball_radius_m > 0.0)) {
        throw InvalidArgument("MCP ball radius must be positive");
    }
}

const char* kind_name(const ProcessKind& kind)
{
    switch (kind.index()) {
    case 0:
        return "TCP";
    case 1:
        return "MCP";
    default:
        return "PPP";
    }
}

std::size_t SpatialRealization::device_count() const
{
    std::size_t n = 0;
    for (const auto& m : members_per_cluster) {
        n += m.size();
    }
    return n;
}

ClusterScatter ClusterScatter::from(const ProcessKind& kind, double sigma_m)
{
    if (const auto* mcp = std::get_if<MaternKind>(&kind)) {
        return {Shape::UniformDisc, mcp->ball_radius_m};
    }
    return {Shape::Gaussian, sigma_m};
}

Point2 ClusterScatter::draw(SplitMix64& rng) const
{
    const double angle = two_pi * uniform01(rng);
    double r = 0.0;
    if (shape == Shape::Gaussian) {
        // Box-Muller radius: a 2D isotropic Gaussian has Rayleigh-distributed norm.
        r = scale_m * std::sqrt(-2.0 * std::log1p(-uniform01(rng)));
    } else {
        r = scale_m * std::sqrt(uniform01(rng));
    }
    return {r * std::cos(angle), r * std::sin(angle)};
}

RadialPoissonStream::RadialPoissonStream(double density_per_m2, std::uint64_t seed)
    : rate_(std::numbers::pi * density_per_m2), rng_(seed)
{
    if (!(density_per_m2 >= 0.0)) {
        throw InvalidArgument("point density must be non-negative");
    }
}

Point2 RadialPoissonStream::next()
{
    if (rate_ <= 0.0) {
        radius_ = radius_sq_ = std::numeric_limits<double>::infinity();
        return {radius_, 0.0};
    }
    radius_sq_ += -std::log1p(-uniform01(rng_)) / rate_;
    radius_ = std::sqrt(radius_sq_);
    const double angle = two_pi * uniform01(rng_);
    return {radius_ * std::cos(angle), radius_ * std::sin(angle)};
}

SpatialRealization sample_tcp(const NetworkGeometry& geometry, double window_radius_m,
                              std::uint64_t seed)
{
    return sample_clustered(geometry, ThomasKind{}, window_radius_m, seed);
}

SpatialRealization sample_mcp(const NetworkGeometry& geometry, double ball_radius_m,
                              double window_radius_m, std::uint64_t seed)
{
    return sample_clustered(geometry, MaternKind{ball_radius_m}, window_radius_m, seed);
}

SpatialRealization sample_ppp(double density_per_km2, double window_radius_m, std::uint64_t seed)
{
    if (!(density_per_km2 > 0.0)) {
        throw InvalidArgument("PPP density must be positive");
    }
    require_window(window_radius_m);
    SpatialRealization out{PoissonKind{}, {}, {}, {}, window_radius_m};
    out.cluster_centers =
        draw_parents(density_per_km2 * 1e-6, window_radius_m, derive_seed(seed, stream::parents));
    out.members_per_cluster.assign(out.cluster_centers.size(), std::vector<Point2>{Point2{}});
    return out;
}

void write_realization_csv(std::ostream& out, const SpatialRealization& realization)
{
    const auto prec = out.precision(17);
    out << "kind,cluster_id,x_m,y_m\n";
    const char* name = kind_name(realization.kind);
    for (std::size_t k = 0; k < realization.cluster_centers.size(); ++k) {
        const Point2 c = realization.cluster_centers[k];
        for (const Point2& m : realization.members_per_cluster[k]) {
            out << name << ',' << k << ',' << c.x + m.x << ',' << c.y + m.y << '\n';
        }
    }
    for (const Point2& b : realization.bs_locations) {
        out << "BS,-1," << b.x << ',' << b.y << '\n';
    }
    out.precision(prec);
}

}  // namespace d2dcache
