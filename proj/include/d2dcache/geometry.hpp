#pragma once

#include <cmath>
#include <variant>

namespace d2dcache {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    double norm() const { return std::hypot(x, y); }
    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Spatial parameters of the clustered device layer and the BS tier.
/// Densities are per km^2; distances in metres.
struct NetworkGeometry {
    double lambda_p_per_km2 = 50.0;  // cluster (parent) density
    double sigma_m = 10.0;           // scattering standard deviation
    double n_bar = 20.0;             // mean providers per cluster
    double p = 0.2;                  // provider access probability
    double lambda_b_per_km2 = 10.0;  // BS density

    void validate() const;

    double parent_density_per_m2() const { return lambda_p_per_km2 * 1e-6; }
    double bs_density_per_m2() const { return lambda_b_per_km2 * 1e-6; }
    /// Mean number of clients sharing a BS.
    double clients_per_bs() const { return lambda_p_per_km2 / lambda_b_per_km2; }
};

struct ThomasKind {
    friend bool operator==(const ThomasKind&, const ThomasKind&) = default;
};
struct MaternKind {
    double ball_radius_m = 10.0;
    friend bool operator==(const MaternKind&, const MaternKind&) = default;
};
struct PoissonKind {
    friend bool operator==(const PoissonKind&, const PoissonKind&) = default;
};

using ProcessKind = std::variant<ThomasKind, MaternKind, PoissonKind>;

void validate(const ProcessKind& kind);
const char* kind_name(const ProcessKind& kind);

}  // namespace d2dcache
