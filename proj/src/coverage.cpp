#include "d2dcache/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "d2dcache/errors.hpp"
#include "d2dcache/special.hpp"

namespace d2dcache {

namespace {

constexpr double sqrt2 = std::numbers::sqrt2;

// Quadrature settings for integrals nested inside another integrand. They get
// a slightly tighter relative target so their noise stays below the outer
// tolerance.
QuadratureConfig inner_config(const QuadratureConfig& quad)
{
    QuadratureConfig inner = quad;
    inner.rel_tol = quad.rel_tol * 0.1;
    inner.abs_tol = quad.abs_tol * 0.1;
    return inner;
}

// Integral over v0 of Rayleigh(v0; sigma) Rice(h | v0, sigma) exp(-k F(h | v0)).
double nearest_kernel(double h, double k, double sigma, const QuadratureConfig& quad)
{
    if (h <= 0.0) {
        return 0.0;
    }
    const double v_max = sigma * gaussian_tail_cutoff(quad.tail_mass_tol);
    const auto integrand = [&](double v0) {
        const double density = rayleigh_pdf(v0, sigma) * rice_pdf(h, v0, sigma);
        if (density == 0.0 || k == 0.0) {
            return density;
        }
        return density * std::exp(-k * rice_cdf(h, v0, sigma));
    };
    return integrate(integrand, 0.0, v_max, quad);
}

double inter_cluster_laplace_impl(double s, const NetworkGeometry& g, double alpha,
                                  const QuadratureConfig& quad)
{
    const double density = g.parent_density_per_m2();
    if (s == 0.0 || density == 0.0 || g.p == 0.0) {
        return 1.0;
    }
    const double sigma = g.sigma_m;
    const double reach = sigma * gaussian_tail_cutoff(quad.tail_mass_tol);
    const double active = g.p * g.n_bar;
    const QuadratureConfig inner = inner_config(quad);

    // Mean fraction of an interferer's power that survives, averaged over its
    // Gaussian offset around a parent at distance v.
    const auto phi = [&](double v) {
        const auto f = [&](double u) {
            return rice_pdf(u, v, sigma) / (1.0 + std::pow(u, alpha) / s);
        };
        return integrate(f, std::max(0.0, v - reach), v + reach, inner);
    };
    const auto radial = [&](double v) { return -std::expm1(-active * phi(v)) * v; };

    const double split = std::pow(s, 1.0 / alpha) + reach + 2.0 * sigma;
    const double near = integrate(radial, 0.0, split, quad);

    // Beyond `split` the integrand decays like v^(1 - alpha); w = v^(2 - alpha)
    // flattens it onto a finite interval.
    const double expo = alpha - 2.0;
    const auto tail = [&](double w) {
        const double v = std::pow(w, -1.0 / expo);
        return radial(v) * std::pow(v, alpha - 1.0) / expo;
    };
    const double far = integrate(tail, 0.0, std::pow(split, -expo), quad);

    return std::exp(-2.0 * std::numbers::pi * density * (near + far));
}

void require_laplace_argument(double s)
{
    if (!(s >= 0.0)) {
        throw InvalidArgument("Laplace argument s must be non-negative");
    }
}

}  // namespace

void RadioConfig::validate() const
{
    if (!(bandwidth_hz > 0.0)) {
        throw InvalidArgument("bandwidth must be positive");
    }
    if (!(theta > 0.0)) {
        throw InvalidArgument("SIR threshold must be positive");
    }
    if (!(alpha > 2.0)) {
        throw InvalidArgument("path-loss exponent must exceed 2");
    }
    if (!(mean_size_bits > 0.0)) {
        throw InvalidArgument("mean content size must be positive");
    }
    if (channel_mode == ChannelMode::NakagamiLoSIntra) {
        if (!alpha_los || !nakagami_m) {
            throw InvalidArgument("LoS channel mode needs alpha_los and nakagami_m");
        }
        if (!(*alpha_los > 2.0)) {
            throw InvalidArgument("LoS path-loss exponent must exceed 2");
        }
        if (!(*nakagami_m >= 1.0)) {
            throw InvalidArgument("Nakagami parameter must be at least 1");
        }
    }
}

double RadioConfig::spectral_efficiency() const
{
    return std::log2(1.0 + theta);
}

InterLaplaceCache::InterLaplaceCache(const NetworkGeometry& geometry, double alpha,
                                     const QuadratureConfig& quad)
    : geometry_(geometry), alpha_(alpha), quad_(quad)
{
}

double InterLaplaceCache::operator()(double s) const
{
    {
        std::shared_lock lock(mutex_);
        if (auto it = values_.find(s); it != values_.end()) {
            return it->second;
        }
    }
    const double value = inter_cluster_laplace(s, geometry_, alpha_, quad_);
    std::unique_lock lock(mutex_);
    values_.emplace(s, value);
    return value;
}

std::size_t InterLaplaceCache::size() const
{
    std::shared_lock lock(mutex_);
    return values_.size();
}

double nearest_provider_pdf(double h_m, double b_i, const NetworkGeometry& geometry,
                            const QuadratureConfig& quad)
{
    geometry.validate();
    if (!(h_m >= 0.0)) {
        throw InvalidArgument("distance must be non-negative");
    }
    if (!(b_i >= 0.0 && b_i <= 1.0)) {
        throw InvalidArgument("caching probability must lie in [0, 1]");
    }
    const double k = b_i * geometry.p * geometry.n_bar;
    if (k == 0.0) {
        return 0.0;
    }
    return k * nearest_kernel(h_m, k, geometry.sigma_m, quad);
}

double intra_cluster_laplace(double s, double h_i_m, double b_i, const NetworkGeometry& geometry,
                             double alpha, const QuadratureConfig& quad)
{
    require_laplace_argument(s);
    if (!(h_i_m >= 0.0)) {
        throw InvalidArgument("serving distance must be non-negative");
    }
    if (s == 0.0 || geometry.p == 0.0) {
        return 1.0;
    }
    const double scale = sqrt2 * geometry.sigma_m;
    const double r_max = std::max(h_i_m, scale * gaussian_tail_cutoff(quad.tail_mass_tol));
    const auto f = [&](double r) {
        return rayleigh_pdf(r, scale) / (1.0 + std::pow(r, alpha) / s);
    };
    const double closer = integrate(f, 0.0, h_i_m, quad);
    const double farther = integrate(f, h_i_m, r_max, quad);
    const double active = geometry.p * geometry.n_bar;
    return std::exp(-active * ((1.0 - b_i) * closer + farther));
}

double inter_cluster_laplace(double s, const NetworkGeometry& geometry, double alpha,
                             const QuadratureConfig& quad)
{
    require_laplace_argument(s);
    return inter_cluster_laplace_impl(s, geometry, alpha, quad);
}

double detail::d2d_coverage_unchecked(double b_i, const NetworkGeometry& g,
                                      const RadioConfig& radio, const QuadratureConfig& quad,
                                      CoverageOptions options)
{
    const double k = b_i * g.p * g.n_bar;
    // Multiplies the v0 kernel: k for the defective density, k / P(provider
    // exists) once normalized (-> 1 as k -> 0).
    double weight = k;
    if (options.normalize) {
        weight = k > 0.0 ? k / -std::expm1(-k) : 1.0;
    }
    if (weight == 0.0) {
        return 0.0;
    }

    const QuadratureConfig inner = inner_config(quad);
    const double h_max =
        1.2 * sqrt2 * g.sigma_m * gaussian_tail_cutoff(quad.tail_mass_tol);
    const auto integrand = [&](double h) {
        if (h <= 0.0) {
            return 0.0;
        }
        const double density = weight * nearest_kernel(h, k, g.sigma_m, inner);
        if (density == 0.0) {
            return 0.0;
        }
        const double s = radio.theta * std::pow(h, radio.alpha);
        const double inter = options.cache ? (*options.cache)(s)
                                           : inter_cluster_laplace_impl(s, g, radio.alpha, inner);
        return density * inter * intra_cluster_laplace(s, h, b_i, g, radio.alpha, inner);
    };
    return std::clamp(integrate(integrand, 0.0, h_max, quad), 0.0, 1.0);
}

double d2d_coverage(double b_i, const NetworkGeometry& geometry, const RadioConfig& radio,
                    const QuadratureConfig& quad, CoverageOptions options)
{
    geometry.validate();
    radio.validate();
    quad.validate();
    if (radio.channel_mode != ChannelMode::RayleighNLoS) {
        throw Unsupported("analytic coverage assumes a Rayleigh-faded serving link");
    }
    if (!(b_i >= 0.0 && b_i <= 1.0)) {
        throw InvalidArgument("caching probability must lie in [0, 1]");
    }
    if (b_i == 0.0 || geometry.p == 0.0) {
        throw NoProvider("no active provider can hold the content (b_i * p = 0)");
    }
    return detail::d2d_coverage_unchecked(b_i, geometry, radio, quad, options);
}

double hyp2f1(double a, double b, double c, double z, const QuadratureConfig& quad)
{
    const double delta = -b;
    const bool in_family = a == 1.0 && delta > 0.0 && delta < 1.0 &&
                           std::abs(c - (1.0 - delta)) < 1e-12 && z <= 0.0;
    if (!in_family) {
        throw Unsupported("hyp2f1 is implemented only for (1, -d; 1 - d; z <= 0), 0 < d < 1");
    }
    if (z == 0.0) {
        return 1.0;
    }
    // Termwise, 2F1 = 1 + d*theta * int_0^1 t^-d / (1 + theta t) dt with
    // theta = -z; t = x^(1/(1-d)) removes the endpoint singularity.
    const double theta = -z;
    const double power = 1.0 / (1.0 - delta);
    const auto f = [&](double x) { return 1.0 / (1.0 + theta * std::pow(x, power)); };
    return 1.0 + delta * theta * power * integrate(f, 0.0, 1.0, quad);
}

double bs_coverage(double theta, double alpha, const QuadratureConfig& quad)
{
    if (!(alpha > 2.0)) {
        throw InvalidArgument("path-loss exponent must exceed 2");
    }
    if (!(theta > 0.0)) {
        throw InvalidArgument("SIR threshold must be positive");
    }
    const double delta = 2.0 / alpha;
    return 1.0 / hyp2f1(1.0, -delta, 1.0 - delta, -theta, quad);
}

CoverageTable coverage_table(std::span<const double> b, const NetworkGeometry& geometry,
                             const RadioConfig& radio, const QuadratureConfig& quad)
{
    geometry.validate();
    radio.validate();
    CoverageTable table;
    table.upsilon_b = bs_coverage(radio.theta, radio.alpha, quad);
    const InterLaplaceCache cache(geometry, radio.alpha, quad);
    table.upsilon_d.reserve(b.size());
    for (double bi : b) {
        if (!(bi >= 0.0 && bi <= 1.0)) {
            throw InvalidArgument("caching probability must lie in [0, 1]");
        }
        table.upsilon_d.push_back(
            detail::d2d_coverage_unchecked(bi, geometry, radio, quad, {true, &cache}));
    }
    return table;
}

}  // namespace d2dcache
