#pragma once

namespace d2dcache {

/// Exponentially scaled modified Bessel function exp(-x) I0(x), x >= 0.
double bessel_i0e(double x);

double rayleigh_pdf(double r, double scale);

/// Density of |v e + Y| for Y ~ N(0, sigma^2 I2), i.e. the distance from the
/// origin to a point Gaussian-scattered around a centre at distance v.
double rice_pdf(double u, double v, double sigma);

/// P(|v e + Y| <= u), through the non-central chi-square law of (u/sigma)^2.
double rice_cdf(double u, double v, double sigma);

}  // namespace d2dcache
