#include "d2dcache/special.hpp"

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>

namespace d2dcache {

double bessel_i0e(double x)
{
    if (x < 700.0) {
        return boost::math::cyl_bessel_i(0, x) * std::exp(-x);
    }
    // Hankel expansion; the next term is below 1e-16 relative here.
    const double t = 1.0 / x;
    const double series = 1.0 + t * (1.0 / 8.0 + t * (9.0 / 128.0 + t * (225.0 / 3072.0)));
    return series / std::sqrt(2.0 * std::numbers::pi * x);
}

double rayleigh_pdf(double r, double scale)
{
    if (r < 0.0) {
        return 0.0;
    }
    const double s2 = scale * scale;
    return r / s2 * std::exp(-0.5 * r * r / s2);
}

double rice_pdf(double u, double v, double sigma)
{
    if (u < 0.0) {
        return 0.0;
    }
    const double s2 = sigma * sigma;
    const double d = u - v;
    return u / s2 * std::exp(-0.5 * d * d / s2) * bessel_i0e(u * v / s2);
}

double rice_cdf(double u, double v, double sigma)
{
    if (u <= 0.0) {
        return 0.0;
    }
    const double x = (u / sigma) * (u / sigma);
    if (v == 0.0) {
        return -std::expm1(-0.5 * x);
    }
    const double lambda = (v / sigma) * (v / sigma);
    const boost::math::non_central_chi_squared_distribution<double> law(2.0, lambda);
    return boost::math::cdf(law, x);
}

}  // namespace d2dcache
