#include "d2dcache/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "d2dcache/errors.hpp"

namespace d2dcache {

void QuadratureConfig::validate() const
{
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(tail_mass_tol > 0.0)) {
        throw InvalidArgument("quadrature tolerances must be positive");
    }
    if (max_intervals < 1) {
        throw InvalidArgument("quadrature needs at least one interval");
    }
}

double gaussian_tail_cutoff(double mass)
{
    return std::max(8.0, std::sqrt(2.0 * std::log(1.0 / std::min(mass, 0.5))));
}

}  // namespace d2dcache
