#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

// Boost 1.74's pchip calls isnan unqualified; math.h puts it in the global namespace.
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>

#include "d2dcache/caching.hpp"
#include "d2dcache/coverage.hpp"
#include "d2dcache/delay.hpp"
#include "d2dcache/geometry.hpp"

namespace d2dcache {

struct SolverConfig {
    double obj_tol = 1e-6;  // relative objective decrease that ends a loop
    int max_outer_iters = 50;
    double barrier_mu0 = 1e-2;
    double barrier_shrink = 0.1;
    double grad_step_tol = 1e-8;
    int upsilon_grid_points = 17;
    int max_inner_iters = 500;
    double fd_step = 1e-6;

    void validate() const;
};

/// Monotone interpolant of b -> d2d coverage over [0, 1]. Node 0 holds the
/// b -> 0+ limit.
class UpsilonMap {
  public:
    UpsilonMap(std::vector<double> nodes, std::vector<double> values);

    double operator()(double b) const;
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }

  private:
    std::vector<double> nodes_;
    std::vector<double> values_;
    boost::math::interpolators::pchip<std::vector<double>> spline_;
};

/// Chebyshev-Lobatto nodes on [0, 1], coverage by quadrature at each, then a
/// running maximum so the data (and hence the PCHIP) is non-decreasing.
UpsilonMap tabulate_upsilon(const NetworkGeometry& geometry, const RadioConfig& radio,
                            int grid_points, const QuadratureConfig& quad = {});

CoverageTable coverage_from_map(const UpsilonMap& map, std::span<const double> b,
                                double upsilon_b);

/// Closed-form minimiser of the weighted delay over W_d, clamped to [0, W].
/// Throws Infeasible when no split stabilises both queues.
double optimal_bandwidth(const ContentModel& content, const TrafficModel& traffic,
                         const NetworkGeometry& geometry, const CoverageTable& coverage,
                         const RadioConfig& radio);

/// Lumped-constant form of the same formula.
double optimal_bandwidth(const DelayConstants& k, const TrafficModel& traffic, double total_w_hz);

/// Euclidean projection onto {sum b = M, 0 <= b <= 1}.
std::vector<double> project_capped_simplex(std::span<const double> y, int cache_size);

struct CachingResult {
    std::vector<double> b;
    double t = 0.0;
    int iterations = 0;
    bool stalled = false;  // no descent from b_init
};

/// Caching subproblem at fixed W_d, started from a feasible b_init.
CachingResult optimize_caching(double w_d_hz, std::span<const double> b_init,
                               const ContentModel& content, const TrafficModel& traffic,
                               const NetworkGeometry& geometry, const RadioConfig& radio,
                               const UpsilonMap& map, const SolverConfig& solver);

struct OptimizationIterate {
    double t_seconds = 0.0;
    double w_d_hz = 0.0;
    std::vector<double> b;
};

struct OptimizationResult {
    std::vector<double> b_star;
    double w_d_star = 0.0;
    double t_star = 0.0;
    int iterations = 0;
    std::vector<double> objective_trace;
    bool converged = false;
    std::vector<OptimizationIterate> iterates;  // initial point first
    std::string init_note;  // set when the default start had to be replaced
};

/// Alternates the caching subproblem with the closed-form bandwidth. The start
/// is content.b (ZipfTopM when empty) with W_d = W / 2. A second pass from the
/// same start takes the bandwidth step first; the lower of the two is returned
/// and init_note says so when it is the second.
OptimizationResult bcd_optimize(const ContentModel& content, const TrafficModel& traffic,
                                const NetworkGeometry& geometry, const RadioConfig& radio,
                                const SolverConfig& solver, const UpsilonMap& map);

/// Tabulates the coverage map itself.
OptimizationResult bcd_optimize(const ContentModel& content, const TrafficModel& traffic,
                                const NetworkGeometry& geometry, const RadioConfig& radio,
                                const SolverConfig& solver = {});

/// CSV iter,t_seconds,w_d_hz,b_1..b_Nf, one row per iterate.
void write_optimization_trace(std::ostream& out, const OptimizationResult& result);

}  // namespace d2dcache
