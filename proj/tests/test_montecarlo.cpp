#include <cmath>
#include <random>

#include "doctest.h"

#include "d2dcache/errors.hpp"
#include "d2dcache/montecarlo.hpp"

using namespace d2dcache;

namespace {

double histogram_cdf(const Histogram& h, double x)
{
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < h.edges.size(); ++j) {
        if (x >= h.edges[j + 1]) {
            acc += h.density[j] * h.bin_width(j);
        } else if (x > h.edges[j]) {
            acc += h.density[j] * (x - h.edges[j]);
        }
    }
    return acc;
}

}  // namespace

TEST_CASE("zero threshold means certain coverage")
{
    NetworkGeometry g;
    RadioConfig radio;
    radio.theta = 1e-12;
    MonteCarloConfig mc;
    mc.trials = 2000;
    CHECK(estimate_d2d_coverage(g, radio, 1.0, mc).mean == doctest::Approx(1.0));
}

TEST_CASE("estimates are reproducible and independent of thread count")
{
    NetworkGeometry g;
    RadioConfig radio;
    MonteCarloConfig mc;
    mc.trials = 2000;
    mc.seed = 5;
    const CoverageEstimate a = estimate_d2d_coverage(g, radio, 0.5, mc);
    const CoverageEstimate b = estimate_d2d_coverage(g, radio, 0.5, mc);
    mc.threads = 3;
    const CoverageEstimate c = estimate_d2d_coverage(g, radio, 0.5, mc);
    CHECK(a.mean == b.mean);
    CHECK(a.mean == c.mean);
    CHECK(a.window_radius_final == c.window_radius_final);
}

TEST_CASE("thomas variant reuses the same pipeline")
{
    NetworkGeometry g;
    RadioConfig radio;
    MonteCarloConfig mc;
    mc.trials = 2000;
    mc.seed = 12;
    CHECK(estimate_coverage_variant(g, radio, 1.0, mc).mean == estimate_d2d_coverage(g, radio, 1.0, mc).mean);
}

TEST_CASE("adaptive window has settled at termination")
{
    NetworkGeometry g;
    RadioConfig radio;
    MonteCarloConfig mc;
    mc.trials = 5000;
    mc.seed = 3;
    const CoverageEstimate e = estimate_d2d_coverage(g, radio, 1.0, mc);
    REQUIRE(e.window_converged);
    mc.window = FixedWindow{2.0 * e.window_radius_final};
    const CoverageEstimate wider = estimate_d2d_coverage(g, radio, 1.0, mc);
    CHECK(std::abs(wider.mean - e.mean) < 0.005);
}

TEST_CASE("99% half-width covers a fair coin")
{
    std::mt19937_64 rng(8);
    std::bernoulli_distribution coin(0.5);
    int covered = 0;
    const int meta = 1000, n = 1000;
    for (int k = 0; k < meta; ++k) {
        int heads = 0;
        for (int i = 0; i < n; ++i) {
            heads += coin(rng);
        }
        const double mean = heads / double(n);
        covered += std::abs(mean - 0.5) <= bernoulli_half_width_99(mean, n);
    }
    CHECK(covered >= 970);
}

TEST_CASE("nearest-distance histogram")
{
    NetworkGeometry g;
    g.sigma_m = 5.0;
    g.p = 0.5;
    MonteCarloConfig mc;
    mc.trials = 20000;
    const Histogram h1 = estimate_nearest_pdf(g, 1.0, 40, mc);
    const Histogram h05 = estimate_nearest_pdf(g, 0.5, 40, mc);
    double mass = 0.0;
    for (std::size_t j = 0; j < h1.density.size(); ++j) {
        mass += h1.density[j] * h1.bin_width(j);
    }
    CHECK(std::abs(mass - 1.0) < 1e-9);
    // b = 0.5 distances are stochastically larger.
    for (double x = 1.0; x < 30.0; x += 1.0) {
        CHECK(histogram_cdf(h05, x) <= histogram_cdf(h1, x) + 1e-12);
    }
    CHECK_THROWS_AS(estimate_nearest_pdf(g, 1.0, 5, mc), InvalidArgument);
}

TEST_CASE("rare providers are reported")
{
    NetworkGeometry g;
    RadioConfig radio;
    MonteCarloConfig mc;
    mc.trials = 1000;
    CHECK_THROWS_AS(estimate_d2d_coverage(g, radio, 1e-5, mc), ProviderTooRare);
}

TEST_CASE("best channel needs clusters")
{
    NetworkGeometry g;
    RadioConfig radio;
    MonteCarloConfig mc;
    mc.trials = 1000;
    mc.process = PoissonKind{};
    mc.selection = ProviderSelection::BestChannel;
    CHECK_THROWS_AS(estimate_coverage_variant(g, radio, 1.0, mc), Unsupported);
}

TEST_CASE("config validation")
{
    MonteCarloConfig mc;
    mc.trials = 0;
    CHECK_THROWS_AS(mc.validate(), InvalidArgument);
    mc.trials = 10;
    mc.window = AdaptiveWindow{0.0};
    CHECK_THROWS_AS(mc.validate(), InvalidArgument);
}
