#include <cmath>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"

#include "d2dcache/coverage.hpp"
#include "d2dcache/errors.hpp"
#include "d2dcache/point_process.hpp"
#include "d2dcache/rng.hpp"

using namespace d2dcache;
using boost::math::quadrature::gauss_kronrod;

TEST_CASE("nearest provider density has mass 1 - exp(-b p n)")
{
    for (double sigma : {5.0, 10.0}) {
        for (double b : {0.5, 1.0}) {
            NetworkGeometry g;
            g.sigma_m = sigma;
            g.p = 0.5;
            g.n_bar = 20.0;
            QuadratureConfig quad;
            const auto f = [&](double h) { return nearest_provider_pdf(h, b, g, quad); };
            const double mass = gauss_kronrod<double, 61>::integrate(f, 0.0, 25.0 * sigma, 12, 1e-12);
            CHECK(std::abs(mass - (1.0 - std::exp(-b * 10.0))) < 10 * quad.abs_tol);
        }
    }
}

TEST_CASE("nearest provider density vanishes without providers")
{
    NetworkGeometry g;
    for (double h : {0.0, 1.0, 10.0, 100.0}) {
        CHECK(nearest_provider_pdf(h, 0.0, g) == 0.0);
    }
    g.p = 0.0;
    CHECK(nearest_provider_pdf(5.0, 1.0, g) == 0.0);
}

TEST_CASE("intra-cluster Laplace transform trivial values")
{
    NetworkGeometry g;
    CHECK(intra_cluster_laplace(0.0, 10.0, 0.5, g, 4.0) == 1.0);
    CHECK_THROWS_AS(intra_cluster_laplace(-1.0, 10.0, 0.5, g, 4.0), InvalidArgument);
    g.p = 0.0;
    CHECK(intra_cluster_laplace(1e4, 10.0, 0.5, g, 4.0) == 1.0);
}

TEST_CASE("intra-cluster Laplace transform matches sampled interferer sets")
{
    NetworkGeometry g;
    g.sigma_m = 10.0;
    g.n_bar = 20.0;
    g.p = 0.5;
    const double b = 0.5, h = 10.0, s = std::pow(h, 4.0);
    // i.i.d. Rayleigh(sqrt2 sigma) distances, as in the approximate model.
    std::mt19937_64 rng(17);
    std::poisson_distribution<int> count(g.p * g.n_bar);
    std::exponential_distribution<double> fade(1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double scale = std::sqrt(2.0) * g.sigma_m;
    double acc = 0.0;
    const int n = 100000;
    for (int k = 0; k < n; ++k) {
        double interference = 0.0;
        for (int j = count(rng); j > 0; --j) {
            const double r = scale * std::sqrt(-2.0 * std::log(1.0 - u(rng)));
            if (r < h && u(rng) < b) {
                continue;  // would have been a closer provider
            }
            interference += fade(rng) * std::pow(r, -4.0);
        }
        acc += std::exp(-s * interference);
    }
    CHECK(std::abs(intra_cluster_laplace(s, h, b, g, 4.0) - acc / n) < 0.01);
}

TEST_CASE("inter-cluster Laplace transform trivial values")
{
    NetworkGeometry g;
    CHECK(inter_cluster_laplace(0.0, g, 4.0) == 1.0);
    CHECK_THROWS_AS(inter_cluster_laplace(-1.0, g, 4.0), InvalidArgument);
    g.lambda_p_per_km2 = 0.0;
    CHECK(inter_cluster_laplace(1e4, g, 4.0) == 1.0);
}

TEST_CASE("inter-cluster Laplace transform matches TCP realizations")
{
    NetworkGeometry g;
    g.lambda_p_per_km2 = 50.0;
    g.sigma_m = 10.0;
    g.n_bar = 20.0;
    g.p = 0.5;
    const double s = 1e4;
    double acc = 0.0;
    const int n = 10000;
    for (int k = 0; k < n; ++k) {
        const std::uint64_t seed = derive_seed(99, k);
        const SpatialRealization r = sample_tcp(g, 1500.0, seed);
        SplitMix64 rng(derive_seed(seed, 1));
        double interference = 0.0;
        for (std::size_t c = 0; c < r.cluster_centers.size(); ++c) {
            for (const auto& m : r.members_per_cluster[c]) {
                if (uniform01(rng) >= g.p) {
                    continue;
                }
                const double d = (r.cluster_centers[c] + m).norm();
                interference += -std::log(1.0 - uniform01(rng)) * std::pow(d, -4.0);
            }
        }
        acc += std::exp(-s * interference);
    }
    CHECK(std::abs(inter_cluster_laplace(s, g, 4.0) - acc / n) < 0.01);
}

TEST_CASE("Laplace transforms lie in (0, 1] and do not increase in s")
{
    NetworkGeometry g;
    double last_intra = 1.0, last_inter = 1.0;
    for (double s : {1.0, 10.0, 1e2, 1e3, 1e4, 1e5, 1e6}) {
        const double a = intra_cluster_laplace(s, 12.0, 0.7, g, 4.0);
        const double e = inter_cluster_laplace(s, g, 4.0);
        CHECK(a > 0.0);
        CHECK(a <= last_intra);
        CHECK(e > 0.0);
        CHECK(e <= last_inter);
        last_intra = a;
        last_inter = e;
    }
}

TEST_CASE("d2d coverage basics")
{
    NetworkGeometry g;
    RadioConfig radio;
    CHECK_THROWS_AS(d2d_coverage(0.0, g, radio), NoProvider);
    radio.theta = 1e-7;
    CHECK(d2d_coverage(1.0, g, radio) > 0.99);
}

TEST_CASE("d2d coverage increases with b")
{
    NetworkGeometry g;
    g.p = 0.3;
    RadioConfig radio;
    double last = 0.0;
    for (int k = 1; k <= 10; ++k) {
        const double v = d2d_coverage(0.1 * k, g, radio);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(v > last);
        last = v;
    }
}

TEST_CASE("unnormalized coverage folds in the availability factor")
{
    NetworkGeometry g;
    g.p = 0.1;
    RadioConfig radio;
    const double b = 0.4;
    const double norm = d2d_coverage(b, g, radio);
    const double raw = d2d_coverage(b, g, radio, {}, CoverageOptions{false, nullptr});
    CHECK(raw == doctest::Approx(norm * -std::expm1(-b * g.p * g.n_bar)).epsilon(1e-6));
}

TEST_CASE("Nakagami intra-cluster links have no closed form here")
{
    NetworkGeometry g;
    RadioConfig radio;
    radio.channel_mode = ChannelMode::NakagamiLoSIntra;
    radio.alpha_los = 2.09;
    radio.nakagami_m = 3.0;
    CHECK_THROWS_AS(d2d_coverage(1.0, g, radio), Unsupported);
}

TEST_CASE("hyp2f1 on its supported family")
{
    CHECK(hyp2f1(1.0, -0.5, 0.5, 0.0) == doctest::Approx(1.0));
    CHECK(hyp2f1(1.0, -0.5, 0.5, -1.0) == doctest::Approx(1.0 + M_PI / 4.0).epsilon(1e-7));
    CHECK(hyp2f1(1.0, -0.5, 0.5, -4.0) == doctest::Approx(1.0 + 2.0 * std::atan(2.0)).epsilon(1e-7));
    CHECK(hyp2f1(1.0, -0.5, 0.5, -4.0) == doctest::Approx(3.214297).epsilon(1e-6));
    CHECK_THROWS_AS(hyp2f1(2.0, -0.5, 0.5, -1.0), Unsupported);
    CHECK_THROWS_AS(hyp2f1(1.0, -0.5, 0.5, 0.5), Unsupported);
}

TEST_CASE("bs coverage")
{
    CHECK(bs_coverage(1.0, 4.0) == doctest::Approx(1.0 / (1.0 + M_PI / 4.0)).epsilon(1e-7));
    CHECK(bs_coverage(1.0, 4.0) == doctest::Approx(0.5602).epsilon(1e-4));
    CHECK(bs_coverage(1e-9, 4.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(bs_coverage(1.0, 2.0), InvalidArgument);
    // Series oracle for delta = 2/3: 2F1(1, -d; 1 - d; z) = 1 + sum_k (-d)/(k - d) z^k.
    const double d = 2.0 / 3.0, z = -0.5;
    double series = 1.0;
    for (int k = 1; k < 200; ++k) {
        series += (-d) / (k - d) * std::pow(z, k);
    }
    CHECK(hyp2f1(1.0, -d, 1.0 - d, z) == doctest::Approx(series).epsilon(1e-7));
    double last = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double v = bs_coverage(0.1 * k, 4.0);
        CHECK(v < last);
        last = v;
    }
}

TEST_CASE("coverage table uses the b -> 0 limit for uncached content")
{
    NetworkGeometry g;
    RadioConfig radio;
    const std::vector<double> b = {1.0, 0.0};
    const CoverageTable t = coverage_table(b, g, radio);
    REQUIRE(t.upsilon_d.size() == 2);
    CHECK(t.upsilon_d[0] == doctest::Approx(d2d_coverage(1.0, g, radio)));
    CHECK(t.upsilon_d[1] == doctest::Approx(d2d_coverage(1e-6, g, radio)).epsilon(1e-3));
    CHECK(t.upsilon_b == doctest::Approx(bs_coverage(radio.theta, radio.alpha)));
}

TEST_CASE("inter-cluster cache returns the direct value")
{
    NetworkGeometry g;
    InterLaplaceCache cache(g, 4.0, QuadratureConfig{});
    const double direct = inter_cluster_laplace(5e3, g, 4.0);
    CHECK(cache(5e3) == direct);
    CHECK(cache(5e3) == direct);
    CHECK(cache.size() == 1);
}
