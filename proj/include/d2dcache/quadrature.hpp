#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

namespace d2dcache {

struct QuadratureConfig {
    double rel_tol = 1e-6;
    double abs_tol = 1e-10;
    // Probability mass a truncated tail may drop.
    double tail_mass_tol = 1e-12;
    int max_intervals = 200;

    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int intervals = 0;
    bool converged = true;
};

/// Radius beyond which a Gaussian-type tail exp(-x^2 / 2) holds less than
/// `mass`, in units of the scale parameter.
double gaussian_tail_cutoff(double mass);

namespace detail {

// Kronrod abscissae (descending) and weights for the 15-point rule; the odd
// entries are the embedded 7-point Gauss nodes.
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gk15(const F& f, double a, double b)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();

    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double abs_half = std::abs(half);

    std::array<double, 7> fv1{};
    std::array<double, 7> fv2{};

    const double fc = f(centre);
    double resg = fc * wg[3];
    double resk = fc * wgk[7];
    double resabs = std::abs(resk);

    for (int j = 0; j < 3; ++j) {
        const int jtw = 2 * j + 1;
        const double dx = half * xgk[jtw];
        const double f1 = f(centre - dx);
        const double f2 = f(centre + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += wg[j] * (f1 + f2);
        resk += wgk[jtw] * (f1 + f2);
        resabs += wgk[jtw] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 4; ++j) {
        const int jtwm1 = 2 * j;
        const double dx = half * xgk[jtwm1];
        const double f1 = f(centre - dx);
        const double f2 = f(centre + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += wgk[jtwm1] * (f1 + f2);
        resabs += wgk[jtwm1] * (std::abs(f1) + std::abs(f2));
    }

    const double mean = 0.5 * resk;
    double resasc = wgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) {
        resasc += wgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    }

    const double value = resk * half;
    resabs *= abs_half;
    resasc *= abs_half;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    if (resabs > tiny / (50.0 * eps)) {
        err = std::max(50.0 * eps * resabs, err);
    }
    return {a, b, value, err};
}

}  // namespace detail

/// Globally adaptive 7/15-point Gauss-Kronrod on a finite interval. Bisects the
/// subinterval with the largest error estimate until the total estimate drops
/// below max(abs_tol, rel_tol * |I|) or the interval budget is spent.
template <class F>
inline QuadratureResult integrate_adaptive(const F& f, double a, double b, const QuadratureConfig& cfg)
{
    if (a == b) {
        return {};
    }
    std::priority_queue<detail::Segment> heap;
    detail::Segment first = detail::gk15(f, a, b);
    double total = first.value;
    double total_err = first.error;
    heap.push(first);

    int intervals = 1;
    auto done = [&] {
        return total_err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    };
    while (!done() && intervals < cfg.max_intervals) {
        const detail::Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= std::min(worst.a, worst.b) || mid >= std::max(worst.a, worst.b)) {
            // Interval can no longer be split in floating point.
            heap.push(worst);
            break;
        }
        const detail::Segment left = detail::gk15(f, worst.a, mid);
        const detail::Segment right = detail::gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }

    // Re-sum to shed the cancellation accumulated by the running updates.
    double sum = 0.0;
    double err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {sum, err, intervals, err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(sum))};
}

template <class F>
inline double integrate(const F& f, double a, double b, const QuadratureConfig& cfg)
{
    return integrate_adaptive(f, a, b, cfg).value;
}

}  // namespace d2dcache
