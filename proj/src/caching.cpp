#include "d2dcache/caching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "d2dcache/errors.hpp"
#include "d2dcache/rng.hpp"

namespace d2dcache {

void ContentModel::validate() const
{
    if (n_files < 1) {
        throw InvalidArgument("library must hold at least one file");
    }
    if (cache_size < 0 || cache_size > n_files) {
        throw InvalidArgument("cache size must lie in [0, N_f]");
    }
    if (!(beta >= 0.0)) {
        throw InvalidArgument("Zipf exponent must be non-negative");
    }
    if (q.size() != static_cast<std::size_t>(n_files)) {
        throw InvalidArgument("popularity vector length differs from N_f");
    }
    const double total = std::accumulate(q.begin(), q.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) {
        throw InvalidArgument("popularity must sum to one");
    }
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] < 0.0 || (i > 0 && q[i] > q[i - 1] * (1.0 + 1e-12))) {
            throw InvalidArgument("popularity must be non-negative and non-increasing");
        }
    }
    if (!b.empty()) {
        if (b.size() != q.size()) {
            throw InvalidArgument("caching vector length differs from N_f");
        }
        require_caching_vector(b, cache_size);
    }
}

ContentModel ContentModel::zipf(int n_files, int cache_size, double beta)
{
    ContentModel c;
    c.n_files = n_files;
    c.cache_size = cache_size;
    c.beta = beta;
    c.q = zipf_popularity(n_files, beta);
    c.validate();
    return c;
}

void TrafficModel::validate() const
{
    if (!(zeta >= 0.0) || !std::isfinite(zeta)) {
        throw InvalidArgument("request rate must be non-negative");
    }
    if (!(eta > 0.0) || !std::isfinite(eta)) {
        throw InvalidArgument("clients per BS must be positive");
    }
}

TrafficModel TrafficModel::from_geometry(double zeta, const NetworkGeometry& geometry)
{
    TrafficModel t{zeta, geometry.clients_per_bs()};
    t.validate();
    return t;
}

CachingPolicy parse_caching_policy(std::string_view name)
{
    if (name == "uniform" || name == "Uniform") {
        return CachingPolicy::Uniform;
    }
    if (name == "zipf" || name == "zipf_top_m" || name == "ZipfTopM") {
        return CachingPolicy::ZipfTopM;
    }
    if (name == "zipf_proportional" || name == "ZipfProportional") {
        return CachingPolicy::ZipfProportional;
    }
    throw InvalidArgument("unknown caching policy '" + std::string(name) + "'");
}

const char* to_string(CachingPolicy policy) noexcept
{
    switch (policy) {
    case CachingPolicy::Uniform:
        return "uniform";
    case CachingPolicy::ZipfTopM:
        return "zipf_top_m";
    case CachingPolicy::ZipfProportional:
        return "zipf_proportional";
    }
    return "?";
}

std::vector<double> zipf_popularity(int n_files, double beta)
{
    if (n_files < 1) {
        throw InvalidArgument("library must hold at least one file");
    }
    if (!(beta >= 0.0)) {
        throw InvalidArgument("Zipf exponent must be non-negative");
    }
    std::vector<double> q(static_cast<std::size_t>(n_files));
    for (int i = 0; i < n_files; ++i) {
        q[static_cast<std::size_t>(i)] = std::pow(i + 1.0, -beta);
    }
    const double total = std::accumulate(q.begin(), q.end(), 0.0);
    for (double& x : q) {
        x /= total;
    }
    return q;
}

void require_caching_vector(std::span<const double> b, int cache_size, double tol)
{
    double total = 0.0;
    for (double x : b) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw InvalidArgument("caching probabilities must lie in [0, 1]");
        }
        total += x;
    }
    if (std::abs(total - cache_size) > tol) {
        throw InvalidArgument("caching probabilities must sum to the cache size (got " +
                              std::to_string(total) + ", want " + std::to_string(cache_size) + ")");
    }
}

std::vector<int> sample_cache(std::span<const double> b, int cache_size, double u)
{
    require_caching_vector(b, cache_size);
    if (!(u >= 0.0 && u < 1.0)) {
        throw InvalidArgument("block height must lie in [0, 1)");
    }
    std::vector<double> upper(b.size());
    std::partial_sum(b.begin(), b.end(), upper.begin());

    int last_positive = -1;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] > 0.0) {
            last_positive = static_cast<int>(i);
        }
    }

    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(cache_size));
    for (int m = 0; m < cache_size; ++m) {
        const double height = m + u;
        auto it = std::upper_bound(upper.begin(), upper.end(), height);
        int idx = it == upper.end() ? last_positive : static_cast<int>(it - upper.begin());
        // Rounding in the partial sums can put two block heights in one
        // segment; the next positive item is the one the exact sums would pick.
        while (!chosen.empty() && idx <= chosen.back()) {
            ++idx;
            while (idx < static_cast<int>(b.size()) && b[static_cast<std::size_t>(idx)] == 0.0) {
                ++idx;
            }
        }
        if (idx >= static_cast<int>(b.size())) {
            throw InvalidArgument("caching vector cannot fill every block");
        }
        chosen.push_back(idx);
    }
    return chosen;
}

std::vector<int> sample_cache(std::span<const double> b, int cache_size, std::uint64_t seed)
{
    SplitMix64 rng(seed);
    return sample_cache(b, cache_size, uniform01(rng));
}

ArrivalSplit split_arrivals(const TrafficModel& traffic, const ContentModel& content,
                            const NetworkGeometry& geometry)
{
    traffic.validate();
    content.validate();
    if (content.b.empty()) {
        throw InvalidArgument("content model has no caching vector");
    }
    ArrivalSplit s;
    s.zeta_i.resize(content.q.size());
    const double active = geometry.p * geometry.n_bar;
    for (std::size_t i = 0; i < content.q.size(); ++i) {
        s.zeta_i[i] = traffic.zeta * content.q[i] * -std::expm1(-content.b[i] * active);
        s.zeta_d += s.zeta_i[i];
    }
    s.zeta_b = traffic.zeta - s.zeta_d;
    return s;
}

std::vector<double> baseline_caching(CachingPolicy policy, const ContentModel& content)
{
    const auto n = static_cast<std::size_t>(content.n_files);
    const double m = content.cache_size;
    if (content.cache_size > content.n_files) {
        throw InvalidArgument("cache size exceeds library size");
    }
    std::vector<double> b(n, 0.0);
    switch (policy) {
    case CachingPolicy::Uniform:
        std::fill(b.begin(), b.end(), m / static_cast<double>(n));
        break;
    case CachingPolicy::ZipfTopM:
        std::fill(b.begin(), b.begin() + content.cache_size, 1.0);
        break;
    case CachingPolicy::ZipfProportional: {
        // Water-filling: b_i = min(1, c q_i) with c set so the sum is M.
        std::vector<bool> clipped(n, false);
        for (;;) {
            double free_mass = 0.0;
            double budget = m;
            for (std::size_t i = 0; i < n; ++i) {
                if (clipped[i]) {
                    budget -= 1.0;
                } else {
                    free_mass += content.q[i];
                }
            }
            const double c = free_mass > 0.0 ? budget / free_mass : 0.0;
            bool changed = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (!clipped[i] && c * content.q[i] >= 1.0) {
                    clipped[i] = true;
                    changed = true;
                }
            }
            if (!changed) {
                for (std::size_t i = 0; i < n; ++i) {
                    b[i] = clipped[i] ? 1.0 : c * content.q[i];
                }
                break;
            }
        }
        break;
    }
    }
    return b;
}

}  // namespace d2dcache
