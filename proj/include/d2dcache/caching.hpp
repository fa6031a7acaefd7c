#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "d2dcache/geometry.hpp"

namespace d2dcache {

/// Library, popularity and cache placement. Content indices are 0-based; the
/// most popular content is index 0.
struct ContentModel {
    int n_files = 10;
    int cache_size = 1;  // M, files per provider
    double beta = 0.5;
    std::vector<double> q;
    std::vector<double> b;

    void validate() const;
    /// Zipf popularity with b left empty.
    static ContentModel zipf(int n_files, int cache_size, double beta);
};

struct TrafficModel {
    double zeta = 0.5;  // requests/s per client
    double eta = 5.0;   // clients per BS

    void validate() const;
    static TrafficModel from_geometry(double zeta, const NetworkGeometry& geometry);
};

struct ArrivalSplit {
    double zeta_d = 0.0;
    double zeta_b = 0.0;
    std::vector<double> zeta_i;
};

enum class CachingPolicy { Uniform, ZipfTopM, ZipfProportional };

CachingPolicy parse_caching_policy(std::string_view name);
const char* to_string(CachingPolicy policy) noexcept;

std::vector<double> zipf_popularity(int n_files, double beta);

/// Checks 0 <= b_i <= 1 and sum b = M within `tol`; throws InvalidArgument.
void require_caching_vector(std::span<const double> b, int cache_size, double tol = 1e-9);

/// Block placement: lay the b_i end to end over M unit blocks and take, from
/// each block, the content covering height u. Returns M distinct sorted
/// indices; item i is included with probability b_i when u ~ U[0, 1).
std::vector<int> sample_cache(std::span<const double> b, int cache_size, double u);
std::vector<int> sample_cache(std::span<const double> b, int cache_size, std::uint64_t seed);

ArrivalSplit split_arrivals(const TrafficModel& traffic, const ContentModel& content,
                            const NetworkGeometry& geometry);

std::vector<double> baseline_caching(CachingPolicy policy, const ContentModel& content);

}  // namespace d2dcache
