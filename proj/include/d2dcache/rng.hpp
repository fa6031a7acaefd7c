#pragma once

#include <cstdint>
#include <limits>

namespace d2dcache {

/// SplitMix64 generator (Steele, Lea, Flood 2014). Cheap to construct, which
/// matters because every cluster and every trial gets its own stream.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    result_type operator()() noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

  private:
    std::uint64_t state_;
};

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(SplitMix64& rng) noexcept;

/// Deterministic child seed for sub-stream `index` of `parent`. Children of
/// different indices are decorrelated, so work split across threads yields the
/// same draws regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept;

/// Well-separated stream tags used with derive_seed.
namespace stream {
inline constexpr std::uint64_t parents = 0x70617265ULL;
inline constexpr std::uint64_t representative = 0x72657072ULL;
inline constexpr std::uint64_t base_stations = 0x62617365ULL;
inline constexpr std::uint64_t clusters = 0x636c7573ULL;
inline constexpr std::uint64_t trials = 0x7472696cULL;
}  // namespace stream

}  // namespace d2dcache
