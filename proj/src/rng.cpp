#include "d2dcache/rng.hpp"

namespace d2dcache {

namespace {
constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t finalize(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace

SplitMix64::result_type SplitMix64::operator()() noexcept
{
    state_ += golden_gamma;
    return finalize(state_);
}

double uniform01(SplitMix64& rng) noexcept
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept
{
    return finalize(finalize(parent) ^ (golden_gamma * (index + 1)));
}

}  // namespace d2dcache
