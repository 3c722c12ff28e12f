#ifndef MISBEEP_RNG_HPP
#define MISBEEP_RNG_HPP

#include <cstdint>
#include <limits>

namespace misbeep {

/// SplitMix64 finalizer. Used both as the generator step and as the
/// splitting function that derives per-node streams from a root seed.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Small-state deterministic generator (SplitMix64). Satisfies
/// UniformRandomBitGenerator so it composes with <random> and <algorithm>.
/// Eight bytes of state keep one stream per node affordable on large graphs.
class Rng
{
public:
    using result_type = std::uint64_t;

    constexpr Rng() noexcept = default;
    constexpr explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    /// Stream for `index` under root `seed`. Independent of how many other
    /// streams exist or in what order they are created.
    static constexpr Rng substream(std::uint64_t seed, std::uint64_t index) noexcept
    {
        return Rng(mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL)));
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    constexpr double uniform() noexcept
    {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound). Lemire's multiply-shift; the tiny bias
    /// (< bound / 2^64) is irrelevant at the bounds used here.
    constexpr std::uint64_t below(std::uint64_t bound) noexcept
    {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>((*this)()) * bound) >> 64);
    }

    constexpr bool bernoulli(double p) noexcept { return uniform() < p; }

private:
    std::uint64_t state_ = 0;
};

/// Convert a raw 64-bit draw to a unit-interval double exactly as
/// Rng::uniform does, for coin sources that replay recorded draws.
constexpr double to_unit(std::uint64_t bits) noexcept
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace misbeep

#endif
