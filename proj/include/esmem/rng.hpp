#pragma once

#include <cstdint>
#include <limits>

namespace esmem {

// SplitMix64 finalizer (Steele, Lea & Flood 2014). Used as the integer mixer for
// all seed derivation; the constant names below are recorded in run metadata.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr const char* kSeedDerivation =
    "splitmix64(splitmix64(splitmix64(splitmix64(master) ^ trajectory) ^ qubit) ^ axis)";

// Sub-stream seed for one (trajectory, qubit, axis) noise channel.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t qubit, std::uint64_t axis,
                                    std::uint64_t trajectory) noexcept {
    std::uint64_t s = splitmix64_mix(master);
    s = splitmix64_mix(s ^ trajectory);
    s = splitmix64_mix(s ^ qubit);
    return splitmix64_mix(s ^ axis);
}

// Tiny UniformRandomBitGenerator for short-lived per-round streams where a
// Mersenne Twister state would dominate the cost.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) from the top 53 bits.
    constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace esmem
