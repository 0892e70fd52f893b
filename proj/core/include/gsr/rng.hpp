#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace gsr {

// Portable random source. The engine is std::mt19937_64, whose output sequence
// is fixed by the standard. All distributions are derived here from raw 64-bit
// draws, so streams are identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n); n must be positive. Uses rejection to stay unbiased.
    std::size_t index(std::size_t n);

    // Uniform integer in [lo, hi], inclusive.
    int integer(int lo, int hi);

private:
    std::mt19937_64 engine_;
};

// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

// Combines seed material into a new well-mixed seed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

// 64-bit FNV-1a hash, used to fold names into seeds.
std::uint64_t fnv1a(std::string_view text);

} // namespace gsr
