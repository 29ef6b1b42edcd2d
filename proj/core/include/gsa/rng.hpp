#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gsa {

/// SplitMix64 finalizer; bijective mixing of a 64-bit word.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive an independent seed for a named substream of `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

/// FNV-1a, used to turn substream labels into stream ids.
constexpr std::uint64_t stream_id(std::string_view label) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) noexcept {
    return derive_seed(seed, stream_id(label));
}

/// Seeded 64-bit engine with platform-independent variate helpers.
///
/// The standard distributions are implementation-defined, so uniform,
/// integer and normal draws are computed here from raw engine output to keep
/// results bit-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), unbiased; n must be positive.
    std::uint64_t index(std::uint64_t n);

    /// Standard normal by Box-Muller (one variate per call).
    double normal();

private:
    std::mt19937_64 engine_;
};

} // namespace gsa
