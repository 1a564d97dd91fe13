#pragma once

#include <cstdint>
#include <string_view>

#include "fiberlp/matrix.hpp"

namespace fiberlp {

// SplitMix64 (Steele/Lea/Flood). Chosen over std::mt19937 because its output
// and our double construction are fully specified, so seeded suites reproduce
// bit-identically across toolchains.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1): top 53 bits of the state word
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) noexcept { return a + (b - a) * uniform01(); }

    std::uint64_t below(std::uint64_t n) noexcept { return next() % n; }

    cplx unit_square() noexcept { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }

private:
    std::uint64_t state_;
};

// FNV-1a, used both for content hashes and for deriving per-suite substreams.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xCBF29CE484222325ull) noexcept {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

inline SplitMix64 derived_rng(std::uint64_t seed, std::string_view stream_name) {
    return SplitMix64(seed ^ fnv1a(stream_name));
}

inline cvector random_cvector(SplitMix64& rng, std::size_t dim) {
    cvector v(dim);
    for (auto& c : v) c = rng.unit_square();
    return v;
}

} // namespace fiberlp
