#pragma once

#include <cstdint>

namespace appr {

/// Counter-based RNG: the stream is a pure function of (seed, k1, k2, k3),
/// so draws are reproducible regardless of execution order or thread count.
class KeyedRng {
public:
    explicit KeyedRng(std::uint64_t seed, std::uint64_t k1 = 0,
                      std::uint64_t k2 = 0, std::uint64_t k3 = 0) {
        state_ = mix(seed + 0x9e3779b97f4a7c15ULL);
        state_ = mix(state_ ^ mix(k1 + 0xbf58476d1ce4e5b9ULL));
        state_ = mix(state_ ^ mix(k2 + 0x94d049bb133111ebULL));
        state_ = mix(state_ ^ mix(k3 + 0xd6e8feb86659fd93ULL));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t next_below(std::uint64_t n) {
        // rejection sampling keeps the draw unbiased
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return x;
    }

private:
    std::uint64_t state_;
};

}  // namespace appr
