#pragma once

#include <cstdint>

#include "seap/bytes.hpp"

namespace seap {

// Deterministic simulation RNG (splitmix64). The standard library engines are
// portable but its distributions are not, so draws are implemented here to
// keep traces bit-identical across compilers.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [lo, hi], inclusive. Rejection-sampled, unbiased.
    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
        if (lo >= hi) return lo;
        std::uint64_t range = hi - lo + 1;
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return lo + v % range;
    }

    std::int64_t uniform_i64(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(uniform(0, static_cast<std::uint64_t>(hi - lo)));
    }

    bool chance(std::uint32_t percent) { return uniform(0, 99) < percent; }

    Bytes bytes(std::size_t n) {
        Bytes out(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (i % 8 == 0) cached_ = next_u64();
            out[i] = static_cast<std::uint8_t>(cached_ >> ((i % 8) * 8));
        }
        return out;
    }

    // Independent child stream; used to give each run/component its own seed.
    DetRng fork() { return DetRng(next_u64()); }

private:
    std::uint64_t state_;
    std::uint64_t cached_ = 0;
};

} // namespace seap
