#pragma once

#include <cstdint>

namespace ramq {

// SplitMix64. Deterministic across platforms, which is all the corpus
// generator and the property tests need from a generator.
struct splitmix64 {
    std::uint64_t state = 0;

    explicit splitmix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound); bound must be positive. Modulo bias is
    // irrelevant at corpus sizes.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    int range(int lo, int hi) {  // inclusive ends
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool chance(int numerator, int denominator) {
        return below(static_cast<std::uint64_t>(denominator)) <
               static_cast<std::uint64_t>(numerator);
    }
};

}  // namespace ramq
