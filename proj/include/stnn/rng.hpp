#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace stnn {

/// Purpose tags for deriving independent random streams from one seed.
/// Each consumer mixes (seed, purpose, index) so that e.g. fold-3 negative
/// sampling never shares a stream with parameter initialization.
enum class RngPurpose : std::uint64_t {
    Init = 1,
    Shuffle = 2,
    Split = 3,
    NegativeTrain = 4,
    NegativeTest = 5,
    FoldTrain = 6,
    Planted = 7,
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Derive a stream seed from a base seed, a purpose tag and an index.
inline std::uint64_t derive_seed(std::uint64_t base, RngPurpose purpose,
                                 std::uint64_t index = 0) {
    std::uint64_t s = detail::splitmix64(base);
    s = detail::splitmix64(s ^ static_cast<std::uint64_t>(purpose));
    return detail::splitmix64(s ^ index);
}

/// Deterministic RNG. Wraps std::mt19937_64 (fully specified by the
/// standard) and maps its output to ints/doubles with fixed arithmetic, so
/// identical seeds give identical sequences on every platform and standard
/// library. std::uniform_*_distribution and std::shuffle are
/// implementation-defined and would break byte-identical outputs.
class Rng {
 public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Rejection sampling, unbiased. n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    /// Fisher-Yates shuffle with this engine.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_index(i));
            std::swap(v[i - 1], v[j]);
        }
    }

 private:
    std::mt19937_64 engine_;
};

}  // namespace stnn
