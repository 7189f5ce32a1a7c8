#pragma once

#include <cstdint>
#include <random>

namespace talkmix {

// Deterministic random stream. mt19937_64 output is fixed by the standard,
// and the uniform mappings below avoid std::uniform_*_distribution whose
// results differ between standard library implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    // Uniform double in the open interval (0, 1).
    double uniform01() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform double in (lo, hi); returns lo when the interval is empty.
    double uniform(double lo, double hi) {
        if (hi <= lo) return lo;
        return lo + (hi - lo) * uniform01();
    }

    // Uniform integer in [0, n). n must be > 0.
    uint64_t uniform_int(uint64_t n) {
        uint64_t x, r;
        do {
            x = gen_();
            r = x % n;
        } while (x - r > uint64_t(0) - n);
        return r;
    }

private:
    std::mt19937_64 gen_;
};

// Per-item seed derivation (splitmix64 finalizer). Used so that sample i of a
// batch depends only on (master_seed, i) and batches can run in any order.
inline uint64_t mix_seed(uint64_t master, uint64_t index) {
    uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace talkmix
