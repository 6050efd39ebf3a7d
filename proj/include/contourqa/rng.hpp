#pragma once

#include <cmath>
#include <cstdint>

namespace cqa {

// Counter-based pseudo-random generator: output i is splitmix64_mix(seed + (i+1)*GAMMA).
// Normals come from Box-Muller over two counter draws. All randomness in the project
// flows through this generator so that (seed, counter) fully determines every stream;
// sub-streams are derived with derive() rather than by sharing counters.
inline uint64_t splitmix64_mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(uint64_t seed) : seed_(seed) {}

    uint64_t next_u64() {
        counter_ += 0x9E3779B97F4A7C15ull;
        return splitmix64_mix(seed_ + counter_);
    }

    // Uniform in [0,1) with 53-bit resolution.
    double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo,hi).
    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_uniform(); }

    // Standard normal via Box-Muller; consumes exactly two draws.
    double next_normal() {
        double u1 = 1.0 - next_uniform();  // (0,1], keeps log finite
        double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // Integer in [0,n).
    uint64_t next_below(uint64_t n) { return n ? next_u64() % n : 0; }

    uint64_t seed() const { return seed_; }

    // Independent sub-stream seed, e.g. one per sample or per epoch.
    static uint64_t derive(uint64_t seed, uint64_t stream) {
        return splitmix64_mix(seed ^ splitmix64_mix(stream + 0x9E3779B97F4A7C15ull));
    }

private:
    uint64_t seed_;
    uint64_t counter_ = 0;
};

// Fisher-Yates shuffle driven by Rng, deterministic per seed.
template <class Vec>
void shuffle(Vec& v, Rng& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.next_below(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace cqa
