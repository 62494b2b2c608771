#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace psybench {

// Deterministic, platform-independent RNG. std::mt19937 plus the standard
// distributions would be reproducible per-platform only (distribution
// algorithms are implementation-defined), and reports must be byte-identical
// everywhere, so the few draws we need are implemented here.
//
// Core generator is splitmix64; substreams are derived by hashing a stream
// key into the seed, which keeps parallel per-user / per-tree generation
// independent of scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Derive an independent substream, e.g. Rng(seed).fork(tree_index).
    Rng fork(std::uint64_t key) const { return Rng(fork_seed(key)); }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        return mix(z);
    }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t next_below(std::uint64_t n) {
        // Rejection sampling keeps the draw exactly uniform.
        std::uint64_t threshold = (0ULL - n) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform double in [0, 1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform double in [lo, hi).
    double next_double(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    bool next_bool(double p_true) { return next_double() < p_true; }

    // Standard normal via Box-Muller (single value; the pair's twin is dropped
    // so the draw count stays predictable).
    double next_gaussian() {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // Exponential with the given mean.
    double next_exponential(double mean) {
        double u = next_double();
        if (u < 1e-300) u = 1e-300;
        return -mean * std::log(u);
    }

    // In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            using std::swap;
            swap(v[i - 1], v[j]);
        }
    }

    // Seed of the substream keyed by `key`; handy when a plain integer seed
    // must be recorded or passed across an API boundary.
    std::uint64_t fork_seed(std::uint64_t key) const {
        return mix(state_ + 0x9e3779b97f4a7c15ULL * (key + 1));
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

// Derives a deterministic child seed, e.g. for per-fold or per-tree streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key) {
    return Rng(seed).fork_seed(key);
}

}  // namespace psybench
