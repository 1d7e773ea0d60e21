#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

// Seed discipline: every random stream in the project is derived from the
// master seed through derive_seed(), never by incrementing seeds by hand.
// Per-element kernels (one RNG per particle per step) use the cheap SplitMix64
// engine so that work can be split across threads without changing any draw.

namespace geosteer {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ull; // FNV-1a
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Named substream of a master seed: derive_seed(master, "pf", episode, station).
template <class... Idx>
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, Idx... idx) {
    std::uint64_t h = splitmix64(master ^ hash_tag(tag));
    ((h = splitmix64(h ^ static_cast<std::uint64_t>(idx))), ...);
    return h;
}

// Minimal counter RNG. One instance per particle/step is cheap to construct,
// which is what makes the parallel kernels bit-identical to the serial ones.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n). n must be > 0; modulo bias is irrelevant at
    // the n (< 2^32) this project uses but we reject-sample anyway.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = (*this)();
        } while (x >= limit);
        return x % n;
    }

    // Standard normal via Box-Muller; consumes two uniforms per call (no cache,
    // so the stream position is a pure function of the call count).
    double gauss() {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01(); // log(0) guard, ~never taken
        const double r = std::sqrt(-2.0 * std::log(u1));
        return r * std::cos(2.0 * M_PI * u2);
    }

    double gauss(double mean, double stddev) { return mean + stddev * gauss(); }

private:
    std::uint64_t state_;
};

} // namespace geosteer
