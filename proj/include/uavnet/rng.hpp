#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace uavnet {

// Seeded random source. Draws are built directly on the 64-bit engine output
// so sequences do not depend on the standard library's distribution classes.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). n must be positive.
    std::uint64_t index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    // Unit-mean exponential variate.
    double exponential() { return -std::log1p(-uniform()); }

    // Independent child stream; used to give subsystems their own sequences.
    Rng fork(std::uint64_t salt) {
        return Rng(split_mix(engine_() ^ split_mix(salt)));
    }

    static std::uint64_t split_mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

private:
    std::mt19937_64 engine_;
};

// Deterministic seed derivation for named sub-streams of one run seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return Rng::split_mix(seed ^ Rng::split_mix(stream + 0x5eed));
}

} // namespace uavnet
