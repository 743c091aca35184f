#pragma once
// Seeded random number streams.
//
// All randomness in the library flows through Rng so that every output is
// reproducible from a recorded 64-bit seed.  The normal and exponential
// samplers are implemented on top of the raw mt19937_64 bit stream (which
// the C++ standard pins exactly) instead of std::normal_distribution,
// whose algorithm is implementation-defined.  This makes recorded seeds
// portable across standard libraries.

#include <cmath>
#include <cstdint>
#include <random>

namespace driftlab {

// SplitMix64 step; used for seed derivation only.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from a base seed and up to three
// stream identifiers (e.g. ladder index, seed index, stage tag).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = base;
    std::uint64_t out = splitmix64(s);
    s ^= a * 0xd1342543de82ef95ULL + 1;
    out ^= splitmix64(s);
    s ^= b * 0xaf251af3b0f025b5ULL + 1;
    out ^= splitmix64(s);
    s ^= c * 0x9e3779b97f4a7c15ULL + 1;
    out ^= splitmix64(s);
    return out;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as a log() argument.
    double uniform01_open0() {
        return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; pairs are cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01_open0();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Standard exponential.
    double exponential() { return -std::log(uniform01_open0()); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection-free modulo bias is < 2^-53 for the n used here (grid and
        // seed counts); plain scaling keeps the stream consumption fixed.
        return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n)) % n;
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace driftlab
