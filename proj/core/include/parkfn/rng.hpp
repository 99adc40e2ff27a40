#pragma once

#include <cstdint>
#include <random>

namespace parkfn {

// Seeded random stream with portable draws on top of std::mt19937_64.
//
// Bounded draws are done by rejection sampling on raw 64-bit outputs rather
// than std::uniform_int_distribution, whose output sequence is
// implementation-defined. Given a seed, every draw here is bit-reproducible
// on any conforming platform.
//
// Parallel Monte Carlo derives one independent stream per replicate from
// (base seed, replicate index), so results do not depend on how replicates
// are partitioned across workers.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    static RandomStream derived(std::uint64_t base_seed, std::uint64_t index) {
        return RandomStream(mix(base_seed + 0x9E3779B97F4A7C15ull * (index + 1)));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform integer in [0, bound), bound >= 1. Unbiased.
    std::uint64_t uniform_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
        std::uint64_t r;
        do {
            r = engine_();
        } while (r < threshold);
        return r % bound;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform_real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    // splitmix64 finalizer, decorrelates consecutive seeds.
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace parkfn
