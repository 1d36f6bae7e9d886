#pragma once

#include <cstdint>
#include <random>

namespace optint {

// Mixes a base seed with a stream id (SplitMix64 finalizer). Used to derive
// independent streams for row blocks, DAG instances and sweep stages.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Seedable generator on top of mt19937_64. All variates are produced by
// hand-written transforms of the raw 64-bit output so that results do not
// depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; one variate per call.
    double normal();

    // Uniform integer in [0, n). n must be positive.
    std::uint64_t index(std::uint64_t n);

    bool coin() { return (engine_() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace optint
