#pragma once

#include <cstdint>

namespace morsehom {

/// SplitMix64. Used everywhere a reproducible stream is needed so that
/// reports are byte-identical across runs and platforms for a fixed seed.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double next_double(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

private:
    uint64_t state_;
};

/// Derive an independent stream deterministically from (seed, stream index).
inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
    SplitMix64 rng(seed ^ (0x517cc1b727220a95ULL * (stream + 1)));
    return rng.next();
}

}  // namespace morsehom
