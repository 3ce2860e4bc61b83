#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace lanegp {

// Small deterministic generator with a portable output sequence. The
// evaluation pipeline promises byte-identical reruns for a fixed seed, so we
// avoid std:: distributions (their draw sequences are implementation
// defined).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    // Box-Muller, two fresh draws per call (no spare caching, so call order
    // alone determines the stream).
    double normal() {
        const double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

private:
    std::uint64_t state_;
};

// Stable seed derivation for independent sub-streams (per maneuver, per
// prefix) so results do not depend on worker scheduling.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    SplitMix64 rng(a ^ (0x9E3779B97F4A7C15ULL + (b << 1)));
    rng.next();
    return rng.next();
}

}  // namespace lanegp
