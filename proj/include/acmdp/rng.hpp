#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace acmdp {

/**
 * SplitMix64 (Steele, Lea & Flood 2014): a counter-based 64-bit generator.
 * Output i is mix(seed + (i+1) * 0x9E3779B97F4A7C15). Bit-identical on every
 * platform. Trajectory t of a run seeded with s uses seed s ^ t.
 */
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Index drawn from a probability vector.
    std::size_t categorical(std::span<const double> probs) {
        const double u = uniform();
        double acc = 0.0;
        std::size_t last = 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] <= 0.0) continue;
            acc += probs[i];
            last = i;
            if (u < acc) return i;
        }
        return last;
    }

private:
    std::uint64_t state_;
};

}  // namespace acmdp
