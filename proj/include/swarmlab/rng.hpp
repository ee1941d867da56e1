#pragma once

#include <cstdint>
#include <random>

namespace swarmlab {

/**
 * Deterministic random stream used by every stochastic routine.
 *
 * The engine is mt19937_64 exactly as specified by the C++ standard, so the
 * raw 64-bit stream is reproducible in any language with a conforming
 * Mersenne Twister. Doubles are derived from the top 53 bits only; no
 * library distribution object is involved, because those are not pinned
 * across standard library implementations.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    [[nodiscard]] std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), granularity 2^-53.
    [[nodiscard]] double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    [[nodiscard]] double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Uniform in [-half_width, half_width).
    [[nodiscard]] double symmetric(double half_width) {
        return uniform(-half_width, half_width);
    }

    static constexpr const char* name() { return "mt19937_64"; }

private:
    std::mt19937_64 engine_;
};

} // namespace swarmlab
