#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace condrank {

/// Seedable generator with a fixed, portable output stream.
///
/// The engine is std::mt19937_64, whose output sequence is fully specified by
/// the C++ standard. The standard distributions are not (their algorithms vary
/// between library vendors), so the conversions to doubles and bounded
/// integers are done here:
///   - uniform():   top 53 bits of one draw, scaled by 2^-53, in [0, 1)
///   - below(n):    rejection sampling on the top bits, unbiased in [0, n)
///   - gaussian():  Box-Muller on two uniform() draws, no caching
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) {
            return 0;
        }
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t draw = engine_();
        while (draw >= limit) {
            draw = engine_();
        }
        return draw % n;
    }

    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace condrank
