#pragma once

#include <cstdint>
#include <cmath>
#include <limits>
#include <numbers>

namespace stablesde {

// Counter-based generator: each draw hashes a counter that advances by a
// fixed increment, and the starting counter is itself a hash of (seed,
// stream).  Hashing the stream id spreads the per-stream counter ranges
// pseudorandomly over the full 64-bit space; a linear offset would make
// stream k a shifted copy of stream 0 and correlate whole ensembles.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : state_(mix(seed + 0x9e3779b97f4a7c15ULL) ^
                 mix(stream + 0x632be59bd9b4e019ULL)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<std::uint64_t>::max();
    }

    result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform on (0,1), never exactly 0 or 1
    double uniform() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform();
    }

    double exponential(double rate = 1.0) noexcept {
        return -std::log(uniform()) / rate;
    }

    // Box-Muller, no caching so the draw count per event is fixed
    double normal() noexcept {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    static std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace stablesde
