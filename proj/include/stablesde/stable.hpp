#pragma once

#include "stablesde/rng.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace stablesde {

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// c1(a) = a / (2*Gamma(1-a)*cos(a*pi/2)), positive on (1,2)
double levy_constant(double alpha);

// Symmetric alpha-stable process, alpha in (1,2).
// Levy measure c1(alpha)|x|^{-1-alpha}dx, exponent Psi(xi) = |xi|^alpha.
struct StableParams {
    double alpha;
    double c1;  // Levy-measure constant c1(alpha)
    double c2;  // renormalized-potential constant (2*pi*c1(alpha-1))^{-1}

    explicit StableParams(double a);
};

// total Levy mass beyond eps: 2*c1*eps^{-alpha}/alpha
double levy_tail_mass(const StableParams& p, double eps);

// variance of the compensated small-jump part: int_{|r|<=eps} r^2 pi~(dr)
double small_jump_variance(const StableParams& p, double eps);

// One draw with characteristic function exp(-dt*|xi|^alpha), by the
// Chambers-Mallows-Stuck polar construction.
double sample_stable_increment(const StableParams& p, double dt, Rng& rng);

enum class SmallJumpMode { drop, gaussian_surrogate };

// Cadlag path on a time grid.  Retained jumps (|r| > eps_jump) are recorded
// explicitly: node_index points at the grid node carrying the post-jump
// value, so the pre-jump value is values[node_index] - size.
struct JumpPath {
    struct Jump {
        double time;
        double size;
        std::size_t node_index;
    };
    std::vector<double> times;
    std::vector<double> values;
    std::vector<Jump> jumps;
    std::vector<double> drift_record;  // A_t, continuous across jumps
    double eps_jump = 0.0;
    SmallJumpMode small_jump_mode = SmallJumpMode::gaussian_surrogate;
};

// Pure stable path: exponential inter-arrival clocks at rate
// levy_tail_mass(eps_jump), magnitudes by inverse CDF of the truncated
// power law, small jumps per mode. drift_record stays identically zero.
JumpPath simulate_levy_path(const StableParams& p, double T, double dt,
                            double eps_jump, SmallJumpMode mode,
                            std::uint64_t seed, std::uint64_t path_index = 0);

}  // namespace stablesde
