#pragma once

#include "stablesde/measure.hpp"
#include "stablesde/stable.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace stablesde {

struct SolverConfig {
    double x0 = 0.0;
    double T = 1.0;
    double dt = 1e-3;
    int n_mollify = 4;  // drift level n (scale 2^{-n})
    double eps_jump = 1e-2;
    int n_paths = 1;
    std::uint64_t seed = 1;
    SmallJumpMode small_jump_mode = SmallJumpMode::gaussian_surrogate;
};

// Pre-drawn driving noise (jumps + gaussian increments) so the same
// realization can be re-integrated at every mollification level.
struct DrivingNoise {
    std::vector<double> times;   // merged grid including jump times
    std::vector<double> gauss;   // gaussian surrogate increment per step
    std::vector<JumpPath::Jump> jumps;
    double eps_jump = 0.0;
    SmallJumpMode mode = SmallJumpMode::gaussian_surrogate;
};

DrivingNoise draw_noise(const StableParams& p, const SolverConfig& cfg,
                        std::uint64_t path_index);

// Euler scheme for dX = mu_n(X) dt + dL with exact retained jumps;
// drift_record carries A^n_t = sum mu_n(X_s) ds
JumpPath integrate_mollified(const StableParams& p, const DrivingNoise& noise,
                             const std::function<double(double)>& drift,
                             double x0);

std::vector<JumpPath> simulate_mollified(const StableParams& p,
                                         const SolverConfig& cfg,
                                         const SignedMeasure& mu);

// effective dt after the stiffness guard (halved until sup|mu_n|*dt <= 0.1
// along a pilot path)
double guarded_dt(const StableParams& p, const SolverConfig& cfg,
                  const std::function<double(double)>& drift);

struct CauchyReport {
    std::vector<int> levels;
    // median over paths of sup_t |A^n - A^m| for consecutive level pairs
    std::vector<double> pair_distances;
    // max over levels of the median of int |mu_n|(X_s) ds
    double sup_abs_drift = 0.0;
    bool decaying = false;
};

CauchyReport drift_cauchy_report(const StableParams& p, const SolverConfig& cfg,
                                 const SignedMeasure& mu,
                                 const std::vector<int>& levels);

}  // namespace stablesde
