#pragma once

#include "stablesde/measure.hpp"
#include "stablesde/stable.hpp"

#include <functional>
#include <vector>

namespace stablesde {

// kernel-smoothed occupation density l_t^x = sum_steps K_bw(X_s - x) ds,
// Epanechnikov kernel so the estimate vanishes exactly off the path range
std::vector<double> occupation_density(const JumpPath& path,
                                       const std::vector<double>& x_nodes,
                                       double t, double bandwidth);

struct TanakaOptions {
    double h_min = 1e-4;  // clip |X_s - x| in the v' and v'' integrands
};

struct TanakaResult {
    std::vector<double> gamma;        // on path.times
    std::vector<double> martingale;   // N_s^x
    std::vector<double> compensator;  // running retained-jump compensator
    int clipped_steps = 0;
    double clipped_mass = 0.0;  // |dA| mass hit by the v' clip
    bool domain_suspect = false;
};

// gamma_s^x = v(X_s-x) - v(x0-x) - int v'(X-x) dA - N_s^x with the retained
// jump martingale compensated through the symmetrized second difference of v
TanakaResult tanaka_local_time(const StableParams& p, const JumpPath& path,
                               double x, const TanakaOptions& opt = {});

struct LocalTimeField {
    std::vector<double> x_nodes;
    std::vector<double> checkpoints;
    std::vector<double> gamma;       // [checkpoint][x]
    std::vector<double> ell;         // [checkpoint][x]
    std::vector<double> martingale;  // [checkpoint][x]
    std::vector<bool> domain_flags;  // per x
    double at(const std::vector<double>& f, std::size_t it, std::size_t ix) const {
        return f[it * x_nodes.size() + ix];
    }
};

LocalTimeField local_time_field(const StableParams& p, const JumpPath& path,
                                const std::vector<double>& x_nodes,
                                const std::vector<double>& checkpoints,
                                double bandwidth,
                                const TanakaOptions& opt = {});

// int gamma_t^x mu(dx): exact on atoms, singular quadrature on density
// pieces with gamma interpolated from the field's x grid
double drift_from_local_time(const StableParams& p, const LocalTimeField& field,
                             const SignedMeasure& mu, double t);

struct BoylanReport {
    bool displacement_pass = false;
    bool admissible = false;
    double worst_gap = 0.0;      // max of |w(x,y)-w(x,x)| - g(|x-y|)
    double series_value = 0.0;   // partial sums of sum n g(2^-n)^{1/2}
    std::size_t n_pairs = 0;
};

// kernel: W[i][j] = w_lambda^mu(x_i, x_j) on grid; checks the displacement
// inequalities for |x_i-x_j| < eps0 and the admissibility series for g
BoylanReport boylan_check(const std::vector<double>& grid,
                          const std::vector<std::vector<double>>& kernel,
                          const std::function<double(double)>& g, double eps0);

}  // namespace stablesde
