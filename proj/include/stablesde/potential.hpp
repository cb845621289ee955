#pragma once

#include "stablesde/measure.hpp"
#include "stablesde/stable.hpp"

#include <functional>
#include <vector>

namespace stablesde {

struct NonContractionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// transition density p(t,0,z) = (1/pi) int_0^inf e^{-t xi^alpha} cos(xi z) dxi
double stable_heat_kernel(const StableParams& p, double t, double z);

// d/dz p(t,0,z)
double stable_heat_kernel_dz(const StableParams& p, double t, double z);

// lambda-potential density u_lambda(x) = (1/pi) int_0^inf cos(xi x)/(lambda+xi^alpha) dxi
double u_lambda(const StableParams& p, double lambda, double x);

// closed form at the origin: lambda^{1/alpha-1}/(alpha sin(pi/alpha))
double u_lambda_zero(const StableParams& p, double lambda);

// d/dx u_lambda(x) = -(1/pi) int_0^inf xi sin(xi x)/(lambda+xi^alpha) dxi
double u_lambda_prime(const StableParams& p, double lambda, double x);

// renormalized potential v(x) = c2(alpha)|x|^{alpha-1} and its derivative,
// with v'(0) = 0 by convention
double renormalized_potential_v(const StableParams& p, double x);
double v_prime(const StableParams& p, double x);
double v_second(const StableParams& p, double x);

// U_lambda nu(x) = int u_lambda(x-y) nu(dy) and its x-derivative
double potential_of_measure(const StableParams& p, double lambda,
                            const SignedMeasure& nu, double x);
double potential_of_measure_dx(const StableParams& p, double lambda,
                               const SignedMeasure& nu, double x);

// contraction constant R(lambda,nu) = C1*(M_nu^alpha(lambda^{-delta})
//                                        + |nu|(R)*lambda^{-2+delta(2+alpha)})
struct ContractionEstimate {
    bool divergent = false;
    double value = 0.0;
    double modulus_printed = 0.0;    // M at eta = alpha, as printed
    double modulus_alternate = 0.0;  // M at eta = alpha-1, flagged variant
};

ContractionEstimate kato_contraction(const StableParams& p,
                                     const SignedMeasure& nu, double lambda,
                                     double delta, double C1);

// partial sum of W_lambda^mu nu = sum_k U_lambda (N_mu U_lambda)^k nu on a grid
struct PotentialSeries {
    std::vector<double> x_grid;
    std::vector<double> values;        // partial sum through k = K
    std::vector<double> deriv_values;  // term-wise derivative sum
    std::vector<double> term_sups;     // sup|term_k| per k
    double ratio = 0.0;                // measured geometric ratio
    double tail_bound = 0.0;
    bool contracted = false;
};

PotentialSeries potential_operator_series(const StableParams& p,
                                          const SignedMeasure& mu,
                                          const SignedMeasure& nu, double lambda,
                                          int K, std::vector<double> x_grid,
                                          int density_nodes = 64);

// w_lambda^mu(x,y) = sum_k (u_lambda * (du_lambda mu)^{*k})(x,y): the
// series evaluated with nu = delta_y
double w_kernel(const StableParams& p, const SignedMeasure& mu, double lambda,
                int K, double x, double y, int density_nodes = 64);

// parametrix series p^mu = p + sum_k p (*) (dp mu)^{(*)k} on a (t,x,y) lattice
struct KernelGrid {
    std::vector<double> t_nodes;
    std::vector<double> x_nodes;
    std::vector<double> y_nodes;
    std::vector<double> values;  // [it][ix][iy] row-major
    int series_depth = 0;
    double tail_ratio = 0.0;
    bool converged = false;
    std::vector<double> term_sups;

    double& at(std::size_t it, std::size_t ix, std::size_t iy) {
        return values[(it * x_nodes.size() + ix) * y_nodes.size() + iy];
    }
    double at(std::size_t it, std::size_t ix, std::size_t iy) const {
        return values[(it * x_nodes.size() + ix) * y_nodes.size() + iy];
    }
};

struct ParametrixSpec {
    std::vector<double> t_nodes;
    std::vector<double> x_nodes;
    std::vector<double> y_nodes;
    int time_cells = 24;  // graded s-mesh cells per half
};

KernelGrid parametrix_density(const StableParams& p, const SignedMeasure& mu,
                              const ParametrixSpec& spec, int K);

// x -> int_0^inf sin(xi) xi / (lambda|x|^alpha + xi^alpha) dxi
double bounded_oscillatory_map(const StableParams& p, double lambda, double x);

}  // namespace stablesde
