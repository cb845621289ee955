#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace stablesde::quad {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive Gauss-Kronrod on a finite interval.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10, int max_depth = 15);

// Semi-infinite integral of a decaying, non-oscillatory integrand.
double integrate_half_line(const std::function<double(double)>& f, double a,
                           double tol = 1e-10);

// integral of f(y)*|y-c|^{-s} over [a,b], s in [0,1); the power-law factor
// is absorbed by a substitution when c touches [a,b].
double integrate_power_singular(const std::function<double(double)>& f,
                                double c, double s, double a, double b,
                                double tol = 1e-10);

// tanh-sinh rule: tolerates integrable blow-up at either endpoint
double integrate_singular_endpoints(const std::function<double(double)>& f,
                                    double a, double b, double tol = 1e-9);

// (1/pi) * int_0^inf f(xi) cos(xi*x) dxi, f decaying; Ooura-Mori double
// exponential rule for x != 0, plain half-line quadrature at x = 0.
double fourier_cos_half(const std::function<double(double)>& f, double x,
                        double tol = 1e-9);

// (1/pi) * int_0^inf f(xi) sin(xi*x) dxi, x > 0.
double fourier_sin_half(const std::function<double(double)>& f, double x,
                        double tol = 1e-9);

// Mesh on [a,b] graded toward both endpoints with n cells per half.
std::vector<double> graded_mesh(double a, double b, int n_per_half,
                                double power = 3.0);

}  // namespace stablesde::quad
