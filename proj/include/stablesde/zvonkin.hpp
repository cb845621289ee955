#pragma once

#include "stablesde/measure.hpp"
#include "stablesde/potential.hpp"
#include "stablesde/stable.hpp"

#include <array>
#include <vector>

namespace stablesde {

// Tabulated solution w of lambda*w - Delta_alpha w - mu w' = mu together
// with the transform phi(x) = w(x) + x.  Outside the grid w continues
// linearly with the outermost gradient.
class ZvonkinTransform {
public:
    ZvonkinTransform() = default;
    ZvonkinTransform(std::vector<double> grid, std::vector<double> w,
                     std::vector<double> w_prime, double lambda);

    double w(double x) const;
    double w_prime(double x) const;
    double phi(double x) const { return w(x) + x; }
    double phi_inverse(double z) const;  // monotone bracketing to 1e-12

    double eps0() const { return eps0_; }
    double lambda() const { return lambda_; }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& w_values() const { return w_; }
    const std::vector<double>& w_prime_values() const { return wp_; }

    bool identity() const { return grid_.empty(); }  // mu = 0 case

private:
    std::vector<double> grid_, w_, wp_;
    double lambda_ = 0.0;
    double eps0_ = 0.0;
};

struct ResolventOptions {
    int series_depth = 8;
    int grid_points = 401;
    int density_nodes = 64;
    double pad_lengths = 5.0;  // window padding in stable standard lengths
};

// w = W_lambda^mu mu via the potential-operator series, tabulated
ZvonkinTransform solve_resolvent(const StableParams& p, const SignedMeasure& mu,
                                 double lambda,
                                 const ResolventOptions& opt = {});

// residual of the mollified resolvent equation
//   lambda*w_n - Delta_alpha w_n - mu_n w_n' - mu_n
// at x, with the fractional Laplacian evaluated by second-difference
// singular quadrature on the tabulated w
double resolvent_residual(const StableParams& p, const SignedMeasure& mu,
                          const ZvonkinTransform& zt, int mollify_level,
                          double x);

struct TransformedCoefficients {
    double b = 0.0;
    double sigma = 0.0;      // at the supplied r
    double g = 0.0;          // phi^{-1}(x+r) - phi^{-1}(x)
    double m = 0.0;          // |r/g|^{1+alpha} (w'(phi^{-1}(x)+r) + 1)
    double a = 0.0;          // drift coefficient with both correction integrals
};

TransformedCoefficients transformed_coefficients(const StableParams& p,
                                                 const ZvonkinTransform& zt,
                                                 double x, double r);

// a(x) alone (the two r-integrals evaluated by quadrature)
double transformed_drift_a(const StableParams& p, const ZvonkinTransform& zt,
                           double x);

struct HolderAuditReport {
    double fitted_exponent = 0.0;
    double fitted_intercept = 0.0;  // log-intercept
    bool pass = false;
    std::size_t n_pairs = 0;
};

// log-log regression of |m(x,r)-m(y,r)| + |a(x)-a(y)| against |x-y|
HolderAuditReport holder_audit(const StableParams& p,
                               const ZvonkinTransform& zt, double delta,
                               const std::vector<std::array<double, 3>>& pairs);

}  // namespace stablesde
