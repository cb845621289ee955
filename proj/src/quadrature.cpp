#include "stablesde/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <numbers>

namespace stablesde::quad {

namespace bq = boost::math::quadrature;

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
    if (a == b) return 0.0;
    double err = 0.0;
    double val = bq::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth,
                                                          tol, &err);
    if (!std::isfinite(val))
        throw QuadratureError("gauss_kronrod returned non-finite value");
    return val;
}

double integrate_half_line(const std::function<double(double)>& f, double a,
                           double tol) {
    bq::exp_sinh<double> integrator;
    double err = 0.0, l1 = 0.0;
    double val = integrator.integrate([&](double t) { return f(a + t); }, tol,
                                      &err, &l1);
    if (!std::isfinite(val))
        throw QuadratureError("exp_sinh returned non-finite value");
    return val;
}

double integrate_power_singular(const std::function<double(double)>& f,
                                double c, double s, double a, double b,
                                double tol) {
    if (a >= b) return 0.0;
    if (s == 0.0)
        return integrate(f, a, b, tol);
    if (c <= a || c >= b) {
        // singularity at (or outside) an endpoint: tanh_sinh handles the
        // endpoint blow-up without a substitution.  Near the singular
        // endpoint the distance |y - c| is recomputed from the abscissa's
        // endpoint offset to avoid cancellation, and evaluations that
        // overflow within machine distance of c contribute nothing.
        static thread_local bq::tanh_sinh<double> integrator;
        auto g = [&](double y, double yc) {
            double d = std::abs(y - c);
            if (c == a && y - a < b - y)
                d = std::abs(yc);
            else if (c == b && b - y <= y - a)
                d = std::abs(yc);
            const double v = f(y) * std::pow(d, -s);
            return std::isfinite(v) ? v : 0.0;
        };
        double val = integrator.integrate(g, a, b, tol);
        if (!std::isfinite(val))
            throw QuadratureError("tanh_sinh returned non-finite value");
        return val;
    }
    // interior singularity: split at c, substitute y = c +- u^{1/(1-s)}
    const double q = 1.0 - s;
    auto one_side = [&](double len, double sign) {
        if (len <= 0.0) return 0.0;
        auto g = [&](double u) {
            const double r = std::pow(u, 1.0 / q);
            return f(c + sign * r) * std::pow(r, -s) * std::pow(u, 1.0 / q - 1.0) / q;
        };
        return integrate(g, 0.0, std::pow(len, q), tol);
    };
    return one_side(c - a, -1.0) + one_side(b - c, +1.0);
}

double integrate_singular_endpoints(const std::function<double(double)>& f,
                                    double a, double b, double tol) {
    if (a >= b) return 0.0;
    static thread_local bq::tanh_sinh<double> integrator;
    // Integrable endpoint singularities may overflow within machine
    // distance of an endpoint; such evaluations contribute nothing.
    auto g = [&](double y) {
        const double v = f(y);
        return std::isfinite(v) ? v : 0.0;
    };
    double val = integrator.integrate(g, a, b, tol);
    if (!std::isfinite(val))
        throw QuadratureError("tanh_sinh returned non-finite value");
    return val;
}

double fourier_cos_half(const std::function<double(double)>& f, double x,
                        double tol) {
    const double ax = std::abs(x);
    if (ax < 1e-12) return integrate_half_line(f, 0.0, tol) / std::numbers::pi;
    static thread_local bq::ooura_fourier_cos<double> cos_int(1e-12, 12);
    auto [val, rel] = cos_int.integrate(f, ax);
    if (!std::isfinite(val))
        throw QuadratureError("ooura_fourier_cos returned non-finite value");
    return val / std::numbers::pi;
}

double fourier_sin_half(const std::function<double(double)>& f, double x,
                        double tol) {
    if (x <= 0.0) throw QuadratureError("fourier_sin_half requires x > 0");
    static thread_local bq::ooura_fourier_sin<double> sin_int(1e-12, 12);
    auto [val, rel] = sin_int.integrate(f, x);
    if (!std::isfinite(val))
        throw QuadratureError("ooura_fourier_sin returned non-finite value");
    return val / std::numbers::pi;
}

std::vector<double> graded_mesh(double a, double b, int n_per_half,
                                double power) {
    std::vector<double> nodes;
    nodes.reserve(2 * n_per_half + 1);
    const double mid = 0.5 * (a + b);
    for (int i = 0; i <= n_per_half; ++i) {
        const double u = std::pow(double(i) / n_per_half, power);
        nodes.push_back(a + (mid - a) * u);
    }
    for (int i = n_per_half - 1; i >= 0; --i) {
        const double u = std::pow(double(i) / n_per_half, power);
        nodes.push_back(b - (b - mid) * u);
    }
    return nodes;
}

}  // namespace stablesde::quad
