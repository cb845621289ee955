#include "stablesde/sharpness.hpp"

#include "stablesde/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace stablesde {

namespace {

void check_window(double alpha, double zeta) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw DomainError("sharpness: alpha outside (1,2)");
    if (!(zeta > alpha - 1.0 && zeta < alpha / 2.0))
        throw DomainError("sharpness: zeta outside (alpha-1, alpha/2)");
}

// int_0^1 w^{-p} (1-w)^{-q} h(w) dw for p, q < 1 and bounded h, split at
// 1/2 with the endpoint-exponent substitutions w = u^{1/(1-p)} on the left
// and 1-w = v^{1/(1-q)} on the right, which absorb the power weights exactly
double beta_like(double p, double q, const std::function<double(double)>& h) {
    const double ap = 1.0 - p, aq = 1.0 - q;
    const auto left = [&](double u) {
        const double w = std::pow(u, 1.0 / ap);
        return std::pow(1.0 - w, -q) * h(w) / ap;
    };
    const auto right = [&](double v) {
        const double w = 1.0 - std::pow(v, 1.0 / aq);
        return std::pow(w, -p) * h(w) / aq;
    };
    return quad::integrate_singular_endpoints(left, 0.0, std::pow(0.5, ap),
                                              1e-12) +
           quad::integrate_singular_endpoints(right, 0.0, std::pow(0.5, aq),
                                              1e-12);
}

const auto unit_h = [](double) { return 1.0; };

}  // namespace

double sharpness_integral(double alpha, double zeta) {
    check_window(alpha, zeta);
    // right tail int_1^inf (u-1)^{a-2} u^{-z} du, mapped by u -> 1/w
    const double t1 = beta_like(alpha - zeta, 2.0 - alpha, unit_h);
    // left half int_{-inf}^0 = int_0^inf (1+v)^{a-2} v^{-z} dv, split at 1,
    // tail again by v -> 1/w
    const auto smooth = [=](double w) { return std::pow(1.0 + w, alpha - 2.0); };
    const double t2 =
        beta_like(zeta, 0.0, smooth) + beta_like(alpha - zeta, 0.0, smooth);
    const double t3 = beta_like(zeta, 2.0 - alpha, unit_h);
    return t1 + t2 - t3;
}

double sharpness_integral_positive_form(double alpha, double zeta) {
    check_window(alpha, zeta);
    const double first =
        beta_like(alpha - zeta, 2.0 - alpha,
                  [=](double u) { return 1.0 - std::pow(u, alpha - 2.0 * zeta); });
    const double second = beta_like(alpha - zeta, zeta, unit_h);
    return first + second;
}

SharpnessParams::SharpnessParams(double a)
    : SharpnessParams(a, ((a - 1.0) + a / 2.0) / 2.0) {}

SharpnessParams::SharpnessParams(double a, double z) : alpha(a), zeta(z) {
    check_window(alpha, zeta);
    const StableParams p(alpha);
    c_tilde = (alpha - 1.0) * p.c2;
    I = sharpness_integral(alpha, zeta);
    if (!(I > 0.0) || !std::isfinite(I))
        throw DomainError("sharpness: defining integral not positive finite");
    C_alpha = 1.0 / (c_tilde * I);
}

ScalingReport scaling_constant_hat_c(double alpha, double zeta,
                                     const std::vector<double>& y_samples) {
    check_window(alpha, zeta);
    ScalingReport rep;
    rep.y_samples = y_samples;
    for (double y_raw : y_samples) {
        if (y_raw == 0.0) throw DomainError("hat_c: y must be nonzero");
        const double y = std::fabs(y_raw);  // F(-y) = F(y) by z -> -z
        const auto g = [=](double z) {
            return (std::pow(std::fabs(y - z), alpha - 1.0) -
                    std::pow(std::fabs(z), alpha - 1.0)) *
                   std::pow(std::fabs(z), zeta - alpha);
        };
        const double Z = std::max(2.0 * y, 2.0);
        double F = quad::integrate_singular_endpoints(g, 0.0, y);
        F += quad::integrate_singular_endpoints(g, -y, 0.0);
        F += quad::integrate(g, y, Z);
        F += quad::integrate(g, -Z, -y);
        // paired tails |z| > Z mapped by z -> 1/w; the leading odd parts
        // cancel, the remainder is O(w^{1-zeta})
        const auto tail = [=](double w) {
            const double z = 1.0 / w;
            return (g(z) + g(-z)) / (w * w);
        };
        F += quad::integrate_singular_endpoints(tail, 0.0, 1.0 / Z);
        rep.c_hat.push_back(F / std::pow(y, zeta));
    }
    double mean = 0.0;
    for (double c : rep.c_hat) mean += c;
    mean /= static_cast<double>(rep.c_hat.size());
    rep.mean = mean;
    for (double c : rep.c_hat)
        rep.spread = std::max(rep.spread, std::fabs(c - mean) / std::fabs(mean));
    return rep;
}

SignedMeasure truncated_sharpness_measure(const SharpnessParams& sp) {
    SignedMeasure mu;
    const double s = sp.alpha - 1.0;
    mu.powers.push_back({-sp.C_alpha, 0.0, s, 0.0, 1.0});
    mu.powers.push_back({sp.C_alpha, 0.0, s, -1.0, 0.0});
    return mu;
}

NonexistenceReport nonexistence_fixture(const SharpnessParams& sp,
                                        const SolverConfig& cfg,
                                        const std::vector<int>& levels) {
    if (levels.size() < 2)
        throw DomainError("nonexistence_fixture: need at least two levels");
    NonexistenceReport rep{sp, {}, {}, 0.0, 0.0, false};

    const StableParams p(sp.alpha);
    const SignedMeasure mu = truncated_sharpness_measure(sp);

    SolverConfig fixture_cfg = cfg;
    fixture_cfg.x0 = 0.0;  // start on the singularity
    rep.fixture = drift_cauchy_report(p, fixture_cfg, mu, levels);

    // control: smooth compactly supported drift of comparable mass
    SignedMeasure control;
    SignedMeasure::TablePiece tp;
    const int n = 81;
    const double mass = total_variation(mu);
    for (int i = 0; i < n; ++i) {
        const double x = -1.0 + 2.0 * i / (n - 1.0);
        tp.xs.push_back(x);
        tp.ys.push_back(mass * mollifier_bump(x));
    }
    control.tables.push_back(tp);
    rep.control = drift_cauchy_report(p, cfg, control, levels);

    rep.fixture_floor = rep.fixture.pair_distances.back();
    rep.control_floor = rep.control.pair_distances.back();
    rep.fixture_stalled =
        !rep.fixture.decaying || rep.fixture_floor > 2.0 * rep.control_floor;
    return rep;
}

}  // namespace stablesde
