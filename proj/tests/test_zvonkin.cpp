#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stablesde/zvonkin.hpp"

#include <cmath>

using namespace stablesde;

namespace {
SignedMeasure small_smooth_mu() {
    // density 0.3 * bump profile on [-1,1], tabulated
    SignedMeasure mu;
    SignedMeasure::TablePiece tp;
    for (int i = 0; i <= 40; ++i) {
        const double x = -1.0 + i / 20.0;
        tp.xs.push_back(x);
        tp.ys.push_back(0.3 * mollifier_bump(x));
    }
    mu.tables.push_back(tp);
    return mu;
}
}  // namespace

TEST_CASE("identity transform for the zero measure") {
    StableParams p(1.5);
    auto zt = solve_resolvent(p, SignedMeasure{}, 5.0);
    CHECK(zt.identity());
    CHECK(zt.eps0() == 0.0);
    CHECK(zt.phi(1.7) == 1.7);
    CHECK(zt.phi_inverse(-0.3) == -0.3);
    auto tc = transformed_coefficients(p, zt, 0.5, 0.7);
    CHECK(tc.g == doctest::Approx(0.7));
    CHECK(tc.m == doctest::Approx(1.0));
    CHECK(transformed_drift_a(p, zt, 0.5) == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("resolvent solution contracts and inverts cleanly") {
    StableParams p(1.5);
    auto mu = small_smooth_mu();
    ResolventOptions opt;
    opt.grid_points = 201;
    auto zt = solve_resolvent(p, mu, 8.0, opt);
    CHECK(zt.eps0() < 1.0);
    for (double x : {-3.0, -0.7, 0.0, 0.4, 2.5}) {
        CHECK(zt.phi_inverse(zt.phi(x)) == doctest::Approx(x).epsilon(1e-9));
        CHECK(zt.phi(zt.phi_inverse(x)) == doctest::Approx(x).epsilon(1e-9));
    }
    // phi is strictly increasing
    double prev = zt.phi(-4.0);
    for (double x = -3.9; x < 4.0; x += 0.1) {
        CHECK(zt.phi(x) > prev);
        prev = zt.phi(x);
    }
}

TEST_CASE("raising lambda shrinks eps0") {
    StableParams p(1.5);
    auto mu = small_smooth_mu();
    ResolventOptions opt;
    opt.grid_points = 201;
    const double lo = solve_resolvent(p, mu, 6.0, opt).eps0();
    const double hi = solve_resolvent(p, mu, 30.0, opt).eps0();
    CHECK(hi < lo);
}

TEST_CASE("m stays inside the Lipschitz sandwich") {
    StableParams p(1.5);
    auto mu = small_smooth_mu();
    ResolventOptions opt;
    opt.grid_points = 201;
    auto zt = solve_resolvent(p, mu, 8.0, opt);
    const double e = zt.eps0();
    const double lo = std::pow(1.0 - e, 2.0 + p.alpha);
    const double hi = std::pow(1.0 + e, 2.0 + p.alpha);
    for (double x = -2.0; x <= 2.0; x += 0.25)
        for (double r : {-1.5, -0.4, -0.01, 0.01, 0.4, 1.5}) {
            const double m = transformed_coefficients(p, zt, x, r).m;
            CHECK(m >= lo * (1.0 - 1e-9));
            CHECK(m <= hi * (1.0 + 1e-9));
        }
}

TEST_CASE("resolvent residual is small relative to the data") {
    StableParams p(1.5);
    auto mu = small_smooth_mu();
    ResolventOptions opt;
    opt.grid_points = 201;
    auto zt = solve_resolvent(p, mu, 8.0, opt);
    double sup_mu = 0.0;
    for (double x = -1.0; x <= 1.0; x += 0.05)
        sup_mu = std::max(sup_mu, std::fabs(mu.density(x)));
    for (double x : {-0.6, 0.0, 0.5})
        CHECK(std::fabs(resolvent_residual(p, mu, zt, 6, x)) < 0.08 * sup_mu);
}

TEST_CASE("Holder audit passes on the smooth fixture") {
    StableParams p(1.5);
    auto zt = solve_resolvent(p, small_smooth_mu(), 8.0);
    std::vector<std::array<double, 3>> pairs;
    for (double x : {-1.0, -0.3, 0.2, 0.9})
        for (double h : {0.4, 0.2, 0.1, 0.05, 0.025})
            pairs.push_back({x, x + h, 0.5});
    auto rep = holder_audit(p, zt, 0.3, pairs);
    CHECK(rep.pass);
    CHECK(rep.n_pairs == pairs.size());
}
