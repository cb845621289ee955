#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stablesde/sharpness.hpp"

#include <cmath>

using namespace stablesde;

TEST_CASE("defining integral against the beta-function decomposition") {
    // I = B(z-a+1, a-1) + B(1-z, z+1-a) - B(1-z, a-1), each piece a
    // textbook Euler integral of the three raw parts
    auto beta = [](double p, double q) {
        return std::tgamma(p) * std::tgamma(q) / std::tgamma(p + q);
    };
    for (auto [a, z] : std::vector<std::pair<double, double>>{
             {1.5, 0.6}, {1.5, 0.7}, {1.2, 0.25}, {1.8, 0.85}}) {
        const double oracle =
            beta(z - a + 1.0, a - 1.0) + beta(1.0 - z, z + 1.0 - a) - beta(1.0 - z, a - 1.0);
        CHECK(sharpness_integral(a, z) == doctest::Approx(oracle).epsilon(1e-8));
        CHECK(sharpness_integral(a, z) > 0.0);
    }
}

TEST_CASE("raw and positive forms agree") {
    for (auto [a, z] : std::vector<std::pair<double, double>>{
             {1.5, 0.6}, {1.3, 0.4}, {1.7, 0.8}}) {
        CHECK(sharpness_integral(a, z) ==
              doctest::Approx(sharpness_integral_positive_form(a, z)).epsilon(1e-8));
    }
}

TEST_CASE("window guard") {
    CHECK_THROWS_AS(sharpness_integral(1.5, 0.75), DomainError);  // zeta = alpha/2
    CHECK_THROWS_AS(sharpness_integral(1.5, 0.5), DomainError);   // zeta = alpha-1
    CHECK_THROWS_AS(sharpness_integral(1.5, 0.9), DomainError);
    CHECK_THROWS_AS(SharpnessParams(1.5, 0.95), DomainError);
}

TEST_CASE("default zeta is the window midpoint") {
    SharpnessParams sp(1.5);
    CHECK(sp.zeta == doctest::Approx((0.5 + 0.75) / 2.0));
    CHECK(sp.C_alpha == doctest::Approx(1.0 / (sp.c_tilde * sp.I)));
    CHECK(sp.C_alpha > 0.0);
}

TEST_CASE("hat_c is constant in y, even, and homogeneous") {
    auto rep = scaling_constant_hat_c(1.5, 0.6, {0.5, 1.0, 2.0, 5.0});
    CHECK(rep.spread < 0.01);
    CHECK(rep.mean > 0.0);
    auto pm = scaling_constant_hat_c(1.5, 0.6, {1.0, -1.0});
    CHECK(pm.c_hat[0] == doctest::Approx(pm.c_hat[1]).epsilon(1e-12));
    // exact homogeneity F(2y) = 2^zeta F(y): the normalized estimates at
    // y = 1 and y = 2 must coincide to quadrature accuracy
    auto two = scaling_constant_hat_c(1.5, 0.6, {1.0, 2.0});
    CHECK(two.c_hat[1] == doctest::Approx(two.c_hat[0]).epsilon(1e-6));
}

TEST_CASE("truncated measure: mass, antisymmetry, Kato boundary") {
    SharpnessParams sp(1.5);
    auto mu = truncated_sharpness_measure(sp);
    CHECK(total_variation(mu) ==
          doctest::Approx(2.0 * sp.C_alpha / (2.0 - sp.alpha)).epsilon(1e-10));
    for (double x : {0.1, 0.5, 0.9}) {
        CHECK(mu.density(x) < 0.0);
        CHECK(mu.density(-x) == doctest::Approx(-mu.density(x)));
    }
    std::vector<double> sched{0.2, 0.1, 0.05, 0.02, 0.01, 0.005};
    // just above the boundary: Kato. The modulus at the final r scales as
    // 2 C_alpha r^{0.05}/0.05, so pass means decay down to that level
    const double tol =
        1.2 * 2.0 * sp.C_alpha * std::pow(sched.back(), 0.05) / 0.05;
    CHECK(is_kato(mu, sp.alpha - 1.0 + 0.05, sched, tol).pass);
    auto at_boundary = kato_modulus(mu, sp.alpha - 1.0, 0.1);
    CHECK(at_boundary.divergent);
}
