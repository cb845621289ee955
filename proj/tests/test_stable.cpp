#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stablesde/stable.hpp"

#include <cmath>
#include <vector>

using namespace stablesde;

TEST_CASE("c1 against a direct gamma-function evaluation") {
    // c1(a) = a / (2 Gamma(1-a) cos(a pi/2)); at a = 1.5,
    // Gamma(-1/2) = -2 sqrt(pi) and cos(3pi/4) = -sqrt(2)/2, so
    // c1 = 1.5 / (2 sqrt(2 pi))
    const double oracle = 1.5 / (2.0 * std::sqrt(2.0 * M_PI));
    CHECK(std::fabs(levy_constant(1.5) - oracle) < 1e-14);
    for (double a : {1.1, 1.3, 1.7, 1.9}) {
        const double direct = a / (2.0 * std::tgamma(1.0 - a) * std::cos(a * M_PI / 2.0));
        CHECK(levy_constant(a) == doctest::Approx(direct).epsilon(1e-13));
        CHECK(levy_constant(a) > 0.0);
    }
}

TEST_CASE("c2 consistency with c1 at the shifted index") {
    for (double a : {1.2, 1.5, 1.8}) {
        StableParams p(a);
        CHECK(p.c2 == doctest::Approx(1.0 / (2.0 * M_PI * levy_constant(a - 1.0)))
                          .epsilon(1e-14));
    }
}

TEST_CASE("tail mass and surrogate variance closed forms") {
    StableParams p(1.5);
    const double eps = 0.05;
    CHECK(levy_tail_mass(p, eps) ==
          doctest::Approx(2.0 * p.c1 * std::pow(eps, -p.alpha) / p.alpha).epsilon(1e-14));
    // halving eps scales the mass by 2^alpha
    CHECK(levy_tail_mass(p, eps / 2.0) / levy_tail_mass(p, eps) ==
          doctest::Approx(std::pow(2.0, p.alpha)).epsilon(1e-13));
    CHECK(small_jump_variance(p, eps) ==
          doctest::Approx(2.0 * p.c1 * std::pow(eps, 2.0 - p.alpha) / (2.0 - p.alpha))
              .epsilon(1e-14));
}

TEST_CASE("parameter domain is enforced") {
    CHECK_THROWS_AS(StableParams(1.0), DomainError);
    CHECK_THROWS_AS(StableParams(2.0), DomainError);
    CHECK_THROWS_AS(levy_constant(1.0), DomainError);
    CHECK_THROWS_AS(levy_constant(2.0), DomainError);
}

TEST_CASE("CMS increments reproduce the characteristic function") {
    StableParams p(1.5);
    Rng rng(20240811, 0);
    const int n = 400000;
    const double dt = 0.7;
    std::vector<double> xs(n);
    for (auto& x : xs) x = sample_stable_increment(p, dt, rng);
    for (double xi : {0.5, 1.0, 2.0}) {
        double re = 0.0;
        for (double x : xs) re += std::cos(xi * x);
        re /= n;
        const double target = std::exp(-dt * std::pow(xi, p.alpha));
        // Var(cos) <= 1/2, so 4 sigma ~ 4/sqrt(2n)
        CHECK(std::fabs(re - target) < 4.0 / std::sqrt(2.0 * n));
    }
}

TEST_CASE("path bookkeeping: jump nodes carry post-jump values") {
    StableParams p(1.5);
    auto path = simulate_levy_path(p, 1.0, 1e-3, 0.05,
                                   SmallJumpMode::gaussian_surrogate, 7, 3);
    REQUIRE(path.times.size() == path.values.size());
    CHECK(path.times.front() == 0.0);
    CHECK(path.times.back() == doctest::Approx(1.0));
    for (std::size_t i = 1; i < path.times.size(); ++i)
        CHECK(path.times[i] > path.times[i - 1]);
    for (const auto& j : path.jumps) {
        CHECK(path.times[j.node_index] == doctest::Approx(j.time));
        CHECK(std::fabs(j.size) > path.eps_jump);
    }
    for (double a : path.drift_record) CHECK(a == 0.0);
}

TEST_CASE("retained jump count matches the exponential clock rate") {
    StableParams p(1.5);
    const double T = 2.0, eps = 0.1;
    const double rate = levy_tail_mass(p, eps);
    double count = 0.0;
    const int reps = 200;
    for (int k = 0; k < reps; ++k) {
        count += simulate_levy_path(p, T, 1e-2, eps, SmallJumpMode::drop, 99, k)
                     .jumps.size();
    }
    const double mean = count / reps;
    const double se = std::sqrt(rate * T / reps);
    CHECK(std::fabs(mean - rate * T) < 5.0 * se);
}

TEST_CASE("streams are deterministic and independent of one another") {
    StableParams p(1.3);
    Rng a(42, 5), b(42, 5), c(42, 6);
    const double xa = sample_stable_increment(p, 1.0, a);
    CHECK(xa == sample_stable_increment(p, 1.0, b));
    CHECK(xa != sample_stable_increment(p, 1.0, c));
}
