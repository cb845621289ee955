#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stablesde/potential.hpp"
#include "stablesde/quadrature.hpp"

#include <cmath>

using namespace stablesde;

TEST_CASE("heat kernel peak value is Gamma(1+1/alpha)/pi") {
    for (double a : {1.2, 1.5, 1.8}) {
        StableParams p(a);
        CHECK(stable_heat_kernel(p, 1.0, 0.0) ==
              doctest::Approx(std::tgamma(1.0 + 1.0 / a) / M_PI).epsilon(1e-9));
    }
}

TEST_CASE("heat kernel mass and self-similarity") {
    StableParams p(1.5);
    double mass = quad::integrate([&](double z) { return stable_heat_kernel(p, 1.0, z); },
                                  -30.0, 30.0, 1e-11);
    // tail beyond the window from the series expansion of the density,
    // p(z) = (1/pi) sum_k (-1)^{k+1} Gamma(k a + 1)/k! sin(k pi a/2) z^{-ka-1};
    // the k = 1 coefficient is c1, the k = 2 term is still ~2e-5 here
    const double a = p.alpha;
    mass += 2.0 * p.c1 * std::pow(30.0, -a) / a;
    mass += -2.0 / M_PI * std::tgamma(2.0 * a + 1.0) / 2.0 * std::sin(M_PI * a) *
            std::pow(30.0, -2.0 * a) / (2.0 * a);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-5));
    for (double t : {0.3, 2.0})
        for (double z : {0.0, 0.7, 3.0}) {
            const double s = std::pow(t, -1.0 / p.alpha);
            CHECK(stable_heat_kernel(p, t, z) ==
                  doctest::Approx(s * stable_heat_kernel(p, 1.0, s * z)).epsilon(1e-8));
        }
}

TEST_CASE("heat kernel z-derivative matches a central difference") {
    StableParams p(1.5);
    const double h = 1e-5;
    for (double z : {0.0, 0.4, 1.5}) {
        const double fd = (stable_heat_kernel(p, 1.0, z + h) -
                           stable_heat_kernel(p, 1.0, z - h)) /
                          (2.0 * h);
        CHECK(stable_heat_kernel_dz(p, 1.0, z) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("lambda-potential: origin closed form and scaling") {
    for (double a : {1.2, 1.5, 1.8}) {
        StableParams p(a);
        for (double lam : {0.5, 1.0, 5.0}) {
            CHECK(u_lambda(p, lam, 0.0) ==
                  doctest::Approx(u_lambda_zero(p, lam)).epsilon(1e-8));
            // u_lam(x) = lam^{1/a-1} u_1(lam^{1/a} x)
            const double x = 0.8;
            CHECK(u_lambda(p, lam, x) ==
                  doctest::Approx(std::pow(lam, 1.0 / a - 1.0) *
                                  u_lambda(p, 1.0, std::pow(lam, 1.0 / a) * x))
                      .epsilon(1e-8));
        }
    }
}

TEST_CASE("u_lambda_prime matches a finite difference and is odd") {
    StableParams p(1.5);
    const double h = 1e-5;
    for (double x : {0.3, 1.0, 2.5}) {
        const double fd = (u_lambda(p, 1.0, x + h) - u_lambda(p, 1.0, x - h)) / (2.0 * h);
        CHECK(u_lambda_prime(p, 1.0, x) == doctest::Approx(fd).epsilon(1e-4));
        CHECK(u_lambda_prime(p, 1.0, -x) ==
              doctest::Approx(-u_lambda_prime(p, 1.0, x)).epsilon(1e-10));
    }
}

TEST_CASE("renormalized potential scaling and origin conventions") {
    StableParams p(1.5);
    for (double x : {0.2, 1.0, 4.0}) {
        CHECK(renormalized_potential_v(p, 2.0 * x) ==
              doctest::Approx(std::pow(2.0, p.alpha - 1.0) * renormalized_potential_v(p, x))
                  .epsilon(1e-14));
        CHECK(v_prime(p, -x) == -v_prime(p, x));
    }
    CHECK(v_prime(p, 0.0) == 0.0);
    CHECK(renormalized_potential_v(p, 1.0) == doctest::Approx(p.c2));
}

TEST_CASE("v is the small-lambda limit of u_lam(0) - u_lam(x)") {
    StableParams p(1.5);
    const double x = 1.3;
    const double diff = u_lambda(p, 1e-6, 0.0) - u_lambda(p, 1e-6, x);
    CHECK(diff == doctest::Approx(renormalized_potential_v(p, x)).epsilon(1e-3));
}

TEST_CASE("potential of a point mass reduces to u_lambda") {
    StableParams p(1.5);
    auto nu = SignedMeasure::dirac(0.4, 2.0);
    CHECK(potential_of_measure(p, 1.0, nu, 1.0) ==
          doctest::Approx(2.0 * u_lambda(p, 1.0, 0.6)).epsilon(1e-9));
    CHECK(potential_of_measure_dx(p, 1.0, nu, 1.0) ==
          doctest::Approx(2.0 * u_lambda_prime(p, 1.0, 0.6)).epsilon(1e-7));
}

TEST_CASE("series with zero perturbation is the plain potential") {
    StableParams p(1.5);
    auto nu = SignedMeasure::lebesgue(-0.5, 0.5);
    // the k = 0 term discretizes nu by a midpoint rule whose error at the
    // u_lambda cusp is O(h^{3/2}); 4096 nodes puts that below 1e-5
    auto s = potential_operator_series(p, SignedMeasure{}, nu, 1.0, 4,
                                       {-1.0, 0.0, 1.0}, 4096);
    CHECK(s.contracted);
    for (std::size_t i = 0; i < s.x_grid.size(); ++i)
        CHECK(s.values[i] ==
              doctest::Approx(potential_of_measure(p, 1.0, nu, s.x_grid[i])).epsilon(1e-5));
}

TEST_CASE("series terms decay geometrically for a small perturbation") {
    StableParams p(1.5);
    auto mu = SignedMeasure::lebesgue(-0.5, 0.5, 0.3);
    auto s = potential_operator_series(p, mu, mu, 2.0, 5, {-1.0, -0.3, 0.0, 0.3, 1.0});
    CHECK(s.contracted);
    CHECK(s.ratio < 1.0);
    for (std::size_t k = 1; k < s.term_sups.size(); ++k)
        CHECK(s.term_sups[k] < s.term_sups[k - 1]);
}

TEST_CASE("contraction estimate flags non-Kato inputs") {
    StableParams p(1.5);
    // an atom has a finite modulus at eta = alpha > 1 but blows up at the
    // alternate index eta = alpha - 1 < 1
    auto est = kato_contraction(p, SignedMeasure::dirac(0.0), 10.0, 0.25, 1.0);
    CHECK_FALSE(est.divergent);
    CHECK(std::isinf(est.modulus_alternate));
    auto ok = kato_contraction(p, SignedMeasure::lebesgue(-1.0, 1.0, 0.1), 50.0, 0.25, 1.0);
    CHECK_FALSE(ok.divergent);
    CHECK(ok.value > 0.0);
    CHECK(std::isfinite(ok.modulus_alternate));
}

TEST_CASE("parametrix with zero drift returns the stable kernel") {
    StableParams p(1.5);
    ParametrixSpec spec;
    spec.t_nodes = {0.5, 1.0};
    spec.x_nodes = {-1.0, 0.0, 1.0};
    spec.y_nodes = {-1.0, 0.0, 1.0};
    auto grid = parametrix_density(p, SignedMeasure{}, spec, 2);
    CHECK(grid.converged);
    for (std::size_t it = 0; it < spec.t_nodes.size(); ++it)
        for (std::size_t ix = 0; ix < spec.x_nodes.size(); ++ix)
            for (std::size_t iy = 0; iy < spec.y_nodes.size(); ++iy)
                CHECK(grid.at(it, ix, iy) ==
                      doctest::Approx(stable_heat_kernel(
                                          p, spec.t_nodes[it],
                                          spec.y_nodes[iy] - spec.x_nodes[ix]))
                          .epsilon(1e-8));
}

TEST_CASE("oscillatory map closed form at the origin") {
    StableParams p(1.5);
    const double oracle = std::tgamma(2.0 - p.alpha) *
                          std::sin(M_PI * (2.0 - p.alpha) / 2.0);
    CHECK(bounded_oscillatory_map(p, 1.0, 0.0) == doctest::Approx(oracle).epsilon(1e-7));
    // bounded on a spread of arguments
    for (double x : {0.01, 0.5, 2.0, 50.0})
        CHECK(std::fabs(bounded_oscillatory_map(p, 1.0, x)) < 10.0);
}
