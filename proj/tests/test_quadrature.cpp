#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stablesde/quadrature.hpp"

#include <cmath>

using namespace stablesde;

TEST_CASE("finite interval handles polynomials exactly") {
    auto f = [](double x) { return 3.0 * x * x - 2.0 * x + 1.0; };
    // antiderivative x^3 - x^2 + x
    CHECK(quad::integrate(f, -1.0, 2.0) == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("half line") {
    CHECK(quad::integrate_half_line([](double x) { return std::exp(-x); }, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-10));
    // int_1^inf x^{-2} = 1
    CHECK(quad::integrate_half_line([](double x) { return 1.0 / (x * x); }, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("power-law factor at an interior point") {
    // int_{-1}^{1} |x|^{-1/2} dx = 4
    auto one = [](double) { return 1.0; };
    CHECK(quad::integrate_power_singular(one, 0.0, 0.5, -1.0, 1.0) ==
          doctest::Approx(4.0).epsilon(1e-9));
    // smooth factor: int_0^1 x |x-1|^{-1/2} dx = 4/3
    auto id = [](double x) { return x; };
    CHECK(quad::integrate_power_singular(id, 1.0, 0.5, 0.0, 1.0) ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("tanh-sinh tolerates endpoint blow-up") {
    // beta(1/2,1/2) = pi; the 1-x cancellation near the right endpoint
    // caps the attainable accuracy for a blind integrand, hence 1e-7
    auto f = [](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); };
    CHECK(quad::integrate_singular_endpoints(f, 0.0, 1.0) ==
          doctest::Approx(M_PI).epsilon(1e-7));
}

TEST_CASE("fourier transforms of exp(-xi)") {
    auto f = [](double xi) { return std::exp(-xi); };
    for (double x : {0.0, 0.3, 1.0, 4.0}) {
        CHECK(quad::fourier_cos_half(f, x) ==
              doctest::Approx(1.0 / (M_PI * (1.0 + x * x))).epsilon(1e-8));
    }
    for (double x : {0.3, 1.0, 4.0}) {
        CHECK(quad::fourier_sin_half(f, x) ==
              doctest::Approx(x / (M_PI * (1.0 + x * x))).epsilon(1e-8));
    }
}

TEST_CASE("graded mesh is strictly increasing and hits the endpoints") {
    auto mesh = quad::graded_mesh(-2.0, 3.0, 16);
    CHECK(mesh.front() == -2.0);
    CHECK(mesh.back() == 3.0);
    for (std::size_t i = 1; i < mesh.size(); ++i) CHECK(mesh[i] > mesh[i - 1]);
}
