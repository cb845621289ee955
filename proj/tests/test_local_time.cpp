#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stablesde/local_time.hpp"
#include "stablesde/potential.hpp"
#include "stablesde/quadrature.hpp"

#include <cmath>

using namespace stablesde;

namespace {

JumpPath flat_path(double x0, double T, double dt, double eps) {
    JumpPath p;
    p.eps_jump = eps;
    // no gaussian component, so no Ito correction term applies
    p.small_jump_mode = SmallJumpMode::drop;
    for (double t = 0.0; t < T + dt / 2.0; t += dt) {
        p.times.push_back(t);
        p.values.push_back(x0);
        p.drift_record.push_back(0.0);
    }
    return p;
}

// H(a) = int_a^inf (|1+rho|^{a-1} + |1-rho|^{a-1} - 2) rho^{-1-alpha} drho,
// straight quadrature, independent of the table used inside
double compensator_oracle(const StableParams& p, double y, double eps) {
    const double a = eps / std::fabs(y);
    auto f = [&](double rho) {
        return (std::pow(std::fabs(1.0 + rho), p.alpha - 1.0) +
                std::pow(std::fabs(1.0 - rho), p.alpha - 1.0) - 2.0) *
               std::pow(rho, -1.0 - p.alpha);
    };
    double H = quad::integrate_singular_endpoints(f, a, 1.0) +
               quad::integrate_singular_endpoints(f, 1.0, 2.0) +
               quad::integrate_half_line(f, 2.0);
    return p.c1 * p.c2 * H / std::fabs(y);
}

}  // namespace

TEST_CASE("occupation density of a flat path is the kernel value times t") {
    StableParams p(1.5);
    (void)p;
    auto path = flat_path(0.0, 1.0, 1e-3, 0.1);
    const double bw = 0.2;
    auto ell = occupation_density(path, {0.0, 0.1, 0.5}, 1.0, bw);
    CHECK(ell[0] == doctest::Approx(0.75 / bw).epsilon(1e-2));
    CHECK(ell[1] == doctest::Approx(0.75 / bw * (1.0 - 0.25)).epsilon(1e-2));
    CHECK(ell[2] == 0.0);  // outside the kernel support
}

TEST_CASE("occupation measure integrates to elapsed time") {
    StableParams p(1.5);
    auto path = simulate_levy_path(p, 1.0, 1e-3, 0.05,
                                   SmallJumpMode::gaussian_surrogate, 13, 0);
    double lo = 1e9, hi = -1e9;
    for (double v : path.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double bw = 0.05;
    const int n = 801;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i)
        xs[i] = (lo - 1.0) + (hi - lo + 2.0) * i / (n - 1.0);
    auto ell = occupation_density(path, xs, 1.0, bw);
    double mass = 0.0;
    for (int i = 0; i + 1 < n; ++i)
        mass += 0.5 * (ell[i] + ell[i + 1]) * (xs[i + 1] - xs[i]);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("flat-path Tanaka terms isolate the jump compensator") {
    StableParams p(1.5);
    auto path = flat_path(0.5, 1.0, 1e-3, 0.1);
    const double x = 1.2;  // y = x0 - x = -0.7 held fixed
    auto res = tanaka_local_time(p, path, x);
    // no retained jumps: N_t = -integral of the compensator, so
    // gamma_t = +compensator_t = c1 c2 |y|^{-1} H(eps/|y|) * t
    const double oracle = compensator_oracle(p, 0.5 - x, path.eps_jump);
    CHECK(res.compensator.back() == doctest::Approx(oracle).epsilon(2e-3));
    CHECK(res.gamma.back() == doctest::Approx(oracle).epsilon(2e-3));
    CHECK(res.martingale.back() == doctest::Approx(-oracle).epsilon(2e-3));
}

TEST_CASE("compensator at the path level uses the 2 c1 c2/eps limit") {
    StableParams p(1.5);
    auto path = flat_path(0.5, 1.0, 1e-3, 0.1);
    auto res = tanaka_local_time(p, path, 0.5);  // y = 0 throughout
    CHECK(res.compensator.back() ==
          doctest::Approx(2.0 * p.c1 * p.c2 / path.eps_jump).epsilon(1e-10));
}

TEST_CASE("translation covariance of the Tanaka functional") {
    StableParams p(1.5);
    auto path = simulate_levy_path(p, 0.5, 1e-3, 0.05,
                                   SmallJumpMode::gaussian_surrogate, 21, 0);
    const double c = 2.75, x = 0.3;
    auto base = tanaka_local_time(p, path, x);
    JumpPath shifted = path;
    for (auto& v : shifted.values) v += c;
    auto moved = tanaka_local_time(p, shifted, x + c);
    REQUIRE(base.gamma.size() == moved.gamma.size());
    for (std::size_t i = 0; i < base.gamma.size(); ++i) {
        CHECK(base.gamma[i] == doctest::Approx(moved.gamma[i]).epsilon(1e-9));
        CHECK(base.martingale[i] == doctest::Approx(moved.martingale[i]).epsilon(1e-9));
    }
}

TEST_CASE("field rows agree with single-point evaluation") {
    StableParams p(1.5);
    auto path = simulate_levy_path(p, 0.5, 1e-3, 0.05,
                                   SmallJumpMode::gaussian_surrogate, 33, 1);
    std::vector<double> xs{-0.5, 0.0, 0.5};
    auto field = local_time_field(p, path, xs, {0.25, 0.5}, 0.1);
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        auto single = tanaka_local_time(p, path, xs[ix]);
        // locate the checkpoint index on the path grid
        std::size_t i25 = 0;
        while (path.times[i25] < 0.25) ++i25;
        CHECK(field.at(field.gamma, 0, ix) ==
              doctest::Approx(single.gamma[i25]).epsilon(1e-10));
        CHECK(field.at(field.gamma, 1, ix) ==
              doctest::Approx(single.gamma.back()).epsilon(1e-10));
    }
}

TEST_CASE("drift functional is exact on grid atoms") {
    StableParams p(1.5);
    auto path = simulate_levy_path(p, 0.5, 1e-3, 0.05,
                                   SmallJumpMode::gaussian_surrogate, 55, 2);
    std::vector<double> xs;
    for (int i = 0; i <= 40; ++i) xs.push_back(-2.0 + i * 0.1);
    auto field = local_time_field(p, path, xs, {0.5}, 0.1);
    auto mu = SignedMeasure::dirac(0.0, 3.0);  // x = 0 sits on the grid
    const std::size_t ix = 20;
    CHECK(drift_from_local_time(p, field, mu, 0.5) ==
          doctest::Approx(3.0 * field.at(field.gamma, 0, ix)).epsilon(1e-12));
}

TEST_CASE("Boylan admissibility series") {
    std::vector<double> grid{0.0, 0.1, 0.2};
    std::vector<std::vector<double>> flat(3, std::vector<double>(3, 1.0));
    auto g = [](double x) { return std::pow(x, 0.25); };
    auto rep = boylan_check(grid, flat, g, 0.5);
    CHECK(rep.admissible);
    CHECK(rep.displacement_pass);  // constant kernel: zero displacement
    auto zero = boylan_check(grid, flat, [](double) { return 0.0; }, 0.5);
    CHECK_FALSE(zero.displacement_pass);
}
