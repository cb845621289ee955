#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stablesde/measure.hpp"
#include "stablesde/sde.hpp"

#include <cmath>

using namespace stablesde;

TEST_CASE("zero drift reproduces the driving noise path") {
    StableParams p(1.5);
    SolverConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 1e-3;
    cfg.eps_jump = 0.05;
    cfg.seed = 11;
    auto noise = draw_noise(p, cfg, 0);
    auto path = integrate_mollified(p, noise, [](double) { return 0.0; }, 0.0);
    for (double a : path.drift_record) CHECK(a == 0.0);
    // re-integration is deterministic
    auto again = integrate_mollified(p, noise, [](double) { return 0.0; }, 0.0);
    REQUIRE(path.values.size() == again.values.size());
    for (std::size_t i = 0; i < path.values.size(); ++i)
        CHECK(path.values[i] == again.values[i]);
}

TEST_CASE("constant drift accumulates A_t = c t exactly") {
    StableParams p(1.5);
    SolverConfig cfg;
    cfg.T = 2.0;
    cfg.dt = 1e-3;
    cfg.eps_jump = 0.05;
    cfg.seed = 3;
    auto noise = draw_noise(p, cfg, 0);
    const double c = -0.7;
    auto path = integrate_mollified(p, noise, [=](double) { return c; }, 1.0);
    CHECK(path.drift_record.back() == doctest::Approx(c * cfg.T).epsilon(1e-10));
    // drift shifts the endpoint by exactly A_T relative to zero drift
    auto base = integrate_mollified(p, noise, [](double) { return 0.0; }, 1.0);
    CHECK(path.values.back() - base.values.back() ==
          doctest::Approx(c * cfg.T).epsilon(1e-8));
}

TEST_CASE("stiffness guard halves dt until the drift step is tame") {
    StableParams p(1.5);
    SolverConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 0.1;
    cfg.eps_jump = 0.1;
    cfg.seed = 5;
    const double big = 500.0;
    const double dt = guarded_dt(p, cfg, [=](double) { return big; });
    CHECK(big * dt <= 0.1 * (1.0 + 1e-12));
    // benign drift leaves dt alone
    CHECK(guarded_dt(p, cfg, [](double) { return 0.1; }) == cfg.dt);
}

TEST_CASE("same seed gives identical ensembles") {
    StableParams p(1.3);
    SolverConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 2e-3;
    cfg.eps_jump = 0.1;
    cfg.n_paths = 3;
    cfg.seed = 77;
    auto mu = SignedMeasure::lebesgue(-1.0, 1.0, 0.2);
    auto a = simulate_mollified(p, cfg, mu);
    auto b = simulate_mollified(p, cfg, mu);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        REQUIRE(a[k].values.size() == b[k].values.size());
        for (std::size_t i = 0; i < a[k].values.size(); ++i)
            CHECK(a[k].values[i] == b[k].values[i]);
    }
    // distinct paths differ
    CHECK(a[0].values.back() != a[1].values.back());
}

TEST_CASE("mollification levels are Cauchy for a smooth drift") {
    StableParams p(1.5);
    SolverConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 1e-3;
    cfg.eps_jump = 0.05;
    cfg.n_paths = 8;
    cfg.seed = 9;
    // a curved density: mollification at level n perturbs it by
    // O(2^{-2n} mu''), so successive level distances shrink ~4x
    SignedMeasure mu;
    SignedMeasure::TablePiece tp;
    for (int i = 0; i <= 40; ++i) {
        const double x = -1.0 + 2.0 * i / 40.0;
        tp.xs.push_back(x);
        tp.ys.push_back(0.5 * mollifier_bump(x));
    }
    mu.tables.push_back(tp);
    auto rep = drift_cauchy_report(p, cfg, mu, {2, 3, 4, 5});
    REQUIRE(rep.pair_distances.size() == 3);
    CHECK(rep.decaying);
    CHECK(rep.pair_distances.back() < rep.pair_distances.front());
}
