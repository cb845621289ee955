#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stablesde/measure.hpp"
#include "stablesde/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace stablesde;

TEST_CASE("total variation closed forms") {
    CHECK(total_variation(SignedMeasure::lebesgue(-1.0, 1.0)) == doctest::Approx(2.0));
    CHECK(total_variation(SignedMeasure::dirac(0.3, -2.0)) == doctest::Approx(2.0));
    // |x|^{-1/2} on [-1,1]: mass 2 per side
    SignedMeasure nu;
    nu.powers.push_back({1.0, 0.0, 0.5, -1.0, 1.0});
    CHECK(total_variation(nu) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("Lebesgue modulus is 2 r^eta / eta") {
    auto leb = SignedMeasure::lebesgue(-1.0, 1.0);
    for (double eta : {0.3, 0.7, 1.0})
        for (double r : {0.05, 0.2}) {
            auto m = kato_modulus(leb, eta, r);
            CHECK_FALSE(m.divergent);
            CHECK(m.value == doctest::Approx(2.0 * std::pow(r, eta) / eta).epsilon(1e-6));
        }
}

TEST_CASE("an atom makes the modulus divergent below eta = 1") {
    auto m = kato_modulus(SignedMeasure::dirac(0.0), 0.5, 0.1);
    CHECK(m.divergent);
    // at eta = 1 the kernel is flat and the atom contributes its weight
    auto flat = kato_modulus(SignedMeasure::dirac(0.0, 3.0), 1.0, 0.1);
    CHECK_FALSE(flat.divergent);
    CHECK(flat.value == doctest::Approx(3.0));
}

TEST_CASE("power piece: modulus diverges iff eta <= s") {
    SignedMeasure nu;
    nu.powers.push_back({1.0, 0.0, 0.6, -1.0, 1.0});
    CHECK(kato_modulus(nu, 0.5, 0.1).divergent);
    CHECK(kato_modulus(nu, 0.6, 0.1).divergent);
    auto ok = kato_modulus(nu, 0.8, 0.1);
    CHECK_FALSE(ok.divergent);
    // centered at the singularity: int_{-r}^{r}|y|^{eta-1-s}dy
    const double eta = 0.8, s = 0.6, r = 0.1;
    CHECK(ok.value == doctest::Approx(2.0 * std::pow(r, eta - s) / (eta - s)).epsilon(1e-5));
}

TEST_CASE("is_kato verdicts follow the eta > s rule") {
    SignedMeasure nu;
    nu.powers.push_back({1.0, 0.0, 0.5, -1.0, 1.0});
    std::vector<double> sched{0.2, 0.1, 0.05, 0.02, 0.01};
    // the modulus at the final r is 2 r^{eta-s}/(eta-s); pass means the
    // schedule drove the modulus down to that scale without divergence
    const double tol = 1.2 * 2.0 * std::pow(sched.back(), 0.2) / 0.2;
    CHECK(is_kato(nu, 0.7, sched, tol).pass);
    CHECK_FALSE(is_kato(nu, 0.5, sched, tol).pass);
    CHECK_FALSE(is_kato(nu, 0.3, sched, tol).pass);
}

TEST_CASE("mollified dirac is the scaled bump") {
    auto f = mollify(SignedMeasure::dirac(0.0), 3);
    CHECK(f(0.0) == doctest::Approx(8.0 * mollifier_bump(0.0)).epsilon(1e-12));
    CHECK(f(0.2) == doctest::Approx(8.0 * mollifier_bump(8.0 * 0.2)).epsilon(1e-12));
    CHECK(f(0.3) == 0.0);  // outside the scaled support
    // unit mass is preserved
    CHECK(quad::integrate([&](double x) { return f(x); }, -0.2, 0.2) ==
          doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("heat-semigroup diagnostics") {
    // kernel (2 pi t)^{-1/2} e^{-d^2/(4t)} applied to Lebesgue integrates
    // to sqrt(2) for every t, so the sup of t^{s/2} * sqrt(2) sits at t = 1
    auto leb = SignedMeasure::lebesgue(-50.0, 50.0);
    CHECK(besov_heat_norm(leb, 0.5, {0.01, 0.1, 1.0}) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    // the time kernel (2 pi tau)^{-1/2} e^{-d^2/(2 tau)} has unit spatial
    // mass, so against Lebesgue N(t) = int_0^t tau^{eta/2-1} dtau
    const double eta = 0.5, t = 1.0;
    const double oracle = 2.0 * std::pow(t, eta / 2.0) / eta;
    CHECK(kato_heat_modulus(leb, eta, t) == doctest::Approx(oracle).epsilon(1e-4));
}

TEST_CASE("json round trip") {
    SignedMeasure nu;
    nu.atoms.push_back({0.5, -1.5});
    nu.powers.push_back({2.0, 0.0, 0.4, -1.0, 1.0});
    nu.tables.push_back({{-1.0, 0.0, 1.0}, {0.0, 2.0, 0.0}});
    const char* path = "measure_roundtrip.json";
    {
        std::ofstream out(path);
        out << nu.to_json();
    }
    auto back = SignedMeasure::from_json_file(path);
    std::remove(path);
    REQUIRE(back.atoms.size() == 1);
    CHECK(back.atoms[0].w == -1.5);
    REQUIRE(back.powers.size() == 1);
    CHECK(back.powers[0].s == 0.4);
    REQUIRE(back.tables.size() == 1);
    CHECK(back.density(0.0) == doctest::Approx(nu.density(0.0)));
    CHECK(total_variation(back) == doctest::Approx(total_variation(nu)));
}

TEST_CASE("scaling a measure scales everything linearly") {
    SignedMeasure nu = SignedMeasure::lebesgue(-1.0, 1.0);
    nu.atoms.push_back({0.0, 1.0});
    auto half = nu.scaled(0.5);
    CHECK(total_variation(half) == doctest::Approx(0.5 * total_variation(nu)));
    CHECK(half.density(0.3) == doctest::Approx(0.5 * nu.density(0.3)));
}
