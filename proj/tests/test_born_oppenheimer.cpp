#include "doctest.h"

#include "efimov/born_oppenheimer.hpp"
#include "efimov/channels.hpp"

#include <cmath>

using namespace efimov;

TEST_SUITE("born_oppenheimer") {

TEST_CASE("omega constant") {
  const double w = bo::omega_constant();
  CHECK(w == doctest::Approx(0.567143).epsilon(1e-6));
  CHECK(std::abs(w * std::exp(w) - 1.0) < 1e-15);
}

TEST_CASE("bonding orbital limits") {
  const auto k0 = bo::bonding_kappa(1.0, 1e-10);
  REQUIRE(k0);
  CHECK(std::abs(*k0 * 1.0 - bo::omega_constant()) < 1e-6);
  const double a = 2.0;
  const auto kf = bo::bonding_kappa(200.0, 1.0 / a);
  REQUIRE(kf);
  CHECK(*kf * a == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(!bo::bonding_kappa(5.0, -1.0));
}

TEST_CASE("bonding root residual") {
  for (double R : {0.01, 0.3, 1.0, 4.0, 40.0})
    for (double inv_a : {-0.5, 0.0, 0.7}) {
      const auto k = bo::bonding_kappa(R, inv_a);
      if (!k) continue;
      CHECK(std::abs(*k - std::exp(-*k * R) / R - inv_a) < 1e-12 * std::max(1.0, *k));
    }
}

TEST_CASE("bonding energy is negative and increasing for a > 0") {
  double previous = -1e300;
  for (double R = 0.05; R < 30.0; R *= 1.1) {
    const auto e = bo::bonding_energy(R, 0.5);
    REQUIRE(e);
    CHECK(*e < 0.0);
    CHECK(*e > previous);
    previous = *e;
  }
}

TEST_CASE("small-R expansion") {
  const double R = 1e-3;
  const auto e = bo::bonding_energy(R, 1e-7);
  REQUIRE(e);
  const double w = bo::omega_constant();
  CHECK(std::abs(R * R * 2.0 * *e + w * w) < 1e-8);
}

TEST_CASE("effective heavy-heavy potential") {
  for (double R = 0.1; R < 10.0; R *= 1.3) CHECK(*bo::effective_potential(R, 0.3, 0, 5.0) < 0.0);
  // at the critical ratio the unitarity potential is the critical -1/(4 R^2)
  for (double R : {0.5, 2.0}) {
    const double v = *bo::effective_potential(R, 0.0, 1, 13.990296);
    CHECK(R * R * v == doctest::Approx(-0.25).epsilon(1e-5));
  }
  // mass ratio 10: repulsive core and an attractive well
  double vmin = 1e300;
  bool core = false;
  for (double R = 0.05; R < 50.0; R *= 1.05) {
    const double v = *bo::effective_potential(R, 1.0, 1, 10.0);
    vmin = std::min(vmin, v);
    if (R < 0.3 && v > 0.0) core = true;
  }
  CHECK(core);
  CHECK(vmin < 0.0);
}

TEST_CASE("Efimov exponent estimate") {
  CHECK(bo::critical_mass_ratio(1) == doctest::Approx(13.990296).epsilon(1e-7));
  CHECK(bo::s0_estimate(13.990296 * 1.000001, 1).value_or(1.0) < 1e-2);
  CHECK(!bo::s0_estimate(13.99, 1));
  CHECK(bo::critical_mass_ratio(1) / critical_mass_ratio(1) - 1.0 == doctest::Approx(0.0282).epsilon(0.01));
  CHECK(bo::critical_mass_ratio(1) / critical_mass_ratio(1) - 1.0 < 0.03);
  double previous = 0.0;
  CHECK(!bo::s0_estimate(1.0, 0));
  for (double m = 2.0; m < 200.0; m *= 1.2) {
    const double s = bo::s0_estimate(m, 0).value_or(0.0);
    CHECK(s > previous);
    previous = s;
  }
}

TEST_CASE("estimate converges to the exact 2+1 boson curve") {
  double previous = 1e300;
  for (double m : {20.0, 30.0, 50.0, 100.0, 200.0}) {
    const double exact = two_plus_one_exponent(m, Statistics::bosons, TwoPlusOnePattern::heavy_light_only, 0).scaling_factor();
    const double estimate = std::exp(M_PI / *bo::s0_estimate(m, 0));
    const double rel = std::abs(estimate / exact - 1.0);
    CHECK(rel < previous);
    if (m >= 50.0) CHECK(rel < 0.05);
    previous = rel;
  }
}

}  // TEST_SUITE
