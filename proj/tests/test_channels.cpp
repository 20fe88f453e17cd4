#include "doctest.h"

#include "efimov/channels.hpp"
#include "efimov/numerics.hpp"
#include "efimov/universal.hpp"

#include <cmath>
#include <complex>
#include <random>

using namespace efimov;

TEST_SUITE("channels") {

TEST_CASE("identical bosons at unitarity") {
  const auto e = boson_exponents(3, 0.0);
  REQUIRE(e.size() == 3);
  CHECK(e[0].efimov());
  CHECK(e[0].s_abs() == doctest::Approx(1.00624).epsilon(1e-5));
  CHECK(e[0].scaling_factor() == doctest::Approx(22.694).epsilon(1e-4));
  CHECK(e[0].s_abs() == doctest::Approx(boson_s0).epsilon(1e-12));
  for (std::size_t i = 1; i < e.size(); ++i) {
    CHECK(!e[i].efimov());
    CHECK(e[i].s_squared > e[i - 1].s_squared);
  }
}

TEST_CASE("imaginary root satisfies the complex condition") {
  const double sigma = boson_exponents(1, 0.0).front().s_abs();
  const std::complex<double> s(0.0, sigma);
  const auto residual = -s * std::cos(s * M_PI / 2.0) + 8.0 / std::sqrt(3.0) * std::sin(s * M_PI / 6.0);
  CHECK(std::abs(residual) < 1e-10);
}

TEST_CASE("boson channel limits") {
  // a > 0, R >> a: the lowest channel follows the dimer, s^2 -> -(R/a)^2; oracle is the
  // condition at s = i sigma divided by cosh(sigma pi / 2)
  for (double x : {10.0, 20.0}) {
    const double t = boson_exponents(1, x).front().s_squared;
    const double sigma = find_root(
        [x](double g) {
          return g - 8.0 / std::sqrt(3.0) * std::sinh(g * M_PI / 6) / std::cosh(g * M_PI / 2) - x * std::tanh(g * M_PI / 2);
        },
        x - 1.0, x + 1.0);
    CHECK(t == doctest::Approx(-sigma * sigma).epsilon(1e-10));
    CHECK(t == doctest::Approx(-x * x).epsilon(1e-4));
  }
  // a < 0, R >> |a|: free hyperspherical values 2, 6, 8 (4 is absent for bosons)
  const auto free = boson_exponents(3, -1e5);
  REQUIRE(free.size() == 3);
  CHECK(free[0].s_abs() == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(free[1].s_abs() == doctest::Approx(6.0).epsilon(1e-3));
  CHECK(free[2].s_abs() == doctest::Approx(8.0).epsilon(1e-3));
}

TEST_CASE("distinguishable particles by number of resonant pairs") {
  const auto three = distinguishable_exponents({{Pair::p12, 0.0}, {Pair::p23, 0.0}, {Pair::p31, 0.0}}, 1);
  CHECK(three.front().s_abs() == doctest::Approx(1.00624).epsilon(1e-5));
  const auto two = distinguishable_exponents({{Pair::p12, 0.0}, {Pair::p23, 0.0}}, 1);
  CHECK(two.front().efimov());
  CHECK(two.front().s_abs() == doctest::Approx(0.4137).epsilon(1e-3));
  CHECK(two.front().scaling_factor() == doctest::Approx(1986.1).epsilon(2.5e-4));
  const auto one = distinguishable_exponents({{Pair::p12, 0.0}}, 3);
  for (const auto& e : one) {
    CHECK(!e.efimov());
    CHECK(std::abs(std::cos(e.s_abs() * M_PI / 2.0)) < 1e-8);
  }
}

TEST_CASE("two plus one systems") {
  const auto equal = two_plus_one_exponent(1.0, Statistics::bosons, TwoPlusOnePattern::all_pairs, 0);
  CHECK(std::abs(equal.s_abs() - boson_exponents(1, 0.0).front().s_abs()) < 1e-10);

  const auto light = two_plus_one_exponent(1e-4, Statistics::bosons, TwoPlusOnePattern::all_pairs, 0);
  CHECK(light.scaling_factor() == doctest::Approx(15.74).epsilon(2e-3));

  const auto crit = two_plus_one_exponent(13.6069657, Statistics::fermions, TwoPlusOnePattern::heavy_light_only, 1);
  CHECK(std::abs(crit.s_squared) < 1e-5);
}

TEST_CASE("fermion l=1 exponent changes sign once through the critical ratio") {
  double previous = two_plus_one_exponent(12.0, Statistics::fermions, TwoPlusOnePattern::heavy_light_only, 1).s_squared;
  int sign_changes = 0;
  for (double m = 12.1; m <= 15.0; m += 0.1) {
    const double t = two_plus_one_exponent(m, Statistics::fermions, TwoPlusOnePattern::heavy_light_only, 1).s_squared;
    CHECK(t < previous);
    if ((t < 0) != (previous < 0)) ++sign_changes;
    previous = t;
  }
  CHECK(sign_changes == 1);
}

TEST_CASE("critical mass ratios") {
  CHECK(critical_mass_ratio(1) == doctest::Approx(13.6069657).epsilon(1e-7));
  CHECK(critical_mass_ratio(2) == doctest::Approx(38.630).epsilon(2.5e-4));
  CHECK(critical_mass_ratio(3) == doctest::Approx(75.994).epsilon(1.3e-4));
  CHECK(critical_mass_ratio(4) == doctest::Approx(125.765).epsilon(8e-5));
}

TEST_CASE("triton channels at unitarity") {
  const auto t = triton_channel_exponents();
  CHECK(t.f_channel.s_abs() == doctest::Approx(1.00624).epsilon(1e-5));
  CHECK(t.f_channel.scaling_factor() == doctest::Approx(22.7).epsilon(1e-3));
  CHECK(!t.phi_channel.efimov());
  CHECK(t.phi_channel.s_squared > 0.0);
  const double s = t.phi_channel.s_abs();
  CHECK(std::abs(-s * std::cos(s * M_PI / 2) - 4.0 / std::sqrt(3.0) * std::sin(s * M_PI / 6)) < 1e-10);
  // regression constant
  CHECK(t.phi_channel.s_squared == doctest::Approx(4.6925176521).epsilon(1e-9));
}

TEST_CASE("channel table matches direct solves") {
  const ChannelTable table(ThreeBodySystem::identical_bosons());
  CHECK(table.unitarity_value() == doctest::Approx(-boson_s0 * boson_s0).epsilon(1e-10));
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 20; ++i) {
    const double x = std::sinh(u(rng));
    const double direct = lowest_exponent_squared(table.system(), x);
    CHECK(table(x) == doctest::Approx(direct).epsilon(1e-7).scale(1.0));
  }
}

TEST_CASE("Jacobi coordinates") {
  const double d = 1.7;
  const std::array<Vec3, 3> tri = {Vec3{0, 0, 0}, Vec3{d, 0, 0}, Vec3{d / 2, d * std::sqrt(3.0) / 2, 0}};
  CHECK(jacobi_from_positions(tri, Pair::p12).hyperradius() == doctest::Approx(std::sqrt(2.0) * d));

  JacobiCoordinates mid;
  mid.r = {2.0, 0.0, 0.0};
  mid.rho = {0.0, 0.0, 0.0};
  const auto x = positions_from_jacobi(mid);
  double r23 = 0.0;
  for (int k = 0; k < 3; ++k) r23 += (x[2][k] - x[1][k]) * (x[2][k] - x[1][k]);
  CHECK(std::sqrt(r23) == doctest::Approx(1.0));

  std::mt19937 rng(4);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    std::array<Vec3, 3> p;
    double sum = 0.0;
    for (auto& v : p)
      for (double& c : v) c = g(rng);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        for (int k = 0; k < 3; ++k) sum += (p[i][k] - p[j][k]) * (p[i][k] - p[j][k]);
    const double R = std::sqrt(2.0 / 3.0 * sum);
    const auto c12 = jacobi_from_positions(p, Pair::p12);
    for (Pair target : {Pair::p12, Pair::p23, Pair::p31}) {
      const auto c = jacobi_transform(c12, target);
      CHECK(std::abs(c.hyperradius() - R) < 1e-12 * R);
      const auto back = jacobi_transform(c, Pair::p12);
      for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(back.r[k] - c12.r[k]) < 1e-14 * R);
        CHECK(std::abs(back.rho[k] - c12.rho[k]) < 1e-14 * R);
      }
    }
  }
}

TEST_CASE("system validation") {
  CHECK_NOTHROW(ThreeBodySystem::identical_bosons().validate());
  ThreeBodySystem bad = ThreeBodySystem::identical_bosons();
  bad.mass_ratio = -1.0;
  CHECK_THROWS(bad.validate());
}

}  // TEST_SUITE
