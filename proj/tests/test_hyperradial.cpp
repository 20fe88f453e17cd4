#include "doctest.h"

#include "efimov/channels.hpp"
#include "efimov/errors.hpp"
#include "efimov/hyperradial.hpp"
#include "efimov/numerics.hpp"
#include "efimov/universal.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

using namespace efimov;
using namespace efimov::hyper;

namespace {

const double lambda0 = std::exp(M_PI / boson_s0);

// K_{i nu}(x) = int_0^inf exp(-x cosh t) cos(nu t) dt
double bessel_k_imaginary(double nu, double x) {
  const double t_max = std::acosh(1.0 + 60.0 / x);
  std::vector<double> breaks;
  for (int i = 0; i <= 40; ++i) breaks.push_back(t_max * i / 40.0);
  const auto rule = composite_gauss_legendre(breaks, 24);
  return rule.integrate([&](double t) { return std::exp(-x * std::cosh(t)) * std::cos(nu * t); });
}

}  // namespace

TEST_SUITE("hyperradial") {

TEST_CASE("hard-wall levels are zeros of K_{i s0}") {
  const double r0 = 1.0;
  const auto set = solve_bound_states(Channel::efimov(boson_s0, Boundary::hard_wall(r0)), 1e-6, 10.0);
  REQUIRE(set.kappas.size() >= 4);
  // oracle: zeros of K_{i s0}(kappa r0) bracketed around each computed level
  for (std::size_t n = 0; n < 3; ++n) {
    const double k = set.kappas[n];
    const double root = find_root([&](double x) { return bessel_k_imaginary(boson_s0, x * r0); }, 0.9 * k, 1.1 * k);
    CHECK(k == doctest::Approx(root).epsilon(1e-7));
  }
}

TEST_CASE("energy ratio of successive levels") {
  const auto set = solve_bound_states(Channel::efimov(boson_s0, Boundary::hard_wall(1.0)), 1e-7, 10.0);
  REQUIRE(set.energies.size() >= 4);
  for (std::size_t n = 1; n + 1 < set.energies.size(); ++n)
    CHECK(set.energies[n] / set.energies[n + 1] == doctest::Approx(515.03).epsilon(1e-3));
  CHECK(lambda0 * lambda0 == doctest::Approx(515.03).epsilon(1e-5));
}

TEST_CASE("wall scaling maps the spectrum onto itself") {
  const auto a = solve_bound_states(Channel::efimov(boson_s0, Boundary::hard_wall(1.0)), 1e-6, 10.0);
  const auto b = solve_bound_states(Channel::efimov(boson_s0, Boundary::hard_wall(lambda0)), 1e-6, 10.0);
  REQUIRE(b.kappas.size() + 1 >= a.kappas.size());
  for (std::size_t n = 0; n + 1 < a.kappas.size() && n < b.kappas.size(); ++n)
    CHECK(b.kappas[n] * lambda0 == doctest::Approx(a.kappas[n]).epsilon(1e-7));
}

TEST_CASE("non-Efimov channel has no bound states") {
  const auto ch = Channel::fixed(4.0, Boundary::hard_wall(1.0));
  CHECK(count_nodes(ch, 0.0) == 0);
  CHECK(solve_bound_states(ch, 1e-6, 10.0).energies.empty());
}

TEST_CASE("node ordering and Sturm counting") {
  const auto ch = Channel::efimov(boson_s0, Boundary::hard_wall(1.0));
  const auto set = solve_bound_states(ch, 1e-6, 10.0);
  for (std::size_t n = 0; n < set.nodes.size(); ++n) {
    CHECK(set.nodes[n] == static_cast<int>(n));
    const double between = n + 1 < set.kappas.size() ? std::sqrt(set.kappas[n] * set.kappas[n + 1]) : 0.5 * set.kappas[n];
    CHECK(count_nodes(ch, between) == static_cast<int>(n) + 1);
  }
}

TEST_CASE("wave functions are normalized") {
  const auto set = solve_bound_states(Channel::efimov(boson_s0, Boundary::hard_wall(1.0)), 1e-3, 10.0);
  for (std::size_t n = 0; n < set.wavefunctions.size(); ++n) {
    const auto& r = set.radii[n];
    const auto& u = set.wavefunctions[n];
    double norm = 0.0;
    for (std::size_t i = 1; i < r.size(); ++i) norm += 0.5 * (u[i] * u[i] + u[i - 1] * u[i - 1]) * (r[i] - r[i - 1]);
    CHECK(norm == doctest::Approx(1.0).epsilon(2e-2));
  }
}

TEST_CASE("square well levels obey discrete scaling") {
  const auto set = solve_bound_states(Channel::square_well(boson_s0, 1.0, 30.0), 1e-7, 10.0);
  REQUIRE(set.kappas.size() >= 4);
  for (std::size_t n = 2; n + 1 < set.kappas.size(); ++n)
    CHECK(set.kappas[n] / set.kappas[n + 1] == doctest::Approx(lambda0).epsilon(1e-3));
}

TEST_CASE("three-body phase of the hard wall") {
  const auto fit = three_body_phase(Channel::efimov(boson_s0, Boundary::hard_wall(2.0)), boson_s0, 2.0);
  CHECK(fit.phase == doctest::Approx(M_PI / 2).epsilon(1e-8));
  CHECK(fit.residual < 1e-6);
}

TEST_CASE("three-body phase is defined mod pi") {
  const auto ch = Channel::vdw_well(boson_s0, 1.0, 0.3);
  const double p1 = three_body_phase(ch, boson_s0, 1.0).phase;
  const double p2 = three_body_phase(ch, boson_s0, lambda0).phase;
  double d = std::fmod(std::abs(p1 - p2), M_PI);
  d = std::min(d, M_PI - d);
  CHECK(d < 1e-7);
  CHECK(p1 >= 0.0);
  CHECK(p1 < M_PI);
}

TEST_CASE("vdW wall phase covers [0, pi)") {
  std::vector<double> phases;
  for (int i = 0; i < 40; ++i) {
    const double r0 = 0.4 + 0.01 * i;
    phases.push_back(three_body_phase(Channel::vdw_well(boson_s0, 1.0, r0), boson_s0, 1.0).phase);
  }
  std::sort(phases.begin(), phases.end());
  double gap = phases.front() + M_PI - phases.back();
  for (std::size_t i = 1; i < phases.size(); ++i) gap = std::max(gap, phases[i] - phases[i - 1]);
  CHECK(gap < M_PI / 3);
}

TEST_CASE("adiabatic thresholds") {
  auto table = std::make_shared<const ChannelTable>(ThreeBodySystem::identical_bosons());
  const auto a = adiabatic_thresholds(table, Boundary::hard_wall(1.0), 4);
  REQUIRE(a.size() == 4);
  for (double x : a) CHECK(x < 0.0);
  for (std::size_t n = 2; n < a.size(); ++n) CHECK(a[n] / a[n - 1] == doctest::Approx(lambda0).epsilon(0.02));
}

TEST_CASE("boundary validation") {
  CHECK_THROWS_AS(Boundary::hard_wall(-1.0).validate(), DomainError);
  CHECK_THROWS_AS(three_body_phase(Channel::efimov(boson_s0, Boundary::hard_wall(1.0)), -1.0), DomainError);
}

}  // TEST_SUITE
