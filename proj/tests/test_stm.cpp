#include "doctest.h"

#include "efimov/errors.hpp"
#include "efimov/numerics.hpp"
#include "efimov/stm.hpp"
#include "efimov/universal.hpp"

#include <cmath>
#include <memory>

using namespace efimov;
using namespace efimov::stm;

namespace {

const double lambda0 = std::exp(M_PI / boson_s0);

double angular_oracle(const std::function<double(double)>& phi, double P, double Q, double E) {
  const double breaks[] = {-1.0, -0.9, -0.5, 0.0, 0.5, 1.0};
  const auto rule = composite_gauss_legendre(breaks, 30);
  return rule.integrate([&](double x) {
    const double a = std::sqrt(Q * Q + 0.25 * P * P + P * Q * x);
    const double b = std::sqrt(P * P + 0.25 * Q * Q + P * Q * x);
    return phi(a) * phi(b) / (P * P + Q * Q + P * Q * x - E);
  });
}

KernelOptions grid(int points) {
  KernelOptions o;
  o.points = points;
  return o;
}

}  // namespace

TEST_SUITE("stm") {

TEST_CASE("log kernel against the angular integral") {
  const auto one = [](double) { return 1.0; };
  const auto k = StmKernel::contact(TMatrixModel::zero_range(0.0), 10.0, grid(40));
  for (double P : {1e-3, 0.1, 0.7, 2.0})
    for (double Q : {2e-3, 0.1, 0.9, 5.0})
      for (double E : {-1e-4, -0.3, -4.0}) {
        const double ref = angular_oracle(one, P, Q, E);
        CHECK(StmKernel::log_kernel(P, Q, E) == doctest::Approx(ref).epsilon(1e-10));
        CHECK(k.angular_integral(P, Q, E) == doctest::Approx(ref).epsilon(1e-10));
      }
}

TEST_CASE("separable angular integral") {
  const auto profile = [](double p) { return 1.0 / (1.0 + p * p); };
  auto form = std::make_shared<const FormFactor>(FormFactor::analytic(profile, 1.0, "lorentzian"));
  KernelOptions o = grid(40);
  o.angular_points = 48;
  const auto k = StmKernel::separable(TMatrixModel::separable(0.0, form), o);
  for (double P : {0.01, 0.5, 3.0})
    for (double Q : {0.02, 1.0, 4.0})
      CHECK(k.angular_integral(P, Q, -0.2) == doctest::Approx(angular_oracle(profile, P, Q, -0.2)).epsilon(1e-9));
  CHECK(k.angular_error() < 1e-6);
}

TEST_CASE("zero-range unitarity spectrum and grid doubling") {
  const auto a = solve_trimers_zero_range(0.0, 1.0, 1e-6, 1.0, grid(300));
  const auto b = solve_trimers_zero_range(0.0, 1.0, 1e-6, 1.0, grid(600));
  REQUIRE(a.kappas.size() >= 4);
  REQUIRE(b.kappas.size() == a.kappas.size());
  for (std::size_t n = 0; n < a.kappas.size(); ++n) CHECK(std::abs(a.kappas[n] / b.kappas[n] - 1) < 2e-3);
  CHECK(b.energies[1] / b.energies[2] == doctest::Approx(lambda0 * lambda0).epsilon(0.01));
  for (std::size_t n = 1; n < b.energies.size(); ++n) CHECK(b.energies[n] > b.energies[n - 1]);
}

TEST_CASE("cutoff covariance") {
  const auto a = solve_trimers_zero_range(0.0, 1.0, 1e-6, 1.0, grid(300));
  const auto b = solve_trimers_zero_range(0.0, 2.0, 2e-6, 2.0, grid(300));
  REQUIRE(a.kappas.size() == b.kappas.size());
  for (std::size_t n = 0; n < a.kappas.size(); ++n) CHECK(b.kappas[n] == doctest::Approx(2 * a.kappas[n]).epsilon(1e-8));
}

TEST_CASE("level count is monotone in the energy") {
  const auto k = StmKernel::contact(TMatrixModel::zero_range(0.0), 1.0, grid(200));
  int last = 1 << 20;
  for (double e = -1.0; e > -1e-9; e *= 0.3) {
    const int c = k.count_levels(e);
    CHECK(c >= 0);
    CHECK(c <= last);
    last = c;
  }
  (void)last;
}

TEST_CASE("trimers lie below the dimer for positive a") {
  const double inv_a = 0.01;
  const auto set = solve_trimers_zero_range(inv_a, 1.0, 1e-6, 1.0, grid(300));
  REQUIRE(set.threshold);
  CHECK(*set.threshold == doctest::Approx(-inv_a * inv_a).epsilon(1e-12));
  REQUIRE(!set.energies.empty());
  for (double e : set.energies) CHECK(e < *set.threshold);
}

TEST_CASE("sharp separable model equals the exact-domain contact kernel") {
  auto form = std::make_shared<const FormFactor>(FormFactor::sharp_cutoff(1.0));
  KernelOptions o = grid(250);
  o.p_min = 1e-5;
  o.p_max = 1.0;
  const auto a = solve_trimers_separable(form, 0.0, 1e-4, 1.0, o);
  const auto b = solve_trimers_zero_range(0.0, 1.0, 1e-4, 1.0, o, true);
  REQUIRE(!a.kappas.empty());
  REQUIRE(a.kappas.size() == b.kappas.size());
  for (std::size_t n = 0; n < a.kappas.size(); ++n) CHECK(a.kappas[n] == doctest::Approx(b.kappas[n]).epsilon(1e-8));
}

TEST_CASE("coupled channels with equal inputs reduce to bosons") {
  const auto profile = [](double p) { return 1.0 / (1.0 + p * p); };
  auto form = std::make_shared<const FormFactor>(FormFactor::analytic(profile, 1.0, "lorentzian"));
  const auto model = TMatrixModel::separable(0.0, form);
  const KernelOptions o = grid(200);
  const auto single = solve_levels(StmKernel::separable(model, o), 1e-4, 1.0);
  const auto coupled =
      solve_levels(StmKernel::coupled({model, model}, {{0.25, 0.75}, {0.75, 0.25}}, o), 1e-4, 1.0);
  REQUIRE(!single.kappas.empty());
  REQUIRE(coupled.kappas.size() == single.kappas.size());
  for (std::size_t n = 0; n < single.kappas.size(); ++n)
    CHECK(coupled.kappas[n] == doctest::Approx(single.kappas[n]).epsilon(1e-8));
}

TEST_CASE("wave function symmetry and norm") {
  const auto k = StmKernel::contact(TMatrixModel::zero_range(0.0), 1.0, grid(200));
  const auto set = solve_levels(k, 1e-3, 1.0);
  REQUIRE(!set.energies.empty());
  const auto psi = reconstruct_wavefunction(k, set.energies.front());
  const std::array<double, 3> P{0.05, -0.02, 0.03}, p{0.01, 0.04, -0.06};
  std::array<double, 3> P1, p1, mp;
  for (int i = 0; i < 3; ++i) {
    P1[i] = -p[i] - 0.5 * P[i];
    p1[i] = -0.5 * p[i] + 0.75 * P[i];
    mp[i] = -p[i];
  }
  const double v = psi(P, p);
  CHECK(std::abs(v) > 0.0);
  CHECK(std::abs(psi(P1, p1) / v - 1) < 1e-4);
  CHECK(std::abs(psi(P, mp) / v - 1) < 1e-4);
  const double n = psi.norm();
  CHECK(std::isfinite(n));
  CHECK(n > 0.0);
  CHECK_THROWS_AS(reconstruct_wavefunction(k, 0.5), DomainError);
}

TEST_CASE("narrow resonance scales with R*") {
  KernelOptions o = grid(300);
  const auto a = solve_trimers_narrow_resonance(0.0, 1.0, 1e-5, 1.0, o);
  const auto b = solve_trimers_narrow_resonance(0.0, 2.0, 0.5e-5, 0.5, o);
  REQUIRE(a.kappas.size() >= 2);
  REQUIRE(a.kappas.size() == b.kappas.size());
  for (std::size_t n = 0; n < a.kappas.size(); ++n) CHECK(b.kappas[n] == doctest::Approx(0.5 * a.kappas[n]).epsilon(1e-6));
  CHECK(a.kappas[0] / a.kappas[1] == doctest::Approx(lambda0).epsilon(0.02));
}

TEST_CASE("zero-range threshold scattering lengths") {
  const auto t = threshold_scattering_lengths_zero_range(1.0, 4, grid(400));
  REQUIRE(t.a_minus.size() >= 3);
  for (double a : t.a_minus) CHECK(a < 0.0);
  for (std::size_t n = 1; n < t.a_minus.size(); ++n)
    CHECK(t.a_minus[n] / t.a_minus[n - 1] == doctest::Approx(lambda0).epsilon(5e-3));
}

}  // TEST_SUITE
