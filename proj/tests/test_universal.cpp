#include "doctest.h"

#include "efimov/errors.hpp"
#include "efimov/universal.hpp"

#include <cmath>
#include <vector>

using namespace efimov;

TEST_SUITE("universal") {

TEST_CASE("delta at the branch points") {
  CHECK(delta(-M_PI) == doctest::Approx(-0.825).epsilon(1e-12));
  CHECK(std::abs(delta(-M_PI / 2)) < 1e-15);
  CHECK(delta(-M_PI / 4) == doctest::Approx(6.027).epsilon(1e-12));
  CHECK_THROWS_AS(delta(-3.3), DomainError);
  CHECK_THROWS_AS(delta(-0.5), DomainError);
}

TEST_CASE("delta branch joints are continuous") {
  for (double joint : {-5.0 * M_PI / 8, -3.0 * M_PI / 8}) {
    const double h = 1e-9;
    CHECK(std::abs(delta(joint - h) - delta(joint + h)) < 0.01);
  }
}

TEST_CASE("threshold constants implied by delta") {
  CHECK(threshold_constant_from_delta() == doctest::Approx(-1.50763).epsilon(0.005));
  CHECK(dimer_crossing_constant_from_delta() == doctest::Approx(0.0707645086901).epsilon(0.005));
  // closed forms of the same constants
  CHECK(threshold_constant_from_delta() == doctest::Approx(-std::exp(0.825 / (2 * boson_s0))).epsilon(1e-14));
  CHECK(dimer_crossing_constant_from_delta() ==
        doctest::Approx(std::sqrt(2.0) * std::exp(-6.027 / (2 * boson_s0))).epsilon(1e-14));
}

TEST_CASE("trimer energies at unitarity") {
  const double ks = 1.3;
  for (int n = 0; n < 3; ++n) {
    const auto e = trimer_energy(n, 0.0, ks);
    REQUIRE(e);
    CHECK(*e == doctest::Approx(-ks * ks * std::exp(-2 * M_PI * n / boson_s0)).epsilon(1e-10));
  }
}

TEST_CASE("universal formula self-consistency and level shift") {
  const double ks = 1.0, lambda0 = scaling_factor();
  for (double inv_a : {-0.6, -0.2, 0.0, 0.3, 2.0, 10.0}) {
    for (int n = 0; n < 2; ++n) {
      const auto k = trimer_wavenumber(n, inv_a, ks);
      if (!k) continue;
      CHECK(std::abs(universal_formula_residual(n, inv_a, *k, ks)) < 1e-10);
      if (inv_a > 0) CHECK(*k > inv_a);
      const auto next = trimer_energy(n + 1, inv_a / lambda0, ks);
      const auto same = trimer_energy(n, inv_a, ks);
      REQUIRE(next);
      CHECK(*next == doctest::Approx(*same / (lambda0 * lambda0)).epsilon(1e-9));
    }
  }
  // level absent beyond its threshold
  CHECK(!trimer_wavenumber(0, 1.0 / universal_relations(ks).a_minus - 0.05, ks));
}

TEST_CASE("universal relations") {
  const auto r = universal_relations(1.0);
  CHECK(r.a_minus == doctest::Approx(-1.50763));
  CHECK(r.a_plus == doctest::Approx(0.32));
  CHECK(r.a_star == doctest::Approx(0.0707645086901));
  const auto s = universal_relations(22.694);
  CHECK(s.a_minus == doctest::Approx(r.a_minus / 22.694).epsilon(1e-14));
  CHECK(s.a_star == doctest::Approx(r.a_star / 22.694).epsilon(1e-14));
  CHECK_THROWS_AS(universal_relations(0.0), DomainError);
}

TEST_CASE("range-corrected formula") {
  for (double inv_a : {-0.3, 0.0, 0.5}) {
    const auto plain = trimer_energy(0, inv_a, 1.0);
    const auto mod = modified_trimer_energy(0, inv_a, 0.0, 1.0, 0.0);
    REQUIRE(plain);
    REQUIRE(mod);
    CHECK(*mod == doctest::Approx(*plain).epsilon(1e-12));
  }
  const auto u0 = modified_trimer_energy(1, 0.0, 0.4, 1.0, 0.79);
  CHECK(*u0 == doctest::Approx(*trimer_energy(1, 0.0, 1.0)).epsilon(1e-12));
  CHECK(renormalized_scale(0.0, 1.0, 0.99) == doctest::Approx(1.0));
  CHECK(renormalized_scale(0.5, 2.0, 1.0) == doctest::Approx(1.0 / 1.25));
}

TEST_CASE("recombination rate") {
  const double am = -3.0, a4 = 81.0;
  CHECK(recombination_rate(am, am, 0.1) / a4 ==
        doctest::Approx(4590.0 * std::sinh(0.2) / std::pow(std::sinh(0.1), 2)).epsilon(1e-12));
  CHECK(recombination_rate(am, am, 0.1) / a4 == doctest::Approx(9.21e4).epsilon(1e-3));
  const double lambda0 = scaling_factor();
  const double a1 = am * lambda0;
  CHECK(recombination_rate(a1, am, 0.1) / std::pow(a1, 4) ==
        doctest::Approx(recombination_rate(am, am, 0.1) / a4).epsilon(1e-9));
  const double anti = am * std::exp(M_PI / (2 * boson_s0));
  CHECK(recombination_rate(anti, am, 0.2) / std::pow(anti, 4) ==
        doctest::Approx(4590.0 * std::sinh(0.4) / (1 + std::pow(std::sinh(0.2), 2))).epsilon(1e-12));
  CHECK(std::isinf(recombination_rate(am, am, 0.0)));
}

TEST_CASE("recombination maxima form a geometric sequence") {
  const double am = -1.0, eta = 0.05;
  const auto f = [&](double x) { return std::log(recombination_rate(-std::exp(x), am, eta)); };
  std::vector<double> peaks;
  const double h = 1e-3;
  for (double x = 0.5; x < 12.0; x += h) {
    const double f0 = f(x - h), f1 = f(x), f2 = f(x + h);
    if (f1 > f0 && f1 >= f2) peaks.push_back(x + 0.5 * h * (f0 - f2) / (f0 - 2 * f1 + f2));
  }
  REQUIRE(peaks.size() >= 3);
  for (std::size_t i = 1; i < peaks.size(); ++i)
    CHECK(std::exp(peaks[i] - peaks[i - 1]) == doctest::Approx(scaling_factor()).epsilon(1e-6));
}

TEST_CASE("resonance width") {
  CHECK(resonance_width(1.0, 0.0) == 0.0);
  CHECK(resonance_width(1.0, 0.1) == doctest::Approx(0.39752).epsilon(1e-4));
  // |Im E| / |E| slope of the complex three-body parameter
  const double eta = 1e-6;
  const auto e = complex_trimer_energy_unitarity(1, 1.0, eta);
  CHECK(std::abs(e.imag()) / std::abs(e.real()) / eta == doctest::Approx(4.0 / boson_s0).epsilon(1e-5));
  CHECK(std::abs(e.imag()) == doctest::Approx(resonance_width(e.real(), eta)).epsilon(1e-5));
}

}  // TEST_SUITE
