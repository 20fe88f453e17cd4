#include "doctest.h"

#include "efimov/errors.hpp"
#include "efimov/numerics.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace efimov;

TEST_SUITE("numerics") {

TEST_CASE("find_root on closed-form roots") {
  CHECK(find_root([](double x) { return x * x - 2.0; }, 1.0, 2.0, 1e-12) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(std::abs(find_root([](double x) { return x; }, -1.0, 1.0, 1e-12)) < 1e-12);
  const auto boson = [](double s) {
    return s * std::cosh(s * M_PI / 2) - 8.0 / std::sqrt(3.0) * std::sinh(s * M_PI / 6);
  };
  CHECK(find_root(boson, 0.5, 1.5, 1e-12) == doctest::Approx(1.00624).epsilon(1e-5));
}

TEST_CASE("find_root does not depend on the bracket") {
  const auto f = [](double x) { return std::cos(x) - x; };
  const double ref = find_root(f, 0.0, 1.0, 1e-14);
  for (double lo : {-0.5, 0.1, 0.7})
    for (double hi : {0.75, 1.0, 3.0}) CHECK(std::abs(find_root(f, lo, hi, 1e-14) - ref) < 1e-13);
}

TEST_CASE("find_root errors") {
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), BracketError);
  CHECK_THROWS_AS(find_root([](double x) { return x > 0.3 ? std::nan("") : x - 0.5; }, 0.0, 1.0),
                  EvaluationError);
}

TEST_CASE("two-point Gauss-Legendre rule") {
  const auto q = gauss_legendre(2, -1.0, 1.0);
  REQUIRE(q.size() == 2);
  CHECK(q.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(q.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(q.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(q.weights[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gauss_legendre(2, 0.0, 1.0).integrate([](double x) { return x * x * x; }) ==
        doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("quadrature rule invariants") {
  for (int n : {1, 3, 16, 64, 200}) {
    const auto q = gauss_legendre(n, -0.3, 2.2);
    double sum = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      CHECK(q.weights[i] > 0.0);
      if (i) CHECK(q.nodes[i] > q.nodes[i - 1]);
      sum += q.weights[i];
    }
    CHECK(std::abs(sum - 2.5) < 1e-12);
  }
  const double breaks[] = {0.0, 0.5, 2.0, 7.0};
  const auto c = composite_gauss_legendre(breaks, 6);
  CHECK(c.size() == 18);
  CHECK(c.integrate([](double x) { return x * x; }) == doctest::Approx(343.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("polynomial exactness up to degree 2n-1") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {2, 5, 9}) {
    std::vector<double> coef(2 * n);
    for (double& c : coef) c = u(rng);
    const auto poly = [&](double x) {
      double v = 0.0;
      for (auto it = coef.rbegin(); it != coef.rend(); ++it) v = v * x + *it;
      return v;
    };
    double exact = 0.0;  // integral over [0, 2]
    for (std::size_t k = 0; k < coef.size(); ++k) exact += coef[k] * std::pow(2.0, k + 1) / (k + 1);
    CHECK(gauss_legendre(n, 0.0, 2.0).integrate(poly) == doctest::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("log-mapped rule integrates a decaying exponential") {
  const auto q = gauss_legendre_log(64, 1e-12, 60.0);
  CHECK(q.mapping == Mapping::logarithmic);
  CHECK(std::abs(q.integrate([](double p) { return std::exp(-p); }) - 1.0) < 1e-10);
}

TEST_CASE("quadrature error decays faster than any power") {
  const auto err = [](int n) {
    return std::abs(gauss_legendre(n, 0.0, 1.0).integrate([](double x) { return std::exp(3 * x); }) -
                    (std::exp(3.0) - 1.0) / 3.0);
  };
  const double e2 = err(2), e4 = err(4), e8 = err(8);
  CHECK(e4 < e2 * 1e-3);
  CHECK(e8 < 1e-13);
  CHECK(e4 / e8 > std::pow(2.0, 20));
}

TEST_CASE("smallest eigenvalue examples") {
  const auto id = smallest_eigenvalue(DenseMatrix::Identity(3, 3));
  CHECK(id.value == doctest::Approx(1.0));
  CHECK(id.vector.norm() == doctest::Approx(1.0));
  DenseMatrix d = DenseMatrix::Zero(3, 3);
  d.diagonal() << 5.0, -0.1, 3.0;
  const auto e = smallest_eigenvalue(d);
  CHECK(e.value == doctest::Approx(-0.1).epsilon(1e-14));
  CHECK(std::abs(std::abs(e.vector(1)) - 1.0) < 1e-12);
}

TEST_CASE("smallest eigenvalue tracks determinant zeros of a nonsymmetric kernel") {
  std::mt19937 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  const int n = 50;
  DenseMatrix s = DenseMatrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) += 0.3 * g(rng) / std::sqrt(double(n));
  Vector spectrum(n);
  for (int i = 0; i < n; ++i) spectrum(i) = -5.0 + 10.0 * (i + 0.5) / n + 0.05 * g(rng);
  const DenseMatrix a = s * spectrum.asDiagonal() * s.inverse();
  const auto m = [&](double e) { return DenseMatrix(a - e * DenseMatrix::Identity(n, n)); };

  const auto pair = smallest_eigenvalue(m(0.37));
  CHECK((m(0.37) * pair.vector - pair.value * pair.vector).norm() < 1e-8 * m(0.37).norm());

  int crossings = 0;
  const int steps = 4000;
  const double h = 10.0 / steps;
  for (int i = 0; i < steps; ++i) {
    const double e0 = -5.0 + i * h, e1 = e0 + h;
    if ((determinant(m(e0)) > 0) != (determinant(m(e1)) > 0)) {
      ++crossings;
      const double l0 = smallest_eigenvalue(m(e0)).value, l1 = smallest_eigenvalue(m(e1)).value;
      CHECK(l0 * l1 <= 0.0);
      CHECK(std::abs(l0) <= 1.01 * h);
      CHECK(std::abs(l1) <= 1.01 * h);
    }
  }
  CHECK(crossings == n);
}

TEST_CASE("symmetric eigenvalues ascending") {
  DenseMatrix m(2, 2);
  m << 2.0, 1.0, 1.0, 2.0;
  const Vector v = symmetric_eigenvalues(m);
  CHECK(v(0) == doctest::Approx(1.0));
  CHECK(v(1) == doctest::Approx(3.0));
}

TEST_CASE("linear ODE: oscillator, nodes and running norm") {
  const auto r = integrate_linear([](double) { return -1.0; }, 0.0, 3.5 * M_PI, 0.0, 1.0);
  CHECK(r.y == doctest::Approx(std::sin(3.5 * M_PI)).epsilon(1e-9));
  CHECK(r.dy == doctest::Approx(std::cos(3.5 * M_PI)).scale(1.0).epsilon(1e-9));
  CHECK(r.nodes == 3);
  // integral of sin^2 over [0, 3.5 pi]
  CHECK(r.y2_integral == doctest::Approx(1.75 * M_PI).epsilon(1e-9));
  const double pts[] = {1.0, 2.0, 3.0};
  const auto s = integrate_linear_to([](double) { return 1.0; }, 0.0, 1.0, 1.0, pts);
  REQUIRE(s.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(s[i].y == doctest::Approx(std::exp(pts[i])).epsilon(1e-9));
}

TEST_CASE("radial integrator examples") {
  const auto free = integrate_radial([](double) { return 0.0; }, 0.0, 0.0, 4.0);
  CHECK(free.u.back() == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(free.log_derivative == doctest::Approx(0.25).epsilon(1e-10));

  RadialOptions wall;
  const auto hs = integrate_radial([](double) { return 0.0; }, 0.0, 1.5, 5.0, wall);
  for (std::size_t i = 0; i < hs.r.size(); ++i) CHECK(hs.u[i] == doctest::Approx(hs.r[i] - 1.5).scale(1.0));

  RadialOptions even;
  even.u0 = 1.0;
  even.du0 = 0.0;
  const auto tail = [&](double e) {
    return integrate_radial([](double r) { return 0.5 * r * r; }, e, 0.0, 6.0, even).u.back();
  };
  CHECK(find_root(tail, 0.2, 1.0, 1e-12) == doctest::Approx(0.5).epsilon(1e-8));
}

}  // TEST_SUITE
