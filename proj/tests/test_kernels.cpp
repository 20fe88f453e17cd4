#include "doctest.h"

#include "efimov/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace efimov;
namespace k = efimov::kernels;

TEST_SUITE("kernels") {

TEST_CASE("scalar log ratio matches the direct logarithm") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> c(37), b(37), out(37);
  for (std::size_t j = 0; j < c.size(); ++j) {
    c[j] = std::exp(20.0 * u(rng) - 10.0);
    b[j] = c[j] * (2.0 * u(rng) - 1.0) * 0.999;
  }
  k::scalar::log_ratio(c, b, out);
  for (std::size_t j = 0; j < c.size(); ++j)
    CHECK(out[j] == doctest::Approx(std::log((c[j] + b[j]) / (c[j] - b[j]))).epsilon(1e-12));
}

TEST_CASE("vectorized kernels agree with the scalar reference") {
  if (!k::avx2::available()) {
    MESSAGE("AVX2 not available; only the scalar path is exercised");
    CHECK(k::detected_isa() == k::Isa::scalar);
    return;
  }
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n : {1u, 3u, 4u, 5u, 8u, 31u, 400u, 1001u}) {
    std::vector<double> c(n), b(n), ref(n), vec(n);
    for (std::size_t j = 0; j < n; ++j) {
      c[j] = std::exp(40.0 * u(rng) - 20.0);
      const double t = 2.0 * u(rng) - 1.0;
      b[j] = c[j] * t * (j % 7 == 0 ? 1e-9 : 1.0 - 1e-12);
    }
    k::log_ratio(c, b, ref, k::Isa::scalar);
    k::log_ratio(c, b, vec, k::Isa::avx2);
    for (std::size_t j = 0; j < n; ++j) {
      const double tol = 2e-15 * std::abs(ref[j]) + 1e-300;
      CHECK(std::abs(vec[j] - ref[j]) <= tol);
    }

    std::vector<double> x(n), f(n);
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = 2.0 * u(rng) - 1.0;
      f[j] = u(rng);
    }
    const double cc = 1.3, bb = 0.9;
    const double s = k::rational_sum(x, f, cc, bb, k::Isa::scalar);
    const double v = k::rational_sum(x, f, cc, bb, k::Isa::avx2);
    CHECK(v == doctest::Approx(s).epsilon(1e-13));
  }
}

TEST_CASE("dispatch names and size checks") {
  CHECK(std::string(k::isa_name(k::Isa::scalar)) == "scalar");
  CHECK(std::string(k::isa_name(k::Isa::avx2)) == "avx2");
  std::vector<double> a(3), b(2), o(3);
  CHECK_THROWS(k::log_ratio(a, b, o));
  CHECK_THROWS(k::rational_sum(a, b, 1.0, 0.0));
}

}  // TEST_SUITE
