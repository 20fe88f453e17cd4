#include "efimov/special.hpp"

#include "efimov/errors.hpp"

#include <gsl/gsl_sf_expint.h>

#include <boost/math/special_functions/lambert_w.hpp>

#include <cmath>
#include <numbers>

namespace efimov::special {

double lambert_w0(double x) {
  if (x < -std::exp(-1.0)) throw DomainError("lambert_w0: argument below -1/e");
  return boost::math::lambert_w0(x);
}

double lambert_w0_of_exp(double y) {
  if (y < 500.0) return boost::math::lambert_w0(std::exp(y));
  // w + ln w = y
  double w = y - std::log(y);
  for (int i = 0; i < 50; ++i) {
    const double step = (w + std::log(w) - y) / (1.0 + 1.0 / w);
    w -= step;
    if (std::abs(step) <= 1e-16 * w) break;
  }
  return w;
}

double sine_integral(double x) { return gsl_sf_Si(x); }

double cosine_integral(double x) {
  if (!(x > 0.0)) throw DomainError("cosine_integral: argument must be positive");
  return gsl_sf_Ci(x);
}

double sine_tail_integral(int k, double p, double R) {
  if (k < 1 || !(p > 0.0) || !(R > 0.0)) throw DomainError("sine_tail_integral: bad arguments");
  const double x = p * R;
  double js = std::numbers::pi / 2.0 - sine_integral(x);
  double jc = -cosine_integral(x);
  const double s = std::sin(x), c = std::cos(x);
  for (int j = 2; j <= k; ++j) {
    const double rp = std::pow(R, 1 - j) / (j - 1);
    const double f = p / (j - 1);
    const double js_next = s * rp + f * jc;
    const double jc_next = c * rp - f * js;
    js = js_next;
    jc = jc_next;
  }
  return js;
}

double cosine_tail_integral(int k, double p, double R) {
  if (k < 0 || !(p > 0.0) || !(R > 0.0)) throw DomainError("cosine_tail_integral: bad arguments");
  const double x = p * R;
  if (k == 0) return -std::sin(x) / p;
  double js = std::numbers::pi / 2.0 - sine_integral(x);
  double jc = -cosine_integral(x);
  const double s = std::sin(x), c = std::cos(x);
  for (int j = 2; j <= k; ++j) {
    const double rp = std::pow(R, 1 - j) / (j - 1);
    const double f = p / (j - 1);
    const double js_next = s * rp + f * jc;
    const double jc_next = c * rp - f * js;
    js = js_next;
    jc = jc_next;
  }
  return jc;
}

double bessel_j(double nu, double x) { return std::cyl_bessel_j(nu, x); }

}  // namespace efimov::special
