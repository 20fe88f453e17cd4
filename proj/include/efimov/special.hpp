#pragma once

namespace efimov::special {

// Principal branch W0(x), x >= -1/e.
double lambert_w0(double x);

// W0(exp(y)) without forming exp(y); valid for any real y.
double lambert_w0_of_exp(double y);

double sine_integral(double x);
double cosine_integral(double x);

// Integral of sin(p r) r^{-k} over [R, inf) for integer k >= 1, p > 0, R > 0.
double sine_tail_integral(int k, double p, double R);
// Integral of cos(p r) r^{-k} over [R, inf) for k >= 0 (k = 0 in the Abel sense).
double cosine_tail_integral(int k, double p, double R);

double bessel_j(double nu, double x);

}  // namespace efimov::special
