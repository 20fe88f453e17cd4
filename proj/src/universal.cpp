#include "efimov/universal.hpp"

#include "efimov/errors.hpp"
#include "efimov/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace efimov {

namespace {

using std::numbers::pi;

double target_log_h2(int n, double xi, double kappa_star) {
  return 2.0 * std::log(kappa_star) - 2.0 * pi * n / boson_s0 + delta(xi) / boson_s0;
}

}  // namespace

double scaling_factor(double s0) { return std::exp(pi / s0); }

PolarSpectrumPoint PolarSpectrumPoint::from_cartesian(double inv_a, double kappa) {
  return {inv_a, kappa, std::hypot(inv_a, kappa), std::atan2(kappa, inv_a)};
}

double delta(double xi) {
  const double eps = 1e-12;
  if (xi < -pi - eps || xi > -pi / 4 + eps) throw DomainError("delta: xi outside [-pi, -pi/4]");
  if (xi <= -5.0 * pi / 8) {
    const double z = xi + pi;
    return -0.825 + z * (-0.05 + z * (-0.77 + z * (1.26 - 0.37 * z)));
  }
  if (xi <= -3.0 * pi / 8) {
    const double y = xi + pi / 2;
    return y * (2.11 + y * (1.96 + 1.38 * y));
  }
  const double x = std::sqrt(std::max(0.0, -xi - pi / 4));
  return 6.027 - 9.64 * x + 3.14 * x * x;
}

double universal_formula_residual(int n, double inv_a, double wavenumber, double kappa_star) {
  const PolarSpectrumPoint p = PolarSpectrumPoint::from_cartesian(inv_a, -wavenumber);
  return 2.0 * std::log(p.h) - target_log_h2(n, std::max(p.xi, -pi), kappa_star);
}

std::optional<double> trimer_wavenumber(int n, double inv_a, double kappa_star) {
  if (!(kappa_star > 0.0)) throw DomainError("trimer_wavenumber: kappa* must be positive");
  if (n < 0) throw DomainError("trimer_wavenumber: level must be non-negative");
  const double scale = kappa_star * std::exp(-pi * n / boson_s0);
  // threshold: atom-dimer (K = 1/a) for a > 0, three atoms (K = 0) for a < 0
  double lo = std::max(0.0, inv_a);
  if (lo == 0.0) lo = 1e-14 * scale;
  auto g = [&](double k) { return universal_formula_residual(n, inv_a, k, kappa_star); };
  if (g(lo) >= 0.0) return std::nullopt;
  double hi = std::max(2.0 * lo, scale);
  while (g(hi) <= 0.0) hi *= 2.0;
  return find_root(g, lo, hi, 1e-15 * hi);
}

std::optional<double> trimer_energy(int n, double inv_a, double kappa_star) {
  const auto k = trimer_wavenumber(n, inv_a, kappa_star);
  if (!k) return std::nullopt;
  return -(*k) * (*k);
}

UniversalRelations universal_relations(double kappa_star) {
  if (!(kappa_star > 0.0)) throw DomainError("universal_relations: kappa* must be positive");
  return {-1.50763 / kappa_star, 0.32 / kappa_star, 0.0707645086901 / kappa_star};
}

double threshold_constant_from_delta() { return -std::exp(-delta(-pi) / (2.0 * boson_s0)); }

double dimer_crossing_constant_from_delta() {
  return std::sqrt(2.0) * std::exp(-delta(-pi / 4) / (2.0 * boson_s0));
}

std::optional<double> modified_trimer_energy(int n, double inv_a, double r_e, double kappa_star,
                                             double gamma_n) {
  const double disc = 1.0 - 2.0 * r_e * inv_a;
  if (disc < 0.0) throw DomainError("modified_trimer_energy: complex pole (virtual state)");
  const double inv_a_b = 2.0 * inv_a / (1.0 + std::sqrt(disc));
  return trimer_energy(n, inv_a_b, kappa_star + gamma_n * inv_a);
}

double renormalized_scale(double inv_a, double kappa_star, double gamma_n) {
  return 1.0 / (1.0 + gamma_n * inv_a / kappa_star);
}

double recombination_rate(double a, double a_minus, double eta, double s0) {
  if (!(a < 0.0) || !(a_minus < 0.0)) throw DomainError("recombination_rate: requires a, a_- < 0");
  if (eta < 0.0) throw DomainError("recombination_rate: eta must be non-negative");
  const double sn = std::sin(s0 * std::log(a / a_minus));
  const double sh = std::sinh(eta);
  const double den = sn * sn + sh * sh;
  const double a4 = a * a * a * a;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return recombination_constant * std::sinh(2.0 * eta) / den * a4;
}

double resonance_width(double energy, double eta, double s0) {
  return 4.0 * eta * std::abs(energy) / s0;
}

std::complex<double> complex_trimer_energy_unitarity(int n, double kappa_star, double eta,
                                                     double s0) {
  const std::complex<double> k = kappa_star * std::exp(std::complex<double>(0.0, 2.0 * eta / s0));
  return -k * k * std::exp(-2.0 * pi * n / s0);
}

}  // namespace efimov
