#include "efimov/born_oppenheimer.hpp"

#include "efimov/errors.hpp"
#include "efimov/special.hpp"

#include <cmath>

namespace efimov::bo {

double omega_constant() { return special::lambert_w0(1.0); }

std::optional<double> bonding_kappa(double R, double inv_a) {
  if (!(R > 0.0)) throw DomainError("bonding_kappa: R must be positive");
  const double x = R * inv_a;
  if (x <= -1.0) return std::nullopt;
  // y = kappa R solves y - e^{-y} = x
  double y = x + special::lambert_w0_of_exp(-x);
  for (int it = 0; it < 4; ++it) {
    const double e = std::exp(-y);
    const double step = (y - e - x) / (1.0 + e);
    y -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(y))) break;
  }
  if (!(y > 0.0)) return std::nullopt;
  return y / R;
}

std::optional<double> bonding_energy(double R, double inv_a) {
  const auto k = bonding_kappa(R, inv_a);
  if (!k) return std::nullopt;
  return -0.5 * (*k) * (*k);
}

std::optional<double> effective_potential(double R, double inv_a, int L, double mass_ratio) {
  if (L < 0) throw DomainError("effective_potential: L must be non-negative");
  const auto e = bonding_energy(R, inv_a);
  if (!e) return std::nullopt;
  return L * (L + 1.0) / (R * R) + mass_ratio * (*e);
}

std::optional<double> s0_estimate(double mass_ratio, int L) {
  const double w = omega_constant();
  const double s2 = 0.5 * mass_ratio * w * w - L * (L + 1.0) - 0.25;
  if (!(s2 > 0.0)) return std::nullopt;
  return std::sqrt(s2);
}

double critical_mass_ratio(int L) {
  if (L < 0) throw DomainError("critical_mass_ratio: L must be non-negative");
  const double w = omega_constant();
  return 2.0 * (L * (L + 1.0) + 0.25) / (w * w);
}

}  // namespace efimov::bo
