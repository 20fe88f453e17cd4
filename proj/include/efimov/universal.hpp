#pragma once

#include <complex>
#include <optional>

namespace efimov {

// |s0| for three identical bosons at unitarity.
inline constexpr double boson_s0 = 1.0062378251027814;
// C in the recombination rate L3 = C sinh(2 eta) / (sin^2(...) + sinh^2 eta) a^4.
inline constexpr double recombination_constant = 4590.0;

double scaling_factor(double s0 = boson_s0);  // e^{pi/s0}

// 1/a = h cos(xi), kappa = h sin(xi) with kappa < 0 for bound states.
struct PolarSpectrumPoint {
  double inv_a = 0.0;
  double kappa = 0.0;
  double h = 0.0;
  double xi = 0.0;

  static PolarSpectrumPoint from_cartesian(double inv_a, double kappa);
};

// Piecewise fit of the universal function on xi in [-pi, -pi/4].
double delta(double xi);

// Binding wave number K > 0 (E = -K^2) of level n at 1/a, or nullopt if the level is absent.
std::optional<double> trimer_wavenumber(int n, double inv_a, double kappa_star);
std::optional<double> trimer_energy(int n, double inv_a, double kappa_star);

// Residual of the universal formula at (inv_a, K), in units of ln(h^2).
double universal_formula_residual(int n, double inv_a, double wavenumber, double kappa_star);

struct UniversalRelations {
  double a_minus;
  double a_plus;
  double a_star;
};

UniversalRelations universal_relations(double kappa_star);

// kappa* a_- and kappa* a_* implied by the fitted delta at its two endpoints.
double threshold_constant_from_delta();
double dimer_crossing_constant_from_delta();

// Range-corrected formula: 1/a -> 1/a_B and kappa* -> kappa* + gamma_n / a.
std::optional<double> modified_trimer_energy(int n, double inv_a, double r_e, double kappa_star,
                                             double gamma_n);
// lambda_n = (1 + gamma_n / (kappa* a))^{-1}
double renormalized_scale(double inv_a, double kappa_star, double gamma_n);

// L3 in units of hbar a^4 / m; +inf at an exact resonance with eta = 0.
double recombination_rate(double a, double a_minus, double eta, double s0 = boson_s0);

double resonance_width(double energy, double eta, double s0 = boson_s0);

// Level n at unitarity with the complex three-body parameter kappa* e^{i 2 eta / s0}.
std::complex<double> complex_trimer_energy_unitarity(int n, double kappa_star, double eta,
                                                     double s0 = boson_s0);

}  // namespace efimov
