#pragma once

#include <optional>

// Heavy-heavy-light system in units hbar = m_light = 1; mass_ratio = M/m.
namespace efimov::bo {

double omega_constant();  // W(1)

// kappa(R) of the light-particle bonding orbital, kappa - e^{-kappa R}/R = 1/a.
// Empty when no positive root exists (R/a <= -1).
std::optional<double> bonding_kappa(double R, double inv_a);

// epsilon(R) = -kappa^2 / 2
std::optional<double> bonding_energy(double R, double inv_a);

// L(L+1)/R^2 + M epsilon(R)
std::optional<double> effective_potential(double R, double inv_a, int L, double mass_ratio);

// |s0| = sqrt((M/2) Omega^2 - L(L+1) - 1/4), empty if not Efimov-attractive.
std::optional<double> s0_estimate(double mass_ratio, int L);

double critical_mass_ratio(int L);

}  // namespace efimov::bo
