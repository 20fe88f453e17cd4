#pragma once

#include "efimov/channels.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

// Hyperradial equation (-d^2/dR^2 + V(R) + kappa^2) u = 0 with u = sqrt(R) F and E = -kappa^2
// (hbar = m = 1). Solved in x = ln R with u = sqrt(R) w, where w'' = (R^2 (V + kappa^2) + 1/4) w.
namespace efimov::hyper {

struct Boundary {
  enum class Kind { hard_wall, log_derivative };
  Kind kind = Kind::hard_wall;
  double radius = 1.0;
  double log_derivative = 0.0;  // u'/u at radius

  static Boundary hard_wall(double radius);
  static Boundary log_derivative_at(double radius, double value);
  void validate() const;
};

struct Channel {
  // s(R)^2; negative values give the Efimov attraction -(|s|^2 + 1/4)/R^2
  std::function<double(double)> s_squared;
  // optional additional potential (short-range well)
  std::function<double(double)> short_range;
  Boundary boundary;
  // radii where the potential jumps
  std::vector<double> breakpoints;
  // continuum threshold energy: -1/a^2 in a dimer channel, 0 otherwise
  double threshold = 0.0;
  // largest length of the problem besides the boundary radius (|a| or well range)
  double length_hint = 0.0;
  // integration never extends beyond this radius
  double max_radius = std::numeric_limits<double>::infinity();
  std::string label;

  double potential(double R) const;

  // fixed Efimov exponent |s0|: V = -(s0^2 + 1/4)/R^2 beyond the boundary
  static Channel efimov(double s0, Boundary boundary);
  // fixed real or imaginary exponent given as s^2
  static Channel fixed(double s_squared, Boundary boundary);
  // V = -(s0^2 + 1/4)/R^2 - (2b)^4/R^6 with a hard wall at r0
  static Channel vdw_well(double s0, double b, double r0);
  // V = -depth for R < b and -(s0^2 + 1/4)/R^2 beyond; regular at the origin
  static Channel square_well(double s0, double b, double depth);
  // lowest adiabatic exponent s^2(R/a) of a system
  static Channel adiabatic(std::shared_ptr<const ChannelTable> table, double inv_a,
                           Boundary boundary);
};

struct SolveOptions {
  double rtol = 1e-11;
  int samples = 400;  // wave-function samples per level
  double decay_lengths = 40.0;  // integration continues this many decay lengths past turning
};

struct BoundStateSet {
  std::vector<double> energies;  // ascending (deepest first)
  std::vector<double> kappas;    // sqrt(-E)
  std::vector<int> nodes;        // interior nodes per level
  std::vector<std::vector<double>> radii;
  std::vector<std::vector<double>> wavefunctions;  // sqrt(R) F(R), unit norm in dR
};

// Number of interior nodes of the solution at E = -kappa^2 (kappa = 0 allowed); by Sturm
// oscillation this counts the levels below E.
int count_nodes(const Channel& channel, double kappa, const SolveOptions& options = {});

// All levels with binding wave number in [kappa_min, kappa_max].
BoundStateSet solve_bound_states(const Channel& channel, double kappa_min, double kappa_max,
                                 const SolveOptions& options = {});

struct PhaseFit {
  double phase = 0.0;     // in [0, pi)
  double residual = 0.0;  // spread of the fitted phase between two fit radii (mod pi)
  double fit_radius = 0.0;
};

// Three-body phase of the zero-energy solution in an Efimov channel with exponent s0, fitted to
// cos(s0 ln(Lambda R)); reference_scale is 1/Lambda_0.
PhaseFit three_body_phase(const Channel& channel, double s0, double reference_scale = 1.0,
                          const SolveOptions& options = {});

struct SpectrumPoint {
  double inv_a = 0.0;
  int level = 0;
  double kappa = 0.0;  // signed, negative for bound states
  double energy = 0.0;
};

struct EfimovSpectrum {
  std::vector<SpectrumPoint> points;
  std::vector<double> a_minus;  // a_-^(n), n = 0, 1, ...
  std::string approximation = "single-channel adiabatic";
};

// Scattering lengths a_-^(n) < 0 where level n reaches the three-body threshold.
std::vector<double> adiabatic_thresholds(std::shared_ptr<const ChannelTable> table,
                                         const Boundary& boundary, int n_levels,
                                         const SolveOptions& options = {});

EfimovSpectrum adiabatic_spectrum(std::shared_ptr<const ChannelTable> table,
                                  std::span<const double> inv_a_grid, const Boundary& boundary,
                                  double kappa_min, double kappa_max, int n_thresholds = 0,
                                  const SolveOptions& options = {});

}  // namespace efimov::hyper
