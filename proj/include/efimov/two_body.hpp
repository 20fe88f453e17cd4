#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

// Two-body layer in units hbar = m = 1; the radial equation is u'' = 2 mu (V - E) u
// with mu = 1/2 for equal masses, so E = k^2.
namespace efimov {

enum class PotentialKind {
  square_well,
  gaussian,
  poschl_teller,
  morse,
  yukawa,
  exponential,
  lennard_jones_6_12,
  vdw_hard_core,
  power_law_tail,
  hard_sphere,
};

const char* potential_kind_name(PotentialKind kind);
PotentialKind potential_kind_from_name(const std::string& name);

struct TwoBodyModel {
  PotentialKind kind = PotentialKind::square_well;
  // square_well/gaussian/exponential/yukawa/poschl_teller: V0 * shape(r / range)
  // morse: well depth; lennard_jones_6_12: epsilon; vdw_hard_core/power_law_tail: C_n
  double strength = 1.0;
  // length scale b, r0 or sigma; hard_sphere radius; morse width
  double range = 1.0;
  // hard wall radius for vdw_hard_core/power_law_tail; morse minimum position
  double core = 0.0;
  int exponent = 6;  // power_law_tail only
  double reduced_mass = 0.5;

  static TwoBodyModel square_well(double depth, double radius);
  static TwoBodyModel gaussian(double depth, double range);
  static TwoBodyModel exponential(double depth, double range);
  static TwoBodyModel yukawa(double strength, double range);
  // V = -lambda (lambda + 1) / (2 mu r0^2) sech^2(r / r0)
  static TwoBodyModel poschl_teller(double lambda, double r0);
  static TwoBodyModel morse(double depth, double r_min, double width);
  static TwoBodyModel lennard_jones(double epsilon, double sigma);
  static TwoBodyModel vdw_hard_core(double c6, double r_core);
  static TwoBodyModel power_law(int n, double c_n, double r_core);
  static TwoBodyModel hard_sphere(double radius);

  // Keys: kind, strength (or depth/c6/cn/epsilon/lambda), range, core, exponent, reduced_mass.
  static TwoBodyModel from_config(const std::map<std::string, std::string>& kv);

  void validate() const;
  double potential(double r) const;
  // Start of integration: hard wall, or where the solution is negligible for a repulsive core.
  double inner_radius() const;
  // Radius beyond which the potential is treated as zero (finite range) or as a pure
  // power law (power tails).
  double outer_radius() const;
  bool has_power_tail() const;
  int tail_exponent() const;      // 0 for finite range
  double tail_coefficient() const;  // C_n of the -C_n / r^n tail
  // l_n = [sqrt(2 mu C_n) / (n - 2)]^{2/(n-2)} for power tails, range otherwise
  double length_scale() const;

  TwoBodyModel with_strength(double s) const;
  TwoBodyModel with_core(double c) const;
};

// Power-law characteristic length.
double power_law_length(int n, double c_n, double reduced_mass = 0.5);
double power_law_coefficient(int n, double length, double reduced_mass = 0.5);

// Gamma((n-1)/(n-2)) sqrt(x) J_{1/(n-2)}(2 x^{-(n-2)/2}), the unitarity solution of a
// pure -C_n/r^n tail in units of l_n; tends to 1 at large x.
double universal_tail_wavefunction(int n, double x);
// Companion solution tending to x at large x.
double universal_tail_linear(int n, double x);
// Effective range 2 * integral of (1 - phi^2) for the universal tail function, in units of l_n.
double universal_effective_range(int n);

struct ZeroEnergyState {
  double inv_a = 0.0;
  double r_e = 0.0;
  int node_count = 0;
  double core_radius = 0.0;   // phi = 0 below
  double match_radius = 0.0;  // phi known in closed form above
  int tail_exponent = 0;      // 0: phi = 1 - r/a above match_radius
  double tail_length = 1.0;   // l_n
  // phi = tail_flat * chi1(r/l) + tail_linear * chi2(r/l) above match_radius for power tails
  double tail_flat = 1.0;
  double tail_linear = 0.0;
  double fit_residual = 0.0;
  double length_scale = 1.0;
  std::vector<double> r;
  std::vector<double> phi;
  // phi at increasing radii; the closed-form region is handled internally
  std::function<std::vector<double>(std::span<const double>)> evaluate_inner;

  double a() const;
  std::vector<double> evaluate(std::span<const double> radii) const;
  // local wave number of phi used to size quadrature panels
  std::function<double(double)> local_wavenumber;

  static ZeroEnergyState step_function(double radius);
  // Deep-potential limit: the universal tail solutions at all r, phi -> 1 - r inv_a;
  // r_e is left undefined away from unitarity.
  static ZeroEnergyState universal_tail(int n, double length, double inv_a = 0.0);
};

struct ZeroEnergyOptions {
  double rtol = 1e-11;
  int samples = 4000;
};

ZeroEnergyState solve_zero_energy(const TwoBodyModel& model, const ZeroEnergyOptions& options = {});

// Strength (or core radius for hard-core models) bracketing search that tunes 1/a to zero
// with the requested number of bound states.
TwoBodyModel tune_to_unitarity(const TwoBodyModel& model, int bound_states);

// k cot(delta) of the local potential at wave number k (s-wave).
double k_cot_delta(const TwoBodyModel& model, double k);

// Number of negative eigenvalues of a finite-difference Hamiltonian in a box [0, r_max].
int count_bound_states(const TwoBodyModel& model, double r_max, int points);

// Momentum profile of a rank-one separable potential, normalized phi(0) = 1.
class FormFactor {
 public:
  // theta(cutoff - p)
  static FormFactor sharp_cutoff(double cutoff);
  // phi(p) = cos(p b), the transform of a step function at b
  static FormFactor step(double radius);
  // generic analytic profile
  static FormFactor analytic(std::function<double(double)> profile, double scale,
                             std::string label);
  // log-grid table with derivatives; small-p model 1 - c p^2, zero beyond the last node;
  // scale 0 takes the last node / 400
  static FormFactor tabulated(std::vector<double> p, std::vector<double> phi,
                              std::vector<double> dphi, std::string label, double scale = 0.0);

  double operator()(double p) const;
  double cutoff() const { return cutoff_; }  // +inf unless sharp
  bool sharp() const { return std::isfinite(cutoff_); }
  double scale() const { return scale_; }  // inverse range used for grids
  double support() const { return support_; }  // largest p where phi is represented
  const std::string& label() const { return label_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

  // J(q) = integral over p of phi^2 / (p^2 + q^2), q > 0
  double propagator_integral(double q) const;
  // 1/a - (2/pi) q^2 J(q): inverse two-body amplitude at energy -q^2
  double inverse_amplitude(double inv_a, double q) const;
  // (2/pi) integral of phi^2, infinite for non-decaying profiles
  double square_integral_term() const;
  // separable strength g = 4 pi / (1/a - (2/pi) int phi^2); zero when the integral diverges
  double strength(double inv_a) const;
  // k cot(delta) of the separable model
  double k_cot_delta(double inv_a, double k) const;

 private:
  enum class Kind { sharp, step, analytic, table };
  Kind kind_ = Kind::sharp;
  double cutoff_ = std::numeric_limits<double>::infinity();
  double scale_ = 1.0;
  double support_ = std::numeric_limits<double>::infinity();
  double radius_ = 0.0;
  double small_p_coeff_ = 0.0;
  std::function<double(double)> profile_;
  std::vector<double> grid_;
  std::vector<double> log_grid_;
  std::vector<double> values_;
  std::vector<double> slopes_;  // d phi / d p
  std::string label_;
  double square_integral_ = 0.0;
  // quadrature of phi^2 dp: nodes, weights times phi^2, and the flat piece below low_edge_
  std::vector<double> square_nodes_;
  std::vector<double> square_weights_;
  double low_edge_ = 0.0;
  double square_low_ = 0.0;
  std::vector<double> j_breaks_;

  void cache_square_rule(const std::vector<double>& breaks, int per_panel);
};

struct EstOptions {
  int grid_points = 400;
  double p_min_factor = 1e-3;  // in units of 1 / length_scale
  double p_max_factor = 400.0;
  double linear_spacing = 0.05;  // momentum step above 2 / length_scale
  double inner_cut = 0.0;  // phi treated as zero below this radius (units of length_scale)
  double tail_factor = 25.0;  // analytic tail beyond tail_factor * length_scale
};

// phi(p) = 1 - p * integral of (phibar - phi) sin(p r) dr
FormFactor est_form_factor(const ZeroEnergyState& state, const EstOptions& options = {});
// Direct evaluation at one momentum (used to build tables and in tests).
double est_transform(const ZeroEnergyState& state, double p, const EstOptions& options = {});

enum class TMatrixKind { zero_range, effective_range, narrow_resonance, separable };

struct TMatrixModel {
  TMatrixKind kind = TMatrixKind::zero_range;
  double inv_a = 0.0;
  double cutoff = std::numeric_limits<double>::infinity();
  double r_e = 0.0;
  double r_star = 0.0;
  std::shared_ptr<const FormFactor> form;

  static TMatrixModel zero_range(double inv_a, double cutoff = std::numeric_limits<double>::infinity());
  static TMatrixModel effective_range(double inv_a, double r_e);
  static TMatrixModel narrow_resonance(double inv_a, double r_star);
  static TMatrixModel separable(double inv_a, std::shared_ptr<const FormFactor> form);

  // -(k cot delta - i k) continued to k = i q: vanishes at a dimer pole.
  double inverse_amplitude(double q) const;
};

// Dimer binding wave number (E = -q^2), empty if there is no bound pole.
std::optional<double> dimer_wavenumber(const TMatrixModel& model);
std::optional<double> dimer_energy(const TMatrixModel& model);
// (1/a^2)(1 + r_e/(2a))^2
double first_order_dimer_energy(double a, double r_e);

// 1/a_B = (1 - sqrt(1 - 2 r_e / a)) / r_e; empty for the complex (virtual-state) branch.
std::optional<double> inverse_pole_length(double inv_a, double r_e);
std::optional<double> a_B(double a, double r_e);

}  // namespace efimov
