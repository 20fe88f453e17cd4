#pragma once

#include "efimov/numerics.hpp"
#include "efimov/two_body.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

// Momentum-space three-body equation for the spectator amplitude F(P) of three identical bosons
// (hbar = m = 1), s-wave projected:
//   D(q) F(P) + (2/pi) int dQ Q^2 int_{-1}^{1} dx phi(|Q + P/2|) phi(|P + Q/2|) F(Q)
//                                              / (P^2 + Q^2 + P Q x - E) = 0
// with q = sqrt(3/4 P^2 - E) and D the inverse two-body amplitude. The matrix is symmetrized
// in v = sqrt(w) P F; bound states are energies where the symmetric matrix is singular.
namespace efimov::stm {

struct KernelOptions {
  int points = 400;
  double p_min = 0.0;  // 0: 1e-4 * scale
  double p_max = 0.0;  // 0: the cutoff for contact kernels, 50 * scale for separable ones
  int angular_points = 32;
};

class StmKernel {
 public:
  enum class Exchange { contact, contact_exact, separable };

  // Zero-range, narrow-resonance or effective-range (r_e <= 0) amplitude, exchange restricted
  // to Q < cutoff. exact_domain keeps both |Q + P/2| < cutoff and |P + Q/2| < cutoff and uses
  // the finite-cutoff amplitude.
  static StmKernel contact(const TMatrixModel& model, double cutoff, const KernelOptions& options = {},
                           bool exact_domain = false);
  // Separable model; a sharp-cutoff form factor maps onto the exact-domain contact kernel.
  static StmKernel separable(const TMatrixModel& model, const KernelOptions& options = {});
  // Coupled separable channels; weights[a][b] multiply the boson exchange term (symmetric).
  static StmKernel coupled(std::vector<TMatrixModel> channels,
                           std::vector<std::vector<double>> weights,
                           const KernelOptions& options = {});

  int channels() const { return static_cast<int>(models_.size()); }
  const QuadratureRule& grid() const { return grid_; }
  Exchange exchange_kind() const { return exchange_; }
  double cutoff() const { return cutoff_; }
  double scale() const { return scale_; }
  const TMatrixModel& model(int channel = 0) const { return models_.at(channel); }
  // largest relative change of the diagonal exchange entries when the angular rule is doubled
  double angular_error() const { return angular_error_; }

  // Inverse amplitudes D at every node with 1/a shifted by inv_a_shift in every channel.
  Vector diagonal(double energy, double inv_a_shift = 0.0) const;
  // Symmetrized exchange block matrix.
  DenseMatrix exchange(double energy) const;
  DenseMatrix matrix(double energy, double inv_a_shift = 0.0) const;
  // Eigenvalues of |D|^{-1/2} S |D|^{-1/2}, descending; requires D < 0 at every node.
  Vector scaled_eigenvalues(double energy, double inv_a_shift = 0.0) const;
  // Number of three-body levels below the energy.
  int count_levels(double energy, double inv_a_shift = 0.0) const;
  // Lowest two-body threshold (dimer energy) among the channels.
  std::optional<double> threshold(double inv_a_shift = 0.0) const;

  // s-wave projection int_{-1}^{1} dx phi_a phi_b / (P^2 + Q^2 + P Q x - E) by the angular rule.
  double angular_integral(double P, double Q, double energy, int row = 0, int col = 0) const;
  // Closed form ln((P^2 + Q^2 + P Q - E) / (P^2 + Q^2 - P Q - E)) / (P Q).
  static double log_kernel(double P, double Q, double energy);

  // F(P) off the grid from the solution on the grid (Nystrom interpolation), single channel.
  double interpolate(double P, double energy, const Vector& amplitude, double inv_a_shift = 0.0) const;

 private:
  QuadratureRule grid_;
  Exchange exchange_ = Exchange::contact;
  double cutoff_ = 0.0;
  double scale_ = 1.0;
  double angular_error_ = 0.0;
  std::vector<TMatrixModel> models_;
  std::vector<std::vector<double>> weights_;
  QuadratureRule angle_;
  // separable: w_x phi_a phi_b at every (block, i, j, x)
  std::vector<std::vector<double>> products_;
  std::vector<std::array<int, 2>> blocks_;

  void precompute();
  double contact_entry(double P, double Q, double energy) const;
  std::size_t product_offset(int block, int i, int j) const;
};

struct LevelSet {
  std::vector<double> energies;  // deepest first
  std::vector<double> kappas;    // sqrt(-E)
  std::vector<bool> resolved;    // spacing and grid floor checks
  std::optional<double> threshold;
  double p_min = 0.0;
  double p_max = 0.0;
  int points = 0;
  bool grid_flag = false;  // some level spacing below 3 grid cells in ln p
};

// All levels with binding wave number in [kappa_min, kappa_max], below the two-body threshold.
LevelSet solve_levels(const StmKernel& kernel, double kappa_min, double kappa_max,
                      double inv_a_shift = 0.0);

LevelSet solve_trimers_zero_range(double inv_a, double cutoff, double kappa_min, double kappa_max,
                                  KernelOptions options = {}, bool exact_domain = false);
LevelSet solve_trimers_separable(std::shared_ptr<const FormFactor> form, double inv_a,
                                 double kappa_min, double kappa_max, KernelOptions options = {});
// The cutoff defaults to 1000 / R*; the result is compared against twice the cutoff and a
// relative change above 1% throws ConvergenceError.
LevelSet solve_trimers_narrow_resonance(double inv_a, double r_star, double kappa_min,
                                        double kappa_max, KernelOptions options = {},
                                        double cutoff = 0.0);

struct ThresholdSet {
  std::vector<double> a_minus;     // ordered a_-^(n) < 0
  std::vector<double> spurious;    // |a| * scale below the validity ratio
  std::vector<double> unresolved;  // 1/|a| too close to the grid floor
};

// Generalized eigenvalue solve for 1/a at E = 0 (single channel); the kernel's own 1/a is ignored.
ThresholdSet threshold_scattering_lengths(const StmKernel& kernel, int n_max,
                                          double min_length_ratio = 10.0);
ThresholdSet threshold_scattering_lengths_zero_range(double cutoff, int n_max, KernelOptions options = {});

// a_-^(n) when the form factor itself depends on 1/a (EST of the zero-energy state at that
// scattering length): solves 1/a = -mu_n(form(1/a)) by secant iteration from a_guess.
double self_consistent_threshold(
    const std::function<std::shared_ptr<const FormFactor>(double)>& form_at, int level,
    double a_guess, const KernelOptions& options = {}, double min_length_ratio = 1.0);

// Scattering length a_*^(n) > 0 where level n meets the dimer threshold; searched in
// 1/a within [inv_a_lo, inv_a_hi] (both positive).
double dimer_crossing(const StmKernel& kernel, int level, double inv_a_lo, double inv_a_hi);

struct ThreeBodyParameter {
  double kappa_star = 0.0;  // kappa^(n) * lambda0^n
  int level = 0;
  double residual = 0.0;  // relative change against level n - 1
  std::vector<double> kappas;
};

// Extrapolated kappa_* from the deepest resolved unitarity level.
ThreeBodyParameter extrapolate_kappa_star(const LevelSet& levels, double s0);

class Wavefunction {
 public:
  Wavefunction(const StmKernel& kernel, double energy, Vector amplitude, double inv_a_shift = 0.0);

  double energy() const { return energy_; }
  const Vector& amplitude() const { return amplitude_; }  // F on the kernel grid
  double spectator(double P) const;
  // Psi(P, p) for Jacobi vectors; zero-range kernels use phi = 1 below the cutoff.
  double operator()(const std::array<double, 3>& P, const std::array<double, 3>& p) const;
  // int d^3P d^3p / (2 pi)^6 |Psi|^2 on a product rule
  double norm(int radial_points = 40, int angular_points = 16) const;

 private:
  const StmKernel* kernel_;
  double energy_;
  Vector amplitude_;
  double shift_;
  std::vector<double> table_p_;
  std::vector<double> table_f_;
  double form(double p) const;
};

Wavefunction reconstruct_wavefunction(const StmKernel& kernel, double energy, double inv_a_shift = 0.0);

// Two-channel nucleon model: triplet (deuteron) and singlet separable channels built from
// Poschl-Teller zero-energy states; lengths in fm, energies in hbar2_over_m units.
struct TritonInputs {
  double a_t = 5.4112;
  double r_et = 1.7436;
  double a_s = -23.7148;
  double r_es = 2.750;
  double hbar2_over_m = 0.0;  // MeV fm^2, required
};

struct ChannelFit {
  double lambda = 0.0;
  double r0 = 0.0;
  double inv_a = 0.0;
  double r_e = 0.0;
  double residual = 0.0;  // relative deviation of the separable model's effective range
};

// lambda, r0 such that the Poschl-Teller potential has (1/a, r_e); r_e > 0.
ChannelFit fit_poschl_teller(double inv_a, double r_e);

struct TritonModel {
  TritonInputs inputs;
  ChannelFit triplet_fit;
  ChannelFit singlet_fit;
  std::shared_ptr<const FormFactor> triplet;
  std::shared_ptr<const FormFactor> singlet;

  static TritonModel fit(const TritonInputs& inputs, const EstOptions& est = {});
  // 1/a = 0 in both channels (infinite scattering lengths)
  static TritonModel unitarity(const TritonInputs& inputs, const EstOptions& est = {});
  StmKernel kernel(const KernelOptions& options = {}) const;
};

struct TritonResult {
  double deuteron_energy = 0.0;  // binding, positive, in energy units
  std::vector<double> trimer_energies;  // negative, deepest first
  LevelSet levels;  // natural units (fm^-2)
};

// Bound states with binding between the deuteron (or zero) and e_max_binding.
TritonResult solve_triton(const TritonModel& model, double e_max_binding, KernelOptions options = {},
                          double e_min_binding = 0.0);

}  // namespace efimov::stm
