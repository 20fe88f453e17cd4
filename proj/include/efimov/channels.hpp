#pragma once

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace efimov {

enum class Statistics { bosons, fermions, distinguishable };
enum class Pair { p12, p23, p31 };

const char* pair_name(Pair p);

// For the 2+1 family particles 2 and 3 share mass M, particle 1 has mass m;
// mass_ratio = M/m. Pair 12 is heavy-light, pair 23 is the identical pair.
struct ThreeBodySystem {
  double mass_ratio = 1.0;
  Statistics statistics = Statistics::bosons;
  std::vector<Pair> resonant_pairs{Pair::p12, Pair::p23, Pair::p31};
  int L = 0;
  int parity = 1;

  static ThreeBodySystem identical_bosons();
  static ThreeBodySystem distinguishable(std::vector<Pair> pairs);
  static ThreeBodySystem two_plus_one(double mass_ratio, Statistics stats, bool identical_pair_resonant,
                                      int L);
  void validate() const;
};

struct ChannelExponent {
  double s_squared = 0.0;
  int index = 0;
  std::vector<std::pair<Pair, double>> r_over_a;
  bool spurious = false;

  bool efimov() const { return s_squared < 0.0; }
  double s_abs() const;
  // e^{pi/|s|}, only meaningful for Efimov channels
  double scaling_factor() const;
};

// Roots of -s cos(s pi/2) + (8/sqrt3) sin(s pi/6) = -(R/a) sin(s pi/2), ordered by s^2,
// with the R-independent root s = 4 removed.
std::vector<ChannelExponent> boson_exponents(int n_max, double r_over_a);

// Equal-mass distinguishable particles; pairs not listed are non-resonant (removed).
std::vector<ChannelExponent> distinguishable_exponents(
    const std::vector<std::pair<Pair, double>>& resonant_pairs, int n_max);

enum class TwoPlusOnePattern { heavy_light_only, all_pairs };

// Lowest exponent of the 2+1 system. r_over_a_hl multiplies the heavy-light pairs,
// r_over_a_hh the identical pair (all_pairs pattern only).
ChannelExponent two_plus_one_exponent(double mass_ratio, Statistics statistics,
                                      TwoPlusOnePattern pattern, int ell,
                                      double r_over_a_hl = 0.0, double r_over_a_hh = 0.0);

// Determinant-free hyperangular condition for a resonant heavy-light pair and angular
// momentum ell of the spectator, integrated as an ODE in the hyperangle; value at s^2.
double heavy_light_condition(double s_squared, double mass_ratio, int ell, double r_over_a = 0.0);

// Mass ratio M/m above which the ell channel becomes Efimov-attractive.
double critical_mass_ratio(int ell);

struct TritonExponents {
  ChannelExponent f_channel;
  ChannelExponent phi_channel;
};

TritonExponents triton_channel_exponents();

// Coupled f/phi channels at finite R/a_triplet, R/a_singlet.
std::vector<ChannelExponent> triton_exponents(double r_over_a_t, double r_over_a_s, int n_max);

// Lowest s^2 of a system as a function of x = R/a applied to every resonant pair.
double lowest_exponent_squared(const ThreeBodySystem& system, double r_over_a);

// Precomputed lowest s^2(R/a) on a grid in asinh(R/a); direct solves outside the grid.
class ChannelTable {
 public:
  explicit ChannelTable(ThreeBodySystem system, double x_max = 2000.0, int points = 6001);
  double operator()(double r_over_a) const;
  const ThreeBodySystem& system() const { return system_; }
  double unitarity_value() const { return t_unitarity_; }

 private:
  ThreeBodySystem system_;
  double u_max_;
  double du_;
  std::vector<double> t_;
  std::vector<double> dt_du_;
  double t_unitarity_;
};

// Jacobi vectors for equal masses: r_ij = x_j - x_i, rho_ij,k = (2/sqrt3)(x_k - (x_i+x_j)/2).
using Vec3 = std::array<double, 3>;

struct JacobiCoordinates {
  Vec3 r{};
  Vec3 rho{};
  Pair pair = Pair::p12;

  double hyperradius() const;
  double hyperangle() const;  // alpha = atan(|r|/|rho|)
};

JacobiCoordinates jacobi_from_positions(const std::array<Vec3, 3>& x, Pair pair);
std::array<Vec3, 3> positions_from_jacobi(const JacobiCoordinates& c);  // centre of mass at origin
JacobiCoordinates jacobi_transform(const JacobiCoordinates& c, Pair target);

}  // namespace efimov
