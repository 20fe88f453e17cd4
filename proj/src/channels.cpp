#include "efimov/channels.hpp"

#include "efimov/errors.hpp"
#include "efimov/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace efimov {

namespace {

using std::numbers::pi;
const double kInvSqrt3 = 1.0 / std::numbers::sqrt3;

// cos(s a) and sin(s a)/s as real functions of t = s^2 (imaginary s for t < 0). For t < 0 both
// carry the common positive factor e^{-sigma pi/2}, which leaves every root unchanged and keeps
// the values finite for large sigma (all conditions are linear in these functions, a <= pi/2).
double even_cos(double t, double a) {
  if (t >= 0.0) return std::cos(std::sqrt(t) * a);
  const double sigma = std::sqrt(-t);
  return 0.5 * (std::exp(sigma * (a - pi / 2)) + std::exp(-sigma * (a + pi / 2)));
}

double even_sinc(double t, double a) {
  if (t == 0.0) return a;
  if (t > 0.0) {
    const double s = std::sqrt(t);
    return std::sin(s * a) / s;
  }
  const double sigma = std::sqrt(-t);
  return 0.5 * (std::exp(sigma * (a - pi / 2)) - std::exp(-sigma * (a + pi / 2))) / sigma;
}

struct MassAngles {
  double gamma;
  double gamma_prime;
};

MassAngles mass_angles(double mass_ratio) {
  if (!(mass_ratio > 0.0)) throw DomainError("mass ratio must be positive");
  return {std::asin(mass_ratio / (1.0 + mass_ratio)),
          std::asin(std::sqrt(1.0 / (2.0 * (1.0 + mass_ratio))))};
}

// Symmetric matrix whose singular points in t are the channel exponents; x holds R/a
// for each component. The R/a dependence multiplies sin(s pi/2) (or cos for ell = 1
// closed forms), so roots insensitive to x are spurious.
using BranchMatrix = std::function<Eigen::MatrixXd(double t, const std::vector<double>& x)>;

Eigen::VectorXd branch_values(const BranchMatrix& m, double t, const std::vector<double>& x) {
  const Eigen::MatrixXd a = m(t, x);
  if (a.rows() == 1) return Eigen::VectorXd::Constant(1, a(0, 0));
  return symmetric_eigenvalues(a);
}

double branch_value(const BranchMatrix& m, double t, const std::vector<double>& x, int k) {
  return branch_values(m, t, x)[k];
}

bool is_spurious(const BranchMatrix& m, double t, const std::vector<double>& x) {
  std::vector<double> shifted = x;
  for (double& v : shifted) v += 1.0;
  const Eigen::MatrixXd a = m(t, shifted);
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const Eigen::VectorXd ev = branch_values(m, t, shifted);
  return ev.cwiseAbs().minCoeff() < 1e-8 * scale;
}

struct Root {
  double t;
  bool spurious;
};

// All roots of every eigen-branch on a grid of sigma in (0, sigma_max] and s in [0, s_max].
std::vector<Root> scan_roots(const BranchMatrix& m, const std::vector<double>& x, double sigma_max,
                             double s_max, int n_sigma, int n_s) {
  std::vector<double> grid;
  grid.reserve(n_sigma + n_s + 1);
  for (int i = n_sigma; i >= 1; --i) {
    const double sigma = sigma_max * i / n_sigma;
    grid.push_back(-sigma * sigma);
  }
  for (int i = 0; i <= n_s; ++i) {
    const double s = s_max * i / n_s;
    grid.push_back(s * s);
  }
  std::vector<Eigen::VectorXd> values;
  values.reserve(grid.size());
  for (double t : grid) values.push_back(branch_values(m, t, x));
  const int nb = static_cast<int>(values.front().size());

  std::vector<Root> roots;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    for (int k = 0; k < nb; ++k) {
      const double f0 = values[i][k], f1 = values[i + 1][k];
      if (f0 == 0.0 || (f0 < 0.0) != (f1 < 0.0)) {
        if (f1 == 0.0) continue;  // counted in the next cell
        double t = grid[i];
        if (f0 != 0.0) {
          const double tol = 1e-15 * std::max(1.0, std::abs(grid[i]));
          t = find_root([&](double tt) { return branch_value(m, tt, x, k); }, grid[i], grid[i + 1],
                        tol);
        }
        roots.push_back({t, is_spurious(m, t, x)});
      }
    }
  }
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.t < b.t; });
  return roots;
}

double default_sigma_max(const std::vector<double>& x) {
  double xm = 0.0;
  for (double v : x) xm = std::max(xm, v);
  return 1.5 * xm + 6.0;
}

std::vector<ChannelExponent> collect(const std::vector<Root>& roots, int n_max,
                                     const std::vector<std::pair<Pair, double>>& context) {
  std::vector<ChannelExponent> out;
  for (const Root& r : roots) {
    if (r.spurious) continue;
    ChannelExponent c;
    c.s_squared = r.t;
    c.index = static_cast<int>(out.size());
    c.r_over_a = context;
    out.push_back(c);
    if (static_cast<int>(out.size()) >= n_max) break;
  }
  return out;
}

std::vector<ChannelExponent> solve_channels(const BranchMatrix& m, const std::vector<double>& x,
                                            int n_max,
                                            const std::vector<std::pair<Pair, double>>& context) {
  if (n_max < 1) throw DomainError("n_max must be at least 1");
  double s_max = 2.0 * n_max + 6.0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    const double sigma_max = default_sigma_max(x);
    const int n_sigma = std::max(400, static_cast<int>(sigma_max / 0.01));
    const int n_s = static_cast<int>(s_max / 0.005);
    auto out = collect(scan_roots(m, x, sigma_max, s_max, n_sigma, n_s), n_max, context);
    if (static_cast<int>(out.size()) >= n_max) return out;
    s_max *= 2.0;
  }
  throw ConvergenceError("channel root scan did not find the requested number of exponents");
}

BranchMatrix boson_matrix() {
  return [](double t, const std::vector<double>& x) {
    Eigen::MatrixXd a(1, 1);
    a(0, 0) = -even_cos(t, pi / 2) + 8.0 * kInvSqrt3 * even_sinc(t, pi / 6) +
              x[0] * even_sinc(t, pi / 2);
    return a;
  };
}

BranchMatrix distinguishable_matrix(int n) {
  return [n](double t, const std::vector<double>& x) {
    const double c = even_cos(t, pi / 2);
    const double u = 4.0 * kInvSqrt3 * even_sinc(t, pi / 6);
    const double d = even_sinc(t, pi / 2);
    Eigen::MatrixXd a = Eigen::MatrixXd::Constant(n, n, u);
    for (int i = 0; i < n; ++i) a(i, i) = -c + x[i] * d;
    return a;
  };
}

BranchMatrix two_plus_one_matrix(double mass_ratio, Statistics stats, TwoPlusOnePattern pattern,
                                 int ell) {
  const MassAngles g = mass_angles(mass_ratio);
  const double sign = (stats == Statistics::fermions ? -1.0 : 1.0) * (ell % 2 == 0 ? 1.0 : -1.0);
  if (pattern == TwoPlusOnePattern::all_pairs) {
    if (stats != Statistics::bosons || ell != 0)
      throw DomainError("identical-pair resonance requires bosons with ell = 0");
    return [g](double t, const std::vector<double>& x) {
      const double c = even_cos(t, pi / 2);
      const double d = even_sinc(t, pi / 2);
      const double self = 2.0 * even_sinc(t, g.gamma) / std::sin(2.0 * g.gamma);
      const double cross =
          std::sqrt(2.0) * 2.0 * even_sinc(t, g.gamma_prime) / std::sin(2.0 * g.gamma_prime);
      Eigen::MatrixXd a(2, 2);
      a << -c + self + x[0] * d, cross, cross, -c + x[1] * d;
      return a;
    };
  }
  if (ell == 0) {
    return [g, sign](double t, const std::vector<double>& x) {
      Eigen::MatrixXd a(1, 1);
      a(0, 0) = -even_cos(t, pi / 2) + sign * 2.0 * even_sinc(t, g.gamma) / std::sin(2.0 * g.gamma) +
                x[0] * even_sinc(t, pi / 2);
      return a;
    };
  }
  if (ell == 1) {
    // hyperangular solution s cos(s(pi/2-a)) - tan(a) sin(s(pi/2-a)), divided by s
    return [g, sign](double t, const std::vector<double>& x) {
      const double sg = std::sin(g.gamma);
      Eigen::MatrixXd a(1, 1);
      a(0, 0) = (t - 1.0) * even_sinc(t, pi / 2) +
                sign * (2.0 * even_cos(t, g.gamma) / std::sin(2.0 * g.gamma) -
                        even_sinc(t, g.gamma) / (sg * sg)) +
                x[0] * even_cos(t, pi / 2);
      return a;
    };
  }
  throw DomainError("two_plus_one_exponent: ell > 1 is only available through critical_mass_ratio");
}

BranchMatrix triton_matrix() {
  return [](double t, const std::vector<double>& x) {
    const double c = even_cos(t, pi / 2);
    const double d = even_sinc(t, pi / 2);
    const double u = 4.0 * kInvSqrt3 * even_sinc(t, pi / 6);
    const double xp = 0.5 * (x[0] + x[1]);
    const double xm = 0.5 * (x[0] - x[1]);
    Eigen::MatrixXd a(2, 2);
    a << -c + 2.0 * u + xp * d, xm * d, xm * d, -c - u + xp * d;
    return a;
  };
}

BranchMatrix phi_channel_matrix() {
  return [](double t, const std::vector<double>& x) {
    Eigen::MatrixXd a(1, 1);
    a(0, 0) = -even_cos(t, pi / 2) - 4.0 * kInvSqrt3 * even_sinc(t, pi / 6) +
              x[0] * even_sinc(t, pi / 2);
    return a;
  };
}

struct SystemBranch {
  BranchMatrix matrix;
  int components;
};

SystemBranch system_branch(const ThreeBodySystem& s) {
  s.validate();
  if (s.statistics == Statistics::distinguishable) {
    const int n = static_cast<int>(s.resonant_pairs.size());
    return {distinguishable_matrix(n), n};
  }
  if (s.mass_ratio == 1.0 && s.statistics == Statistics::bosons && s.resonant_pairs.size() == 3 &&
      s.L == 0)
    return {boson_matrix(), 1};
  const bool hh = std::find(s.resonant_pairs.begin(), s.resonant_pairs.end(), Pair::p23) !=
                  s.resonant_pairs.end();
  const auto pattern = hh ? TwoPlusOnePattern::all_pairs : TwoPlusOnePattern::heavy_light_only;
  return {two_plus_one_matrix(s.mass_ratio, s.statistics, pattern, s.L), hh ? 2 : 1};
}

}  // namespace

const char* pair_name(Pair p) {
  switch (p) {
    case Pair::p12:
      return "12";
    case Pair::p23:
      return "23";
    case Pair::p31:
      return "31";
  }
  return "?";
}

ThreeBodySystem ThreeBodySystem::identical_bosons() { return {}; }

ThreeBodySystem ThreeBodySystem::distinguishable(std::vector<Pair> pairs) {
  ThreeBodySystem s;
  s.statistics = Statistics::distinguishable;
  s.resonant_pairs = std::move(pairs);
  return s;
}

ThreeBodySystem ThreeBodySystem::two_plus_one(double mass_ratio, Statistics stats,
                                              bool identical_pair_resonant, int L) {
  ThreeBodySystem s;
  s.mass_ratio = mass_ratio;
  s.statistics = stats;
  s.L = L;
  s.parity = (L % 2 == 0) ? 1 : -1;
  s.resonant_pairs = {Pair::p12, Pair::p31};
  if (identical_pair_resonant) s.resonant_pairs.push_back(Pair::p23);
  return s;
}

void ThreeBodySystem::validate() const {
  if (!(mass_ratio > 0.0)) throw DomainError("ThreeBodySystem: mass ratio must be positive");
  if (resonant_pairs.empty()) throw DomainError("ThreeBodySystem: no resonant pair");
  if (statistics == Statistics::distinguishable && mass_ratio != 1.0)
    throw DomainError("ThreeBodySystem: distinguishable particles are treated at equal masses");
}

double ChannelExponent::s_abs() const { return std::sqrt(std::abs(s_squared)); }

double ChannelExponent::scaling_factor() const {
  if (!efimov()) return std::numeric_limits<double>::infinity();
  return std::exp(pi / s_abs());
}

std::vector<ChannelExponent> boson_exponents(int n_max, double r_over_a) {
  return solve_channels(boson_matrix(), {r_over_a}, n_max,
                        {{Pair::p12, r_over_a}, {Pair::p23, r_over_a}, {Pair::p31, r_over_a}});
}

std::vector<ChannelExponent> distinguishable_exponents(
    const std::vector<std::pair<Pair, double>>& resonant_pairs, int n_max) {
  if (resonant_pairs.empty() || resonant_pairs.size() > 3)
    throw DomainError("distinguishable_exponents: need one to three resonant pairs");
  std::vector<double> x;
  for (const auto& p : resonant_pairs) x.push_back(p.second);
  return solve_channels(distinguishable_matrix(static_cast<int>(x.size())), x, n_max,
                        resonant_pairs);
}

ChannelExponent two_plus_one_exponent(double mass_ratio, Statistics statistics,
                                      TwoPlusOnePattern pattern, int ell, double r_over_a_hl,
                                      double r_over_a_hh) {
  if (statistics == Statistics::distinguishable)
    throw DomainError("two_plus_one_exponent: statistics must be bosons or fermions");
  std::vector<double> x{r_over_a_hl};
  std::vector<std::pair<Pair, double>> ctx{{Pair::p12, r_over_a_hl}, {Pair::p31, r_over_a_hl}};
  if (pattern == TwoPlusOnePattern::all_pairs) {
    x.push_back(r_over_a_hh);
    ctx.emplace_back(Pair::p23, r_over_a_hh);
  }
  return solve_channels(two_plus_one_matrix(mass_ratio, statistics, pattern, ell), x, 1, ctx)
      .front();
}

double heavy_light_condition(double s_squared, double mass_ratio, int ell, double r_over_a) {
  if (ell < 0) throw DomainError("heavy_light_condition: ell must be non-negative");
  const MassAngles g = mass_angles(mass_ratio);
  const double c = ell * (ell + 1.0);
  // tau = pi/2 - alpha; phi ~ tau^{ell+1} (1 + c2 tau^2) near tau = 0
  const double tau0 = 1e-3;
  const double c2 = (c / 3.0 - s_squared) / (4.0 * ell + 6.0);
  const double y0 = std::pow(tau0, ell + 1) * (1.0 + c2 * tau0 * tau0);
  const double dy0 = std::pow(tau0, ell) * ((ell + 1.0) + (ell + 3.0) * c2 * tau0 * tau0);
  RealFunction q = [&](double tau) {
    const double st = std::sin(tau);
    return c / (st * st) - s_squared;
  };
  OdeOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-300;
  double phi_gamma = 0.0;
  std::vector<OdeSample> at;
  if (g.gamma > 2.0 * tau0) {
    const std::array<double, 2> cps{g.gamma, pi / 2};
    at = integrate_linear_to(q, tau0, y0, dy0, cps, opt);
    phi_gamma = at[0].y;
  } else {
    const std::array<double, 1> cps{pi / 2};
    at = integrate_linear_to(q, tau0, y0, dy0, cps, opt);
    phi_gamma = std::pow(g.gamma, ell + 1) * (1.0 + c2 * g.gamma * g.gamma);
  }
  const OdeSample end = at.back();
  const double sign = (ell % 2 == 0) ? 1.0 : 1.0;  // +-(-1)^ell is +1 for allowed statistics
  return -end.dy + sign * 2.0 / std::sin(2.0 * g.gamma) * phi_gamma + r_over_a * end.y;
}

double critical_mass_ratio(int ell) {
  if (ell < 1) throw DomainError("critical_mass_ratio: ell = 0 is Efimov-attractive at all ratios");
  RealFunction f;
  if (ell == 1) {
    f = [](double log_ratio) {
      const MassAngles g = mass_angles(std::exp(log_ratio));
      const double sg = std::sin(g.gamma);
      return -pi / 2 + 2.0 / std::sin(2.0 * g.gamma) - g.gamma / (sg * sg);
    };
  } else {
    f = [ell](double log_ratio) {
      return heavy_light_condition(0.0, std::exp(log_ratio), ell);
    };
  }
  const auto brackets = sign_change_brackets(f, std::log(1.0), std::log(2000.0), 300);
  if (brackets.empty()) throw ConvergenceError("critical_mass_ratio: no crossing below 2000");
  const auto [lo, hi] = brackets.front();
  return std::exp(find_root(f, lo, hi, 1e-14));
}

TritonExponents triton_channel_exponents() {
  TritonExponents out;
  out.f_channel = solve_channels(boson_matrix(), {0.0}, 1, {}).front();
  out.phi_channel = solve_channels(phi_channel_matrix(), {0.0}, 1, {}).front();
  return out;
}

std::vector<ChannelExponent> triton_exponents(double r_over_a_t, double r_over_a_s, int n_max) {
  return solve_channels(triton_matrix(), {r_over_a_t, r_over_a_s}, n_max, {});
}

double lowest_exponent_squared(const ThreeBodySystem& system, double r_over_a) {
  const SystemBranch b = system_branch(system);
  const std::vector<double> x(b.components, r_over_a);
  return solve_channels(b.matrix, x, 1, {}).front().s_squared;
}

ChannelTable::ChannelTable(ThreeBodySystem system, double x_max, int points)
    : system_(std::move(system)) {
  if (points < 11 || points % 2 == 0) throw DomainError("ChannelTable: need an odd point count");
  const SystemBranch b = system_branch(system_);
  u_max_ = std::asinh(x_max);
  du_ = 2.0 * u_max_ / (points - 1);
  t_.assign(points, 0.0);
  const int mid = points / 2;
  t_unitarity_ = lowest_exponent_squared(system_, 0.0);
  t_[mid] = t_unitarity_;

  auto eval = [&](double t, double x) {
    return branch_values(b.matrix, t, std::vector<double>(b.components, x));
  };
  // continuation outward from unitarity, one root near the prediction
  auto follow = [&](int dir) {
    for (int step = 1; step <= mid; ++step) {
      const int i = mid + dir * step;
      const double x = std::sinh(-u_max_ + i * du_);
      const double prev = t_[i - dir];
      const double pred = step >= 2 ? 2.0 * prev - t_[i - 2 * dir] : prev;
      const double w = std::max(1e-3 * (1.0 + std::abs(prev)), 4.0 * std::abs(pred - prev));
      double best = std::numeric_limits<double>::quiet_NaN();
      for (int grow = 0; grow < 12 && std::isnan(best); ++grow) {
        const double lo = pred - w * (1 << grow), hi = pred + w * (1 << grow);
        const int cells = 16;
        Eigen::VectorXd f_prev = eval(lo, x);
        double t_prev = lo;
        for (int c = 1; c <= cells; ++c) {
          const double tc = lo + (hi - lo) * c / cells;
          const Eigen::VectorXd fc = eval(tc, x);
          for (int k = 0; k < fc.size(); ++k) {
            if ((f_prev[k] < 0.0) != (fc[k] < 0.0)) {
              const double r = find_root(
                  [&](double tt) { return eval(tt, x)[k]; }, t_prev, tc,
                  1e-14 * std::max(1.0, std::abs(tc)));
              if (std::isnan(best) || std::abs(r - pred) < std::abs(best - pred)) best = r;
            }
          }
          f_prev = fc;
          t_prev = tc;
        }
      }
      if (std::isnan(best)) throw ConvergenceError("ChannelTable: lost the channel root");
      if (step % 500 == 0 || step == mid) {
        const double check = lowest_exponent_squared(system_, x);
        if (std::abs(check - best) > 1e-6 * (1.0 + std::abs(best)))
          throw ConvergenceError("ChannelTable: continuation jumped to another channel at R/a = " +
                                 std::to_string(x));
      }
      t_[i] = best;
    }
  };
  follow(+1);
  follow(-1);
  dt_du_.assign(points, 0.0);
  for (int i = 0; i < points; ++i) {
    if (i == 0) {
      dt_du_[i] = (-3.0 * t_[0] + 4.0 * t_[1] - t_[2]) / (2.0 * du_);
    } else if (i == points - 1) {
      dt_du_[i] = (3.0 * t_[i] - 4.0 * t_[i - 1] + t_[i - 2]) / (2.0 * du_);
    } else if (i == 1 || i == points - 2) {
      dt_du_[i] = (t_[i + 1] - t_[i - 1]) / (2.0 * du_);
    } else {
      dt_du_[i] = (t_[i - 2] - 8.0 * t_[i - 1] + 8.0 * t_[i + 1] - t_[i + 2]) / (12.0 * du_);
    }
  }
}

double ChannelTable::operator()(double r_over_a) const {
  const double u = std::asinh(r_over_a);
  if (std::abs(u) >= u_max_) return lowest_exponent_squared(system_, r_over_a);
  const double pos = (u + u_max_) / du_;
  const int i = std::min(static_cast<int>(pos), static_cast<int>(t_.size()) - 2);
  const double h = pos - i;
  const double h2 = h * h, h3 = h2 * h;
  // cubic Hermite on [u_i, u_{i+1}]
  return (2 * h3 - 3 * h2 + 1) * t_[i] + (h3 - 2 * h2 + h) * du_ * dt_du_[i] +
         (-2 * h3 + 3 * h2) * t_[i + 1] + (h3 - h2) * du_ * dt_du_[i + 1];
}

double JacobiCoordinates::hyperradius() const {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += r[i] * r[i] + rho[i] * rho[i];
  return std::sqrt(s);
}

double JacobiCoordinates::hyperangle() const {
  double rr = 0.0, pp = 0.0;
  for (int i = 0; i < 3; ++i) {
    rr += r[i] * r[i];
    pp += rho[i] * rho[i];
  }
  return std::atan2(std::sqrt(rr), std::sqrt(pp));
}

namespace {

std::array<int, 3> pair_indices(Pair p) {
  switch (p) {
    case Pair::p12:
      return {0, 1, 2};
    case Pair::p23:
      return {1, 2, 0};
    case Pair::p31:
      return {2, 0, 1};
  }
  return {0, 1, 2};
}

int pair_order(Pair p) { return static_cast<int>(p); }

}  // namespace

JacobiCoordinates jacobi_from_positions(const std::array<Vec3, 3>& x, Pair pair) {
  const auto [i, j, k] = pair_indices(pair);
  JacobiCoordinates c;
  c.pair = pair;
  for (int d = 0; d < 3; ++d) {
    c.r[d] = x[j][d] - x[i][d];
    c.rho[d] = 2.0 * kInvSqrt3 * (x[k][d] - 0.5 * (x[i][d] + x[j][d]));
  }
  return c;
}

std::array<Vec3, 3> positions_from_jacobi(const JacobiCoordinates& c) {
  const auto [i, j, k] = pair_indices(c.pair);
  std::array<Vec3, 3> x{};
  for (int d = 0; d < 3; ++d) {
    x[k][d] = c.rho[d] * kInvSqrt3;
    x[j][d] = 0.5 * (c.r[d] - c.rho[d] * kInvSqrt3);
    x[i][d] = 0.5 * (-c.r[d] - c.rho[d] * kInvSqrt3);
  }
  return x;
}

JacobiCoordinates jacobi_transform(const JacobiCoordinates& c, Pair target) {
  const int steps = ((pair_order(target) - pair_order(c.pair)) % 3 + 3) % 3;
  const double h = std::numbers::sqrt3 / 2.0;
  JacobiCoordinates out = c;
  for (int n = 0; n < steps; ++n) {
    JacobiCoordinates next;
    for (int d = 0; d < 3; ++d) {
      next.r[d] = -0.5 * out.r[d] + h * out.rho[d];
      next.rho[d] = -h * out.r[d] - 0.5 * out.rho[d];
    }
    out.r = next.r;
    out.rho = next.rho;
  }
  out.pair = target;
  return out;
}

}  // namespace efimov
