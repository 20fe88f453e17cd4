#include "efimov/two_body.hpp"

#include "efimov/errors.hpp"
#include "efimov/numerics.hpp"
#include "efimov/special.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace efimov {

namespace {

using std::numbers::pi;

struct KindName {
  PotentialKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {PotentialKind::square_well, "square_well"},
    {PotentialKind::gaussian, "gaussian"},
    {PotentialKind::poschl_teller, "poschl_teller"},
    {PotentialKind::morse, "morse"},
    {PotentialKind::yukawa, "yukawa"},
    {PotentialKind::exponential, "exponential"},
    {PotentialKind::lennard_jones_6_12, "lennard_jones_6_12"},
    {PotentialKind::vdw_hard_core, "vdw_hard_core"},
    {PotentialKind::power_law_tail, "power_law_tail"},
    {PotentialKind::hard_sphere, "hard_sphere"},
};

double parse_double(const std::map<std::string, std::string>& kv, const std::string& key,
                    double fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for '" + key + "': " + it->second);
  }
}

// Solutions of u'' = -(2 mu C_n / r^n) u in units of l_n, with nu = 1/(n-2) and
// z = 2 x^{-1/(2 nu)}: chi1 -> 1 and chi2 -> x at large x.
struct TailBasis {
  double chi1, dchi1, chi2, dchi2;
};

TailBasis tail_basis(int n, double x) {
  const double nu = 1.0 / (n - 2);
  const double z = 2.0 * std::pow(x, -0.5 * (n - 2));
  if (!(z < 1e15)) throw DomainError("power-law tail basis: radius too small for Bessel evaluation");
  const double dz = -z / (2.0 * nu * x);
  const double g1 = boost::math::tgamma(1.0 + nu), g2 = boost::math::tgamma(1.0 - nu);
  const double sx = std::sqrt(x);
  const double jp = boost::math::cyl_bessel_j(nu, z);
  const double jm = boost::math::cyl_bessel_j(-nu, z);
  const double djp = boost::math::cyl_bessel_j_prime(nu, z);
  const double djm = boost::math::cyl_bessel_j_prime(-nu, z);
  return {g1 * sx * jp, g1 * (0.5 * jp / sx + sx * djp * dz), g2 * sx * jm,
          g2 * (0.5 * jm / sx + sx * djm * dz)};
}

// Large-x series coefficients: chi1 = sum_m c_m y^m, chi2 = x sum_m d_m y^m, y = x^{-(n-2)}.
void tail_series(int n, int terms, std::vector<double>& c, std::vector<double>& d) {
  const double nu = 1.0 / (n - 2);
  c.assign(terms, 0.0);
  d.assign(terms, 0.0);
  c[0] = d[0] = 1.0;
  for (int m = 1; m < terms; ++m) {
    c[m] = -c[m - 1] / (m * (m + nu));
    d[m] = -d[m - 1] / (m * (m - nu));
  }
}

double integrand_checked(double v) {
  if (!std::isfinite(v)) throw EvaluationError("non-finite integrand");
  return v;
}

}  // namespace

const char* potential_kind_name(PotentialKind kind) {
  for (const auto& k : kKindNames)
    if (k.kind == kind) return k.name;
  return "unknown";
}

PotentialKind potential_kind_from_name(const std::string& name) {
  for (const auto& k : kKindNames)
    if (name == k.name) return k.kind;
  throw ConfigError("unknown potential kind: " + name);
}

TwoBodyModel TwoBodyModel::square_well(double depth, double radius) {
  TwoBodyModel m;
  m.kind = PotentialKind::square_well;
  m.strength = depth;
  m.range = radius;
  return m;
}

TwoBodyModel TwoBodyModel::gaussian(double depth, double range) {
  TwoBodyModel m = square_well(depth, range);
  m.kind = PotentialKind::gaussian;
  return m;
}

TwoBodyModel TwoBodyModel::exponential(double depth, double range) {
  TwoBodyModel m = square_well(depth, range);
  m.kind = PotentialKind::exponential;
  return m;
}

TwoBodyModel TwoBodyModel::yukawa(double strength, double range) {
  TwoBodyModel m = square_well(strength, range);
  m.kind = PotentialKind::yukawa;
  return m;
}

TwoBodyModel TwoBodyModel::poschl_teller(double lambda, double r0) {
  TwoBodyModel m;
  m.kind = PotentialKind::poschl_teller;
  m.range = r0;
  m.strength = lambda * (lambda + 1.0) / (2.0 * m.reduced_mass * r0 * r0);
  return m;
}

TwoBodyModel TwoBodyModel::morse(double depth, double r_min, double width) {
  TwoBodyModel m;
  m.kind = PotentialKind::morse;
  m.strength = depth;
  m.core = r_min;
  m.range = width;
  return m;
}

TwoBodyModel TwoBodyModel::lennard_jones(double epsilon, double sigma) {
  TwoBodyModel m;
  m.kind = PotentialKind::lennard_jones_6_12;
  m.strength = epsilon;
  m.range = sigma;
  return m;
}

TwoBodyModel TwoBodyModel::vdw_hard_core(double c6, double r_core) {
  TwoBodyModel m;
  m.kind = PotentialKind::vdw_hard_core;
  m.strength = c6;
  m.core = r_core;
  m.exponent = 6;
  m.range = power_law_length(6, c6, m.reduced_mass);
  return m;
}

TwoBodyModel TwoBodyModel::power_law(int n, double c_n, double r_core) {
  TwoBodyModel m = vdw_hard_core(c_n, r_core);
  m.kind = PotentialKind::power_law_tail;
  m.exponent = n;
  m.range = power_law_length(n, c_n, m.reduced_mass);
  return m;
}

TwoBodyModel TwoBodyModel::hard_sphere(double radius) {
  TwoBodyModel m;
  m.kind = PotentialKind::hard_sphere;
  m.strength = 0.0;
  m.range = radius;
  return m;
}

TwoBodyModel TwoBodyModel::from_config(const std::map<std::string, std::string>& kv) {
  const auto it = kv.find("kind");
  if (it == kv.end()) throw ConfigError("potential definition needs a 'kind' key");
  TwoBodyModel m;
  m.kind = potential_kind_from_name(it->second);
  m.reduced_mass = parse_double(kv, "reduced_mass", 0.5);
  double strength = parse_double(kv, "strength", std::numeric_limits<double>::quiet_NaN());
  for (const char* alias : {"depth", "c6", "cn", "epsilon"})
    if (std::isnan(strength)) strength = parse_double(kv, alias, strength);
  m.range = parse_double(kv, "range", 1.0);
  m.core = parse_double(kv, "core", 0.0);
  m.exponent = static_cast<int>(parse_double(kv, "exponent", 6.0));
  if (m.kind == PotentialKind::poschl_teller && kv.count("lambda")) {
    const double lambda = parse_double(kv, "lambda", 1.0);
    strength = lambda * (lambda + 1.0) / (2.0 * m.reduced_mass * m.range * m.range);
  }
  if (std::isnan(strength)) strength = m.kind == PotentialKind::hard_sphere ? 0.0 : 1.0;
  m.strength = strength;
  if (m.kind == PotentialKind::vdw_hard_core) m.exponent = 6;
  if (m.has_power_tail() && m.kind != PotentialKind::lennard_jones_6_12)
    m.range = power_law_length(m.exponent, m.strength, m.reduced_mass);
  m.validate();
  return m;
}

void TwoBodyModel::validate() const {
  if (!(range > 0.0)) throw DomainError("TwoBodyModel: range must be positive");
  if (!(reduced_mass > 0.0)) throw DomainError("TwoBodyModel: reduced mass must be positive");
  if (kind == PotentialKind::power_law_tail && exponent <= 3)
    throw DomainError("TwoBodyModel: power-law tail needs n > 3");
  if ((kind == PotentialKind::vdw_hard_core || kind == PotentialKind::power_law_tail) &&
      !(core > 0.0))
    throw DomainError("TwoBodyModel: hard-core radius must be positive");
  if (!std::isfinite(strength)) throw DomainError("TwoBodyModel: strength must be finite");
}

double TwoBodyModel::potential(double r) const {
  const double x = r / range;
  switch (kind) {
    case PotentialKind::square_well:
      return r < range ? -strength : 0.0;
    case PotentialKind::gaussian:
      return -strength * std::exp(-x * x);
    case PotentialKind::exponential:
      return -strength * std::exp(-x);
    case PotentialKind::yukawa:
      return -strength * std::exp(-x) / x;
    case PotentialKind::poschl_teller: {
      const double c = std::cosh(x);
      return -strength / (c * c);
    }
    case PotentialKind::morse: {
      const double e = std::exp(-(r - core) / range);
      return strength * (e * e - 2.0 * e);
    }
    case PotentialKind::lennard_jones_6_12: {
      const double s6 = std::pow(range / r, 6);
      return 4.0 * strength * (s6 * s6 - s6);
    }
    case PotentialKind::vdw_hard_core:
    case PotentialKind::power_law_tail:
      return r < core ? std::numeric_limits<double>::infinity() : -strength / std::pow(r, exponent);
    case PotentialKind::hard_sphere:
      return r < range ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return 0.0;
}

double TwoBodyModel::inner_radius() const {
  switch (kind) {
    case PotentialKind::vdw_hard_core:
    case PotentialKind::power_law_tail:
      return core;
    case PotentialKind::hard_sphere:
      return range;
    case PotentialKind::lennard_jones_6_12:
      return 0.5 * range;
    case PotentialKind::yukawa:
      return 1e-9 * range;
    default:
      return 0.0;
  }
}

double TwoBodyModel::outer_radius() const {
  switch (kind) {
    case PotentialKind::square_well:
      return range;
    case PotentialKind::hard_sphere:
      return 2.0 * range;
    case PotentialKind::gaussian:
      return 8.0 * range;
    case PotentialKind::exponential:
    case PotentialKind::yukawa:
    case PotentialKind::poschl_teller:
      return 45.0 * range;
    case PotentialKind::morse:
      return core + 45.0 * range;
    case PotentialKind::lennard_jones_6_12:
      return 12.0 * range;
    case PotentialKind::vdw_hard_core:
    case PotentialKind::power_law_tail:
      return std::max(2.0 * core, 3.0 * length_scale());
  }
  return range;
}

bool TwoBodyModel::has_power_tail() const { return tail_exponent() > 0; }

int TwoBodyModel::tail_exponent() const {
  switch (kind) {
    case PotentialKind::lennard_jones_6_12:
    case PotentialKind::vdw_hard_core:
      return 6;
    case PotentialKind::power_law_tail:
      return exponent;
    default:
      return 0;
  }
}

double TwoBodyModel::tail_coefficient() const {
  if (kind == PotentialKind::lennard_jones_6_12) return 4.0 * strength * std::pow(range, 6);
  if (has_power_tail()) return strength;
  return 0.0;
}

double TwoBodyModel::length_scale() const {
  if (has_power_tail()) return power_law_length(tail_exponent(), tail_coefficient(), reduced_mass);
  return range;
}

TwoBodyModel TwoBodyModel::with_strength(double s) const {
  TwoBodyModel m = *this;
  m.strength = s;
  if (m.kind == PotentialKind::vdw_hard_core || m.kind == PotentialKind::power_law_tail)
    m.range = power_law_length(m.exponent, s, m.reduced_mass);
  return m;
}

TwoBodyModel TwoBodyModel::with_core(double c) const {
  TwoBodyModel m = *this;
  m.core = c;
  return m;
}

double power_law_length(int n, double c_n, double reduced_mass) {
  if (n <= 2 || !(c_n > 0.0)) throw DomainError("power_law_length: need n > 2 and C_n > 0");
  return std::pow(std::sqrt(2.0 * reduced_mass * c_n) / (n - 2), 2.0 / (n - 2));
}

double power_law_coefficient(int n, double length, double reduced_mass) {
  const double root = (n - 2) * std::pow(length, 0.5 * (n - 2));
  return root * root / (2.0 * reduced_mass);
}

double universal_tail_wavefunction(int n, double x) {
  if (n <= 3 || !(x > 0.0)) throw DomainError("universal_tail_wavefunction: need n > 3, x > 0");
  return tail_basis(n, x).chi1;
}

double universal_tail_linear(int n, double x) {
  if (n <= 3 || !(x > 0.0)) throw DomainError("universal_tail_linear: need n > 3, x > 0");
  return tail_basis(n, x).chi2;
}

double universal_effective_range(int n) {
  if (n <= 3) throw DomainError("universal_effective_range: need n > 3");
  const double nu = 1.0 / (n - 2);
  const double g1 = boost::math::tgamma(1.0 + nu);
  // below x0 phi^2 averages to Gamma^2 x^{n/2} / (2 pi)
  const double x0 = 0.04;
  double half = x0 - g1 * g1 / (2.0 * pi) * std::pow(x0, 0.5 * n + 1.0) / (0.5 * n + 1.0);
  // oscillatory region in z = 2 x^{-(n-2)/2}, panels of width <= 0.5
  const double x1 = 3.0;
  auto z_of = [&](double x) { return 2.0 * std::pow(x, -0.5 * (n - 2)); };
  auto x_of = [&](double z) { return std::pow(0.5 * z, -2.0 * nu); };
  const double z_lo = z_of(x1), z_hi = z_of(x0);
  const int panels = static_cast<int>(std::ceil((z_hi - z_lo) / 0.5));
  std::vector<double> breaks(panels + 1);
  for (int i = 0; i <= panels; ++i) breaks[i] = z_lo + (z_hi - z_lo) * i / panels;
  const QuadratureRule rz = composite_gauss_legendre(breaks, 10);
  half += rz.integrate([&](double z) {
    const double x = x_of(z);
    const double f = universal_tail_wavefunction(n, x);
    return (1.0 - f * f) * 2.0 * nu * x / z;
  });
  // tail x > x1 with t = x1 / x
  const QuadratureRule rt = gauss_legendre(48, 0.0, 1.0);
  half += rt.integrate([&](double t) {
    const double x = x1 / t;
    const double f = universal_tail_wavefunction(n, x);
    return (1.0 - f * f) * x1 / (t * t);
  });
  return 2.0 * half;
}

double ZeroEnergyState::a() const {
  return inv_a == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / inv_a;
}

std::vector<double> ZeroEnergyState::evaluate(std::span<const double> radii) const {
  std::vector<double> out(radii.size(), 0.0);
  std::vector<double> inner;
  std::vector<std::size_t> inner_idx;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    if (r <= core_radius) continue;
    if (r <= match_radius && evaluate_inner) {
      inner.push_back(r);
      inner_idx.push_back(i);
    } else if (tail_exponent > 0) {
      const TailBasis b = tail_basis(tail_exponent, r / tail_length);
      out[i] = tail_flat * b.chi1 + tail_linear * b.chi2;
    } else {
      out[i] = 1.0 - r * inv_a;
    }
  }
  if (!inner.empty()) {
    const std::vector<double> v = evaluate_inner(inner);
    for (std::size_t k = 0; k < inner.size(); ++k) out[inner_idx[k]] = v[k];
  }
  return out;
}

ZeroEnergyState ZeroEnergyState::step_function(double radius) {
  if (!(radius > 0.0)) throw DomainError("step_function: radius must be positive");
  ZeroEnergyState s;
  s.inv_a = 0.0;
  s.r_e = 2.0 * radius;
  s.core_radius = radius;
  s.match_radius = radius;
  s.length_scale = radius;
  s.local_wavenumber = [](double) { return 0.0; };
  for (int i = 0; i <= 200; ++i) {
    const double r = 3.0 * radius * i / 200;
    s.r.push_back(r);
    s.phi.push_back(r > radius ? 1.0 : 0.0);
  }
  return s;
}

ZeroEnergyState ZeroEnergyState::universal_tail(int n, double length, double inv_a) {
  if (n <= 3 || !(length > 0.0)) throw DomainError("universal_tail: need n > 3 and length > 0");
  ZeroEnergyState s;
  s.inv_a = inv_a;
  s.r_e = inv_a == 0.0 ? universal_effective_range(n) * length
                       : std::numeric_limits<double>::quiet_NaN();
  s.tail_linear = -length * inv_a;
  s.node_count = -1;  // deep-potential limit: unbounded
  s.tail_exponent = n;
  s.tail_length = length;
  s.length_scale = length;
  // oscillations below 0.03 l carry negligible weight
  s.core_radius = 0.03 * length;
  s.match_radius = s.core_radius;
  s.local_wavenumber = [n, length](double r) {
    const double x = r / length;
    return 0.5 * (n - 2) * 2.0 * std::pow(x, -0.5 * n) / length;
  };
  for (int i = 1; i <= 400; ++i) {
    const double r = 10.0 * length * i / 400;
    s.r.push_back(r);
    s.phi.push_back(r > s.core_radius ? universal_tail_wavefunction(n, r / length) +
                                            s.tail_linear * universal_tail_linear(n, r / length)
                                      : 0.0);
  }
  return s;
}

namespace {

struct RawSolution {
  double u, du, y2;
  int nodes;
};

RealFunction radial_coefficient(const TwoBodyModel& m) {
  const double two_mu = 2.0 * m.reduced_mass;
  return [m, two_mu](double r) { return two_mu * m.potential(r); };
}

// Radii where the potential jumps; steps must not straddle them.
std::vector<double> discontinuities(const TwoBodyModel& m) {
  if (m.kind == PotentialKind::square_well) return {m.range};
  return {};
}

OdeResult integrate_segments(const RealFunction& q, const TwoBodyModel& m, double r0, double r1,
                             const OdeOptions& opt) {
  std::vector<double> cuts{r0};
  for (double b : discontinuities(m))
    if (b > r0 && b < r1) cuts.push_back(b);
  cuts.push_back(r1);
  OdeResult total;
  total.dy = 1.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    // stages on a segment end see the interior side of a jump
    const double lo = cuts[i], hi = cuts[i + 1], eps = 1e-13 * (hi - lo);
    const RealFunction inner = [&q, lo, hi, eps](double r) {
      return q(std::clamp(r, lo + eps, hi - eps));
    };
    const OdeResult part = integrate_linear(inner, lo, hi, total.y, total.dy, opt);
    total.nodes += part.nodes;
    total.y2_integral += part.y2_integral;
    total.y = part.y;
    total.dy = part.dy;
  }
  return total;
}

RawSolution integrate_zero_energy(const TwoBodyModel& m, double r1, double rtol) {
  OdeOptions opt;
  opt.rtol = rtol;
  opt.atol = 1e-300;
  opt.first_step = 1e-4 * m.length_scale();
  const OdeResult res = integrate_segments(radial_coefficient(m), m, m.inner_radius(), r1, opt);
  return {res.y, res.dy, res.y2_integral, res.nodes};
}

struct Asymptote {
  double flat, linear;  // u -> flat * chi1 + linear * chi2 (power tail) or flat + linear r
};

Asymptote match(const TwoBodyModel& m, double r, double u, double du) {
  const int n = m.tail_exponent();
  if (n == 0) return {u - r * du, du};
  const double l = m.length_scale();
  const TailBasis b = tail_basis(n, r / l);
  // u = A chi1 + B chi2, u' = (A chi1' + B chi2') / l
  const double w = b.chi1 * b.dchi2 - b.chi2 * b.dchi1;
  const double dux = du * l;
  return {(u * b.dchi2 - dux * b.chi2) / w, (b.chi1 * dux - b.dchi1 * u) / w};
}

}  // namespace

ZeroEnergyState solve_zero_energy(const TwoBodyModel& model, const ZeroEnergyOptions& options) {
  model.validate();
  const double r0 = model.inner_radius();
  const double R = model.outer_radius();
  const double l = model.length_scale();
  const int n = model.tail_exponent();
  const RawSolution sol = integrate_zero_energy(model, R, options.rtol);
  const Asymptote asym = match(model, R, sol.u, sol.du);
  const double norm = asym.flat;
  if (norm == 0.0 || !std::isfinite(norm))
    throw ConvergenceError("solve_zero_energy: vanishing asymptotic amplitude (a = 0)");

  ZeroEnergyState s;
  s.core_radius = r0;
  s.match_radius = R;
  s.tail_exponent = n;
  s.tail_length = l;
  s.length_scale = l;
  s.tail_flat = 1.0;
  s.tail_linear = asym.linear / norm;
  s.inv_a = n == 0 ? -asym.linear / norm : -(asym.linear / norm) / l;

  // consistency of the asymptote at a second radius
  const RawSolution far = integrate_zero_energy(model, 2.0 * R, options.rtol);
  const Asymptote asym2 = match(model, 2.0 * R, far.u, far.du);
  const double scale = std::max(std::abs(asym.flat), std::abs(asym.linear) * (n == 0 ? R : R / l));
  s.fit_residual = std::max(std::abs(asym2.flat - asym.flat), std::abs(asym2.linear - asym.linear) *
                                                                  (n == 0 ? R : R / l)) /
                   scale;
  if (s.fit_residual > 1e-5)
    throw ConvergenceError("solve_zero_energy: asymptotic fit residual " +
                           std::to_string(s.fit_residual) + " exceeds 1e-5");

  s.node_count = sol.nodes;
  if (s.inv_a > 0.0 && 1.0 / s.inv_a > R) ++s.node_count;

  // effective range: 1/2 r_e = int (phibar^2 - phi^2)
  const double ia = s.inv_a;
  double half = R - R * R * ia + R * R * R * ia * ia / 3.0 - sol.y2 / (norm * norm);
  if (n > 0) {
    if (std::abs(ia) * l > 1e-8 && n <= 5) {  // log-divergent away from unitarity
      half = std::numeric_limits<double>::quiet_NaN();
    } else {
      const double xr = R / l;
      const double b = s.tail_linear;
      const QuadratureRule rt = gauss_legendre(64, 0.0, 1.0);
      half += l * rt.integrate([&](double t) {
        if (t == 0.0) return 0.0;
        const double x = xr / t;
        const TailBasis tb = tail_basis(n, x);
        const double bar = 1.0 + b * x;
        const double phi = tb.chi1 + b * tb.chi2;
        return (bar * bar - phi * phi) * xr / (t * t);
      });
    }
  }
  s.r_e = 2.0 * half;

  const TwoBodyModel m = model;
  const double rtol = options.rtol;
  s.evaluate_inner = [m, r0, norm, rtol](std::span<const double> radii) {
    std::vector<double> out(radii.size(), 0.0);
    std::vector<double> pts;
    for (double r : radii)
      if (r > r0) pts.push_back(r);
    if (pts.empty()) return out;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<double> cuts{r0};
    for (double b : discontinuities(m))
      if (b > r0 && b < pts.back()) cuts.push_back(b);
    cuts.push_back(pts.back());
    OdeOptions opt;
    opt.rtol = rtol;
    opt.atol = 1e-300;
    const RealFunction q = radial_coefficient(m);
    std::vector<double> values(pts.size());
    double y = 0.0, dy = 1.0;
    std::size_t next = 0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double lo = cuts[c], hi = cuts[c + 1], eps = 1e-13 * (hi - lo);
      std::vector<double> stops;
      while (next < pts.size() && pts[next] <= hi) stops.push_back(pts[next++]);
      if (stops.empty() || stops.back() < hi) stops.push_back(hi);
      opt.first_step = std::min(1e-4 * m.length_scale(), 0.5 * (stops.front() - lo));
      const RealFunction inner = [&q, lo, hi, eps](double r) {
        return q(std::clamp(r, lo + eps, hi - eps));
      };
      const auto samples = integrate_linear_to(inner, lo, y, dy, stops, opt);
      for (const auto& smp : samples) {
        const auto it = std::lower_bound(pts.begin(), pts.end(), smp.x);
        if (it != pts.end() && *it == smp.x) values[it - pts.begin()] = smp.y / norm;
      }
      y = samples.back().y;
      dy = samples.back().dy;
    }
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (!(radii[i] > r0)) continue;
      out[i] = values[std::lower_bound(pts.begin(), pts.end(), radii[i]) - pts.begin()];
    }
    return out;
  };
  const double two_mu = 2.0 * model.reduced_mass;
  s.local_wavenumber = [m, two_mu](double r) {
    const double v = m.potential(r);
    return std::isfinite(v) && v < 0.0 ? std::sqrt(-two_mu * v) : 0.0;
  };

  const int ns = std::max(10, options.samples);
  const double r_hi = std::max(1.5 * R, n > 0 ? 10.0 * l : R);
  std::vector<double> grid;
  for (int i = 1; i <= ns; ++i) grid.push_back(r_hi * i / ns);
  s.r = grid;
  s.phi = s.evaluate(grid);
  return s;
}

namespace {

int state_count(const TwoBodyModel& m) {
  const RawSolution sol = integrate_zero_energy(m, m.outer_radius(), 1e-10);
  const Asymptote a = match(m, m.outer_radius(), sol.u, sol.du);
  int count = sol.nodes;
  const int n = m.tail_exponent();
  const double inv_a = n == 0 ? -a.linear / a.flat : -(a.linear / a.flat) / m.length_scale();
  if (inv_a > 0.0 && 1.0 / inv_a > m.outer_radius()) ++count;
  return count;
}

// Resonance indicator without poles: zero exactly when the linear asymptote vanishes.
double resonance_indicator(const TwoBodyModel& m) {
  const RawSolution sol = integrate_zero_energy(m, m.outer_radius(), 1e-12);
  const Asymptote a = match(m, m.outer_radius(), sol.u, sol.du);
  const double lin = a.linear * (m.tail_exponent() == 0 ? m.length_scale() : 1.0);
  return lin / std::hypot(a.flat, lin);
}

}  // namespace

TwoBodyModel tune_to_unitarity(const TwoBodyModel& model, int bound_states) {
  if (bound_states < 1) throw DomainError("tune_to_unitarity: need at least one bound state");
  const bool by_core =
      model.kind == PotentialKind::vdw_hard_core || model.kind == PotentialKind::power_law_tail;
  // parameter t increases the attraction
  auto build = [&](double t) {
    return by_core ? model.with_core(std::exp(-t)) : model.with_strength(std::exp(t));
  };
  double t_lo = by_core ? -std::log(model.core) : std::log(std::max(model.strength, 1e-6));
  int guard = 0;
  while (state_count(build(t_lo)) >= bound_states) {
    t_lo -= 0.5;
    if (++guard > 200) throw ConvergenceError("tune_to_unitarity: cannot bracket from below");
  }
  double t_hi = t_lo + 0.5;
  while (state_count(build(t_hi)) < bound_states) {
    t_lo = t_hi;
    t_hi += 0.5;
    if (++guard > 400) throw ConvergenceError("tune_to_unitarity: cannot bracket from above");
  }
  while (t_hi - t_lo > 1e-7) {
    const double mid = 0.5 * (t_lo + t_hi);
    (state_count(build(mid)) < bound_states ? t_lo : t_hi) = mid;
  }
  const double t = find_root([&](double tt) { return resonance_indicator(build(tt)); }, t_lo, t_hi,
                             1e-15);
  return build(t);
}

double k_cot_delta(const TwoBodyModel& model, double k) {
  if (!(k > 0.0)) throw DomainError("k_cot_delta: k must be positive");
  const double two_mu = 2.0 * model.reduced_mass;
  const double e = k * k / two_mu;
  const double R = model.has_power_tail() ? 400.0 * model.length_scale() : model.outer_radius();
  const TwoBodyModel m = model;
  RealFunction q = [m, two_mu, e](double r) { return two_mu * (m.potential(r) - e); };
  OdeOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-300;
  opt.first_step = 1e-4 * model.length_scale();
  const OdeResult res = integrate_segments(q, model, model.inner_radius(), R, opt);
  const double delta = std::atan2(k * res.y, res.dy) - k * R;
  return k / std::tan(delta);
}

int count_bound_states(const TwoBodyModel& model, double r_max, int points) {
  const double r0 = model.inner_radius();
  const double h = (r_max - r0) / (points + 1);
  const double kinetic = 1.0 / (2.0 * model.reduced_mass * h * h);
  Eigen::VectorXd diag(points);
  Eigen::VectorXd off = Eigen::VectorXd::Constant(points - 1, -kinetic);
  for (int i = 0; i < points; ++i) diag[i] = 2.0 * kinetic + model.potential(r0 + (i + 1) * h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("count_bound_states: eigen solve");
  int count = 0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    if (solver.eigenvalues()[i] < 0.0) ++count;
  return count;
}

// ---------------------------------------------------------------- form factors

FormFactor FormFactor::sharp_cutoff(double cutoff) {
  if (!(cutoff > 0.0)) throw DomainError("sharp_cutoff: cutoff must be positive");
  FormFactor f;
  f.kind_ = Kind::sharp;
  f.cutoff_ = cutoff;
  f.scale_ = cutoff;
  f.support_ = cutoff;
  f.label_ = "sharp_cutoff";
  f.square_integral_ = cutoff;
  return f;
}

FormFactor FormFactor::step(double radius) {
  if (!(radius > 0.0)) throw DomainError("step: radius must be positive");
  FormFactor f;
  f.kind_ = Kind::step;
  f.radius_ = radius;
  f.scale_ = 1.0 / radius;
  f.label_ = "step";
  f.square_integral_ = std::numeric_limits<double>::infinity();
  return f;
}

namespace {

// Log-spaced composite rule over [p_lo, p_hi] with the given panels per decade.
void append_log_panels(std::vector<double>& breaks, double p_lo, double p_hi, int per_decade) {
  const int panels = std::max(1, static_cast<int>(std::ceil(std::log10(p_hi / p_lo) * per_decade)));
  for (int i = 0; i <= panels; ++i) {
    const double v = p_lo * std::pow(p_hi / p_lo, static_cast<double>(i) / panels);
    if (breaks.empty() || v > breaks.back()) breaks.push_back(v);
  }
}

}  // namespace

FormFactor FormFactor::analytic(std::function<double(double)> profile, double scale,
                                std::string label) {
  if (!(scale > 0.0)) throw DomainError("FormFactor::analytic: scale must be positive");
  FormFactor f;
  f.kind_ = Kind::analytic;
  f.profile_ = std::move(profile);
  f.scale_ = scale;
  f.support_ = 1e4 * scale;
  f.label_ = std::move(label);
  std::vector<double> breaks;
  append_log_panels(breaks, 1e-7 * scale, f.support_, 12);
  f.cache_square_rule(breaks, 8);
  return f;
}

FormFactor FormFactor::tabulated(std::vector<double> p, std::vector<double> phi,
                                 std::vector<double> dphi, std::string label, double scale) {
  if (p.size() < 4 || phi.size() != p.size() || dphi.size() != p.size())
    throw DomainError("FormFactor::tabulated: need matching tables of at least 4 points");
  for (std::size_t i = 1; i < p.size(); ++i)
    if (!(p[i] > p[i - 1])) throw DomainError("FormFactor::tabulated: grid must increase");
  if (!(p.front() > 0.0)) throw DomainError("FormFactor::tabulated: grid must be positive");
  FormFactor f;
  f.kind_ = Kind::table;
  f.grid_ = std::move(p);
  f.values_ = std::move(phi);
  f.slopes_ = std::move(dphi);
  f.label_ = std::move(label);
  f.support_ = f.grid_.back();
  f.scale_ = scale > 0.0 ? scale : f.grid_.back() / 400.0;
  const double p0 = f.grid_.front();
  f.small_p_coeff_ = (1.0 - f.values_.front()) / (p0 * p0);
  std::vector<double> breaks;
  append_log_panels(breaks, 1e-7 * p0, p0, 6);
  for (double v : f.grid_)
    if (v > breaks.back()) breaks.push_back(v);
  f.cache_square_rule(breaks, 4);
  return f;
}

double FormFactor::operator()(double p) const {
  p = std::abs(p);
  switch (kind_) {
    case Kind::sharp:
      return p < cutoff_ ? 1.0 : 0.0;
    case Kind::step:
      return std::cos(p * radius_);
    case Kind::analytic:
      return profile_(p);
    case Kind::table: {
      if (p <= grid_.front()) return 1.0 - small_p_coeff_ * p * p;
      if (p >= grid_.back()) return 0.0;
      const auto it = std::upper_bound(grid_.begin(), grid_.end(), p);
      const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
      const double h = grid_[i + 1] - grid_[i];
      const double t = (p - grid_[i]) / h;
      const double t2 = t * t, t3 = t2 * t;
      return (2 * t3 - 3 * t2 + 1) * values_[i] + (t3 - 2 * t2 + t) * h * slopes_[i] +
             (-2 * t3 + 3 * t2) * values_[i + 1] + (t3 - t2) * h * slopes_[i + 1];
    }
  }
  return 0.0;
}

double FormFactor::propagator_integral(double q) const {
  if (!(q > 0.0)) throw DomainError("propagator_integral: q must be positive");
  switch (kind_) {
    case Kind::sharp:
      return std::atan(cutoff_ / q) / q;
    case Kind::step:
      return pi * (1.0 + std::exp(-2.0 * q * radius_)) / (4.0 * q);
    default:
      break;
  }
  // [0, p_lo] with phi = phi(p_lo); composite rule above
  double sum = square_low_ * std::atan(square_nodes_.empty() ? 0.0 : low_edge_ / q) / q;
  const double q2 = q * q;
  for (std::size_t i = 0; i < square_nodes_.size(); ++i) {
    const double p = square_nodes_[i];
    sum += square_weights_[i] / (p * p + q2);
  }
  return sum;
}

void FormFactor::cache_square_rule(const std::vector<double>& breaks, int per_panel) {
  j_breaks_ = breaks;
  const QuadratureRule rule = composite_gauss_legendre(breaks, per_panel);
  square_nodes_ = rule.nodes;
  square_weights_.resize(rule.size());
  square_integral_ = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double v = (*this)(rule.nodes[i]);
    square_weights_[i] = rule.weights[i] * v * v;
    square_integral_ += square_weights_[i];
  }
  low_edge_ = breaks.front();
  const double f_lo = (*this)(low_edge_);
  square_low_ = f_lo * f_lo;
}

double FormFactor::inverse_amplitude(double inv_a, double q) const {
  return inv_a - 2.0 / pi * q * q * propagator_integral(q);
}

double FormFactor::square_integral_term() const { return 2.0 / pi * square_integral_; }

double FormFactor::strength(double inv_a) const {
  if (!std::isfinite(square_integral_)) return 0.0;
  return 4.0 * pi / (inv_a - square_integral_term());
}

double FormFactor::k_cot_delta(double inv_a, double k) const {
  if (!(k > 0.0)) throw DomainError("k_cot_delta: k must be positive");
  const double fk = (*this)(k);
  double pv = 0.0;
  switch (kind_) {
    case Kind::sharp:
      if (k >= cutoff_) throw DomainError("k_cot_delta: k beyond the cutoff");
      pv = std::log((cutoff_ + k) / (cutoff_ - k)) / (2.0 * k);
      break;
    case Kind::step:
      pv = -pi * std::sin(2.0 * k * radius_) / (4.0 * k);
      break;
    default: {
      const QuadratureRule rule = composite_gauss_legendre(j_breaks_, kind_ == Kind::table ? 4 : 8);
      const double fk2 = fk * fk;
      pv = rule.integrate([&](double p) {
        const double v = (*this)(p);
        const double den = p * p - k * k;
        if (std::abs(den) < 1e-14 * k * k) return 0.0;
        return (v * v - fk2) / den;
      });
      // [0, p_lo] with phi^2 - phi_k^2 ~ 1 - phi_k^2 and the region beyond the support
      const double p_lo = j_breaks_.front(), p_hi = j_breaks_.back();
      const double f_lo = (*this)(p_lo);
      pv -= (f_lo * f_lo - fk2) * std::log((k + p_lo) / (k - p_lo)) / (2.0 * k);
      pv -= fk2 * std::log((p_hi + k) / (p_hi - k)) / (2.0 * k);
      break;
    }
  }
  return -(inv_a + 2.0 / pi * k * k * pv) / (fk * fk);
}

// ---------------------------------------------------------------- EST construction

namespace {

// Quadrature breaks on [r_lo, r_hi] with at most `phase` radians of combined oscillation per panel.
std::vector<double> radial_breaks(const ZeroEnergyState& s, double r_lo, double r_hi, double p_max,
                                  double phase) {
  std::vector<double> breaks{r_lo};
  double r = r_lo;
  const double h_max = 0.25 * s.length_scale;
  while (r < r_hi) {
    const double k = (s.local_wavenumber ? s.local_wavenumber(r) : 0.0) + p_max;
    double h = std::min(h_max, phase / std::max(k, 1e-300));
    // the local wave number grows toward small r; cap relative growth
    h = std::min(h, std::max(0.05 * r, 1e-6 * s.length_scale));
    r = std::min(r_hi, r + h);
    breaks.push_back(r);
    if (breaks.size() > 5'000'000) throw ConvergenceError("est: too many radial panels");
  }
  return breaks;
}

// Tail of (phibar - phi) beyond R as sum_j coeff_j r^{-k_j}.
struct TailTerms {
  std::vector<int> powers;
  std::vector<double> coeffs;
};

TailTerms tail_terms(const ZeroEnergyState& s) {
  TailTerms t;
  if (s.tail_exponent == 0) return t;
  const int n = s.tail_exponent;
  std::vector<double> c, d;
  tail_series(n, 12, c, d);
  const double l = s.tail_length;
  // phi = flat * sum c_m x^{-m(n-2)} + linear * x sum d_m x^{-m(n-2)}; phibar = flat + linear x
  for (int m = 1; m < 12; ++m) {
    const int k = m * (n - 2);
    t.powers.push_back(k);
    t.coeffs.push_back(-s.tail_flat * c[m] * std::pow(l, k));
    if (s.tail_linear != 0.0) {
      t.powers.push_back(k - 1);
      t.coeffs.push_back(-s.tail_linear * d[m] * std::pow(l, k - 1));
    }
  }
  return t;
}

// I_k = integral over r > R of r^{-k} e^{ipr}, k = 0..k_max (k = 0 in the Abel sense).
std::vector<std::complex<double>> oscillatory_moments(int k_max, double p, double R) {
  using cd = std::complex<double>;
  const double x = p * R;
  const cd phase = std::polar(1.0, x);
  std::vector<cd> out(k_max + 1);
  out[0] = cd(0.0, 1.0) * phase / p;
  if (k_max == 0) return out;
  if (x < 2.0) {
    // upward recursion from the sine and cosine integrals, stable for small pR
    out[1] = cd(-special::cosine_integral(x), pi / 2.0 - special::sine_integral(x));
    for (int j = 2; j <= k_max; ++j)
      out[j] = (phase * std::pow(R, 1 - j) + cd(0.0, p) * out[j - 1]) / double(j - 1);
    return out;
  }
  // rotate r = R (1 + i tau / x): I_k = R^{1-k} e^{ix} (i/x) int e^{-tau} (1 + i tau/x)^{-k}
  static const QuadratureRule unit = gauss_legendre(8, 0.0, 1.0);
  const double tau_max = 42.0;
  const double h = std::min(0.5, 0.5 * x / (k_max + 1));
  const int panels = static_cast<int>(std::ceil(tau_max / h));
  std::vector<cd> sums(k_max + 1, cd(0.0));
  for (int c = 0; c < panels; ++c) {
    for (std::size_t i = 0; i < unit.size(); ++i) {
      const double tau = (c + unit.nodes[i]) * h;
      const cd w = 1.0 / cd(1.0, tau / x);
      cd wk = std::exp(-tau) * unit.weights[i] * h;
      for (int k = 1; k <= k_max; ++k) {
        wk *= w;
        sums[k] += wk;
      }
    }
  }
  const cd pre = cd(0.0, 1.0) * phase / x;
  for (int k = 1; k <= k_max; ++k) out[k] = pre * std::pow(R, 1 - k) * sums[k];
  return out;
}

struct EstTable {
  std::vector<double> p, phi, dphi;
};

EstTable est_table(const ZeroEnergyState& s, const std::vector<double>& momenta,
                   const EstOptions& o) {
  const double l = s.length_scale;
  const double p_max = momenta.empty() ? 0.0 : *std::max_element(momenta.begin(), momenta.end());
  const double r_c = std::max(s.core_radius, o.inner_cut * l);
  double r_t = s.match_radius;
  if (s.tail_exponent > 0) r_t = std::max(r_t, o.tail_factor * l);
  const double ia = s.inv_a;

  EstTable out;
  out.p = momenta;
  out.phi.assign(momenta.size(), 0.0);
  out.dphi.assign(momenta.size(), 0.0);

  // region [0, r_c]: phi = 0, phibar = 1 - r/a in closed form
  for (std::size_t j = 0; j < momenta.size(); ++j) {
    const double p = momenta[j];
    const double x = p * r_c;
    const double sc = std::sin(x), cc = std::cos(x);
    // p int (1 - r/a) sin(pr) dr and its p-derivative int (1 - r/a)(sin(pr) + pr cos(pr)) dr
    const double pi0 = (1.0 - cc) - ia * (sc / p - r_c * cc);
    const double d0 = (1.0 - r_c * ia) * r_c * sc + ia * (sc / p - r_c * cc) / p;
    out.phi[j] = -pi0;
    out.dphi[j] = -d0;
  }

  // region [r_c, r_t]: quadrature with panels resolving both oscillations
  if (r_t > r_c) {
    const std::vector<double> breaks = radial_breaks(s, r_c, r_t, p_max, 1.0);
    const QuadratureRule rule = composite_gauss_legendre(breaks, 8);
    const std::vector<double> phi = s.evaluate(rule.nodes);
    std::vector<double> f(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i)
      f[i] = integrand_checked(rule.weights[i] * ((1.0 - rule.nodes[i] * ia) - phi[i]));
    // sin/cos advance by rotation along runs of equal momentum spacing
    const std::size_t np = momenta.size();
    std::vector<double> is(np, 0.0), ic(np, 0.0);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double r = rule.nodes[i];
      const double fi = f[i];
      double sn = 0.0, cs = 1.0, sd = 0.0, cd = 1.0, h_prev = -1.0;
      for (std::size_t j = 0; j < np; ++j) {
        const double h = j > 0 ? momenta[j] - momenta[j - 1] : 0.0;
        if (j == 0 || j % 64 == 0 || std::abs(h - h_prev) > 1e-12 * h) {
          sn = std::sin(momenta[j] * r);
          cs = std::cos(momenta[j] * r);
          if (j > 0) {
            sd = std::sin(h * r);
            cd = std::cos(h * r);
          }
          h_prev = h;
        } else {
          const double s2 = sn * cd + cs * sd;
          cs = cs * cd - sn * sd;
          sn = s2;
        }
        is[j] += fi * sn;
        ic[j] += fi * momenta[j] * r * cs;
      }
    }
    for (std::size_t j = 0; j < np; ++j) {
      out.phi[j] -= momenta[j] * is[j];
      out.dphi[j] -= is[j] + ic[j];
    }
  }

  // region [r_t, inf): analytic power series
  const TailTerms tail = tail_terms(s);
  const int k_top = tail.powers.empty() ? 0 : *std::max_element(tail.powers.begin(), tail.powers.end());
  for (std::size_t j = 0; j < momenta.size(); ++j) {
    const double p = momenta[j];
    const std::vector<std::complex<double>> moments = oscillatory_moments(k_top, p, r_t);
    double is = 0.0, ic = 0.0;
    for (std::size_t m = 0; m < tail.powers.size(); ++m) {
      const int k = tail.powers[m];
      is += tail.coeffs[m] * moments[k].imag();
      ic += tail.coeffs[m] * p * moments[k - 1].real();
    }
    out.phi[j] = 1.0 + out.phi[j] - p * is;
    out.dphi[j] -= is + ic;
  }
  return out;
}

}  // namespace

double est_transform(const ZeroEnergyState& state, double p, const EstOptions& options) {
  if (state.tail_exponent == 0 && state.core_radius == state.match_radius &&
      state.inv_a == 0.0 && !state.evaluate_inner)
    return std::cos(p * state.core_radius);
  if (p == 0.0) return 1.0;
  return est_table(state, {p}, options).phi.front();
}

FormFactor est_form_factor(const ZeroEnergyState& state, const EstOptions& options) {
  // a pure step at unitarity has a closed form
  if (state.tail_exponent == 0 && state.core_radius == state.match_radius &&
      state.inv_a == 0.0 && !state.evaluate_inner)
    return FormFactor::step(state.core_radius);
  const double l = state.length_scale;
  const double p_lo = options.p_min_factor / l;
  const double p_hi = options.p_max_factor / l;
  const double p_mid = 2.0 / l;
  // logarithmic below p_mid, linear above
  std::vector<double> grid;
  const int n_log = std::max(20, options.grid_points / 4);
  for (int i = 0; i < n_log; ++i) grid.push_back(p_lo * std::pow(p_mid / p_lo, double(i) / n_log));
  const double dp = options.linear_spacing / l;
  for (double p = p_mid; p <= p_hi * (1 + 1e-12); p += dp) grid.push_back(p);
  const EstTable t = est_table(state, grid, options);
  return FormFactor::tabulated(t.p, t.phi, t.dphi, "est", 1.0 / l);
}

// ---------------------------------------------------------------- T-matrix models

TMatrixModel TMatrixModel::zero_range(double inv_a, double cutoff) {
  TMatrixModel m;
  m.kind = TMatrixKind::zero_range;
  m.inv_a = inv_a;
  m.cutoff = cutoff;
  return m;
}

TMatrixModel TMatrixModel::effective_range(double inv_a, double r_e) {
  TMatrixModel m;
  m.kind = TMatrixKind::effective_range;
  m.inv_a = inv_a;
  m.r_e = r_e;
  return m;
}

TMatrixModel TMatrixModel::narrow_resonance(double inv_a, double r_star) {
  if (!(r_star > 0.0)) throw DomainError("narrow_resonance: R* must be positive");
  TMatrixModel m;
  m.kind = TMatrixKind::narrow_resonance;
  m.inv_a = inv_a;
  m.r_star = r_star;
  m.r_e = -2.0 * r_star;
  return m;
}

TMatrixModel TMatrixModel::separable(double inv_a, std::shared_ptr<const FormFactor> form) {
  if (!form) throw DomainError("separable: missing form factor");
  TMatrixModel m;
  m.kind = TMatrixKind::separable;
  m.inv_a = inv_a;
  m.form = std::move(form);
  return m;
}

double TMatrixModel::inverse_amplitude(double q) const {
  switch (kind) {
    case TMatrixKind::zero_range:
      if (std::isinf(cutoff)) return inv_a - q;
      return inv_a - 2.0 / pi * q * std::atan(cutoff / q);
    case TMatrixKind::effective_range:
      return inv_a + 0.5 * r_e * q * q - q;
    case TMatrixKind::narrow_resonance:
      return inv_a - r_star * q * q - q;
    case TMatrixKind::separable:
      return form->inverse_amplitude(inv_a, q);
  }
  return 0.0;
}

std::optional<double> dimer_wavenumber(const TMatrixModel& model) {
  if (model.kind == TMatrixKind::effective_range || model.kind == TMatrixKind::narrow_resonance) {
    const auto inv_ab = inverse_pole_length(model.inv_a, model.r_e);
    if (!inv_ab || !(*inv_ab > 0.0)) return std::nullopt;
    return *inv_ab;
  }
  if (model.kind == TMatrixKind::zero_range && std::isinf(model.cutoff)) {
    if (!(model.inv_a > 0.0)) return std::nullopt;
    return model.inv_a;
  }
  // first sign change of the inverse amplitude on a log scan
  RealFunction f = [&](double lq) { return model.inverse_amplitude(std::exp(lq)); };
  const double scale = model.kind == TMatrixKind::separable ? model.form->scale() : model.cutoff;
  const double lo = std::log(1e-8 * scale), hi = std::log(1e3 * scale);
  const auto brackets = sign_change_brackets(f, lo, hi, 600);
  if (brackets.empty()) return std::nullopt;
  return std::exp(find_root(f, brackets.front().first, brackets.front().second, 1e-14));
}

std::optional<double> dimer_energy(const TMatrixModel& model) {
  const auto q = dimer_wavenumber(model);
  if (!q) return std::nullopt;
  return -(*q) * (*q);
}

double first_order_dimer_energy(double a, double r_e) {
  const double c = 1.0 + r_e / (2.0 * a);
  return c * c / (a * a);
}

std::optional<double> inverse_pole_length(double inv_a, double r_e) {
  const double disc = 1.0 - 2.0 * r_e * inv_a;
  if (disc < 0.0) return std::nullopt;
  return 2.0 * inv_a / (1.0 + std::sqrt(disc));
}

std::optional<double> a_B(double a, double r_e) {
  const auto inv = inverse_pole_length(1.0 / a, r_e);
  if (!inv) return std::nullopt;
  if (*inv == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / *inv;
}

}  // namespace efimov
