#include "efimov/hyperradial.hpp"

#include "efimov/errors.hpp"
#include "efimov/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace efimov::hyper {

namespace {

using std::numbers::pi;

double wrap_pi(double v) {
  v = std::fmod(v, pi);
  return v < 0.0 ? v + pi : v;
}

// (x0, w, dw/dx) at the boundary
struct Start {
  double x, w, dw;
};

Start start_of(const Boundary& b) {
  if (b.kind == Boundary::Kind::hard_wall) return {std::log(b.radius), 0.0, 1.0};
  return {std::log(b.radius), 1.0, b.radius * b.log_derivative - 0.5};
}

RealFunction log_coefficient(const Channel& ch, double kappa) {
  const double k2 = kappa * kappa;
  return [&ch, k2](double x) {
    const double R = std::exp(x);
    const double w = ch.short_range ? ch.short_range(R) : 0.0;
    return ch.s_squared(R) + R * R * (w + k2);
  };
}

double decay_wavenumber(const Channel& ch, double kappa) {
  const double k2 = kappa * kappa + ch.threshold;
  return k2 > 0.0 ? std::sqrt(k2) : 0.0;
}

// Past the last classically allowed radius plus the requested number of decay lengths.
double far_radius(const Channel& ch, double kappa, double decay_lengths) {
  const double r0 = ch.boundary.radius;
  const double base = std::max(r0, ch.length_hint);
  const double k = decay_wavenumber(ch, kappa);
  if (!(k > 0.0)) return std::min(200.0 * base, ch.max_radius);
  const double r_cap = std::min(std::max({4.0 * base, 10.0 / k, 2.0 * r0}), ch.max_radius);
  const RealFunction q = log_coefficient(ch, kappa);
  const double x0 = std::log(r0), x1 = std::log(r_cap);
  const int n = std::max(16, static_cast<int>(20.0 * (x1 - x0)));
  double last = r0;
  for (int i = 0; i <= n; ++i) {
    const double x = x0 + (x1 - x0) * i / n;
    if (q(x) < 0.0) last = std::exp(x);
  }
  return std::min(last + decay_lengths / k, ch.max_radius);
}

OdeOptions ode_options(const SolveOptions& o) {
  OdeOptions opt;
  opt.rtol = o.rtol;
  opt.atol = 1e-300;
  opt.first_step = 1e-3;
  return opt;
}

// Integrates in x over segments split at the breakpoints.
OdeResult integrate_x(const Channel& ch, double kappa, double x1, const SolveOptions& o) {
  const Start s = start_of(ch.boundary);
  if (!(x1 > s.x)) return {s.w, s.dw, 0.0, 0, {}};
  const RealFunction q = log_coefficient(ch, kappa);
  std::vector<double> cuts{s.x};
  for (double b : ch.breakpoints) {
    const double xb = std::log(b);
    if (xb > s.x && xb < x1) cuts.push_back(xb);
  }
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.push_back(x1);
  OdeResult total;
  total.y = s.w;
  total.dy = s.dw;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1], eps = 1e-13 * (hi - lo);
    const RealFunction inner = [&q, lo, hi, eps](double x) {
      return q(std::clamp(x, lo + eps, hi - eps));
    };
    const OdeResult part = integrate_linear(inner, lo, hi, total.y, total.dy, ode_options(o));
    total.nodes += part.nodes;
    total.y = part.y;
    total.dy = part.dy;
  }
  return total;
}

}  // namespace

Boundary Boundary::hard_wall(double radius) {
  Boundary b;
  b.kind = Kind::hard_wall;
  b.radius = radius;
  b.validate();
  return b;
}

Boundary Boundary::log_derivative_at(double radius, double value) {
  Boundary b;
  b.kind = Kind::log_derivative;
  b.radius = radius;
  b.log_derivative = value;
  b.validate();
  return b;
}

void Boundary::validate() const {
  if (!(radius > 0.0)) throw DomainError("Boundary: radius must be positive");
  if (!std::isfinite(log_derivative)) throw DomainError("Boundary: log-derivative must be finite");
}

double Channel::potential(double R) const {
  const double w = short_range ? short_range(R) : 0.0;
  return (s_squared(R) - 0.25) / (R * R) + w;
}

Channel Channel::fixed(double s_squared, Boundary boundary) {
  Channel c;
  c.s_squared = [s_squared](double) { return s_squared; };
  c.boundary = boundary;
  c.label = "fixed";
  return c;
}

Channel Channel::efimov(double s0, Boundary boundary) {
  Channel c = fixed(-s0 * s0, boundary);
  c.label = "efimov";
  return c;
}

Channel Channel::vdw_well(double s0, double b, double r0) {
  if (!(b > 0.0)) throw DomainError("vdw_well: b must be positive");
  Channel c = efimov(s0, Boundary::hard_wall(r0));
  const double c6 = std::pow(2.0 * b, 4);
  c.short_range = [c6](double R) { return -c6 / std::pow(R, 6); };
  c.length_hint = b;
  c.label = "vdw_well";
  return c;
}

Channel Channel::square_well(double s0, double b, double depth) {
  if (!(b > 0.0)) throw DomainError("square_well: b must be positive");
  // regular solution u ~ R near the origin
  const double r_start = 1e-6 * b;
  Channel c = efimov(s0, Boundary::log_derivative_at(r_start, 1.0 / r_start));
  const double t = -s0 * s0;
  c.s_squared = [t, b](double R) { return R < b ? 0.25 : t; };
  c.short_range = [b, depth](double R) { return R < b ? -depth : 0.0; };
  c.breakpoints = {b};
  c.length_hint = b;
  c.label = "square_well";
  return c;
}

Channel Channel::adiabatic(std::shared_ptr<const ChannelTable> table, double inv_a,
                           Boundary boundary) {
  if (!table) throw DomainError("adiabatic: missing channel table");
  Channel c;
  c.s_squared = [table, inv_a](double R) { return (*table)(R * inv_a); };
  c.boundary = boundary;
  c.threshold = inv_a > 0.0 ? -inv_a * inv_a : 0.0;
  if (inv_a != 0.0) {
    c.length_hint = 1.0 / std::abs(inv_a);
    // keep R/a inside the precomputed table
    c.max_radius = 1900.0 / std::abs(inv_a);
  }
  c.label = "adiabatic";
  return c;
}

int count_nodes(const Channel& channel, double kappa, const SolveOptions& options) {
  channel.boundary.validate();
  const double r_far = far_radius(channel, kappa, options.decay_lengths);
  return integrate_x(channel, kappa, std::log(r_far), options).nodes;
}

BoundStateSet solve_bound_states(const Channel& channel, double kappa_min, double kappa_max,
                                 const SolveOptions& options) {
  if (!(kappa_min > 0.0) || !(kappa_max > kappa_min))
    throw DomainError("solve_bound_states: need 0 < kappa_min < kappa_max");
  const double k_thr = std::sqrt(std::max(0.0, -channel.threshold));
  kappa_min = std::max(kappa_min, k_thr * (1.0 + 1e-9));
  BoundStateSet out;
  if (!(kappa_max > kappa_min)) return out;
  const double lo = std::log(kappa_min), hi = std::log(kappa_max);
  const int n_hi = count_nodes(channel, kappa_max, options);  // levels deeper than the window
  const int n_lo = count_nodes(channel, kappa_min, options);
  for (int j = n_hi; j < n_lo; ++j) {
    // level j: count > j below kappa_j and <= j above
    double a = lo, b = hi;
    while (b - a > 1e-14 * std::max(1.0, std::abs(a))) {
      const double mid = 0.5 * (a + b);
      (count_nodes(channel, std::exp(mid), options) > j ? a : b) = mid;
    }
    const double kappa = std::exp(0.5 * (a + b));
    out.kappas.push_back(kappa);
    out.energies.push_back(-kappa * kappa);
    out.nodes.push_back(j);
  }
  // deepest first
  std::vector<std::size_t> order(out.kappas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return out.kappas[x] > out.kappas[y]; });
  BoundStateSet sorted;
  for (std::size_t i : order) {
    sorted.kappas.push_back(out.kappas[i]);
    sorted.energies.push_back(out.energies[i]);
    sorted.nodes.push_back(out.nodes[i]);
  }

  // sampled wave functions, cut where the growing solution would take over
  const Start s = start_of(channel.boundary);
  const int ns = std::max(10, options.samples);
  for (double kappa : sorted.kappas) {
    const double r_end = far_radius(channel, kappa, 10.0);
    const double x_end = std::log(r_end);
    std::vector<double> xs(ns);
    for (int i = 0; i < ns; ++i) xs[i] = s.x + (x_end - s.x) * (i + 1) / ns;
    std::vector<double> ws(ns);
    double y = s.w, dy = s.dw, x_prev = s.x;
    // follow the same segment split as the node count
    std::vector<double> cuts;
    for (double b : channel.breakpoints) {
      const double xb = std::log(b);
      if (xb > s.x && xb < x_end) cuts.push_back(xb);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(x_end);
    const RealFunction q = log_coefficient(channel, kappa);
    std::size_t next = 0;
    for (double cut : cuts) {
      std::vector<double> stops;
      while (next < xs.size() && xs[next] <= cut) stops.push_back(xs[next++]);
      if (stops.empty() || stops.back() < cut) stops.push_back(cut);
      const double lo_x = x_prev, hi_x = cut, eps = 1e-13 * (hi_x - lo_x);
      const RealFunction inner = [&q, lo_x, hi_x, eps](double x) {
        return q(std::clamp(x, lo_x + eps, hi_x - eps));
      };
      OdeOptions opt = ode_options(options);
      opt.first_step = std::min(opt.first_step, 0.5 * (stops.front() - lo_x));
      const auto smp = integrate_linear_to(inner, lo_x, y, dy, stops, opt);
      for (const auto& p : smp) {
        const auto it = std::lower_bound(xs.begin(), xs.end(), p.x);
        if (it != xs.end() && *it == p.x) ws[it - xs.begin()] = p.y;
      }
      y = smp.back().y;
      dy = smp.back().dy;
      x_prev = cut;
    }
    std::vector<double> radii(ns), u(ns);
    for (int i = 0; i < ns; ++i) {
      radii[i] = std::exp(xs[i]);
      u[i] = std::sqrt(radii[i]) * ws[i];
    }
    // norm in dR by the trapezoid rule on the log grid
    double norm = 0.5 * (radii[0] - channel.boundary.radius) * u[0] * u[0];
    for (int i = 1; i < ns; ++i)
      norm += 0.5 * (radii[i] - radii[i - 1]) * (u[i] * u[i] + u[i - 1] * u[i - 1]);
    const double scale = norm > 0.0 ? 1.0 / std::sqrt(norm) : 1.0;
    for (double& v : u) v *= scale;
    sorted.radii.push_back(std::move(radii));
    sorted.wavefunctions.push_back(std::move(u));
  }
  return sorted;
}

PhaseFit three_body_phase(const Channel& channel, double s0, double reference_scale,
                          const SolveOptions& options) {
  if (!(s0 > 0.0)) throw DomainError("three_body_phase: s0 must be positive");
  const double base = std::max(channel.boundary.radius, channel.length_hint);
  const double r1 = 1e3 * base, r2 = 1e5 * base;
  auto theta_at = [&](double r) {
    const double x = std::log(r);
    const OdeResult res = integrate_x(channel, 0.0, x, options);
    return std::atan2(-res.dy / s0, res.y) - s0 * x;
  };
  const double t1 = theta_at(r1), t2 = theta_at(r2);
  PhaseFit fit;
  double d = wrap_pi(t2 - t1);
  if (d > 0.5 * pi) d -= pi;
  fit.residual = std::abs(d);
  fit.fit_radius = r2;
  fit.phase = wrap_pi(t2 + s0 * std::log(reference_scale));
  if (fit.phase >= pi) fit.phase = 0.0;
  if (fit.residual > 1e-6)
    throw ConvergenceError("three_body_phase: zero-energy solution not log-periodic at the fit radii");
  return fit;
}

std::vector<double> adiabatic_thresholds(std::shared_ptr<const ChannelTable> table,
                                         const Boundary& boundary, int n_levels,
                                         const SolveOptions& options) {
  auto count = [&](double y) {
    return count_nodes(Channel::adiabatic(table, -std::exp(-y), boundary), 0.0, options);
  };
  std::vector<double> out;
  double y = std::log(boundary.radius);
  int c = count(y);
  for (int n = 0; n < n_levels; ++n) {
    double y_hi = y;
    int guard = 0;
    while (c <= n) {
      y = y_hi;
      y_hi += 0.25;
      c = count(y_hi);
      if (++guard > 400) throw ConvergenceError("adiabatic_thresholds: level not found");
    }
    double a = y, b = y_hi;
    if (count(a) > n) a = std::log(boundary.radius) - 1.0;
    while (b - a > 1e-11) {
      const double mid = 0.5 * (a + b);
      (count(mid) > n ? b : a) = mid;
    }
    out.push_back(-std::exp(0.5 * (a + b)));
    y = b;
    c = count(y);
  }
  return out;
}

EfimovSpectrum adiabatic_spectrum(std::shared_ptr<const ChannelTable> table,
                                  std::span<const double> inv_a_grid, const Boundary& boundary,
                                  double kappa_min, double kappa_max, int n_thresholds,
                                  const SolveOptions& options) {
  EfimovSpectrum spectrum;
  for (double inv_a : inv_a_grid) {
    const Channel ch = Channel::adiabatic(table, inv_a, boundary);
    const BoundStateSet set = solve_bound_states(ch, kappa_min, kappa_max, options);
    for (std::size_t i = 0; i < set.kappas.size(); ++i)
      spectrum.points.push_back({inv_a, set.nodes[i], -set.kappas[i], set.energies[i]});
  }
  if (n_thresholds > 0) spectrum.a_minus = adiabatic_thresholds(table, boundary, n_thresholds, options);
  return spectrum;
}

}  // namespace efimov::hyper
