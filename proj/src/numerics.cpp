#include "efimov/numerics.hpp"

#include "efimov/errors.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <string>

namespace efimov {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw EvaluationError(std::string("non-finite value from ") + what);
}

}  // namespace

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1 || !(lo < hi)) throw DomainError("gauss_legendre: need n >= 1 and lo < hi");
  // nonnegative zeros of P_n, ascending
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  QuadratureRule rule;
  rule.mapping = Mapping::linear;
  rule.lo = lo;
  rule.hi = hi;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    const double x = zeros[k];
    const double dp = boost::math::legendre_p_prime(n, x);
    const double w = half * 2.0 / ((1.0 - x * x) * dp * dp);
    const int right = n / 2 + static_cast<int>(k);
    const int left = n - 1 - right;
    rule.nodes[right] = mid + half * x;
    rule.weights[right] = w;
    rule.nodes[left] = mid - half * x;
    rule.weights[left] = w;
  }
  return rule;
}

QuadratureRule gauss_legendre_log(int n, double lo, double hi) {
  if (!(lo > 0.0)) throw DomainError("gauss_legendre_log: lower limit must be positive");
  QuadratureRule rule = gauss_legendre(n, std::log(lo), std::log(hi));
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = std::exp(rule.nodes[i]);
    rule.weights[i] *= rule.nodes[i];
  }
  rule.mapping = Mapping::logarithmic;
  rule.lo = lo;
  rule.hi = hi;
  return rule;
}

QuadratureRule composite_gauss_legendre(std::span<const double> breaks, int n_per_panel) {
  if (breaks.size() < 2) throw DomainError("composite_gauss_legendre: need two break points");
  QuadratureRule rule;
  rule.mapping = Mapping::composite;
  rule.lo = breaks.front();
  rule.hi = breaks.back();
  const QuadratureRule unit = gauss_legendre(n_per_panel, 0.0, 1.0);
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k], h = breaks[k + 1] - breaks[k];
    if (!(h > 0.0)) throw DomainError("composite_gauss_legendre: break points must increase");
    for (std::size_t i = 0; i < unit.size(); ++i) {
      rule.nodes.push_back(a + h * unit.nodes[i]);
      rule.weights.push_back(h * unit.weights[i]);
    }
  }
  return rule;
}

double find_root(const RealFunction& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw DomainError("find_root: tolerance must be positive");
  auto checked = [&f](double x) {
    const double v = f(x);
    if (std::isnan(v)) throw EvaluationError("find_root: function returned NaN");
    return v;
  };
  if (lo > hi) std::swap(lo, hi);
  const double flo = checked(lo);
  if (flo == 0.0) return lo;
  const double fhi = checked(hi);
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw BracketError("find_root: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  boost::uintmax_t max_iter = 500;
  auto done = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  const auto [a, b] = boost::math::tools::toms748_solve(checked, lo, hi, flo, fhi, done, max_iter);
  if (max_iter >= 500) throw ConvergenceError("find_root: iteration limit reached");
  return 0.5 * (a + b);
}

std::vector<std::pair<double, double>> sign_change_brackets(const RealFunction& f, double lo,
                                                            double hi, int n) {
  std::vector<std::pair<double, double>> out;
  if (n < 1) return out;
  const double h = (hi - lo) / n;
  double x_prev = lo, f_prev = f(lo);
  require_finite(f_prev, "sign_change_brackets");
  for (int i = 1; i <= n; ++i) {
    const double x = (i == n) ? hi : lo + i * h;
    const double fx = f(x);
    require_finite(fx, "sign_change_brackets");
    if (f_prev == 0.0) {
      out.emplace_back(x_prev, x_prev);
    } else if ((f_prev < 0.0) != (fx < 0.0) && fx != 0.0) {
      out.emplace_back(x_prev, x);
    }
    x_prev = x;
    f_prev = fx;
  }
  if (f_prev == 0.0) out.emplace_back(x_prev, x_prev);
  return out;
}

EigenPair smallest_eigenvalue(const DenseMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw DomainError("smallest_eigenvalue: matrix must be square");
  Eigen::EigenSolver<DenseMatrix> solver(m, true);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("smallest_eigenvalue: QR iteration did not converge after " +
                           std::to_string(solver.getMaxIterations() * m.rows()) + " iterations");
  const auto& values = solver.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i)
    if (std::abs(values[i]) < std::abs(values[best])) best = i;
  EigenPair out;
  out.value = values[best].real();
  out.vector = solver.eigenvectors().col(best).real();
  const double norm = out.vector.norm();
  if (norm > 0.0) out.vector /= norm;
  return out;
}

double determinant(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw DomainError("determinant: matrix must be square");
  return m.partialPivLu().determinant();
}

Vector symmetric_eigenvalues(const DenseMatrix& m) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("symmetric_eigenvalues: tridiagonal QR did not converge");
  return solver.eigenvalues();
}

namespace {

using State = std::array<double, 3>;  // y, y', integral of y^2
namespace odeint = boost::numeric::odeint;

struct NodeCounter {
  double last_sign = 0.0;
  int nodes = 0;
  void push(double y) {
    if (y == 0.0) return;
    const double s = y > 0.0 ? 1.0 : -1.0;
    if (last_sign != 0.0 && s != last_sign) ++nodes;
    last_sign = s;
  }
};

auto make_stepper(const OdeOptions& o) {
  return odeint::make_controlled(o.atol, o.rtol, odeint::runge_kutta_fehlberg78<State>());
}

auto make_system(const RealFunction& q) {
  return [&q](const State& s, State& ds, double x) {
    const double qx = q(x);
    if (!std::isfinite(qx)) throw EvaluationError("integrate_linear: non-finite coefficient");
    ds[0] = s[1];
    ds[1] = qx * s[0];
    ds[2] = s[0] * s[0];
  };
}

}  // namespace

OdeResult integrate_linear(const RealFunction& q, double x0, double x1, double y0, double dy0,
                           const OdeOptions& options) {
  OdeResult result;
  State state{y0, dy0, 0.0};
  NodeCounter counter;
  counter.push(y0);
  if (options.keep_samples) result.samples.push_back({x0, y0, dy0, 0.0});
  if (x1 == x0) {
    result.y = y0;
    result.dy = dy0;
    return result;
  }
  const double dir = x1 > x0 ? 1.0 : -1.0;
  double dt = dir * std::min(std::abs(options.first_step), std::abs(x1 - x0));
  auto observer = [&](const State& s, double x) {
    counter.push(s[0]);
    if (options.keep_samples && x != x0) result.samples.push_back({x, s[0], s[1], s[2]});
  };
  try {
    odeint::integrate_adaptive(make_stepper(options), make_system(q), state, x0, x1, dt, observer);
  } catch (const EvaluationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConvergenceError(std::string("integrate_linear: step control failed (stiffness): ") +
                           e.what());
  }
  result.y = state[0];
  result.dy = state[1];
  result.y2_integral = state[2];
  result.nodes = counter.nodes;
  return result;
}

std::vector<OdeSample> integrate_linear_to(const RealFunction& q, double x0, double y0, double dy0,
                                           std::span<const double> checkpoints,
                                           const OdeOptions& options) {
  std::vector<double> times;
  times.reserve(checkpoints.size() + 1);
  times.push_back(x0);
  for (double t : checkpoints) {
    if (!(t > times.back())) throw DomainError("integrate_linear_to: checkpoints must increase");
    times.push_back(t);
  }
  std::vector<OdeSample> out;
  State state{y0, dy0, 0.0};
  auto observer = [&](const State& s, double x) {
    if (x != x0) out.push_back({x, s[0], s[1], s[2]});
  };
  try {
    odeint::integrate_times(make_stepper(options), make_system(q), state, times.begin(),
                            times.end(), std::min(options.first_step, times[1] - x0), observer);
  } catch (const EvaluationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConvergenceError(std::string("integrate_linear_to: step control failed: ") + e.what());
  }
  return out;
}

RadialSolution integrate_radial(const RealFunction& potential, double energy, double r0, double r1,
                                const RadialOptions& options) {
  if (!(r1 > r0)) throw DomainError("integrate_radial: need r1 > r0");
  const double two_mu = 2.0 * options.reduced_mass;
  RealFunction q = [&](double r) { return two_mu * (potential(r) - energy); };
  OdeOptions ode = options.ode;
  ode.keep_samples = true;
  const OdeResult res = integrate_linear(q, r0, r1, options.u0, options.du0, ode);
  RadialSolution out;
  out.r.reserve(res.samples.size());
  out.u.reserve(res.samples.size());
  out.du.reserve(res.samples.size());
  for (const auto& s : res.samples) {
    out.r.push_back(s.x);
    out.u.push_back(s.y);
    out.du.push_back(s.dy);
  }
  out.nodes = res.nodes;
  out.log_derivative = res.dy / res.y;
  return out;
}

}  // namespace efimov
