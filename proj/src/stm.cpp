#include "efimov/stm.hpp"

#include "efimov/errors.hpp"
#include "efimov/kernels.hpp"
#include "efimov/universal.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace efimov::stm {

namespace {

using std::numbers::pi;

double q_of(double P, double energy) { return std::sqrt(0.75 * P * P - energy); }

// Upper limit of x = cos(P, Q) inside both |Q + P/2| < L and |P + Q/2| < L.
double exact_x_max(double P, double Q, double cutoff) {
  const double L2 = cutoff * cutoff, pq = P * Q;
  const double x1 = (L2 - Q * Q - 0.25 * P * P) / pq;
  const double x2 = (L2 - P * P - 0.25 * Q * Q) / pq;
  return std::min({1.0, x1, x2});
}

void check_grid(const KernelOptions& o) {
  if (o.points < 8) throw DomainError("stm: at least 8 momentum nodes required");
  if (o.angular_points < 4) throw DomainError("stm: at least 4 angular nodes required");
  if (!(o.p_min > 0.0) || !(o.p_max > o.p_min)) throw DomainError("stm: need 0 < p_min < p_max");
}

Eigen::SelfAdjointEigenSolver<DenseMatrix> eigen_of(const DenseMatrix& m, bool vectors) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(m, vectors ? Eigen::ComputeEigenvectors
                                                           : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("stm: eigenvalue solver failed");
  return es;
}

}  // namespace

// ---------------------------------------------------------------- kernel

StmKernel StmKernel::contact(const TMatrixModel& model, double cutoff, const KernelOptions& options,
                             bool exact_domain) {
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw DomainError("stm: cutoff must be finite");
  if (model.kind == TMatrixKind::separable)
    throw DomainError("stm: contact kernel needs a zero-range type amplitude");
  if (model.kind == TMatrixKind::effective_range && model.r_e > 0.0)
    throw DomainError("stm: positive effective range needs a separable model");
  StmKernel k;
  k.exchange_ = exact_domain ? Exchange::contact_exact : Exchange::contact;
  k.cutoff_ = cutoff;
  k.scale_ = cutoff;
  TMatrixModel m = model;
  if (exact_domain && m.kind == TMatrixKind::zero_range) m.cutoff = cutoff;
  k.models_ = {m};
  k.weights_ = {{1.0}};
  KernelOptions o = options;
  if (o.p_min == 0.0) o.p_min = 1e-4 * cutoff;
  if (o.p_max == 0.0) o.p_max = exact_domain ? 2.0 * cutoff : cutoff;
  check_grid(o);
  if (!exact_domain && o.p_max > cutoff * (1.0 + 1e-12))
    throw DomainError("stm: grid extends beyond the cutoff");
  k.grid_ = gauss_legendre_log(o.points, o.p_min, o.p_max);
  k.angle_ = gauss_legendre(o.angular_points, -1.0, 1.0);
  return k;
}

StmKernel StmKernel::separable(const TMatrixModel& model, const KernelOptions& options) {
  if (model.kind != TMatrixKind::separable || !model.form)
    throw DomainError("stm: separable kernel needs a form factor");
  if (model.form->sharp()) {
    return contact(TMatrixModel::zero_range(model.inv_a, model.form->cutoff()), model.form->cutoff(),
                   options, true);
  }
  return coupled({model}, {{1.0}}, options);
}

StmKernel StmKernel::coupled(std::vector<TMatrixModel> channels,
                             std::vector<std::vector<double>> weights,
                             const KernelOptions& options) {
  const std::size_t n = channels.size();
  if (n == 0) throw DomainError("stm: no channels");
  if (weights.size() != n) throw DomainError("stm: weight matrix size mismatch");
  double scale = 0.0, support = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < n; ++a) {
    const auto& m = channels[a];
    if (m.kind != TMatrixKind::separable || !m.form || m.form->sharp())
      throw DomainError("stm: coupled channels need smooth separable form factors");
    if (weights[a].size() != n) throw DomainError("stm: weight matrix size mismatch");
    for (std::size_t b = 0; b < n; ++b)
      if (weights[a][b] != weights[b][a]) throw DomainError("stm: weights must be symmetric");
    scale = std::max(scale, m.form->scale());
    support = std::min(support, m.form->support());
  }
  StmKernel k;
  k.exchange_ = Exchange::separable;
  k.scale_ = scale;
  k.cutoff_ = std::numeric_limits<double>::infinity();
  k.models_ = std::move(channels);
  k.weights_ = std::move(weights);
  KernelOptions o = options;
  if (o.p_min == 0.0) o.p_min = 1e-4 * scale;
  if (o.p_max == 0.0) o.p_max = 50.0 * scale;
  check_grid(o);
  // arguments |Q + P/2| reach 1.5 p_max
  if (1.5 * o.p_max > support * (1.0 + 1e-12))
    throw DomainError("stm: form factor not sampled beyond the kernel's momentum support");
  k.grid_ = gauss_legendre_log(o.points, o.p_min, o.p_max);
  k.angle_ = gauss_legendre(o.angular_points, -1.0, 1.0);
  k.precompute();
  return k;
}

std::size_t StmKernel::product_offset(int block, int i, int j) const {
  const std::size_t n = grid_.size(), m = angle_.size();
  const auto [a, b] = blocks_[block];
  if (a == b) {
    const std::size_t ii = std::min(i, j), jj = std::max(i, j);
    return (ii * n - ii * (ii - 1) / 2 + (jj - ii)) * m;
  }
  return (static_cast<std::size_t>(i) * n + j) * m;
}

void StmKernel::precompute() {
  const int n = static_cast<int>(grid_.size());
  const int c = channels();
  const std::size_t m = angle_.size();
  blocks_.clear();
  products_.clear();
  for (int a = 0; a < c; ++a)
    for (int b = a; b < c; ++b) {
      if (weights_[a][b] == 0.0) continue;
      blocks_.push_back({a, b});
      const std::size_t size = a == b ? static_cast<std::size_t>(n) * (n + 1) / 2 * m
                                      : static_cast<std::size_t>(n) * n * m;
      std::vector<double> prod(size);
      const FormFactor& fa = *models_[a].form;
      const FormFactor& fb = *models_[b].form;
      for (int i = 0; i < n; ++i) {
        const double P = grid_.nodes[i];
        for (int j = a == b ? i : 0; j < n; ++j) {
          const double Q = grid_.nodes[j];
          double* out = prod.data() + product_offset(static_cast<int>(blocks_.size()) - 1, i, j);
          for (std::size_t k = 0; k < m; ++k) {
            const double x = angle_.nodes[k], pqx = P * Q * x;
            const double u = std::sqrt(std::max(0.0, Q * Q + 0.25 * P * P + pqx));
            const double v = std::sqrt(std::max(0.0, P * P + 0.25 * Q * Q + pqx));
            out[k] = angle_.weights[k] * fa(u) * fb(v);
          }
        }
      }
      products_.push_back(std::move(prod));
    }
  // angular accuracy: diagonal entries at E = 0 against a doubled rule
  const QuadratureRule fine = gauss_legendre(2 * static_cast<int>(m), -1.0, 1.0);
  double err = 0.0;
  for (int i = 0; i < n; ++i) {
    const double P = grid_.nodes[i];
    for (const auto& [a, b] : blocks_) {
      const FormFactor& fa = *models_[a].form;
      const FormFactor& fb = *models_[b].form;
      const double coarse = angular_integral(P, P, 0.0, a, b);
      double ref = 0.0, mag = 0.0;
      for (std::size_t k = 0; k < fine.size(); ++k) {
        const double x = fine.nodes[k];
        const double r = P * std::sqrt(1.25 + x);
        const double t = fine.weights[k] * fa(r) * fb(r) / (P * P * (2.0 + x));
        ref += t;
        mag += std::abs(t);
      }
      if (mag > 0.0) err = std::max(err, std::abs(coarse - ref) / mag);
    }
  }
  angular_error_ = err;
}

double StmKernel::log_kernel(double P, double Q, double energy) {
  const double c = P * P + Q * Q - energy, b = P * Q;
  return std::log1p(2.0 * b / (c - b)) / b;
}

double StmKernel::contact_entry(double P, double Q, double energy) const {
  if (exchange_ == Exchange::contact) {
    if (Q > cutoff_) return 0.0;
    return log_kernel(P, Q, energy);
  }
  const double x_max = exact_x_max(P, Q, cutoff_);
  if (x_max <= -1.0) return 0.0;
  const double c = P * P + Q * Q - energy, b = P * Q;
  return std::log((c + b * x_max) / (c - b)) / b;
}

double StmKernel::angular_integral(double P, double Q, double energy, int row, int col) const {
  const double c = P * P + Q * Q - energy, b = P * Q;
  double sum = 0.0;
  for (std::size_t k = 0; k < angle_.size(); ++k) {
    const double x = angle_.nodes[k];
    double f = 1.0;
    if (exchange_ == Exchange::separable) {
      const double u = std::sqrt(std::max(0.0, Q * Q + 0.25 * P * P + b * x));
      const double v = std::sqrt(std::max(0.0, P * P + 0.25 * Q * Q + b * x));
      f = (*models_.at(row).form)(u) * (*models_.at(col).form)(v);
    } else if (exchange_ == Exchange::contact_exact) {
      f = x <= exact_x_max(P, Q, cutoff_) ? 1.0 : 0.0;
    } else if (Q > cutoff_) {
      f = 0.0;
    }
    sum += angle_.weights[k] * f / (c + b * x);
  }
  return sum;
}

Vector StmKernel::diagonal(double energy, double inv_a_shift) const {
  if (!(energy <= 0.0)) throw DomainError("stm: energy must be non-positive");
  const std::size_t n = grid_.size();
  Vector d(n * models_.size());
  for (std::size_t c = 0; c < models_.size(); ++c)
    for (std::size_t i = 0; i < n; ++i)
      d[c * n + i] = models_[c].inverse_amplitude(q_of(grid_.nodes[i], energy)) + inv_a_shift;
  return d;
}

DenseMatrix StmKernel::exchange(double energy) const {
  const int n = static_cast<int>(grid_.size());
  const int nc = channels();
  DenseMatrix s = DenseMatrix::Zero(n * nc, n * nc);
  std::vector<double> sw(n);
  for (int i = 0; i < n; ++i) sw[i] = std::sqrt(grid_.weights[i]);
  if (exchange_ == Exchange::contact) {
    // P Q * log kernel = ln((c + b) / (c - b))
    std::vector<double> cc(n), bb(n), out(n);
    for (int i = 0; i < n; ++i) {
      const double P = grid_.nodes[i];
      for (int j = 0; j < n; ++j) {
        const double Q = grid_.nodes[j];
        cc[j] = P * P + Q * Q - energy;
        bb[j] = P * Q;
      }
      kernels::log_ratio(cc, bb, out);
      for (int j = 0; j < n; ++j) s(i, j) = 2.0 / pi * sw[i] * sw[j] * out[j];
    }
    return s;
  }
  if (exchange_ == Exchange::contact_exact) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double P = grid_.nodes[i], Q = grid_.nodes[j];
        const double v = 2.0 / pi * sw[i] * sw[j] * P * Q * contact_entry(P, Q, energy);
        s(i, j) = v;
        s(j, i) = v;
      }
    return s;
  }
  const std::span<const double> xs(angle_.nodes);
  const std::size_t m = angle_.size();
  for (std::size_t blk = 0; blk < blocks_.size(); ++blk) {
    const auto [a, b] = blocks_[blk];
    const double w = 2.0 / pi * weights_[a][b];
    const std::vector<double>& prod = products_[blk];
    for (int i = 0; i < n; ++i) {
      const double P = grid_.nodes[i];
      for (int j = a == b ? i : 0; j < n; ++j) {
        const double Q = grid_.nodes[j];
        const std::span<const double> f(prod.data() + product_offset(static_cast<int>(blk), i, j), m);
        const double v =
            w * sw[i] * sw[j] * P * Q * kernels::rational_sum(xs, f, P * P + Q * Q - energy, P * Q);
        s(a * n + i, b * n + j) = v;
        s(b * n + j, a * n + i) = v;
      }
    }
  }
  return s;
}

DenseMatrix StmKernel::matrix(double energy, double inv_a_shift) const {
  DenseMatrix m = exchange(energy);
  m.diagonal() += diagonal(energy, inv_a_shift);
  return m;
}

Vector StmKernel::scaled_eigenvalues(double energy, double inv_a_shift) const {
  const Vector d = diagonal(energy, inv_a_shift);
  if (!(d.maxCoeff() < 0.0))
    throw DomainError("stm: energy at or above the two-body threshold");
  const Vector r = (-d).cwiseSqrt().cwiseInverse();
  DenseMatrix k = exchange(energy);
  k = r.asDiagonal() * k * r.asDiagonal();
  const Vector ev = eigen_of(k, false).eigenvalues();
  return ev.reverse();
}

int StmKernel::count_levels(double energy, double inv_a_shift) const {
  const Vector ev = scaled_eigenvalues(energy, inv_a_shift);
  return static_cast<int>((ev.array() > 1.0).count());
}

std::optional<double> StmKernel::threshold(double inv_a_shift) const {
  std::optional<double> lowest;
  for (const auto& m : models_) {
    TMatrixModel shifted = m;
    shifted.inv_a += inv_a_shift;
    if (shifted.kind == TMatrixKind::zero_range && exchange_ == Exchange::contact)
      shifted.cutoff = std::numeric_limits<double>::infinity();
    const auto e = dimer_energy(shifted);
    if (e && (!lowest || *e < *lowest)) lowest = e;
  }
  return lowest;
}

double StmKernel::interpolate(double P, double energy, const Vector& amplitude,
                              double inv_a_shift) const {
  if (channels() != 1) throw DomainError("stm: interpolation needs a single channel");
  const std::size_t n = grid_.size();
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double Q = grid_.nodes[j];
    const double a = exchange_ == Exchange::separable ? angular_integral(P, Q, energy)
                                                      : contact_entry(P, Q, energy);
    sum += grid_.weights[j] * Q * Q * a * amplitude[j];
  }
  const double d = models_[0].inverse_amplitude(q_of(P, energy)) + inv_a_shift;
  return -2.0 / pi * sum / d;
}

// ---------------------------------------------------------------- levels

namespace {

void mark_resolution(LevelSet& s) {
  const double cell = std::log(s.p_max / s.p_min) / s.points;
  s.resolved.assign(s.kappas.size(), true);
  for (std::size_t j = 0; j < s.kappas.size(); ++j) {
    if (s.kappas[j] < 10.0 * s.p_min) s.resolved[j] = false;
    for (std::size_t k : {j - 1, j + 1}) {
      if (k >= s.kappas.size()) continue;
      if (std::abs(std::log(s.kappas[j] / s.kappas[k])) < 3.0 * cell) {
        s.resolved[j] = false;
        s.grid_flag = true;
      }
    }
  }
}

double auto_p_min(double scale, double kappa_min) {
  return std::min(1e-4 * scale, 0.05 * kappa_min);
}

}  // namespace

LevelSet solve_levels(const StmKernel& kernel, double kappa_min, double kappa_max,
                      double inv_a_shift) {
  if (!(kappa_min > 0.0) || !(kappa_max > kappa_min))
    throw DomainError("solve_levels: need 0 < kappa_min < kappa_max");
  LevelSet out;
  out.threshold = kernel.threshold(inv_a_shift);
  out.p_min = kernel.grid().nodes.front();
  out.p_max = kernel.grid().nodes.back();
  out.points = static_cast<int>(kernel.grid().size());
  if (out.threshold) kappa_min = std::max(kappa_min, std::sqrt(-*out.threshold) * (1.0 + 1e-9));
  if (!(kappa_max > kappa_min)) return out;

  // counts at evaluated ln(kappa); the count decreases with kappa
  std::map<double, int> seen;
  auto count_at = [&](double lk) {
    const auto it = seen.find(lk);
    if (it != seen.end()) return it->second;
    const int c = kernel.count_levels(-std::exp(2.0 * lk), inv_a_shift);
    seen.emplace(lk, c);
    return c;
  };
  const double lo = std::log(kappa_min), hi = std::log(kappa_max);
  const int n_hi = count_at(hi), n_lo = count_at(lo);
  for (int j = n_hi; j < n_lo; ++j) {
    // bracket: count > j at a, count <= j at b
    double a = lo, b = hi;
    for (const auto& [lk, c] : seen) {
      if (c > j) a = std::max(a, lk);
      else b = std::min(b, lk);
    }
    while (b - a > 1e-3) {
      const double mid = 0.5 * (a + b);
      (count_at(mid) > j ? a : b) = mid;
    }
    const RealFunction g = [&](double lk) {
      const Vector ev = kernel.scaled_eigenvalues(-std::exp(2.0 * lk), inv_a_shift);
      return ev[j] - 1.0;
    };
    const double lk = find_root(g, a, b, 1e-14);
    const double kappa = std::exp(lk);
    out.kappas.push_back(kappa);
    out.energies.push_back(-kappa * kappa);
  }
  mark_resolution(out);
  return out;
}

LevelSet solve_trimers_zero_range(double inv_a, double cutoff, double kappa_min, double kappa_max,
                                  KernelOptions options, bool exact_domain) {
  double k_floor = kappa_min;
  if (inv_a > 0.0) k_floor = std::max(k_floor, inv_a);
  if (options.p_min == 0.0) options.p_min = auto_p_min(cutoff, k_floor);
  const auto model = TMatrixModel::zero_range(inv_a, exact_domain ? cutoff
                                                                  : std::numeric_limits<double>::infinity());
  const StmKernel k = StmKernel::contact(model, cutoff, options, exact_domain);
  return solve_levels(k, kappa_min, kappa_max);
}

LevelSet solve_trimers_separable(std::shared_ptr<const FormFactor> form, double inv_a,
                                 double kappa_min, double kappa_max, KernelOptions options) {
  if (!form) throw DomainError("solve_trimers_separable: missing form factor");
  const auto model = TMatrixModel::separable(inv_a, form);
  double k_floor = kappa_min;
  if (const auto q = dimer_wavenumber(model)) k_floor = std::max(k_floor, *q);
  if (options.p_min == 0.0) options.p_min = auto_p_min(form->scale(), k_floor);
  return solve_levels(StmKernel::separable(model, options), kappa_min, kappa_max);
}

LevelSet solve_trimers_narrow_resonance(double inv_a, double r_star, double kappa_min,
                                        double kappa_max, KernelOptions options, double cutoff) {
  const auto model = TMatrixModel::narrow_resonance(inv_a, r_star);
  if (cutoff == 0.0) cutoff = 1000.0 / r_star;
  double k_floor = kappa_min;
  if (const auto q = dimer_wavenumber(model)) k_floor = std::max(k_floor, *q);
  KernelOptions o = options;
  if (o.p_min == 0.0) o.p_min = auto_p_min(1.0 / r_star, k_floor);
  const LevelSet base = solve_levels(StmKernel::contact(model, cutoff, o), kappa_min, kappa_max);
  KernelOptions o2 = o;
  o2.p_max = 0.0;
  o2.points = o.points + static_cast<int>(std::ceil(o.points * std::log(2.0) / std::log(cutoff / o.p_min)));
  const LevelSet check = solve_levels(StmKernel::contact(model, 2.0 * cutoff, o2), kappa_min, kappa_max);
  const std::size_t n = std::min(base.energies.size(), check.energies.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(check.energies[i] / base.energies[i] - 1.0) > 0.01)
      throw ConvergenceError("narrow resonance: residual cutoff dependence above 1%");
  }
  return base;
}

ThresholdSet threshold_scattering_lengths(const StmKernel& kernel, int n_max,
                                          double min_length_ratio) {
  if (kernel.channels() != 1) throw DomainError("thresholds: single-channel kernel required");
  if (n_max < 0) throw DomainError("thresholds: n_max must be non-negative");
  DenseMatrix m = kernel.matrix(0.0, -kernel.model().inv_a);
  const Vector mu = eigen_of(m, false).eigenvalues().reverse();
  const double p_floor = kernel.grid().nodes.front();
  ThresholdSet out;
  for (Eigen::Index i = 0; i < mu.size() && mu[i] > 0.0; ++i) {
    const double a = -1.0 / mu[i];
    if (std::abs(a) * kernel.scale() < min_length_ratio) {
      out.spurious.push_back(a);
    } else if (1.0 / std::abs(a) < 20.0 * p_floor) {
      out.unresolved.push_back(a);
    } else if (static_cast<int>(out.a_minus.size()) <= n_max) {
      out.a_minus.push_back(a);
    }
  }
  return out;
}

ThresholdSet threshold_scattering_lengths_zero_range(double cutoff, int n_max, KernelOptions options) {
  if (options.p_min == 0.0)
    options.p_min = 1e-4 * cutoff * std::pow(scaling_factor(), -static_cast<double>(n_max));
  const StmKernel k = StmKernel::contact(TMatrixModel::zero_range(0.0), cutoff, options);
  return threshold_scattering_lengths(k, n_max);
}

double self_consistent_threshold(
    const std::function<std::shared_ptr<const FormFactor>(double)>& form_at, int level,
    double a_guess, const KernelOptions& options, double min_length_ratio) {
  if (!(a_guess < 0.0)) throw DomainError("self_consistent_threshold: a_guess must be negative");
  auto residual = [&](double inv_a) {
    const StmKernel k = StmKernel::separable(TMatrixModel::separable(inv_a, form_at(inv_a)), options);
    const ThresholdSet t = threshold_scattering_lengths(k, level, min_length_ratio);
    if (static_cast<int>(t.a_minus.size()) <= level)
      throw ConvergenceError("self_consistent_threshold: level not found");
    return inv_a - 1.0 / t.a_minus[level];
  };
  double x0 = 1.0 / a_guess, x1 = 1.02 / a_guess;
  double f0 = residual(x0), f1 = residual(x1);
  for (int it = 0; it < 30; ++it) {
    if (f1 == f0) break;
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    if (std::abs(x1 - x0) <= 1e-10 * std::abs(x1)) return 1.0 / x1;
    f1 = residual(x1);
  }
  if (std::abs(x1 - x0) > 1e-8 * std::abs(x1))
    throw ConvergenceError("self_consistent_threshold: secant iteration did not converge");
  return 1.0 / x1;
}

double dimer_crossing(const StmKernel& kernel, int level, double inv_a_lo, double inv_a_hi) {
  if (!(inv_a_lo > 0.0) || !(inv_a_hi > inv_a_lo))
    throw DomainError("dimer_crossing: need 0 < inv_a_lo < inv_a_hi");
  const double base = kernel.model().inv_a;
  auto levels_at = [&](double inv_a) {
    const double shift = inv_a - base;
    const auto e = kernel.threshold(shift);
    if (!e) throw DomainError("dimer_crossing: no dimer at this scattering length");
    return kernel.count_levels(*e, shift);
  };
  // the level exists below 1/a_*
  double a = std::log(inv_a_lo), b = std::log(inv_a_hi);
  if (levels_at(inv_a_lo) <= level || levels_at(inv_a_hi) > level)
    throw BracketError("dimer_crossing: level does not cross the dimer inside the window");
  while (b - a > 1e-3) {
    const double mid = 0.5 * (a + b);
    (levels_at(std::exp(mid)) > level ? a : b) = mid;
  }
  const RealFunction g = [&](double l) {
    const double shift = std::exp(l) - base;
    return kernel.scaled_eigenvalues(*kernel.threshold(shift), shift)[level] - 1.0;
  };
  return 1.0 / std::exp(find_root(g, a, b, 1e-13));
}

ThreeBodyParameter extrapolate_kappa_star(const LevelSet& levels, double s0) {
  ThreeBodyParameter out;
  const double lambda0 = scaling_factor(s0);
  int best = -1;
  for (std::size_t n = 0; n < levels.kappas.size(); ++n) {
    out.kappas.push_back(levels.kappas[n]);
    if (levels.resolved[n]) best = static_cast<int>(n);
  }
  if (best < 0) throw ConvergenceError("kappa_star: no resolved level");
  out.level = best;
  out.kappa_star = levels.kappas[best] * std::pow(lambda0, best);
  if (best > 0) {
    const double prev = levels.kappas[best - 1] * std::pow(lambda0, best - 1);
    out.residual = std::abs(out.kappa_star / prev - 1.0);
  }
  return out;
}

// ---------------------------------------------------------------- wave function

Wavefunction::Wavefunction(const StmKernel& kernel, double energy, Vector amplitude,
                           double inv_a_shift)
    : kernel_(&kernel), energy_(energy), amplitude_(std::move(amplitude)), shift_(inv_a_shift) {
  if (kernel.channels() != 1) throw DomainError("wavefunction: single-channel kernel required");
  const double lo = kernel.grid().nodes.front(), hi = 4.0 * kernel.grid().nodes.back();
  const int n = 1200;
  table_p_.resize(n);
  table_f_.resize(n);
  for (int i = 0; i < n; ++i) {
    table_p_[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    table_f_[i] = kernel.interpolate(table_p_[i], energy, amplitude_, inv_a_shift);
  }
}

double Wavefunction::spectator(double P) const {
  if (P <= table_p_.front()) return table_f_.front();
  if (P >= table_p_.back()) return 0.0;
  const auto it = std::upper_bound(table_p_.begin(), table_p_.end(), P);
  const std::size_t i = static_cast<std::size_t>(it - table_p_.begin()) - 1;
  const double t = std::log(P / table_p_[i]) / std::log(table_p_[i + 1] / table_p_[i]);
  return (1.0 - t) * table_f_[i] + t * table_f_[i + 1];
}

double Wavefunction::form(double p) const {
  if (kernel_->exchange_kind() == StmKernel::Exchange::separable) return (*kernel_->model().form)(p);
  return p < kernel_->cutoff() ? 1.0 : 0.0;
}

double Wavefunction::operator()(const std::array<double, 3>& P, const std::array<double, 3>& p) const {
  auto norm3 = [](const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  };
  std::array<double, 3> P1, p1, P2, p2;
  for (int k = 0; k < 3; ++k) {
    P1[k] = -p[k] - 0.5 * P[k];
    p1[k] = -0.5 * p[k] + 0.75 * P[k];
    P2[k] = p[k] - 0.5 * P[k];
    p2[k] = -0.5 * p[k] - 0.75 * P[k];
  }
  const double nP = norm3(P), np = norm3(p);
  const double denom = 0.75 * nP * nP + np * np - energy_;
  const double sum = spectator(nP) * form(np) + spectator(norm3(P1)) * form(norm3(p1)) +
                     spectator(norm3(P2)) * form(norm3(p2));
  return -sum / denom;
}

double Wavefunction::norm(int radial_points, int angular_points) const {
  const double lo = kernel_->grid().nodes.front(), hi = 4.0 * kernel_->grid().nodes.back();
  const QuadratureRule r = gauss_legendre_log(radial_points, lo, hi);
  const QuadratureRule c = gauss_legendre(angular_points, -1.0, 1.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j)
      for (std::size_t k = 0; k < c.size(); ++k) {
        const double P = r.nodes[i], p = r.nodes[j], x = c.nodes[k];
        const double psi = (*this)({0.0, 0.0, P}, {p * std::sqrt(1.0 - x * x), 0.0, p * x});
        sum += r.weights[i] * r.weights[j] * c.weights[k] * P * P * p * p * psi * psi;
      }
  // d^3P d^3p = 4 pi P^2 dP 2 pi p^2 dp dx
  return 8.0 * pi * pi * sum / std::pow(2.0 * pi, 6);
}

Wavefunction reconstruct_wavefunction(const StmKernel& kernel, double energy, double inv_a_shift) {
  const Vector d = kernel.diagonal(energy, inv_a_shift);
  if (!(d.maxCoeff() < 0.0)) throw DomainError("wavefunction: energy above the two-body threshold");
  const Vector r = (-d).cwiseSqrt().cwiseInverse();
  DenseMatrix k = kernel.exchange(energy);
  k = r.asDiagonal() * k * r.asDiagonal();
  const auto es = eigen_of(k, true);
  Eigen::Index best = 0;
  (es.eigenvalues().array() - 1.0).abs().minCoeff(&best);
  const Vector u = es.eigenvectors().col(best);
  const auto& g = kernel.grid();
  Vector f(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i)
    f[i] = u[i] * r[i] / (std::sqrt(g.weights[i]) * g.nodes[i]);
  Eigen::Index imax = 0;
  f.cwiseAbs().maxCoeff(&imax);
  f /= f[imax];
  return Wavefunction(kernel, energy, std::move(f), inv_a_shift);
}

// ---------------------------------------------------------------- triton

namespace {

struct ShapePoint {
  double inv_a = 0.0;  // at r0 = 1
  double r_e = 0.0;
};

ShapePoint poschl_teller_shape(double lambda) {
  const ZeroEnergyState s = solve_zero_energy(TwoBodyModel::poschl_teller(lambda, 1.0));
  return {s.inv_a, s.r_e};
}

double separable_effective_range(const FormFactor& form, double inv_a, double r0) {
  const double k1 = 0.02 / r0, k2 = 0.04 / r0;
  const double y1 = (form.k_cot_delta(inv_a, k1) + inv_a) / (k1 * k1);
  const double y2 = (form.k_cot_delta(inv_a, k2) + inv_a) / (k2 * k2);
  return 2.0 * (y1 * k2 * k2 - y2 * k1 * k1) / (k2 * k2 - k1 * k1);
}

ChannelFit finish_fit(ChannelFit fit, double target_r_e, const FormFactor& form) {
  const double r_e = separable_effective_range(form, fit.inv_a, fit.r0);
  fit.residual = std::abs(r_e / target_r_e - 1.0);
  return fit;
}

std::shared_ptr<const FormFactor> channel_form(const ChannelFit& fit, const EstOptions& est) {
  const ZeroEnergyState s = solve_zero_energy(TwoBodyModel::poschl_teller(fit.lambda, fit.r0));
  return std::make_shared<const FormFactor>(est_form_factor(s, est));
}

}  // namespace

ChannelFit fit_poschl_teller(double inv_a, double r_e) {
  if (!(r_e > 0.0)) throw DomainError("fit_poschl_teller: effective range must be positive");
  const double target = r_e * inv_a;
  const RealFunction g = [&](double lambda) {
    const ShapePoint s = poschl_teller_shape(lambda);
    return s.r_e * s.inv_a - target;
  };
  const double lambda = find_root(g, 0.3, 1.9, 1e-13);
  const ShapePoint s = poschl_teller_shape(lambda);
  ChannelFit fit;
  fit.lambda = lambda;
  fit.r0 = r_e / s.r_e;
  fit.inv_a = s.inv_a / fit.r0;
  fit.r_e = r_e;
  return fit;
}

TritonModel TritonModel::fit(const TritonInputs& inputs, const EstOptions& est) {
  if (!(inputs.hbar2_over_m > 0.0)) throw DomainError("triton: hbar^2/m must be positive");
  TritonModel m;
  m.inputs = inputs;
  const double inv_t = std::isinf(inputs.a_t) ? 0.0 : 1.0 / inputs.a_t;
  const double inv_s = std::isinf(inputs.a_s) ? 0.0 : 1.0 / inputs.a_s;
  m.triplet_fit = fit_poschl_teller(inv_t, inputs.r_et);
  m.singlet_fit = fit_poschl_teller(inv_s, inputs.r_es);
  // the separable strength carries the requested 1/a exactly
  m.triplet_fit.inv_a = inv_t;
  m.singlet_fit.inv_a = inv_s;
  m.triplet = channel_form(m.triplet_fit, est);
  m.singlet = channel_form(m.singlet_fit, est);
  m.triplet_fit = finish_fit(m.triplet_fit, inputs.r_et, *m.triplet);
  m.singlet_fit = finish_fit(m.singlet_fit, inputs.r_es, *m.singlet);
  return m;
}

TritonModel TritonModel::unitarity(const TritonInputs& inputs, const EstOptions& est) {
  TritonInputs u = inputs;
  u.a_t = std::numeric_limits<double>::infinity();
  u.a_s = std::numeric_limits<double>::infinity();
  return fit(u, est);
}

StmKernel TritonModel::kernel(const KernelOptions& options) const {
  return StmKernel::coupled({TMatrixModel::separable(triplet_fit.inv_a, triplet),
                             TMatrixModel::separable(singlet_fit.inv_a, singlet)},
                            {{0.25, 0.75}, {0.75, 0.25}}, options);
}

TritonResult solve_triton(const TritonModel& model, double e_max_binding, KernelOptions options,
                          double e_min_binding) {
  const double h = model.inputs.hbar2_over_m;
  if (!(h > 0.0)) throw DomainError("triton: hbar^2/m must be positive");
  if (!(e_max_binding > e_min_binding) || e_min_binding < 0.0)
    throw DomainError("triton: need 0 <= e_min < e_max");
  const auto qd = dimer_wavenumber(TMatrixModel::separable(model.triplet_fit.inv_a, model.triplet));
  double k_min = std::sqrt(e_min_binding / h);
  if (qd) k_min = std::max(k_min, *qd);
  if (!(k_min > 0.0)) k_min = 1e-6 * std::sqrt(e_max_binding / h);
  const double scale = std::max(model.triplet->scale(), model.singlet->scale());
  if (options.p_min == 0.0) options.p_min = auto_p_min(scale, k_min);
  const StmKernel k = model.kernel(options);
  TritonResult out;
  out.levels = solve_levels(k, std::max(k_min * (1.0 - 1e-12), 1e-300), std::sqrt(e_max_binding / h));
  if (out.levels.threshold) out.deuteron_energy = -*out.levels.threshold * h;
  for (double e : out.levels.energies) out.trimer_energies.push_back(e * h);
  return out;
}

}  // namespace efimov::stm
