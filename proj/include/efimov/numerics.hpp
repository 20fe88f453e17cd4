#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace efimov {

using RealFunction = std::function<double(double)>;
using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Mapping { linear, logarithmic, composite };

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  Mapping mapping = Mapping::linear;
  double lo = 0.0;
  double hi = 0.0;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

// n-point Gauss-Legendre rule on [lo, hi].
QuadratureRule gauss_legendre(int n, double lo, double hi);

// Gauss-Legendre in ln(p) on [lo, hi], lo > 0; weights carry the Jacobian p.
QuadratureRule gauss_legendre_log(int n, double lo, double hi);

// n_per_panel points on each interval [breaks[k], breaks[k+1]].
QuadratureRule composite_gauss_legendre(std::span<const double> breaks, int n_per_panel);

// Bracketed root: TOMS 748 interpolation with bisection safeguard.
// Throws BracketError when f(lo), f(hi) share a sign and EvaluationError on NaN.
double find_root(const RealFunction& f, double lo, double hi, double tol = 1e-12);

// Scans [lo, hi] on n uniform cells and returns the sub-intervals where f changes sign.
std::vector<std::pair<double, double>> sign_change_brackets(const RealFunction& f, double lo,
                                                            double hi, int n);

struct EigenPair {
  double value = 0.0;
  Vector vector;
};

// Eigenvalue of smallest magnitude; among complex pairs the real part is reported.
EigenPair smallest_eigenvalue(const DenseMatrix& m);

double determinant(const DenseMatrix& m);

// Ascending eigenvalues of a symmetric matrix.
Vector symmetric_eigenvalues(const DenseMatrix& m);

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-14;
  double first_step = 1e-4;
  bool keep_samples = false;
};

struct OdeSample {
  double x = 0.0;
  double y = 0.0;
  double dy = 0.0;
  double y2_integral = 0.0;  // integral of y^2 from the start point
};

struct OdeResult {
  double y = 0.0;
  double dy = 0.0;
  double y2_integral = 0.0;
  int nodes = 0;  // sign changes of y strictly inside (x0, x1]
  std::vector<OdeSample> samples;
};

// y'' = q(x) y from x0 to x1 with adaptive Runge-Kutta-Fehlberg 7(8).
OdeResult integrate_linear(const RealFunction& q, double x0, double x1, double y0, double dy0,
                           const OdeOptions& options = {});

// Same, stopping at each of the (increasing) checkpoints and reporting y, dy there.
std::vector<OdeSample> integrate_linear_to(const RealFunction& q, double x0, double y0, double dy0,
                                           std::span<const double> checkpoints,
                                           const OdeOptions& options = {});

struct RadialOptions {
  double reduced_mass = 1.0;
  double u0 = 0.0;
  double du0 = 1.0;
  OdeOptions ode;
};

struct RadialSolution {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;
  int nodes = 0;
  double log_derivative = 0.0;
};

// u'' = 2 mu (V(r) - E) u on [r0, r1], starting from (u0, du0) at r0.
RadialSolution integrate_radial(const RealFunction& potential, double energy, double r0, double r1,
                                const RadialOptions& options = {});

}  // namespace efimov
