#include "efimov/kernels.hpp"

#include "efimov/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace efimov::kernels {

namespace scalar {

void log_ratio(std::span<const double> c, std::span<const double> b, std::span<double> out) {
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::log1p(2.0 * b[j] / (c[j] - b[j]));
}

double rational_sum(std::span<const double> x, std::span<const double> f, double c, double b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) sum += f[k] / (c + b * x[k]);
  return sum;
}

}  // namespace scalar

#ifndef EFIMOV_HAVE_AVX2
namespace avx2 {
bool available() { return false; }
void log_ratio(std::span<const double> c, std::span<const double> b, std::span<double> out) {
  scalar::log_ratio(c, b, out);
}
double rational_sum(std::span<const double> x, std::span<const double> f, double c, double b) {
  return scalar::rational_sum(x, f, c, b);
}
}  // namespace avx2
#endif

Isa detected_isa() { return avx2::available() ? Isa::avx2 : Isa::scalar; }

Isa active_isa() {
  static const Isa isa = [] {
    const char* force = std::getenv("EFIMOV_FORCE_SCALAR");
    if (force && std::strcmp(force, "0") != 0) return Isa::scalar;
    return detected_isa();
  }();
  return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void log_ratio(std::span<const double> c, std::span<const double> b, std::span<double> out,
               Isa isa) {
  if (c.size() != out.size() || b.size() != out.size())
    throw DomainError("log_ratio: span sizes differ");
  if (isa == Isa::avx2) {
    avx2::log_ratio(c, b, out);
  } else {
    scalar::log_ratio(c, b, out);
  }
}

double rational_sum(std::span<const double> x, std::span<const double> f, double c, double b,
                    Isa isa) {
  if (x.size() != f.size()) throw DomainError("rational_sum: span sizes differ");
  return isa == Isa::avx2 ? avx2::rational_sum(x, f, c, b) : scalar::rational_sum(x, f, c, b);
}

}  // namespace efimov::kernels
