#pragma once

#include <span>

// Inner loops of the momentum-space kernel assembly. Each entry point has a
// scalar reference implementation and, where the CPU supports it, an AVX2+FMA
// variant chosen at runtime. Set EFIMOV_FORCE_SCALAR=1 to pin the scalar path.
namespace efimov::kernels {

enum class Isa { scalar, avx2 };

Isa detected_isa();
Isa active_isa();
const char* isa_name(Isa isa);

// out[j] = ln((c[j] + b[j]) / (c[j] - b[j])) for c[j] > |b[j]|.
void log_ratio(std::span<const double> c, std::span<const double> b, std::span<double> out,
               Isa isa = active_isa());

// sum_k f[k] / (c + b * x[k])
double rational_sum(std::span<const double> x, std::span<const double> f, double c, double b,
                    Isa isa = active_isa());

namespace scalar {
void log_ratio(std::span<const double> c, std::span<const double> b, std::span<double> out);
double rational_sum(std::span<const double> x, std::span<const double> f, double c, double b);
}  // namespace scalar

namespace avx2 {
bool available();
void log_ratio(std::span<const double> c, std::span<const double> b, std::span<double> out);
double rational_sum(std::span<const double> x, std::span<const double> f, double c, double b);
}  // namespace avx2

}  // namespace efimov::kernels
