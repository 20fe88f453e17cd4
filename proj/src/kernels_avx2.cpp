#include "efimov/kernels.hpp"

#include <immintrin.h>

#include <cstdint>

namespace efimov::kernels::avx2 {

namespace {

// ln(u) for u >= 1, u finite; ~1 ulp.
inline __m256d log_pd(__m256d u) {
  const __m256i bits = _mm256_castpd_si256(u);
  __m256i exp_biased = _mm256_srli_epi64(bits, 52);
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

  const __m256d sqrt2 = _mm256_set1_pd(1.4142135623730951);
  const __m256d big = _mm256_cmp_pd(m, sqrt2, _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  exp_biased = _mm256_sub_epi64(exp_biased, _mm256_castpd_si256(big));

  const __m256d magic = _mm256_set1_pd(4503599627370496.0);  // 2^52
  const __m256d e = _mm256_sub_pd(
      _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(exp_biased, _mm256_castpd_si256(magic))),
                    magic),
      _mm256_set1_pd(1023.0));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d z = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d z2 = _mm256_mul_pd(z, z);
  __m256d p = _mm256_set1_pd(1.0 / 23.0);
  p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / 21.0));
  p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / 19.0));
  p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / 17.0));
  p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / 15.0));
  p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / 13.0));
  p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / 11.0));
  p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / 9.0));
  p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / 7.0));
  p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / 5.0));
  p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / 3.0));
  // ln m = 2 z (1 + z2 p)
  const __m256d two_z = _mm256_add_pd(z, z);
  const __m256d ln_m = _mm256_fmadd_pd(_mm256_mul_pd(two_z, z2), p, two_z);

  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  return _mm256_add_pd(_mm256_mul_pd(e, ln2_hi), _mm256_fmadd_pd(e, ln2_lo, ln_m));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

bool available() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

void log_ratio(std::span<const double> c, std::span<const double> b, std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d cv = _mm256_loadu_pd(c.data() + j);
    const __m256d bv = _mm256_loadu_pd(b.data() + j);
    const __m256d d = _mm256_div_pd(_mm256_mul_pd(two, bv), _mm256_sub_pd(cv, bv));
    // log1p(d) = ln(u) + (d - (u - 1)) / u with u = fl(1 + d)
    const __m256d u = _mm256_add_pd(one, d);
    const __m256d corr = _mm256_div_pd(_mm256_sub_pd(d, _mm256_sub_pd(u, one)), u);
    _mm256_storeu_pd(out.data() + j, _mm256_add_pd(log_pd(u), corr));
  }
  if (j < n) scalar::log_ratio(c.subspan(j), b.subspan(j), out.subspan(j));
}

double rational_sum(std::span<const double> x, std::span<const double> f, double c, double b) {
  const std::size_t n = x.size();
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d bv = _mm256_set1_pd(b);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d den = _mm256_fmadd_pd(bv, _mm256_loadu_pd(x.data() + k), cv);
    acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_loadu_pd(f.data() + k), den));
  }
  double sum = hsum(acc);
  for (; k < n; ++k) sum += f[k] / (c + b * x[k]);
  return sum;
}

}  // namespace efimov::kernels::avx2
