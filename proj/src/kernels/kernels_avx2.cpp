// AVX2 variants of the kernel table. Compiled with -mavx2 -mfma; only
// dispatched to when the CPU supports both (see kernels_dispatch.cpp).

#include "wepr/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cfloat>
#include <cmath>
#include <cstdint>

namespace wepr::kernels {
namespace {

// log2(m) = s * P(s^2) with s = (m-1)/(m+1), for m in [sqrt(2)/2, sqrt(2)).
// Truncated atanh series; tail term w^11 ~ 1.4e-17 keeps the result within
// a few ulp of a correctly rounded log2.
constexpr double kLogC[11] = {
    2.8853900817779268,    // (2/ln2)/1
    0.9617966939259756,    // (2/ln2)/3
    0.5770780163555853,    // (2/ln2)/5
    0.4121985831111324,    // (2/ln2)/7
    0.3205988979753252,    // (2/ln2)/9
    0.2623081892525388,    // (2/ln2)/11
    0.22195308321368667,   // (2/ln2)/13
    0.19235933878519512,   // (2/ln2)/15
    0.16972882833987804,   // (2/ln2)/17
    0.15186263588304877,   // (2/ln2)/19
    0.1373995277037108,    // (2/ln2)/21
};

// Vector log2 for strictly positive finite inputs (subnormals included).
inline __m256d log2_positive(__m256d x) {
  const __m256d dbl_min = _mm256_set1_pd(DBL_MIN);
  const __m256d two54 = _mm256_set1_pd(0x1.0p54);
  const __m256d one = _mm256_set1_pd(1.0);

  // Scale subnormals into the normal range and remember the shift.
  const __m256d is_sub = _mm256_cmp_pd(x, dbl_min, _CMP_LT_OQ);
  x = _mm256_blendv_pd(x, _mm256_mul_pd(x, two54), is_sub);

  const __m256i bits = _mm256_castpd_si256(x);

  // Biased exponent to double via the 2^52 magic-number trick.
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
  const __m256i expo_bits = _mm256_srli_epi64(bits, 52);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(expo_bits, magic)),
                            _mm256_set1_pd(0x1.0p52 + 1023.0));

  // Mantissa in [1, 2).
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

  // Reduce to [sqrt(2)/2, sqrt(2)) so e + log2(m) never cancels.
  const __m256d sqrt2 = _mm256_set1_pd(1.4142135623730951);
  const __m256d gt = _mm256_cmp_pd(m, sqrt2, _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), gt);
  e = _mm256_add_pd(e, _mm256_and_pd(gt, one));
  e = _mm256_sub_pd(e, _mm256_and_pd(is_sub, _mm256_set1_pd(54.0)));

  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d w = _mm256_mul_pd(s, s);

  __m256d poly = _mm256_set1_pd(kLogC[10]);
  for (int i = 9; i >= 0; --i) poly = _mm256_fmadd_pd(poly, w, _mm256_set1_pd(kLogC[i]));

  return _mm256_fmadd_pd(s, poly, e);
}

void neg_p_log2_p_avx2(const double* p, double* out, size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(p + i);
    const __m256d nonpos = _mm256_cmp_pd(v, zero, _CMP_LE_OQ);
    // Feed a harmless 1.0 into log2 where the lane will be masked out.
    const __m256d safe = _mm256_blendv_pd(v, _mm256_set1_pd(1.0), nonpos);
    __m256d r = _mm256_sub_pd(zero, _mm256_mul_pd(v, log2_positive(safe)));
    r = _mm256_add_pd(r, zero);  // -0.0 -> +0.0 at p == 1
    r = _mm256_andnot_pd(nonpos, r);
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) {
    const double v = p[i];
    out[i] = (v <= 0.0) ? 0.0 : -(v * std::log2(v)) + 0.0;
  }
}

double reduce_add(__m256d acc) {
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double sum_avx2(const double* x, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double total = reduce_add(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

double dot_avx2(const double* x, const double* y, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double total = reduce_add(acc);
  for (; i < n; ++i) total += x[i] * y[i];
  return total;
}

void axpy_avx2(double a, const double* x, double* y, size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const Ops& avx2_ops_impl() {
  static const Ops table{neg_p_log2_p_avx2, sum_avx2, dot_avx2, axpy_avx2, "avx2"};
  return table;
}

}  // namespace wepr::kernels

#endif  // x86
