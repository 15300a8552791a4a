#include <immintrin.h>

#include "owcsim/kernels/kernels.hpp"

// AVX2/FMA variants. Compiled only into this translation unit (see
// CMakeLists); never called unless the CPU reports AVX2 at runtime.
namespace owc::kernels::avx2 {
namespace {

// Vector exp for 4 doubles, Cephes-style: range reduction by ln2, rational
// polynomial on the reduced argument, exponent reassembly. Accurate to a few
// ulp over the clamped range; inputs below -708.39 flush to zero.
inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);
  const __m256d hi = _mm256_set1_pd(709.436);
  const __m256d lo = _mm256_set1_pd(-708.39);

  const __m256d underflow = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

  __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  x = _mm256_fnmadd_pd(n, c1, x);
  x = _mm256_fnmadd_pd(n, c2, x);

  const __m256d xx = _mm256_mul_pd(x, x);
  __m256d px = _mm256_fmadd_pd(p0, xx, p1);
  px = _mm256_fmadd_pd(px, xx, p2);
  px = _mm256_mul_pd(px, x);
  __m256d qx = _mm256_fmadd_pd(q0, xx, q1);
  qx = _mm256_fmadd_pd(qx, xx, q2);
  qx = _mm256_fmadd_pd(qx, xx, q3);
  __m256d r = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  r = _mm256_fmadd_pd(_mm256_set1_pd(2.0), r, _mm256_set1_pd(1.0));

  // 2^n via direct exponent-field construction.
  __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  n64 = _mm256_add_epi64(n64, _mm256_set1_epi64x(1023));
  n64 = _mm256_slli_epi64(n64, 52);
  r = _mm256_mul_pd(r, _mm256_castsi256_pd(n64));

  return _mm256_andnot_pd(underflow, r);
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

double gaussian_gain_sum(const double* radial_sq, const double* axial,
                         const double* weight, std::size_t n, double waist_sq,
                         double waist_offset, double inv_rayleigh) {
  const __m256d vwaist = _mm256_set1_pd(waist_sq);
  const __m256d voff = _mm256_set1_pd(waist_offset);
  const __m256d vinvzr = _mm256_set1_pd(inv_rayleigh);
  const __m256d vone = _mm256_set1_pd(1.0);
  const __m256d vm2 = _mm256_set1_pd(-2.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d u = _mm256_mul_pd(
        _mm256_sub_pd(_mm256_loadu_pd(axial + i), voff), vinvzr);
    const __m256d w2 = _mm256_mul_pd(vwaist, _mm256_fmadd_pd(u, u, vone));
    const __m256d arg =
        _mm256_div_pd(_mm256_mul_pd(vm2, _mm256_loadu_pd(radial_sq + i)), w2);
    const __m256d g = _mm256_div_pd(exp_pd(arg), w2);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(weight + i), g, acc);
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    total += scalar::gaussian_gain_sum(radial_sq + i, axial + i, weight + i, 1,
                                       waist_sq, waist_offset, inv_rayleigh);
  }
  return total;
}

std::uint64_t qam_error_count(const double* re, const double* im,
                              const std::uint16_t* ref, std::size_t n,
                              int side) {
  const int max_idx = side - 1;
  const __m256d vhalf = _mm256_set1_pd(0.5);
  const __m256d vshift = _mm256_set1_pd(double(max_idx));
  const __m256d vzero = _mm256_setzero_pd();
  const __m256d vmax = _mm256_set1_pd(double(max_idx));
  std::uint64_t errors = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vi = _mm256_mul_pd(
        _mm256_add_pd(_mm256_loadu_pd(re + i), vshift), vhalf);
    __m256d vq = _mm256_mul_pd(
        _mm256_add_pd(_mm256_loadu_pd(im + i), vshift), vhalf);
    vi = _mm256_min_pd(_mm256_max_pd(vi, vzero), vmax);
    vq = _mm256_min_pd(_mm256_max_pd(vq, vzero), vmax);
    __m128i ii = _mm256_cvtpd_epi32(vi);  // round-to-nearest-even, as lrint
    __m128i qi = _mm256_cvtpd_epi32(vq);
    ii = _mm_xor_si128(ii, _mm_srli_epi32(ii, 1));
    qi = _mm_xor_si128(qi, _mm_srli_epi32(qi, 1));
    __m128i gray = _mm_or_si128(_mm_slli_epi32(ii, 8), qi);
    __m128i refv = _mm_cvtepu16_epi32(_mm_loadl_epi64(
        reinterpret_cast<const __m128i*>(ref + i)));
    __m128i diff = _mm_xor_si128(gray, refv);
    errors += std::uint64_t(__builtin_popcount(unsigned(_mm_extract_epi32(diff, 0))));
    errors += std::uint64_t(__builtin_popcount(unsigned(_mm_extract_epi32(diff, 1))));
    errors += std::uint64_t(__builtin_popcount(unsigned(_mm_extract_epi32(diff, 2))));
    errors += std::uint64_t(__builtin_popcount(unsigned(_mm_extract_epi32(diff, 3))));
  }
  if (i < n) errors += scalar::qam_error_count(re + i, im + i, ref + i, n - i, side);
  return errors;
}

}  // namespace owc::kernels::avx2
