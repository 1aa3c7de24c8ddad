// AVX2 variants, compiled with -mavx2 and only reached after a runtime
// CPU check. No FMA: projections must match the scalar kernel bit for bit.

#include <immintrin.h>

#include "simd/kernels_impl.hpp"

namespace aperiodic::simd::avx2 {
namespace {

inline __m256d horner(const double* coef, __m256d t2) {
  __m256d p = _mm256_set1_pd(coef[7]);
  for (int i = 6; i >= 0; --i) p = _mm256_add_pd(_mm256_mul_pd(p, t2), _mm256_set1_pd(coef[i]));
  return p;
}

inline void sincos_turns(__m256d r, __m256d& s, __m256d& c) {
  const __m256d q = _mm256_round_pd(_mm256_mul_pd(_mm256_set1_pd(4.0), r), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d f = _mm256_sub_pd(r, _mm256_mul_pd(_mm256_set1_pd(0.25), q));
  const __m256d t = _mm256_mul_pd(_mm256_set1_pd(kTwoPi), f);
  const __m256d t2 = _mm256_mul_pd(t, t);
  const __m256d sn = _mm256_add_pd(t, _mm256_mul_pd(t, _mm256_mul_pd(t2, horner(kSin, t2))));
  const __m256d cs = _mm256_add_pd(_mm256_set1_pd(1.0), _mm256_mul_pd(t2, horner(kCos, t2)));

  const __m256d qm = _mm256_sub_pd(
      q, _mm256_mul_pd(_mm256_set1_pd(4.0), _mm256_floor_pd(_mm256_mul_pd(q, _mm256_set1_pd(0.25)))));
  const __m256d is1 = _mm256_cmp_pd(qm, _mm256_set1_pd(1.0), _CMP_EQ_OQ);
  const __m256d is2 = _mm256_cmp_pd(qm, _mm256_set1_pd(2.0), _CMP_EQ_OQ);
  const __m256d is3 = _mm256_cmp_pd(qm, _mm256_set1_pd(3.0), _CMP_EQ_OQ);
  const __m256d swap = _mm256_or_pd(is1, is3);
  const __m256d neg_s = _mm256_or_pd(is2, is3);
  const __m256d neg_c = _mm256_or_pd(is1, is2);
  const __m256d sign = _mm256_set1_pd(-0.0);

  __m256d so = _mm256_blendv_pd(sn, cs, swap);
  __m256d co = _mm256_blendv_pd(cs, sn, swap);
  so = _mm256_xor_pd(so, _mm256_and_pd(neg_s, sign));
  co = _mm256_xor_pd(co, _mm256_and_pd(neg_c, sign));
  s = so;
  c = co;
}

PhaseSum phase_sum(const double* x, const double* y, std::size_t n, double kx, double ky) {
  const __m256d vkx = _mm256_set1_pd(kx);
  const __m256d vky = _mm256_set1_pd(ky);
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_mul_pd(vkx, _mm256_loadu_pd(x + i));
    if (y) t = _mm256_add_pd(t, _mm256_mul_pd(vky, _mm256_loadu_pd(y + i)));
    t = _mm256_xor_pd(t, sign);
    const __m256d r = _mm256_sub_pd(t, _mm256_round_pd(t, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC));
    __m256d s, c;
    sincos_turns(r, s, c);
    acc_re = _mm256_add_pd(acc_re, c);
    acc_im = _mm256_add_pd(acc_im, s);
  }
  alignas(32) double re[4], im[4];
  _mm256_store_pd(re, acc_re);
  _mm256_store_pd(im, acc_im);
  PhaseSum out{(re[0] + re[1]) + (re[2] + re[3]), (im[0] + im[1]) + (im[2] + im[3])};
  for (; i < n; ++i) {
    const double t = y ? -(kx * x[i] + ky * y[i]) : -(kx * x[i]);
    double s, c;
    simd::sincos_turns(t - std::nearbyint(t), s, c);
    out.re += c;
    out.im += s;
  }
  return out;
}

void project(const double* m, int rows, int cols, const double* const* in, std::size_t count, double* const* out) {
  for (int r = 0; r < rows; ++r) {
    const double* row = m + static_cast<std::size_t>(r) * cols;
    double* dst = out[r];
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
      __m256d acc = _mm256_mul_pd(_mm256_set1_pd(row[0]), _mm256_loadu_pd(in[0] + i));
      for (int c = 1; c < cols; ++c) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(row[c]), _mm256_loadu_pd(in[c] + i)));
      }
      _mm256_storeu_pd(dst + i, acc);
    }
    for (; i < count; ++i) {
      double acc = row[0] * in[0][i];
      for (int c = 1; c < cols; ++c) acc = acc + row[c] * in[c][i];
      dst[i] = acc;
    }
  }
}

}  // namespace

const KernelTable kTable{&phase_sum, &project};

}  // namespace aperiodic::simd::avx2
