// NEON (AArch64) variants; two double lanes. Same reduction scheme and
// operation order as the AVX2 kernels.

#include <arm_neon.h>

#include "simd/kernels_impl.hpp"

namespace aperiodic::simd::neon {
namespace {

inline float64x2_t horner(const double* coef, float64x2_t t2) {
  float64x2_t p = vdupq_n_f64(coef[7]);
  for (int i = 6; i >= 0; --i) p = vaddq_f64(vmulq_f64(p, t2), vdupq_n_f64(coef[i]));
  return p;
}

inline void sincos_turns(float64x2_t r, float64x2_t& s, float64x2_t& c) {
  const float64x2_t q = vrndnq_f64(vmulq_f64(vdupq_n_f64(4.0), r));
  const float64x2_t f = vsubq_f64(r, vmulq_f64(vdupq_n_f64(0.25), q));
  const float64x2_t t = vmulq_f64(vdupq_n_f64(kTwoPi), f);
  const float64x2_t t2 = vmulq_f64(t, t);
  const float64x2_t sn = vaddq_f64(t, vmulq_f64(t, vmulq_f64(t2, horner(kSin, t2))));
  const float64x2_t cs = vaddq_f64(vdupq_n_f64(1.0), vmulq_f64(t2, horner(kCos, t2)));

  const float64x2_t qm = vsubq_f64(q, vmulq_f64(vdupq_n_f64(4.0), vrndmq_f64(vmulq_f64(q, vdupq_n_f64(0.25)))));
  const uint64x2_t is1 = vceqq_f64(qm, vdupq_n_f64(1.0));
  const uint64x2_t is2 = vceqq_f64(qm, vdupq_n_f64(2.0));
  const uint64x2_t is3 = vceqq_f64(qm, vdupq_n_f64(3.0));
  const uint64x2_t swap = vorrq_u64(is1, is3);
  const uint64x2_t neg_s = vorrq_u64(is2, is3);
  const uint64x2_t neg_c = vorrq_u64(is1, is2);
  const uint64x2_t sign = vdupq_n_u64(0x8000000000000000ULL);

  float64x2_t so = vbslq_f64(swap, cs, sn);
  float64x2_t co = vbslq_f64(swap, sn, cs);
  so = vreinterpretq_f64_u64(veorq_u64(vreinterpretq_u64_f64(so), vandq_u64(neg_s, sign)));
  co = vreinterpretq_f64_u64(veorq_u64(vreinterpretq_u64_f64(co), vandq_u64(neg_c, sign)));
  s = so;
  c = co;
}

PhaseSum phase_sum(const double* x, const double* y, std::size_t n, double kx, double ky) {
  const float64x2_t vkx = vdupq_n_f64(kx);
  const float64x2_t vky = vdupq_n_f64(ky);
  float64x2_t acc_re = vdupq_n_f64(0.0);
  float64x2_t acc_im = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t t = vmulq_f64(vkx, vld1q_f64(x + i));
    if (y) t = vaddq_f64(t, vmulq_f64(vky, vld1q_f64(y + i)));
    t = vnegq_f64(t);
    const float64x2_t r = vsubq_f64(t, vrndnq_f64(t));
    float64x2_t s, c;
    sincos_turns(r, s, c);
    acc_re = vaddq_f64(acc_re, c);
    acc_im = vaddq_f64(acc_im, s);
  }
  PhaseSum out{vgetq_lane_f64(acc_re, 0) + vgetq_lane_f64(acc_re, 1),
               vgetq_lane_f64(acc_im, 0) + vgetq_lane_f64(acc_im, 1)};
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
    for (; i + 2 <= count; i += 2) {
      float64x2_t acc = vmulq_f64(vdupq_n_f64(row[0]), vld1q_f64(in[0] + i));
      for (int c = 1; c < cols; ++c) acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(row[c]), vld1q_f64(in[c] + i)));
      vst1q_f64(dst + i, acc);
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

}  // namespace aperiodic::simd::neon
