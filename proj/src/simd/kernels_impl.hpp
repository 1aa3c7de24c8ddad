#pragma once

#include <cmath>
#include <cstddef>

#include "aperiodic/simd/kernels.hpp"

namespace aperiodic::simd {

struct KernelTable {
  PhaseSum (*phase_sum)(const double* x, const double* y, std::size_t n, double kx, double ky);
  void (*project)(const double* m, int rows, int cols, const double* const* in, std::size_t count, double* const* out);
};

namespace scalar {
extern const KernelTable kTable;
}
#if defined(APERIODIC_HAVE_AVX2)
namespace avx2 {
extern const KernelTable kTable;
}
#endif
#if defined(APERIODIC_HAVE_NEON)
namespace neon {
extern const KernelTable kTable;
}
#endif

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Taylor coefficients on |theta| <= pi/4; truncation error below 5e-17.
inline constexpr double kSin[8] = {-1.0 / 6.0,          1.0 / 120.0,          -1.0 / 5040.0,
                                   1.0 / 362880.0,      -1.0 / 39916800.0,    1.0 / 6227020800.0,
                                   -1.0 / 1307674368000.0, 1.0 / 355687428096000.0};
inline constexpr double kCos[8] = {-1.0 / 2.0,          1.0 / 24.0,           -1.0 / 720.0,
                                   1.0 / 40320.0,       -1.0 / 3628800.0,     1.0 / 479001600.0,
                                   -1.0 / 87178291200.0, 1.0 / 20922789888000.0};

/// sin and cos of 2 pi r for |r| <= 1/2 by quarter-turn reduction; exactly
/// odd/even in r. Vector kernels use the same scheme lane-wise.
inline void sincos_turns(double r, double& s, double& c) {
  const double q = std::nearbyint(4.0 * r);
  const double f = r - 0.25 * q;
  const double t = kTwoPi * f;
  const double t2 = t * t;
  double ps = kSin[7];
  double pc = kCos[7];
  for (int i = 6; i >= 0; --i) {
    ps = ps * t2 + kSin[i];
    pc = pc * t2 + kCos[i];
  }
  const double sn = t + t * (t2 * ps);
  const double cs = 1.0 + t2 * pc;
  const double qm = q - 4.0 * std::floor(q * 0.25);
  if (qm == 0.0) {
    s = sn;
    c = cs;
  } else if (qm == 1.0) {
    s = cs;
    c = -sn;
  } else if (qm == 2.0) {
    s = -sn;
    c = -cs;
  } else {
    s = -cs;
    c = sn;
  }
}

}  // namespace aperiodic::simd
