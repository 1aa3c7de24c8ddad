// Reference kernels. Straight loops over libm; every vector variant is
// checked against these.

#include <cmath>

#include "simd/kernels_impl.hpp"

namespace aperiodic::simd::scalar {
namespace {

PhaseSum phase_sum(const double* x, const double* y, std::size_t n, double kx, double ky) {
  PhaseSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = y ? -(kx * x[i] + ky * y[i]) : -(kx * x[i]);
    const double a = kTwoPi * (t - std::nearbyint(t));
    acc.re += std::cos(a);
    acc.im += std::sin(a);
  }
  return acc;
}

void project(const double* m, int rows, int cols, const double* const* in, std::size_t count, double* const* out) {
  for (int r = 0; r < rows; ++r) {
    const double* row = m + static_cast<std::size_t>(r) * cols;
    double* dst = out[r];
    for (std::size_t i = 0; i < count; ++i) {
      double acc = row[0] * in[0][i];
      for (int c = 1; c < cols; ++c) acc = acc + row[c] * in[c][i];
      dst[i] = acc;
    }
  }
}

}  // namespace

const KernelTable kTable{&phase_sum, &project};

}  // namespace aperiodic::simd::scalar
