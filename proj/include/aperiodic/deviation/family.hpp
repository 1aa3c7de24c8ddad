#pragma once

#include <span>
#include <vector>

#include "aperiodic/core/region.hpp"
#include "aperiodic/core/types.hpp"

namespace aperiodic {

/// Rescaled boxes B_T = g_{sigma log T} B0 with g_t = exp(t log A_par) and
/// sigma = d / log det A. B0 is a box in the real eigenbasis of A_par
/// (`frame`), placed at `origin`, and must contain the origin of its frame
/// so the family is nested.
struct AveragingFamily {
  Box b0;
  RealMatrix frame;
  std::vector<double> origin;
  /// Growth exponent per frame axis; they sum to d.
  std::vector<double> exponents;
  RealMatrix A_par;
  double sigma = 0.0;
  std::vector<double> T_list;

  int dim() const { return b0.dim(); }
  Region region(double T) const;
  double volume(double T) const;
  double base_volume() const;

  /// Smallest T with p in region(T); `strict` is set when the boundary
  /// value itself is excluded. Infinite when p is never covered.
  double entry_scale(std::span<const double> p, bool& strict) const;
};

/// entry_scale with the frame inverse and offset computed once.
class EntryScale {
 public:
  explicit EntryScale(const AveragingFamily& family);
  double operator()(std::span<const double> p, bool& strict) const;

 private:
  const AveragingFamily* family_;
  RealMatrix inv_;
  std::vector<double> offset_;
};

/// Frame and exponents from A_par: identity frame for a pure dilation,
/// otherwise the eigenbasis, which must be real with eigenvalues > 1.
AveragingFamily make_family(const RealMatrix& A_par, Box b0, std::vector<double> origin = {},
                            std::vector<double> T_list = {});

/// Increasing list of `count` values ending at T_max with constant ratio.
std::vector<double> geometric_T_list(double T_max, double ratio, int count);

/// det(A)^(1/(2d)), the default sample ratio.
double default_T_ratio(const RealMatrix& A_par);

}  // namespace aperiodic
