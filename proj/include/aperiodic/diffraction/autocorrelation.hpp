#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aperiodic/core/pointset.hpp"
#include "aperiodic/deviation/family.hpp"

namespace aperiodic {

/// Bin width for difference vectors; adjacent quanta are merged.
inline constexpr double kAutocorrBin = 1e-6;

struct AutocorrBin {
  std::vector<double> v;
  std::int64_t pairs = 0;  ///< ordered pairs (x, y) with x - y in the bin
  double weight = 0.0;     ///< pairs / Vol(B_T)
};

/// Windowed autocorrelation: ordered pairs of points of B_T at distance
/// at most r_c, histogrammed by difference vector. Taking both points from
/// B_T makes the histogram exactly symmetric under v -> -v.
struct Autocorrelation {
  int dim = 1;
  double T = 0.0;
  double vol = 0.0;
  double r_c = 0.0;
  std::size_t points = 0;
  std::vector<AutocorrBin> bins;  ///< lexicographic by v

  /// Bin containing v (within the bin tolerance), if realized.
  const AutocorrBin* find(std::span<const double> v) const;
  double weight_at(std::span<const double> v) const;
  std::string to_csv() const;
};

Autocorrelation autocorrelation(const PointSet& ps, const Region& region, double r_c, int threads = 1);
/// Errors: RegionExceedsExtent.
Autocorrelation autocorrelation(const PointSet& ps, const AveragingFamily& family, double T, double r_c,
                                int threads = 1);

struct ConvergenceFit {
  std::vector<double> T;
  std::vector<double> vol;
  std::vector<double> error;  ///< |gamma^T(v) - gamma^{T_ref}(v)|
  double reference = 0.0;
  double T_ref = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
};

/// Decay of the single-bin error against Vol(B_T), referenced to the
/// scale T_ref (default 4 * T_max). Errors: BinEmpty, RegionExceedsExtent,
/// InsufficientNonzeroDeviations.
ConvergenceFit autocorr_convergence(const PointSet& ps, const AveragingFamily& family, std::span<const double> v,
                                    std::optional<double> T_ref = std::nullopt, int threads = 1);

}  // namespace aperiodic
