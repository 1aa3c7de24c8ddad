#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aperiodic/core/pointset.hpp"
#include "aperiodic/deviation/family.hpp"
#include "aperiodic/deviation/patches.hpp"
#include "aperiodic/spectral/res.hpp"

namespace aperiodic {

/// Counts anchors in B_T for many T by binary search over sorted entry
/// scales; exact agreement with a direct scan.
class AnchorCounter {
 public:
  AnchorCounter(const PointSet& ps, const PatchObservable& obs, const AveragingFamily& family, int threads = 1);
  AnchorCounter(const PointSet& ps, const std::vector<char>& anchors, const AveragingFamily& family, int threads = 1);

  std::int64_t count(double T) const;
  std::size_t anchors() const { return scales_.size(); }

 private:
  void build(const PointSet& ps, const std::vector<char>& anchors, int threads);

  const PointSet* ps_;
  AveragingFamily family_;
  std::vector<double> scales_;
  std::vector<std::uint32_t> index_;  // point index per sorted scale
};

struct DeviationSample {
  double T = 0.0;
  double vol = 0.0;
  std::int64_t count = 0;
  double freq_ref = 0.0;
  double deviation = 0.0;  ///< |count - freq * vol| at T
  double band = 0.0;       ///< max deviation over sub-samples in (T_prev, T]
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  std::optional<double> log_power;
  double r2 = 0.0;
  int samples = 0;
};

struct PredictedSlope {
  ResClass cls = ResClass::Below;
  double slope = 0.0;  ///< in log-volume coordinates
  int log_power = 0;
  bool boundary = false;
};

struct DeviationSeries {
  std::vector<DeviationSample> samples;
  double freq = 0.0;
  std::string freq_source;
  bool fit_on_band = true;
  FitResult fit;
  std::vector<PredictedSlope> predicted;

  double fitted_slope() const { return fit.slope; }
  std::string to_csv() const;
  nlohmann::json summary_json() const;
};

struct SeriesOptions {
  /// Sub-samples per interval (T_{k-1}, T_k] for the band maximum; 0
  /// disables the band and fits the raw deviations.
  int band_subsamples = 16;
  bool with_log_correction = false;
  int threads = 1;
};

/// L_P(B_T) / Vol(B_T) at the largest T; `refinement` receives the change
/// from the previous T sample.
double estimate_frequency(const PointSet& ps, const PatchObservable& obs, const AveragingFamily& family,
                          double* refinement = nullptr, int threads = 1);

/// Errors: RegionExceedsExtent, InsufficientNonzeroDeviations.
DeviationSeries deviation_series(const PointSet& ps, const PatchObservable& obs, const AveragingFamily& family,
                                 std::optional<double> freq_override = std::nullopt, const SeriesOptions& opt = {});
DeviationSeries deviation_series(const AnchorCounter& counter, const AveragingFamily& family, double freq,
                                 const SeriesOptions& opt = {});

/// Samples without a fit.
std::vector<DeviationSample> deviation_samples(const AnchorCounter& counter, const AveragingFamily& family, double freq,
                                               const SeriesOptions& opt = {});

/// OLS of log D on log Vol (plus log log Vol when requested) over all
/// samples with D > 0.
FitResult fit_exponent(const std::vector<double>& vol, const std::vector<double>& dev, bool with_log_correction);

/// Fit over the upper half of the series, as stored in DeviationSeries::fit.
FitResult fit_series(const DeviationSeries& series, bool with_log_correction = false);

std::vector<PredictedSlope> predicted_slopes(const ResReport& res);

}  // namespace aperiodic
