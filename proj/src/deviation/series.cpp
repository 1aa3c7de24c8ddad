#include "aperiodic/deviation/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "aperiodic/core/error.hpp"
#include "aperiodic/core/format.hpp"
#include "aperiodic/core/parallel.hpp"

namespace aperiodic {

namespace {

constexpr double kBand = 1e-9;

void check_T_list(const AveragingFamily& family) {
  const auto& T = family.T_list;
  if (T.empty()) fail(ErrorCode::InvalidArgument, "averaging family has no T samples");
  for (std::size_t i = 1; i < T.size(); ++i) {
    if (!(T[i] > T[i - 1])) fail(ErrorCode::InvalidArgument, "T list must be strictly increasing");
  }
}

}  // namespace

AnchorCounter::AnchorCounter(const PointSet& ps, const PatchObservable& obs, const AveragingFamily& family,
                             int threads)
    : ps_(&ps), family_(family) {
  build(ps, match_anchors(ps, obs, threads), threads);
}

AnchorCounter::AnchorCounter(const PointSet& ps, const std::vector<char>& anchors, const AveragingFamily& family,
                             int threads)
    : ps_(&ps), family_(family) {
  if (anchors.size() != ps.size()) fail(ErrorCode::InvalidArgument, "anchor mask does not match the point set");
  build(ps, anchors, threads);
}

void AnchorCounter::build(const PointSet& ps, const std::vector<char>& anchors, int threads) {
  const std::size_t n = ps.size();
  std::vector<double> scale(n, std::numeric_limits<double>::infinity());
  const int d = ps.dim();
  constexpr std::size_t shards = 64;
  const EntryScale entry(family_);
  parallel_for(shards, threads, [&](std::size_t s) {
    std::vector<double> p(d);
    bool strict = false;
    for (std::size_t i = n * s / shards; i < n * (s + 1) / shards; ++i) {
      if (!anchors[i]) continue;
      for (int a = 0; a < d; ++a) p[a] = ps.coord(i, a);
      scale[i] = entry(p, strict);
    }
  });
  std::vector<std::uint32_t> idx;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isfinite(scale[i])) idx.push_back(static_cast<std::uint32_t>(i));
  }
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    return scale[a] < scale[b] || (scale[a] == scale[b] && a < b);
  });
  scales_.resize(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) scales_[k] = scale[idx[k]];
  index_ = std::move(idx);
}

std::int64_t AnchorCounter::count(double T) const {
  const Region region = family_.region(T);
  require_inside_extent(*ps_, region);
  // Entry scales are exact up to rounding; anchors whose scale lies within
  // a relative band of T are decided by the region test itself so the
  // result agrees with a direct scan.
  const auto lo = std::lower_bound(scales_.begin(), scales_.end(), T * (1.0 - kBand));
  const auto hi = std::upper_bound(lo, scales_.end(), T * (1.0 + kBand));
  std::int64_t c = lo - scales_.begin();
  std::vector<double> p(ps_->dim());
  for (auto it = lo; it != hi; ++it) {
    const std::size_t i = index_[it - scales_.begin()];
    for (int a = 0; a < ps_->dim(); ++a) p[a] = ps_->coord(i, a);
    if (region.contains(p)) ++c;
  }
  return c;
}

std::string DeviationSeries::to_csv() const {
  std::ostringstream out;
  out << "T,vol,count,freq_ref,deviation\n";
  for (const auto& s : samples) {
    out << format_double(s.T) << ',' << format_double(s.vol) << ',' << s.count << ',' << format_double(s.freq_ref)
        << ',' << format_double(s.deviation) << '\n';
  }
  return out.str();
}

nlohmann::json DeviationSeries::summary_json() const {
  nlohmann::json j;
  j["fitted_slope"] = fit.slope;
  j["r2"] = fit.r2;
  j["samples_fitted"] = fit.samples;
  j["fit_on_band"] = fit_on_band;
  j["freq"] = freq;
  j["freq_source"] = freq_source;
  if (fit.log_power) j["log_power"] = *fit.log_power;
  auto preds = nlohmann::json::array();
  double top = -std::numeric_limits<double>::infinity();
  std::string cls = "BELOW";
  for (const auto& p : predicted) {
    preds.push_back({{"class", p.boundary ? std::string("BOUNDARY") : std::string(to_string(p.cls))},
                     {"slope", p.slope},
                     {"log_power", p.log_power}});
    if (p.slope > top) {
      top = p.slope;
      cls = p.boundary ? "BOUNDARY" : std::string(to_string(p.cls));
    }
  }
  j["predicted_slopes"] = preds;
  j["class"] = cls;
  return j;
}

double estimate_frequency(const PointSet& ps, const PatchObservable& obs, const AveragingFamily& family,
                          double* refinement, int threads) {
  check_T_list(family);
  const auto& T = family.T_list;
  const std::vector<char> anchors = match_anchors(ps, obs, threads);
  auto at = [&](double t) {
    return static_cast<double>(count_anchors(ps, anchors, family.region(t), threads)) / family.volume(t);
  };
  const double f = at(T.back());
  if (refinement) *refinement = T.size() >= 2 ? f - at(T[T.size() - 2]) : std::numeric_limits<double>::quiet_NaN();
  return f;
}

FitResult fit_exponent(const std::vector<double>& vol, const std::vector<double>& dev, bool with_log_correction) {
  if (vol.size() != dev.size()) fail(ErrorCode::InvalidArgument, "fit inputs differ in length");
  std::vector<double> x, y, z;
  for (std::size_t i = 0; i < vol.size(); ++i) {
    if (!(dev[i] > 0.0) || !std::isfinite(dev[i])) continue;
    if (!(vol[i] > 0.0)) fail(ErrorCode::InvalidArgument, "volumes must be positive");
    x.push_back(std::log(vol[i]));
    y.push_back(std::log(dev[i]));
    if (with_log_correction) {
      if (!(vol[i] > 1.0)) fail(ErrorCode::InvalidArgument, "log correction needs volumes > 1");
      z.push_back(std::log(std::log(vol[i])));
    }
  }
  const int m = static_cast<int>(x.size());
  if (m < 4) fail(ErrorCode::InsufficientNonzeroDeviations, "fewer than 4 samples with nonzero deviation");
  const int cols = with_log_correction ? 3 : 2;
  RealMatrix design(m, cols);
  RealVector rhs(m);
  for (int i = 0; i < m; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = x[i];
    if (with_log_correction) design(i, 2) = z[i];
    rhs[i] = y[i];
  }
  const RealVector coef = design.colPivHouseholderQr().solve(rhs);
  FitResult r;
  r.intercept = coef[0];
  r.slope = coef[1];
  if (with_log_correction) r.log_power = coef[2];
  r.samples = m;
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / m;
  double ss_tot = 0.0, ss_res = 0.0;
  const RealVector fitted = design * coef;
  for (int i = 0; i < m; ++i) {
    ss_tot += (y[i] - mean) * (y[i] - mean);
    ss_res += (y[i] - fitted[i]) * (y[i] - fitted[i]);
  }
  r.r2 = ss_tot <= 1e-24 * m ? 1.0 : 1.0 - ss_res / ss_tot;
  return r;
}

FitResult fit_series(const DeviationSeries& series, bool with_log_correction) {
  const std::size_t n = series.samples.size();
  std::vector<double> vol, dev;
  for (std::size_t i = n / 2; i < n; ++i) {
    vol.push_back(series.samples[i].vol);
    dev.push_back(series.fit_on_band ? series.samples[i].band : series.samples[i].deviation);
  }
  return fit_exponent(vol, dev, with_log_correction);
}

std::vector<DeviationSample> deviation_samples(const AnchorCounter& counter, const AveragingFamily& family, double freq,
                                               const SeriesOptions& opt) {
  check_T_list(family);
  const auto& T = family.T_list;
  std::vector<DeviationSample> out(T.size());
  auto dev_at = [&](double t, std::int64_t* count) {
    const std::int64_t c = counter.count(t);
    if (count) *count = c;
    return std::abs(static_cast<double>(c) - freq * family.volume(t));
  };
  parallel_for(T.size(), opt.threads, [&](std::size_t k) {
    DeviationSample& s = out[k];
    s.T = T[k];
    s.vol = family.volume(T[k]);
    s.freq_ref = freq;
    s.deviation = dev_at(T[k], &s.count);
    s.band = s.deviation;
    if (opt.band_subsamples > 0) {
      const double prev = k > 0 ? T[k - 1] : (T.size() > 1 ? T[0] * T[0] / T[1] : T[0] / 2.0);
      const double step = std::log(T[k] / prev) / opt.band_subsamples;
      for (int j = 1; j < opt.band_subsamples; ++j) s.band = std::max(s.band, dev_at(prev * std::exp(step * j), nullptr));
    }
  });
  return out;
}

DeviationSeries deviation_series(const AnchorCounter& counter, const AveragingFamily& family, double freq,
                                 const SeriesOptions& opt) {
  DeviationSeries out;
  out.freq = freq;
  out.freq_source = "given";
  out.fit_on_band = opt.band_subsamples > 0;
  out.samples = deviation_samples(counter, family, freq, opt);
  out.fit = fit_series(out, opt.with_log_correction);
  return out;
}

DeviationSeries deviation_series(const PointSet& ps, const PatchObservable& obs, const AveragingFamily& family,
                                 std::optional<double> freq_override, const SeriesOptions& opt) {
  check_T_list(family);
  require_inside_extent(ps, family.region(family.T_list.back()));
  const std::vector<char> anchors = match_anchors(ps, obs, opt.threads);
  const AnchorCounter counter(ps, anchors, family, opt.threads);
  double freq;
  std::string source;
  if (freq_override) {
    freq = *freq_override;
    source = "override";
  } else {
    const double t_ref = family.T_list.back() * std::pow(4.0, 1.0 / family.dim());
    const Region ref = family.region(t_ref);
    const bool larger = ps.meta.extent && ps.meta.extent->encloses(ref, 1e-9);
    const double t = larger ? t_ref : family.T_list.back();
    freq = static_cast<double>(counter.count(t)) / family.volume(t);
    source = larger ? "estimate_4x_volume" : "estimate_T_max";
  }
  DeviationSeries out = deviation_series(counter, family, freq, opt);
  out.freq_source = source;
  return out;
}

std::vector<PredictedSlope> predicted_slopes(const ResReport& res) {
  std::vector<PredictedSlope> out;
  for (std::size_t i = 0; i < res.entries.size(); ++i) {
    const ResEntry& e = res.entries[i];
    // The leading eigenvalue carries the mean, which the frequency removes.
    if (e.cls == ResClass::Below || (i == 0 && e.multiplicity == 1)) continue;
    out.push_back({e.cls, e.ratio, e.log_power, false});
  }
  out.push_back({ResClass::Below, res.threshold, 0, true});
  return out;
}

}  // namespace aperiodic
