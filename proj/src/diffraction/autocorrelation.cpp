#include "aperiodic/diffraction/autocorrelation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "aperiodic/core/error.hpp"
#include "aperiodic/core/format.hpp"
#include "aperiodic/core/parallel.hpp"
#include "aperiodic/core/spatial_index.hpp"
#include "aperiodic/deviation/patches.hpp"
#include "aperiodic/deviation/series.hpp"

namespace aperiodic {

namespace {

using Key = std::array<std::int64_t, 3>;

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::size_t h = 0;
    for (auto v : k) h = h * 1000003u ^ std::hash<std::int64_t>()(v);
    return h;
  }
};

PointSet restrict_to(const PointSet& ps, const Region& region) {
  std::vector<std::vector<double>> axes(ps.dim());
  std::vector<double> p(ps.dim());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (int a = 0; a < ps.dim(); ++a) p[a] = ps.coord(i, a);
    if (!region.contains(p)) continue;
    for (int a = 0; a < ps.dim(); ++a) axes[a].push_back(p[a]);
  }
  return PointSet::from_columns(std::move(axes));
}

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

const AutocorrBin* Autocorrelation::find(std::span<const double> v) const {
  const AutocorrBin* best = nullptr;
  double best_dist = 10 * kAutocorrBin;
  for (const auto& b : bins) {
    double dist = 0.0;
    for (int a = 0; a < dim; ++a) dist = std::max(dist, std::abs(b.v[a] - v[a]));
    if (dist <= best_dist) {
      best_dist = dist;
      best = &b;
    }
  }
  return best;
}

double Autocorrelation::weight_at(std::span<const double> v) const {
  const AutocorrBin* b = find(v);
  return b ? b->weight : 0.0;
}

std::string Autocorrelation::to_csv() const {
  std::ostringstream out;
  out << (dim == 1 ? "vx,weight\n" : "vx,vy,weight\n");
  for (const auto& b : bins) {
    for (int a = 0; a < dim; ++a) out << format_double(b.v[a]) << ',';
    out << format_double(b.weight) << '\n';
  }
  return out.str();
}

Autocorrelation autocorrelation(const PointSet& ps, const Region& region, double r_c, int threads) {
  require_inside_extent(ps, region);
  if (!(r_c >= 0.0)) fail(ErrorCode::InvalidArgument, "cutoff radius must be nonnegative");
  if (ps.dim() > 3) fail(ErrorCode::InvalidArgument, "autocorrelation supports d <= 3");
  const int d = ps.dim();
  const PointSet sub = restrict_to(ps, region);
  const std::size_t n = sub.size();

  Autocorrelation out;
  out.dim = d;
  out.vol = region.volume();
  out.r_c = r_c;
  out.points = n;
  if (n == 0) return out;

  const GridIndex index(sub, std::max(default_cell_size(sub), r_c / 2.0 + 1e-12));
  constexpr std::size_t shards = 64;
  std::vector<std::unordered_map<Key, std::int64_t, KeyHash>> local(shards);
  parallel_for(shards, threads, [&](std::size_t s) {
    auto& hist = local[s];
    std::vector<double> q(d);
    for (std::size_t i = n * s / shards; i < n * (s + 1) / shards; ++i) {
      for (int a = 0; a < d; ++a) q[a] = sub.coord(i, a);
      index.for_each_within(q, r_c, [&](std::size_t j) {
        Key k{0, 0, 0};
        for (int a = 0; a < d; ++a) k[a] = std::llround((q[a] - sub.coord(j, a)) / kAutocorrBin);
        ++hist[k];
      });
    }
  });
  std::map<Key, std::int64_t> merged;
  for (const auto& h : local) {
    for (const auto& [k, c] : h) merged[k] += c;
  }

  // Floating-point noise can split one difference value over adjacent
  // quanta; join touching quanta into one bin.
  std::vector<Key> keys;
  std::vector<std::int64_t> counts;
  for (const auto& [k, c] : merged) {
    keys.push_back(k);
    counts.push_back(c);
  }
  std::vector<int> parent(keys.size());
  std::iota(parent.begin(), parent.end(), 0);
  const int reach = d == 1 ? 3 : (d == 2 ? 9 : 27);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (int code = 0; code < reach; ++code) {
      Key nb = keys[i];
      int c = code;
      for (int a = 0; a < d; ++a) {
        nb[a] += c % 3 - 1;
        c /= 3;
      }
      if (nb == keys[i]) continue;
      const auto it = std::lower_bound(keys.begin(), keys.end(), nb);
      if (it != keys.end() && *it == nb) {
        const int r1 = find_root(parent, static_cast<int>(i));
        const int r2 = find_root(parent, static_cast<int>(it - keys.begin()));
        if (r1 != r2) parent[std::max(r1, r2)] = std::min(r1, r2);
      }
    }
  }
  std::map<int, std::pair<std::array<__int128, 3>, std::int64_t>> groups;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    auto& g = groups[find_root(parent, static_cast<int>(i))];
    for (int a = 0; a < d; ++a) g.first[a] += static_cast<__int128>(keys[i][a]) * counts[i];
    g.second += counts[i];
  }
  for (const auto& [root, g] : groups) {
    AutocorrBin b;
    b.v.resize(d);
    for (int a = 0; a < d; ++a) {
      b.v[a] = static_cast<double>(g.first[a]) / static_cast<double>(g.second) * kAutocorrBin;
    }
    b.pairs = g.second;
    b.weight = static_cast<double>(g.second) / out.vol;
    out.bins.push_back(std::move(b));
  }
  std::sort(out.bins.begin(), out.bins.end(), [](const AutocorrBin& a, const AutocorrBin& b) { return a.v < b.v; });
  return out;
}

Autocorrelation autocorrelation(const PointSet& ps, const AveragingFamily& family, double T, double r_c,
                                int threads) {
  Autocorrelation out = autocorrelation(ps, family.region(T), r_c, threads);
  out.T = T;
  return out;
}

ConvergenceFit autocorr_convergence(const PointSet& ps, const AveragingFamily& family, std::span<const double> v,
                                    std::optional<double> T_ref, int threads) {
  if (family.T_list.empty()) fail(ErrorCode::InvalidArgument, "averaging family has no T samples");
  if (static_cast<int>(v.size()) != ps.dim()) fail(ErrorCode::InvalidArgument, "difference vector has wrong dimension");
  ConvergenceFit out;
  out.T_ref = T_ref.value_or(4.0 * family.T_list.back());
  const Region ref_region = family.region(out.T_ref);
  require_inside_extent(ps, ref_region);

  // Ordered pairs (x, y) with x - y = v, both inside the reference region.
  const PointSet sub = restrict_to(ps, ref_region);
  const int d = ps.dim();
  std::vector<std::vector<double>> pts{std::vector<double>(d, 0.0), std::vector<double>(v.begin(), v.end())};
  const PatchObservable pair = PatchObservable::make(pts);
  const std::vector<char> anchors = match_anchors(sub, pair, threads);
  const GridIndex index(sub, default_cell_size(sub));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<double> q(d);
  for (std::size_t i = 0; i < sub.size(); ++i) {
    if (!anchors[i]) continue;
    for (int a = 0; a < d; ++a) q[a] = sub.coord(i, a) + pair.points[1][a];
    pairs.emplace_back(i, *index.find(q, pair.match_tol));
  }
  if (pairs.empty()) fail(ErrorCode::BinEmpty, "difference vector is not realized in the sample");

  auto gamma = [&](const Region& r, double vol) {
    std::int64_t c = 0;
    std::vector<double> a(d), b(d);
    for (const auto& [i, j] : pairs) {
      for (int k = 0; k < d; ++k) {
        a[k] = sub.coord(i, k);
        b[k] = sub.coord(j, k);
      }
      if (r.contains(a) && r.contains(b)) ++c;
    }
    return static_cast<double>(c) / vol;
  };
  out.reference = gamma(ref_region, family.volume(out.T_ref));
  for (double T : family.T_list) {
    const double vol = family.volume(T);
    out.T.push_back(T);
    out.vol.push_back(vol);
    out.error.push_back(std::abs(gamma(family.region(T), vol) - out.reference));
  }
  const FitResult fit = fit_exponent(out.vol, out.error, false);
  out.slope = fit.slope;
  out.r2 = fit.r2;
  return out;
}

}  // namespace aperiodic
