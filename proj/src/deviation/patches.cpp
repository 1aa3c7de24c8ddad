#include "aperiodic/deviation/patches.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aperiodic/core/error.hpp"
#include "aperiodic/core/parallel.hpp"
#include "aperiodic/core/spatial_index.hpp"

namespace aperiodic {

namespace {

bool labels_match(std::span<const std::int32_t> have, const std::vector<int>& want) {
  for (std::size_t c = 0; c < want.size(); ++c) {
    if (want[c] >= 0 && (c >= have.size() || have[c] != want[c])) return false;
  }
  return true;
}

constexpr std::size_t kShards = 64;

}  // namespace

PatchObservable PatchObservable::single_point(int d, std::vector<int> label) {
  std::vector<std::vector<int>> labels;
  if (!label.empty()) labels.push_back(std::move(label));
  return make({std::vector<double>(d, 0.0)}, std::move(labels));
}

PatchObservable PatchObservable::make(std::vector<std::vector<double>> points, std::vector<std::vector<int>> labels,
                                      double match_tol) {
  if (points.empty()) fail(ErrorCode::InvalidArgument, "patch must contain at least one point");
  const std::size_t d = points.front().size();
  if (d == 0) fail(ErrorCode::InvalidArgument, "patch points must have positive dimension");
  for (const auto& p : points) {
    if (p.size() != d) fail(ErrorCode::InvalidArgument, "patch points differ in dimension");
  }
  if (!labels.empty() && labels.size() != points.size()) {
    fail(ErrorCode::InvalidArgument, "patch labels must be given for every point or none");
  }
  if (!(match_tol > 0.0)) fail(ErrorCode::InvalidArgument, "match tolerance must be positive");

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  PatchObservable obs;
  obs.match_tol = match_tol;
  const std::vector<double> anchor = points[order.front()];
  for (std::size_t k : order) {
    std::vector<double> p(d);
    for (std::size_t i = 0; i < d; ++i) p[i] = points[k][i] - anchor[i];
    obs.points.push_back(std::move(p));
    if (!labels.empty()) obs.labels.push_back(labels[k]);
  }
  for (std::size_t k = 1; k < obs.points.size(); ++k) {
    double dist = 0.0;
    for (std::size_t i = 0; i < d; ++i) dist = std::max(dist, std::abs(obs.points[k][i] - obs.points[k - 1][i]));
    if (dist <= match_tol) fail(ErrorCode::InvalidArgument, "patch contains coincident points");
  }
  return obs;
}

std::vector<char> match_anchors(const PointSet& ps, const PatchObservable& obs, int threads) {
  if (obs.dim() != ps.dim()) fail(ErrorCode::InvalidArgument, "patch dimension differs from the point set");
  const std::size_t n = ps.size();
  std::vector<char> out(n, 0);
  const bool labelled = !obs.labels.empty();
  auto anchor_ok = [&](std::size_t i) { return !labelled || labels_match(ps.labels(i), obs.labels[0]); };

  if (obs.points.size() == 1) {
    parallel_for(kShards, threads, [&](std::size_t s) {
      for (std::size_t i = n * s / kShards; i < n * (s + 1) / kShards; ++i) out[i] = anchor_ok(i) ? 1 : 0;
    });
    return out;
  }
  if (ps.empty()) return out;

  const GridIndex index(ps, std::max(default_cell_size(ps), obs.match_tol * 4));
  const int d = ps.dim();
  parallel_for(kShards, threads, [&](std::size_t s) {
    std::vector<double> q(d);
    for (std::size_t i = n * s / kShards; i < n * (s + 1) / kShards; ++i) {
      if (!anchor_ok(i)) continue;
      bool ok = true;
      for (std::size_t k = 1; k < obs.points.size() && ok; ++k) {
        for (int a = 0; a < d; ++a) q[a] = ps.coord(i, a) + obs.points[k][a];
        const auto hit = index.find(q, obs.match_tol);
        ok = hit.has_value() && (!labelled || labels_match(ps.labels(*hit), obs.labels[k]));
      }
      out[i] = ok ? 1 : 0;
    }
  });
  return out;
}

void require_inside_extent(const PointSet& ps, const Region& region) {
  if (!ps.meta.extent) fail(ErrorCode::RegionExceedsExtent, "point set has no recorded extent");
  if (!ps.meta.extent->encloses(region, 1e-9)) {
    fail(ErrorCode::RegionExceedsExtent, "averaging region sticks out of the generated sample");
  }
}

std::int64_t count_anchors(const PointSet& ps, const std::vector<char>& anchors, const Region& region, int threads) {
  require_inside_extent(ps, region);
  const std::size_t n = ps.size();
  std::vector<std::int64_t> partial(kShards, 0);
  const int d = ps.dim();
  parallel_for(kShards, threads, [&](std::size_t s) {
    std::vector<double> p(d);
    std::int64_t c = 0;
    for (std::size_t i = n * s / kShards; i < n * (s + 1) / kShards; ++i) {
      if (!anchors[i]) continue;
      for (int a = 0; a < d; ++a) p[a] = ps.coord(i, a);
      if (region.contains(p)) ++c;
    }
    partial[s] = c;
  });
  return std::accumulate(partial.begin(), partial.end(), std::int64_t{0});
}

std::int64_t count_patches(const PointSet& ps, const PatchObservable& obs, const Region& region, int threads) {
  require_inside_extent(ps, region);
  return count_anchors(ps, match_anchors(ps, obs, threads), region, threads);
}

}  // namespace aperiodic
