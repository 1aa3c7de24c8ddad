#include "aperiodic/core/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aperiodic/core/error.hpp"

namespace aperiodic {

double default_cell_size(const PointSet& ps) {
  if (ps.size() < 2) return 1.0;
  std::vector<double> lo(ps.dim()), hi(ps.dim());
  for (int k = 0; k < ps.dim(); ++k) {
    auto a = ps.axis(k);
    auto [mn, mx] = std::minmax_element(a.begin(), a.end());
    lo[k] = *mn;
    hi[k] = *mx;
  }
  double vol = 1.0;
  int nonflat = 0;
  for (int k = 0; k < ps.dim(); ++k) {
    if (hi[k] > lo[k]) {
      vol *= hi[k] - lo[k];
      ++nonflat;
    }
  }
  if (nonflat == 0) return 1.0;
  return std::pow(vol / static_cast<double>(ps.size()), 1.0 / nonflat);
}

GridIndex::GridIndex(const PointSet& ps, double cell_size) : ps_(&ps), dim_(ps.dim()), cell_(cell_size) {
  if (dim_ > 3) fail(ErrorCode::InvalidArgument, "grid index supports d <= 3");
  if (!(cell_ > 0.0)) fail(ErrorCode::InvalidArgument, "cell size must be positive");
  if (ps.size() > std::numeric_limits<std::uint32_t>::max()) fail(ErrorCode::CapacityExceeded, "too many points to index");
  origin_.assign(dim_, 0.0);
  extent_.assign(dim_, 1);
  if (ps.empty()) {
    cell_start_.assign(2, 0);
    return;
  }
  std::vector<double> hi(dim_);
  for (int k = 0; k < dim_; ++k) {
    auto a = ps.axis(k);
    auto [mn, mx] = std::minmax_element(a.begin(), a.end());
    origin_[k] = *mn;
    hi[k] = *mx;
  }
  // Keep the dense cell table proportional to the point count.
  const double max_cells = 4.0 * static_cast<double>(ps.size()) + 64.0;
  for (;;) {
    double cells = 1.0;
    for (int k = 0; k < dim_; ++k) {
      extent_[k] = static_cast<std::int64_t>(std::floor((hi[k] - origin_[k]) / cell_)) + 1;
      cells *= static_cast<double>(extent_[k]);
    }
    if (cells <= max_cells) break;
    cell_ *= 1.5;
  }
  std::size_t total = 1;
  for (int k = 0; k < dim_; ++k) total *= static_cast<std::size_t>(extent_[k]);
  std::vector<std::size_t> cell_of(ps.size());
  cell_start_.assign(total + 1, 0);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    std::size_t id = 0;
    for (int k = dim_ - 1; k >= 0; --k) {
      id = id * static_cast<std::size_t>(extent_[k]) + static_cast<std::size_t>(cell_coord(ps.coord(i, k), k));
    }
    cell_of[i] = id;
    ++cell_start_[id + 1];
  }
  for (std::size_t c = 0; c < total; ++c) cell_start_[c + 1] += cell_start_[c];
  order_.resize(ps.size());
  std::vector<std::size_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < ps.size(); ++i) order_[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
}

std::int64_t GridIndex::cell_coord(double x, int axis) const {
  auto c = static_cast<std::int64_t>(std::floor((x - origin_[axis]) / cell_));
  return std::clamp<std::int64_t>(c, 0, extent_[axis] - 1);
}

void GridIndex::for_each_within(std::span<const double> q, double radius,
                                const std::function<void(std::size_t)>& fn) const {
  if (ps_->empty()) return;
  std::int64_t lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
  for (int k = 0; k < dim_; ++k) {
    const double a = std::floor((q[k] - radius - origin_[k]) / cell_);
    const double b = std::floor((q[k] + radius - origin_[k]) / cell_);
    if (b < 0 || a > static_cast<double>(extent_[k] - 1)) return;
    lo[k] = std::max<std::int64_t>(0, static_cast<std::int64_t>(a));
    hi[k] = std::min<std::int64_t>(extent_[k] - 1, static_cast<std::int64_t>(b));
  }
  const double r2 = radius * radius;
  auto visit_cell = [&](std::size_t id) {
    for (std::size_t s = cell_start_[id]; s < cell_start_[id + 1]; ++s) {
      const std::size_t i = order_[s];
      double d2 = 0.0;
      for (int k = 0; k < dim_; ++k) {
        const double t = ps_->coord(i, k) - q[k];
        d2 += t * t;
      }
      if (d2 <= r2) fn(i);
    }
  };
  if (dim_ == 1) {
    for (std::int64_t a = lo[0]; a <= hi[0]; ++a) visit_cell(static_cast<std::size_t>(a));
  } else if (dim_ == 2) {
    for (std::int64_t b = lo[1]; b <= hi[1]; ++b)
      for (std::int64_t a = lo[0]; a <= hi[0]; ++a) visit_cell(static_cast<std::size_t>(b * extent_[0] + a));
  } else {
    for (std::int64_t c = lo[2]; c <= hi[2]; ++c)
      for (std::int64_t b = lo[1]; b <= hi[1]; ++b)
        for (std::int64_t a = lo[0]; a <= hi[0]; ++a)
          visit_cell(static_cast<std::size_t>((c * extent_[1] + b) * extent_[0] + a));
  }
}

std::optional<std::size_t> GridIndex::find(std::span<const double> q, double tol) const {
  std::optional<std::size_t> best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for_each_within(q, tol, [&](std::size_t i) {
    double d2 = 0.0;
    for (int k = 0; k < dim_; ++k) d2 += (ps_->coord(i, k) - q[k]) * (ps_->coord(i, k) - q[k]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  });
  return best;
}

std::optional<std::pair<std::size_t, double>> GridIndex::nearest(std::span<const double> q) const {
  if (ps_->empty()) return std::nullopt;
  // Every indexed point lies within `reach` of q.
  double reach = 0.0;
  for (int k = 0; k < dim_; ++k) {
    const double far = std::abs(q[k] - origin_[k]) + static_cast<double>(extent_[k]) * cell_;
    reach += far * far;
  }
  reach = std::sqrt(reach);
  for (double r = cell_;; r *= 2.0) {
    std::optional<std::size_t> best;
    double best_d2 = std::numeric_limits<double>::infinity();
    for_each_within(q, r, [&](std::size_t i) {
      double d2 = 0.0;
      for (int k = 0; k < dim_; ++k) d2 += (ps_->coord(i, k) - q[k]) * (ps_->coord(i, k) - q[k]);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    });
    if (best) return std::make_pair(*best, std::sqrt(best_d2));
    if (r > reach) break;
  }
  return std::nullopt;
}

}  // namespace aperiodic
