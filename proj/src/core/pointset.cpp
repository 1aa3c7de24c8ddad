#include "aperiodic/core/pointset.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "aperiodic/core/error.hpp"
#include "aperiodic/core/spatial_index.hpp"

namespace aperiodic {

PointSet::PointSet(int dim, int label_arity, int lattice_dim)
    : dim_(dim), label_arity_(label_arity), lattice_dim_(lattice_dim), axes_(static_cast<std::size_t>(dim)) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "point set dimension must be >= 1");
}

std::vector<double> PointSet::point(std::size_t i) const {
  std::vector<double> p(dim_);
  for (int k = 0; k < dim_; ++k) p[k] = axes_[k][i];
  return p;
}

PointSet PointSet::from_columns(std::vector<std::vector<double>> axes, int label_arity,
                               std::vector<std::int32_t> labels, int lattice_dim, std::vector<std::int64_t> lattice) {
  PointSet ps(static_cast<int>(axes.size()), label_arity, lattice_dim);
  const std::size_t n = axes[0].size();
  for (const auto& a : axes) {
    if (a.size() != n) fail(ErrorCode::InvalidArgument, "point columns differ in length");
  }
  if (labels.size() != n * label_arity || lattice.size() != n * lattice_dim) {
    fail(ErrorCode::InvalidArgument, "point label/lattice arrays do not match the point count");
  }
  ps.axes_ = std::move(axes);
  ps.labels_ = std::move(labels);
  ps.lattice_ = std::move(lattice);
  return ps;
}

void PointSet::reserve(std::size_t n) {
  for (auto& a : axes_) a.reserve(n);
  labels_.reserve(n * label_arity_);
  lattice_.reserve(n * lattice_dim_);
}

void PointSet::push_back(std::span<const double> p, std::span<const std::int32_t> labels,
                         std::span<const std::int64_t> lattice) {
  if (static_cast<int>(p.size()) != dim_ || static_cast<int>(labels.size()) != label_arity_ ||
      static_cast<int>(lattice.size()) != lattice_dim_) {
    fail(ErrorCode::InvalidArgument, "point layout mismatch");
  }
  for (int k = 0; k < dim_; ++k) axes_[k].push_back(p[k]);
  labels_.insert(labels_.end(), labels.begin(), labels.end());
  lattice_.insert(lattice_.end(), lattice.begin(), lattice.end());
}

void PointSet::append(const PointSet& other) {
  if (other.dim_ != dim_ || other.label_arity_ != label_arity_ || other.lattice_dim_ != lattice_dim_) {
    fail(ErrorCode::InvalidArgument, "point layout mismatch");
  }
  for (int k = 0; k < dim_; ++k) axes_[k].insert(axes_[k].end(), other.axes_[k].begin(), other.axes_[k].end());
  labels_.insert(labels_.end(), other.labels_.begin(), other.labels_.end());
  lattice_.insert(lattice_.end(), other.lattice_.begin(), other.lattice_.end());
}

PointSet PointSet::translated(std::span<const double> offset) const {
  PointSet out = *this;
  for (int k = 0; k < dim_; ++k) {
    for (auto& x : out.axes_[k]) x += offset[k];
  }
  if (meta.extent) {
    const Region& e = *meta.extent;
    if (e.kind() == Region::Kind::Ball) {
      std::vector<double> c = e.center();
      for (int k = 0; k < dim_; ++k) c[k] += offset[k];
      out.meta.extent = Region::ball(std::move(c), e.radius());
    } else {
      // Shift the box coordinates by the offset expressed in the frame.
      RealVector off(dim_);
      for (int k = 0; k < dim_; ++k) off[k] = offset[k];
      const RealVector du = e.frame_inverse() * off;
      Box b = e.frame_box();
      for (int k = 0; k < dim_; ++k) {
        b.lo[k] += du[k];
        b.hi[k] += du[k];
      }
      out.meta.extent = Region::box(e.frame(), std::move(b));
    }
  }
  return out;
}

DeloneStats delone_stats(const PointSet& ps, std::size_t probes, std::uint64_t seed, double margin) {
  DeloneStats stats;
  if (ps.size() < 2) return stats;
  const double cell = default_cell_size(ps);
  GridIndex index(ps, cell);

  double r_min = std::numeric_limits<double>::infinity();
  std::vector<double> p(ps.dim());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (int k = 0; k < ps.dim(); ++k) p[k] = ps.coord(i, k);
    index.for_each_within(p, std::min(r_min, cell), [&](std::size_t j) {
      if (j == i) return;
      double s = 0.0;
      for (int k = 0; k < ps.dim(); ++k) {
        const double t = ps.coord(j, k) - p[k];
        s += t * t;
      }
      r_min = std::min(r_min, std::sqrt(s));
    });
  }
  if (!std::isfinite(r_min)) {
    // Sparse relative to the cell size; fall back to nearest-neighbour search.
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (int k = 0; k < ps.dim(); ++k) p[k] = ps.coord(i, k);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < ps.size(); ++j) {
        if (j == i) continue;
        double s = 0.0;
        for (int k = 0; k < ps.dim(); ++k) s += (ps.coord(j, k) - p[k]) * (ps.coord(j, k) - p[k]);
        best = std::min(best, s);
      }
      r_min = std::min(r_min, std::sqrt(best));
    }
  }
  stats.r_min = r_min;

  Box bounds;
  bool ball = false;
  std::vector<double> center;
  double radius = 0.0;
  if (ps.meta.extent) {
    if (ps.meta.extent->kind() == Region::Kind::Ball) {
      ball = true;
      center = ps.meta.extent->center();
      radius = ps.meta.extent->radius() - margin;
    }
    bounds = ps.meta.extent->bounds();
  } else {
    bounds.lo.assign(ps.dim(), std::numeric_limits<double>::infinity());
    bounds.hi.assign(ps.dim(), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (int k = 0; k < ps.dim(); ++k) {
        bounds.lo[k] = std::min(bounds.lo[k], ps.coord(i, k));
        bounds.hi[k] = std::max(bounds.hi[k], ps.coord(i, k));
      }
    }
  }
  for (int k = 0; k < ps.dim(); ++k) {
    bounds.lo[k] += margin;
    bounds.hi[k] -= margin;
  }
  std::mt19937_64 rng(seed);
  double r_max = 0.0;
  std::size_t used = 0;
  for (std::size_t s = 0; s < probes * 4 && used < probes; ++s) {
    for (int k = 0; k < ps.dim(); ++k) {
      std::uniform_real_distribution<double> u(bounds.lo[k], bounds.hi[k]);
      p[k] = u(rng);
    }
    if (ball) {
      double d2 = 0.0;
      for (int k = 0; k < ps.dim(); ++k) d2 += (p[k] - center[k]) * (p[k] - center[k]);
      if (d2 > radius * radius) continue;
    } else if (ps.meta.extent && ps.meta.extent->kind() == Region::Kind::Box && !ps.meta.extent->axis_aligned() &&
               !ps.meta.extent->contains(p)) {
      continue;
    }
    auto hit = index.nearest(p);
    if (hit) r_max = std::max(r_max, hit->second);
    ++used;
  }
  stats.r_max = r_max;
  stats.probes = used;
  return stats;
}

}  // namespace aperiodic
