#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "aperiodic/core/pointset.hpp"

namespace aperiodic {

/// Uniform-grid bucket index over a point set, d <= 3.
class GridIndex {
 public:
  GridIndex(const PointSet& ps, double cell_size);

  /// Calls fn(i) for every point within `radius` (closed) of q.
  void for_each_within(std::span<const double> q, double radius, const std::function<void(std::size_t)>& fn) const;

  /// Index of the closest point within `tol` of q, if any.
  std::optional<std::size_t> find(std::span<const double> q, double tol) const;

  /// Nearest point and its distance, or nullopt for an empty set.
  std::optional<std::pair<std::size_t, double>> nearest(std::span<const double> q) const;

  const PointSet& points() const { return *ps_; }

 private:
  std::int64_t cell_coord(double x, int axis) const;

  const PointSet* ps_;
  int dim_;
  double cell_;
  std::vector<double> origin_;
  std::vector<std::int64_t> extent_;
  std::vector<std::size_t> cell_start_;
  std::vector<std::uint32_t> order_;
};

/// Reasonable cell size for an index over `ps` (about one point per cell).
double default_cell_size(const PointSet& ps);

}  // namespace aperiodic
