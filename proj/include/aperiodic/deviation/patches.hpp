#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aperiodic/core/pointset.hpp"
#include "aperiodic/core/region.hpp"

namespace aperiodic {

/// A finite cluster relative to its anchor (the lexicographically smallest
/// point, placed at the origin). Labels use -1 as a wildcard component.
struct PatchObservable {
  std::vector<std::vector<double>> points;
  std::vector<std::vector<int>> labels;  ///< empty, or one label tuple per point
  double match_tol = 1e-6;

  static PatchObservable single_point(int d, std::vector<int> label = {});
  /// Sorts points, moves the anchor to the origin and validates.
  static PatchObservable make(std::vector<std::vector<double>> points, std::vector<std::vector<int>> labels = {},
                              double match_tol = 1e-6);
  int dim() const { return static_cast<int>(points.front().size()); }
};

/// Per point: 1 when an occurrence of the patch is anchored there.
std::vector<char> match_anchors(const PointSet& ps, const PatchObservable& obs, int threads = 1);

/// Number of anchors inside `region`. Throws RegionExceedsExtent when the
/// region is not inside the sampled extent.
std::int64_t count_patches(const PointSet& ps, const PatchObservable& obs, const Region& region, int threads = 1);

/// Same, reusing a precomputed anchor mask.
std::int64_t count_anchors(const PointSet& ps, const std::vector<char>& anchors, const Region& region, int threads = 1);

/// Throws RegionExceedsExtent unless `region` lies inside the extent.
void require_inside_extent(const PointSet& ps, const Region& region);

}  // namespace aperiodic
