#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aperiodic/core/region.hpp"
#include "aperiodic/core/types.hpp"

namespace aperiodic {

/// Acceptance window in internal-space coordinates: a finite union of
/// closed intervals (codimension 1) or a convex polygon (codimension 2).
class Window {
 public:
  enum class Kind { IntervalUnion, ConvexPolygon };

  static Window intervals(std::vector<std::pair<double, double>> parts, std::string id = "");
  /// Vertices in either orientation; stored counter-clockwise.
  static Window polygon(std::vector<std::array<double, 2>> vertices, std::string id = "");

  Kind kind() const { return kind_; }
  int dim() const { return kind_ == Kind::IntervalUnion ? 1 : 2; }
  const std::string& id() const { return id_; }
  void set_id(std::string id) { id_ = std::move(id); }

  const std::vector<std::pair<double, double>>& parts() const { return parts_; }
  const std::vector<std::array<double, 2>>& vertices() const { return vertices_; }

  bool contains(std::span<const double> y) const { return signed_distance(y) <= 0.0; }
  /// Negative inside, positive outside; the magnitude is the distance to the
  /// boundary.
  double signed_distance(std::span<const double> y) const;
  Box bounds() const;
  double measure() const;

  /// Image under an invertible linear map of the internal space.
  Window transformed(const RealMatrix& m) const;
  Window translated(std::span<const double> offset) const;
  /// Intersection with another window of the same kind; may be empty
  /// (measure 0), reported through `empty()`.
  Window intersect(const Window& other) const;
  bool empty() const;

 private:
  Kind kind_ = Kind::IntervalUnion;
  std::string id_;
  std::vector<std::pair<double, double>> parts_;
  std::vector<std::array<double, 2>> vertices_;
};

/// Convex hull (counter-clockwise, no collinear points) of planar points.
std::vector<std::array<double, 2>> convex_hull(std::vector<std::array<double, 2>> pts);

}  // namespace aperiodic
