#pragma once

#include <span>
#include <vector>

#include "aperiodic/core/types.hpp"

namespace aperiodic {

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
};

/// A bounded region of R^d: either a parallelepiped
/// {origin + frame * u : lo <= u < hi} or a closed Euclidean ball.
/// Axis-aligned boxes are parallelepipeds with frame = identity.
class Region {
 public:
  enum class Kind { Box, Ball };

  static Region box(Box b);
  static Region box(RealMatrix frame, Box b);
  static Region ball(std::vector<double> center, double radius);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool contains(std::span<const double> p) const;
  double volume() const;

  /// Vertices of the parallelepiped (2^d of them), or empty for a ball.
  std::vector<std::vector<double>> corners() const;

  /// True when `inner` lies inside this region up to `tol`.
  bool encloses(const Region& inner, double tol = 1e-9) const;

  /// Axis-aligned bounding box.
  Box bounds() const;

  const Box& frame_box() const { return box_; }
  const RealMatrix& frame() const { return frame_; }
  const RealMatrix& frame_inverse() const { return frame_inv_; }
  bool axis_aligned() const { return axis_aligned_; }
  const std::vector<double>& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Kind kind_ = Kind::Box;
  int dim_ = 0;
  Box box_;
  RealMatrix frame_;
  RealMatrix frame_inv_;
  bool axis_aligned_ = true;
  std::vector<double> center_;
  double radius_ = 0.0;
};

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

}  // namespace aperiodic
