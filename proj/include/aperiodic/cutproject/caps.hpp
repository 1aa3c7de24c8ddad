#pragma once

#include <span>
#include <vector>

#include "aperiodic/core/pointset.hpp"
#include "aperiodic/cutproject/scheme.hpp"
#include "aperiodic/cutproject/window.hpp"

namespace aperiodic {

/// Hull of the internal projections of the unit-cube vertices.
Window canonical_window(const ProjectionScheme& s);

/// Fixed generic shift x_i = 1e-3 * e^(i+1).
std::vector<double> default_shift(int n);

struct CapsOptions {
  std::size_t budget = kDefaultPointBudget;
  int threads = 1;
  /// Distance to the window boundary below which a shift counts as singular.
  double singular_tol = 1e-9;
  /// When false, near-boundary candidates raise SingularShift; when true,
  /// candidates within 1e-12 are dropped and counted instead.
  bool tolerate_singular = false;
};

/// { pi_par(g + x) : g in Z^n, |pi_par(g + x)| <= R, pi_perp(g + x) in K },
/// with lattice coordinates g attached. Output order is the lexicographic
/// order of g and does not depend on the thread count.
PointSet generate_caps(const ProjectionScheme& s, const Window& window, double radius, std::span<const double> shift,
                       const CapsOptions& options = {});

/// Some lattice point with physical norm <= search_radius projects within
/// `tol` of the window boundary.
bool is_singular(std::span<const double> shift, const ProjectionScheme& s, const Window& window, double search_radius,
                 double tol = 1e-9);

struct RenormalizationReport {
  double radius = 0.0;
  double mismatch = 0.0;  ///< Hausdorff distance inside the ball
  std::size_t left_points = 0;
  std::size_t right_points = 0;
  bool pass = false;
};

/// Compares A_par * Lambda_x(K) with Lambda_{Ax}(A_perp K) on the ball of
/// radius R. `right_window` replaces A_perp K (negative controls).
RenormalizationReport verify_renormalization(const ProjectionScheme& s, const Window& window, double radius,
                                             std::span<const double> shift, const Window* right_window = nullptr,
                                             int threads = 1);

/// Exact point density |det B| * vol(K).
double caps_density(const ProjectionScheme& s, const Window& window);

/// Exact frequency per unit volume of a patch given by lattice difference
/// vectors from the anchor: |det B| * vol(K intersected with K - pi_perp(delta)).
double caps_patch_frequency(const ProjectionScheme& s, const Window& window,
                            const std::vector<std::vector<std::int64_t>>& deltas);

}  // namespace aperiodic
