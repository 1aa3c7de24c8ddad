#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "aperiodic/core/pointset.hpp"
#include "aperiodic/cutproject/scheme.hpp"
#include "aperiodic/cutproject/window.hpp"
#include "aperiodic/deviation/family.hpp"

namespace aperiodic {

/// Finite set of wave vectors, stored per axis.
struct KGrid {
  int dim = 1;
  std::vector<double> kx;
  std::vector<double> ky;  ///< empty for d = 1
  std::string kind = "custom";
  /// Index layout for line (n) and rect (nx, ny) grids, x fastest.
  std::vector<std::size_t> shape;
  /// Spacing used as the resolution of peak positions.
  double resolution = 0.0;

  std::size_t size() const { return kx.size(); }
  std::vector<double> at(std::size_t i) const;
};

/// count evenly spaced values from k_min to k_max inclusive.
KGrid line_grid(double k_min, double k_max, std::size_t count);
KGrid rect_grid(double kx_min, double kx_max, std::size_t nx, double ky_min, double ky_max, std::size_t ny);
/// The origin plus `radial` rings of radius k_max * j / radial, each with
/// `angular` equally spaced directions starting at `phase` radians.
/// Rotation by 2 pi / m maps the grid to itself whenever m divides `angular`.
KGrid polar_grid(double k_max, std::size_t radial, std::size_t angular, double phase = 0.0);

inline constexpr double kDefaultIntensityBudget = 1e11;

struct IntensityMap {
  KGrid grid;
  std::vector<double> I;
  double T = 0.0;
  double vol = 0.0;
  std::size_t N = 0;
  double I0 = 0.0;  ///< N^2 / Vol, the value at k = 0

  std::string to_csv() const;
};

/// I(k) = |sum_{x in region} exp(-2 pi i k.x)|^2 / Vol(region), summed
/// directly with the selected SIMD kernel. Errors: CapacityExceeded when
/// |grid| * N exceeds `budget`, RegionExceedsExtent.
IntensityMap intensity(const PointSet& ps, const Region& region, const KGrid& grid,
                       double budget = kDefaultIntensityBudget, int threads = 1);
IntensityMap intensity(const PointSet& ps, const AveragingFamily& family, double T, const KGrid& grid,
                       double budget = kDefaultIntensityBudget, int threads = 1);

/// max_k |I(Rk) - I(k)| / I(0) for the rotation R by 2 pi / order.
/// Errors: GridNotClosed.
double symmetry_check(const IntensityMap& map, int order);

struct Peak {
  std::vector<double> k;
  double intensity = 0.0;   ///< measured, or predicted relative to I(0)
  std::vector<std::int64_t> h;  ///< dual lattice vector (oracle peaks)
};

/// Local maxima of the map, strongest first, above `min_rel` * I(0).
/// Maxima closer than `min_separation` to a stronger accepted peak (side
/// lobes of the finite window) are skipped.
std::vector<Peak> strongest_peaks(const IntensityMap& map, std::size_t count, double min_rel = 0.0,
                                  double min_separation = 0.0);

/// Projected dual lattice E_par^T h for |h|_inf <= h_radius inside the ball
/// |k| <= k_max, with predicted relative intensity |FT(window)(E_perp^T h)|^2
/// / vol(window)^2; strongest first. Codimension-1 schemes only
/// (WrongCodimension otherwise).
std::vector<Peak> bragg_oracle(const ProjectionScheme& s, const Window& window, double k_max, int h_radius);

}  // namespace aperiodic
