#include "aperiodic/core/samples.hpp"

#include <cmath>
#include <random>

#include "aperiodic/core/error.hpp"

namespace aperiodic {

PointSet lattice_point_set(const Box& box, double spacing) {
  const int d = box.dim();
  if (d < 1 || !(spacing > 0.0)) fail(ErrorCode::InvalidArgument, "lattice sample needs d >= 1 and spacing > 0");
  std::vector<std::int64_t> lo(d), hi(d);
  for (int k = 0; k < d; ++k) {
    lo[k] = static_cast<std::int64_t>(std::ceil(box.lo[k] / spacing));
    hi[k] = static_cast<std::int64_t>(std::ceil(box.hi[k] / spacing)) - 1;  // half-open
    if (hi[k] < lo[k]) fail(ErrorCode::InvalidArgument, "lattice sample box contains no points");
  }
  PointSet ps(d);
  std::vector<std::int64_t> g = lo;
  std::vector<double> p(d);
  while (true) {
    for (int k = 0; k < d; ++k) p[k] = static_cast<double>(g[k]) * spacing;
    ps.push_back(p);
    int k = d - 1;
    while (k >= 0 && g[k] == hi[k]) {
      g[k] = lo[k];
      --k;
    }
    if (k < 0) break;
    ++g[k];
  }
  ps.meta.system = "lattice";
  ps.meta.provenance = "lattice";
  ps.meta.extent = Region::box(box);
  ps.meta.aperiodic = false;
  return ps;
}

PointSet poisson_point_set(const Box& box, double intensity, std::uint64_t seed) {
  const int d = box.dim();
  if (d < 1 || !(intensity > 0.0)) fail(ErrorCode::InvalidArgument, "Poisson sample needs d >= 1 and intensity > 0");
  std::mt19937_64 rng(seed);
  std::poisson_distribution<std::int64_t> count_dist(intensity * box.volume());
  const std::int64_t n = count_dist(rng);
  std::vector<std::vector<double>> axes(d, std::vector<double>(static_cast<std::size_t>(n)));
  for (int k = 0; k < d; ++k) {
    std::uniform_real_distribution<double> u(box.lo[k], box.hi[k]);
    for (auto& x : axes[k]) x = u(rng);
  }
  PointSet ps = PointSet::from_columns(std::move(axes));
  ps.meta.system = "poisson";
  ps.meta.provenance = "poisson";
  ps.meta.extent = Region::box(box);
  ps.meta.aperiodic = true;
  return ps;
}

}  // namespace aperiodic
