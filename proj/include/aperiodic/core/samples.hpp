#pragma once

#include <cstdint>

#include "aperiodic/core/pointset.hpp"

namespace aperiodic {

/// Integer lattice points spacing * Z^d inside the half-open box [lo, hi).
PointSet lattice_point_set(const Box& box, double spacing = 1.0);

/// Poisson process of the given intensity on the half-open box, seeded.
PointSet poisson_point_set(const Box& box, double intensity, std::uint64_t seed);

}  // namespace aperiodic
