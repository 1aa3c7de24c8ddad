#pragma once

#include "aperiodic/cutproject/scheme.hpp"
#include "aperiodic/spectral/spectrum.hpp"
#include "aperiodic/substitution/substitution.hpp"

namespace aperiodic {

/// Action on first cohomology of a 1D substitution tiling space: the
/// nonzero spectrum of the transposed incidence matrix (direct limit).
/// Errors: NotPrimitive.
Spectrum induced_action_1d(const SubstitutionRule1D& rule);

/// Top cohomology action of a codimension-1 cut-and-project scheme: the
/// spectrum of the inverse lattice map, roots of unity omitted.
/// Errors: WrongCodimension.
Spectrum codim1_spectrum(const ProjectionScheme& scheme);

}  // namespace aperiodic
