#include "aperiodic/spectral/cohomology.hpp"

#include "aperiodic/core/error.hpp"

namespace aperiodic {

Spectrum induced_action_1d(const SubstitutionRule1D& rule) {
  const IntMatrix m = incidence_matrix(rule);
  if (!is_primitive(m)) fail(ErrorCode::NotPrimitive, "substitution '" + rule.name + "' is not primitive");
  const IntMatrix mt = m.transpose();
  Spectrum s = drop_zero(eigenvalues(mt));
  s.proper_assumed = true;
  return s;
}

Spectrum codim1_spectrum(const ProjectionScheme& scheme) {
  if (scheme.n != scheme.d + 1) {
    fail(ErrorCode::WrongCodimension, "scheme '" + scheme.name + "' has codimension " + std::to_string(scheme.codim()) +
                                          ", expected 1");
  }
  Spectrum s = eigenvalues(scheme.A_inv);
  s.roots_of_unity_omitted = true;
  return s;
}

}  // namespace aperiodic
