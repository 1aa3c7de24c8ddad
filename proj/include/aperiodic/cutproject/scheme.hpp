#pragma once

#include <span>
#include <string>
#include <vector>

#include "aperiodic/core/types.hpp"
#include "aperiodic/spectral/spectrum.hpp"

namespace aperiodic {

/// Chooses the eigenvalues spanning the physical space: the leading ones by
/// modulus (counted with multiplicity), or explicit indices into the sorted
/// distinct eigenvalue list.
struct EigenSelector {
  enum class Kind { Leading, Indices };
  Kind kind = Kind::Leading;
  std::vector<int> indices;

  static EigenSelector leading() { return {}; }
  static EigenSelector pick(std::vector<int> idx) { return {Kind::Indices, std::move(idx)}; }
};

/// A hyperbolic unimodular integer matrix with an invariant splitting
/// R^n = E_par + E_perp. Physical and internal coordinates are taken in
/// orthonormal bases of the two subspaces.
struct ProjectionScheme {
  std::string name;
  int n = 0;
  int d = 0;
  IntMatrix A_int;
  IntMatrix A_inv;
  RealMatrix E_par;   ///< n x d, orthonormal columns
  RealMatrix E_perp;  ///< n x (n-d), orthonormal columns
  RealMatrix A_par;   ///< d x d
  RealMatrix A_perp;  ///< (n-d) x (n-d)
  /// Rows of [E_par | E_perp]^{-1}: coordinates of v along each subspace.
  RealMatrix P_par;   ///< d x n
  RealMatrix P_perp;  ///< (n-d) x n
  double basis_det = 1.0;  ///< |det [E_par | E_perp]|
  double eigvec_condition = 1.0;
  int irrationality_checked_radius = 0;
  Spectrum spectrum;
  std::vector<int> selected;  ///< indices into spectrum.eigenvalues

  int codim() const { return n - d; }
  RealVector par(std::span<const double> v) const;
  RealVector perp(std::span<const double> v) const;
};

inline constexpr int kIrrationalityRadius = 50;

/// Errors: NotUnimodular, NotHyperbolicSelection, NonDiagonalizableParallel,
/// IrrationalityFailed, InvalidArgument for a selection splitting a
/// conjugate pair or of the wrong size.
ProjectionScheme build_scheme(const IntMatrix& a, int d, const EigenSelector& selector = EigenSelector::leading(),
                              std::string name = "", int irrationality_radius = kIrrationalityRadius);

/// Smallest distance from a nonzero integer vector with sup-norm <= radius
/// to the subspace spanned by the orthonormal columns of `basis`.
double nearest_lattice_distance(const RealMatrix& basis, int radius);

}  // namespace aperiodic
