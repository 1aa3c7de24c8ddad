#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "aperiodic/core/types.hpp"
#include "aperiodic/spectral/polynomial.hpp"

namespace aperiodic {

struct Eigenvalue {
  Complex value;
  int multiplicity = 1;
  /// Smallest singular value of (M - value I); 0 when not matrix-derived.
  double residual = 0.0;
};

/// Eigenvalues with algebraic multiplicities, sorted by decreasing modulus
/// (ties: larger real part first, then larger imaginary part).
struct Spectrum {
  std::vector<Eigenvalue> eigenvalues;
  std::optional<IntPoly> char_poly;
  /// Largest Jordan block per entry of `eigenvalues`; empty means all 1.
  std::vector<int> jordan_hint;
  bool proper_assumed = false;
  bool roots_of_unity_omitted = false;

  int dimension() const;
  /// Every eigenvalue repeated by multiplicity, in order.
  std::vector<Complex> expanded() const;
  int jordan(std::size_t i) const { return jordan_hint.empty() ? 1 : jordan_hint[i]; }
  double max_modulus() const;
};

/// Distance below which roots are treated as one eigenvalue.
inline constexpr double kMergeTolerance = 1e-7;

/// Integer input: exact characteristic polynomial, square-free split, roots
/// refined per factor. Each eigenvalue carries a residual certificate.
Spectrum eigenvalues(const IntMatrix& m);
Spectrum eigenvalues(const RealMatrix& m);

/// Groups values within kMergeTolerance and sorts.
Spectrum spectrum_from_values(const std::vector<std::pair<Complex, int>>& values);
Spectrum spectrum_from_values(const std::vector<Complex>& values);

Spectrum direct_sum(const Spectrum& a, const Spectrum& b);

/// All products taking one eigenvalue per factor; multiplicities multiply.
Spectrum kunneth_spectrum(const std::vector<Spectrum>& factors);

/// Drops eigenvalues with |v| <= tol.
Spectrum drop_zero(const Spectrum& s, double tol = 1e-9);

/// True iff the multiset `sub` embeds into `super` with each matched pair
/// within `tol` (maximum bipartite matching).
bool spectrum_containment(const Spectrum& sub, const Spectrum& super, double tol);

}  // namespace aperiodic
