#include "aperiodic/cutproject/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "aperiodic/core/error.hpp"
#include "aperiodic/spectral/polynomial.hpp"

namespace aperiodic {
namespace {

using CMatrix = Eigen::MatrixXcd;

// Range of the real matrix prod_{mu in drop} (A - mu I)^{mult}: the sum of
// the generalized eigenspaces of the kept eigenvalues.
RealMatrix invariant_subspace(const IntMatrix& a, const Spectrum& s, const std::vector<bool>& keep, int dim) {
  const Eigen::Index n = a.rows();
  const RealMatrix A = a.cast<double>();
  RealMatrix p = RealMatrix::Identity(n, n);
  const RealMatrix I = RealMatrix::Identity(n, n);
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    if (keep[i]) continue;
    const Complex mu = s.eigenvalues[i].value;
    if (mu.imag() < 0.0) continue;  // handled together with its conjugate
    RealMatrix factor;
    if (mu.imag() == 0.0) {
      factor = A - mu.real() * I;
    } else {
      factor = A * A - 2.0 * mu.real() * A + std::norm(mu) * I;
    }
    for (int k = 0; k < s.eigenvalues[i].multiplicity; ++k) {
      p = factor * p;
      p /= p.norm();  // keep magnitudes bounded
    }
  }
  Eigen::JacobiSVD<RealMatrix> svd(p, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  if (dim < n && sv(dim) > 1e-8 * sv(0)) fail(ErrorCode::IllConditioned, "invariant subspace rank is unclear");
  if (sv(dim - 1) < 1e-10 * sv(0)) fail(ErrorCode::IllConditioned, "invariant subspace is rank deficient");
  return svd.matrixU().leftCols(dim);
}

// Canonical orthonormal basis of span(basis): Gram-Schmidt on the
// projections of the standard basis vectors, in order.
RealMatrix canonical_basis(const RealMatrix& basis) {
  const Eigen::Index n = basis.rows();
  const Eigen::Index k = basis.cols();
  RealMatrix out(n, k);
  Eigen::Index filled = 0;
  for (Eigen::Index i = 0; i < n && filled < k; ++i) {
    RealVector v = basis * basis.row(i).transpose();
    for (Eigen::Index j = 0; j < filled; ++j) v -= out.col(j).dot(v) * out.col(j);
    const double norm = v.norm();
    if (norm < 1e-6) continue;
    out.col(filled++) = v / norm;
  }
  if (filled < k) fail(ErrorCode::Internal, "could not build a canonical basis");
  return out;
}

std::vector<bool> choose(const Spectrum& s, int d, const EigenSelector& sel) {
  std::vector<bool> keep(s.eigenvalues.size(), false);
  int total = 0;
  if (sel.kind == EigenSelector::Kind::Leading) {
    for (std::size_t i = 0; i < s.eigenvalues.size() && total < d; ++i) {
      keep[i] = true;
      total += s.eigenvalues[i].multiplicity;
    }
  } else {
    for (int idx : sel.indices) {
      if (idx < 0 || idx >= static_cast<int>(s.eigenvalues.size())) {
        fail(ErrorCode::InvalidArgument, "selector index " + std::to_string(idx) + " out of range");
      }
      if (keep[idx]) fail(ErrorCode::InvalidArgument, "selector index repeated");
      keep[idx] = true;
      total += s.eigenvalues[idx].multiplicity;
    }
  }
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] && !(std::abs(s.eigenvalues[i].value) > 1.0 + 1e-9)) {
      fail(ErrorCode::NotHyperbolicSelection, "selected eigenvalue has modulus <= 1");
    }
  }
  if (total != d) fail(ErrorCode::InvalidArgument, "selected eigenvalues span " + std::to_string(total) + " dimensions, need " + std::to_string(d));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (!keep[i] || s.eigenvalues[i].value.imag() == 0.0) continue;
    bool paired = false;
    for (std::size_t j = 0; j < keep.size(); ++j) {
      if (keep[j] && std::abs(s.eigenvalues[j].value - std::conj(s.eigenvalues[i].value)) <= kMergeTolerance) paired = true;
    }
    if (!paired) fail(ErrorCode::InvalidArgument, "selection is not closed under complex conjugation");
  }
  return keep;
}

// Condition number of an eigenvector basis of m built from null spaces of
// m - mu I for the known eigenvalues mu; infinite when one is defective.
double eigenvector_condition(const RealMatrix& m, const std::vector<Eigenvalue>& values) {
  const Eigen::Index d = m.rows();
  const double norm = Eigen::JacobiSVD<RealMatrix>(m).singularValues()(0);
  CMatrix v(d, d);
  Eigen::Index col = 0;
  for (const auto& e : values) {
    const CMatrix shifted = m.cast<Complex>() - e.value * CMatrix::Identity(d, d);
    Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    for (int k = 0; k < e.multiplicity; ++k) {
      const Eigen::Index idx = d - 1 - k;
      if (sv(idx) > 1e-8 * (1.0 + std::abs(e.value)) * norm) return std::numeric_limits<double>::infinity();
      v.col(col++) = svd.matrixV().col(idx);
    }
  }
  const auto sv = Eigen::JacobiSVD<CMatrix>(v).singularValues();
  return sv(0) / sv(d - 1);
}

}  // namespace

RealVector ProjectionScheme::par(std::span<const double> v) const {
  return P_par * Eigen::Map<const RealVector>(v.data(), n);
}

RealVector ProjectionScheme::perp(std::span<const double> v) const {
  return P_perp * Eigen::Map<const RealVector>(v.data(), n);
}

double nearest_lattice_distance(const RealMatrix& basis, int radius) {
  const Eigen::Index n = basis.rows();
  const Eigen::Index k = basis.cols();
  if (k == 0 || k == n) return std::numeric_limits<double>::infinity();
  // Parametrize the subspace by the k coordinates whose minor is best
  // conditioned; every lattice vector close to the subspace is the rounding
  // of the subspace point sharing its free coordinates.
  std::vector<int> best;
  double best_cond = std::numeric_limits<double>::infinity();
  std::vector<int> pick(k);
  for (Eigen::Index i = 0; i < k; ++i) pick[i] = static_cast<int>(i);
  while (true) {
    RealMatrix minor(k, k);
    for (Eigen::Index i = 0; i < k; ++i) minor.row(i) = basis.row(pick[i]);
    const auto sv = Eigen::JacobiSVD<RealMatrix>(minor).singularValues();
    const double cond = sv(k - 1) > 0 ? sv(0) / sv(k - 1) : std::numeric_limits<double>::infinity();
    if (cond < best_cond) {
      best_cond = cond;
      best = pick;
    }
    Eigen::Index i = k - 1;
    while (i >= 0 && pick[i] == static_cast<int>(n - k + i)) --i;
    if (i < 0) break;
    ++pick[i];
    for (Eigen::Index j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  RealMatrix minor(k, k);
  for (Eigen::Index i = 0; i < k; ++i) minor.row(i) = basis.row(best[i]);
  const RealMatrix solve = basis * minor.inverse();  // n x k: free coords -> full vector
  const RealMatrix proj = basis * basis.transpose();

  double nearest = std::numeric_limits<double>::infinity();
  std::vector<int> free(k, -radius);
  RealVector v(n);
  while (true) {
    RealVector f(k);
    bool zero = true;
    for (Eigen::Index i = 0; i < k; ++i) {
      f(i) = free[i];
      zero = zero && free[i] == 0;
    }
    if (!zero) {
      const RealVector full = solve * f;
      bool in_range = true;
      for (Eigen::Index r = 0; r < n; ++r) {
        v(r) = std::round(full(r));
        if (std::abs(v(r)) > radius) in_range = false;
      }
      if (in_range) nearest = std::min(nearest, (v - proj * v).norm());
    }
    Eigen::Index i = k - 1;
    while (i >= 0 && free[i] == radius) {
      free[i] = -radius;
      --i;
    }
    if (i < 0) break;
    ++free[i];
  }
  return nearest;
}

ProjectionScheme build_scheme(const IntMatrix& a, int d, const EigenSelector& selector, std::string name,
                              int irrationality_radius) {
  if (a.rows() != a.cols() || a.rows() < 1) fail(ErrorCode::InvalidArgument, "scheme matrix must be square");
  const int n = static_cast<int>(a.rows());
  if (d < 1 || d > n) fail(ErrorCode::InvalidArgument, "physical dimension must be in [1, n]");
  if (determinant(a) != 1) fail(ErrorCode::NotUnimodular, "scheme matrix must have determinant +1");

  ProjectionScheme s;
  s.name = std::move(name);
  s.n = n;
  s.d = d;
  s.A_int = a;
  s.A_inv = *unimodular_inverse(a);
  s.spectrum = eigenvalues(a);
  const std::vector<bool> keep = choose(s.spectrum, d, selector);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (!keep[i]) continue;
    s.selected.push_back(static_cast<int>(i));
  }
  std::vector<bool> rest(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) rest[i] = !keep[i];

  s.E_par = canonical_basis(invariant_subspace(a, s.spectrum, keep, d));
  const RealMatrix A = a.cast<double>();
  s.A_par = s.E_par.transpose() * A * s.E_par;
  if (((A * s.E_par - s.E_par * s.A_par).colwise().norm().array() > 1e-9 * (1.0 + A.norm())).any()) {
    fail(ErrorCode::IllConditioned, "physical subspace is not invariant to 1e-9");
  }
  if (d < n) {
    s.E_perp = canonical_basis(invariant_subspace(a, s.spectrum, rest, n - d));
    s.A_perp = s.E_perp.transpose() * A * s.E_perp;
    if (((A * s.E_perp - s.E_perp * s.A_perp).colwise().norm().array() > 1e-9 * (1.0 + A.norm())).any()) {
      fail(ErrorCode::IllConditioned, "internal subspace is not invariant to 1e-9");
    }
  } else {
    s.E_perp = RealMatrix(n, 0);
    s.A_perp = RealMatrix(0, 0);
  }

  std::vector<Eigenvalue> chosen;
  for (int i : s.selected) chosen.push_back(s.spectrum.eigenvalues[i]);
  s.eigvec_condition = eigenvector_condition(s.A_par, chosen);
  if (!(s.eigvec_condition < 1e8)) {
    fail(ErrorCode::NonDiagonalizableParallel, "expansion on the physical space is not diagonalizable");
  }

  RealMatrix basis(n, n);
  basis << s.E_par, s.E_perp;
  s.basis_det = std::abs(basis.determinant());
  const RealMatrix inv = basis.inverse();
  s.P_par = inv.topRows(d);
  s.P_perp = inv.bottomRows(n - d);

  if (d < n) {
    const double to_par = nearest_lattice_distance(s.E_par, irrationality_radius);
    const double to_perp = nearest_lattice_distance(s.E_perp, irrationality_radius);
    if (to_par < 1e-7 || to_perp < 1e-7) {
      fail(ErrorCode::IrrationalityFailed, "an integer vector lies within 1e-7 of an invariant subspace");
    }
  }
  s.irrationality_checked_radius = irrationality_radius;
  return s;
}

}  // namespace aperiodic
