#include "aperiodic/spectral/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "aperiodic/core/error.hpp"

namespace aperiodic {
namespace {

bool before(const Complex& a, const Complex& b) {
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  const double tol = 1e-12 * (1.0 + std::max(ma, mb));
  if (std::abs(ma - mb) > tol) return ma > mb;
  if (std::abs(a.real() - b.real()) > tol) return a.real() > b.real();
  return a.imag() > b.imag();
}

// Clusters values whose distance chains within kMergeTolerance.
std::vector<Eigenvalue> group(const std::vector<std::pair<Complex, int>>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = root(parent[i]);
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(values[i].first - values[j].first) <= kMergeTolerance) parent[root(i)] = root(j);
    }
  }
  std::vector<Eigenvalue> out;
  std::vector<std::size_t> slot(n, n);
  std::vector<Complex> sum;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = root(i);
    if (slot[r] == n) {
      slot[r] = out.size();
      out.push_back({Complex(0, 0), 0, 0.0});
      sum.emplace_back(0, 0);
    }
    Eigenvalue& e = out[slot[r]];
    sum[slot[r]] += values[i].first * static_cast<double>(values[i].second);
    e.multiplicity += values[i].second;
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    Complex v = sum[k] / static_cast<double>(out[k].multiplicity);
    if (std::abs(v.imag()) <= 1e-12 * (1.0 + std::abs(v))) v = Complex(v.real(), 0.0);
    out[k].value = v;
  }
  std::sort(out.begin(), out.end(), [](const Eigenvalue& a, const Eigenvalue& b) { return before(a.value, b.value); });
  return out;
}

// Roots of a real polynomial come in conjugate pairs; make them exactly so.
void symmetrize(std::vector<std::complex<long double>>& roots) {
  const long double tol = 1e-14L;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    const long double scale = 1 + std::abs(roots[i]);
    if (std::abs(roots[i].imag()) <= tol * scale) {
      roots[i] = {roots[i].real(), 0};
      used[i] = true;
      continue;
    }
    std::size_t best = roots.size();
    long double best_d = 0;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (used[j]) continue;
      const long double d = std::abs(roots[j] - std::conj(roots[i]));
      if (best == roots.size() || d < best_d) {
        best = j;
        best_d = d;
      }
    }
    used[i] = true;
    if (best == roots.size() || best_d > 1e-9L * scale) continue;
    used[best] = true;
    const std::complex<long double> avg = (roots[i] + std::conj(roots[best])) / 2.0L;
    roots[i] = avg;
    roots[best] = std::conj(avg);
  }
}

void certify(Spectrum& s, const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  const double norm = n == 0 ? 0.0 : Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
  for (auto& e : s.eigenvalues) {
    Eigen::MatrixXcd shifted = m - e.value * Eigen::MatrixXcd::Identity(n, n);
    const auto sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(shifted).singularValues();
    e.residual = sv(sv.size() - 1);
    const double bound = 1e-8 * (1.0 + std::abs(e.value)) * norm;
    if (e.residual > bound && e.residual > 1e-300) {
      fail(ErrorCode::IllConditioned, "eigenvalue residual " + std::to_string(e.residual) + " exceeds " +
                                          std::to_string(bound));
    }
  }
}

}  // namespace

int Spectrum::dimension() const {
  int n = 0;
  for (const auto& e : eigenvalues) n += e.multiplicity;
  return n;
}

std::vector<Complex> Spectrum::expanded() const {
  std::vector<Complex> out;
  for (const auto& e : eigenvalues) out.insert(out.end(), e.multiplicity, e.value);
  return out;
}

double Spectrum::max_modulus() const {
  double m = 0.0;
  for (const auto& e : eigenvalues) m = std::max(m, std::abs(e.value));
  return m;
}

Spectrum eigenvalues(const IntMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorCode::InvalidArgument, "matrix must be square");
  if (m.rows() > 64) fail(ErrorCode::InvalidArgument, "matrix dimension exceeds 64");
  Spectrum s;
  s.char_poly = char_poly(m);
  std::vector<std::pair<Complex, int>> values;
  for (const auto& [factor, mult] : square_free_factors(to_rational(*s.char_poly))) {
    auto roots = simple_roots(factor);
    symmetrize(roots);
    for (const auto& r : roots) {
      values.emplace_back(Complex(static_cast<double>(r.real()), static_cast<double>(r.imag())), mult);
    }
  }
  s.eigenvalues = group(values);
  certify(s, m.cast<double>().cast<Complex>());
  return s;
}

Spectrum eigenvalues(const RealMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorCode::InvalidArgument, "matrix must be square");
  if (m.rows() > 64) fail(ErrorCode::InvalidArgument, "matrix dimension exceeds 64");
  Spectrum s;
  if (m.rows() == 0) return s;
  Eigen::EigenSolver<RealMatrix> solver(m, false);
  if (solver.info() != Eigen::Success) fail(ErrorCode::IllConditioned, "eigenvalue iteration did not converge");
  std::vector<std::pair<Complex, int>> values;
  for (Eigen::Index i = 0; i < m.rows(); ++i) values.emplace_back(solver.eigenvalues()(i), 1);
  s.eigenvalues = group(values);
  certify(s, m.cast<Complex>());
  return s;
}

Spectrum spectrum_from_values(const std::vector<std::pair<Complex, int>>& values) {
  Spectrum s;
  s.eigenvalues = group(values);
  return s;
}

Spectrum spectrum_from_values(const std::vector<Complex>& values) {
  std::vector<std::pair<Complex, int>> v;
  for (const auto& z : values) v.emplace_back(z, 1);
  return spectrum_from_values(v);
}

Spectrum direct_sum(const Spectrum& a, const Spectrum& b) {
  std::vector<std::pair<Complex, int>> v;
  std::vector<std::pair<Complex, int>> hints;
  for (const auto* s : {&a, &b}) {
    for (std::size_t i = 0; i < s->eigenvalues.size(); ++i) {
      v.emplace_back(s->eigenvalues[i].value, s->eigenvalues[i].multiplicity);
      hints.emplace_back(s->eigenvalues[i].value, s->jordan(i));
    }
  }
  Spectrum out = spectrum_from_values(v);
  if (!a.jordan_hint.empty() || !b.jordan_hint.empty()) {
    out.jordan_hint.assign(out.eigenvalues.size(), 1);
    for (const auto& [z, j] : hints) {
      for (std::size_t i = 0; i < out.eigenvalues.size(); ++i) {
        if (std::abs(out.eigenvalues[i].value - z) <= kMergeTolerance) out.jordan_hint[i] = std::max(out.jordan_hint[i], j);
      }
    }
  }
  out.proper_assumed = a.proper_assumed || b.proper_assumed;
  out.roots_of_unity_omitted = a.roots_of_unity_omitted || b.roots_of_unity_omitted;
  return out;
}

Spectrum kunneth_spectrum(const std::vector<Spectrum>& factors) {
  if (factors.empty()) fail(ErrorCode::InvalidArgument, "kunneth_spectrum needs at least one factor");
  std::vector<std::pair<Complex, int>> acc{{Complex(1, 0), 1}};
  for (const auto& f : factors) {
    std::vector<std::pair<Complex, int>> next;
    for (const auto& [z, m] : acc) {
      for (const auto& e : f.eigenvalues) next.emplace_back(z * e.value, m * e.multiplicity);
    }
    acc = std::move(next);
  }
  Spectrum out = spectrum_from_values(acc);
  out.proper_assumed = std::any_of(factors.begin(), factors.end(), [](const Spectrum& s) { return s.proper_assumed; });
  return out;
}

Spectrum drop_zero(const Spectrum& s, double tol) {
  Spectrum out = s;
  out.eigenvalues.clear();
  out.jordan_hint.clear();
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    if (std::abs(s.eigenvalues[i].value) <= tol) continue;
    out.eigenvalues.push_back(s.eigenvalues[i]);
    if (!s.jordan_hint.empty()) out.jordan_hint.push_back(s.jordan_hint[i]);
  }
  return out;
}

bool spectrum_containment(const Spectrum& sub, const Spectrum& super, double tol) {
  const auto a = sub.expanded();
  const auto b = super.expanded();
  if (a.size() > b.size()) return false;
  std::vector<int> match_b(b.size(), -1);
  std::function<bool(std::size_t, std::vector<char>&)> augment = [&](std::size_t i, std::vector<char>& seen) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (seen[j] || std::abs(a[i] - b[j]) > tol) continue;
      seen[j] = 1;
      if (match_b[j] < 0 || augment(static_cast<std::size_t>(match_b[j]), seen)) {
        match_b[j] = static_cast<int>(i);
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<char> seen(b.size(), 0);
    if (!augment(i, seen)) return false;
  }
  return true;
}

}  // namespace aperiodic
