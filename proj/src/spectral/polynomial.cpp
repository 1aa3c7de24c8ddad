#include "aperiodic/spectral/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aperiodic/core/error.hpp"

namespace aperiodic {
namespace {

using BigMat = std::vector<BigInt>;  // row-major n x n

struct Faddeev {
  IntPoly coeffs;
  BigMat last;  // M_n, with A M_n = -c_0 I
};

Faddeev faddeev(const IntMatrix& a) {
  if (a.rows() != a.cols()) fail(ErrorCode::InvalidArgument, "matrix must be square");
  const std::size_t n = static_cast<std::size_t>(a.rows());
  IntPoly c(n + 1);
  c[n] = 1;
  BigMat mk(n * n, BigInt(0));
  BigMat prod(n * n);
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        BigInt s = 0;
        for (std::size_t l = 0; l < n; ++l) {
          if (a(i, l) != 0) s += BigInt(a(i, l)) * mk[l * n + j];
        }
        prod[i * n + j] = s;
      }
    }
    for (std::size_t i = 0; i < n; ++i) prod[i * n + i] += c[n - k + 1];
    mk.swap(prod);
    BigInt tr = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) {
        if (a(i, l) != 0) tr += BigInt(a(i, l)) * mk[l * n + i];
      }
    }
    c[n - k] = -tr / static_cast<long>(k);
  }
  return {std::move(c), std::move(mk)};
}

void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

RatPoly monic(RatPoly p) {
  trim(p);
  if (p.empty()) return p;
  const Rational lead = p.back();
  for (auto& c : p) c /= lead;
  return p;
}

RatPoly derivative(const RatPoly& p) {
  RatPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  trim(d);
  return d;
}

RatPoly sub(RatPoly a, const RatPoly& b) {
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

// Quotient and remainder of a / b, b nonzero.
std::pair<RatPoly, RatPoly> divmod(RatPoly a, const RatPoly& b) {
  trim(a);
  if (a.size() < b.size()) return {RatPoly{}, a};
  RatPoly q(a.size() - b.size() + 1, Rational(0));
  for (std::size_t k = q.size(); k-- > 0;) {
    const Rational f = a[k + b.size() - 1] / b.back();
    q[k] = f;
    if (f == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) a[k + j] -= f * b[j];
  }
  trim(a);
  trim(q);
  return {q, a};
}

RatPoly gcd(RatPoly a, RatPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    RatPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

bool is_one(const RatPoly& p) { return p.size() == 1 && p[0] == 1; }

}  // namespace

IntPoly char_poly(const IntMatrix& m) { return faddeev(m).coeffs; }

BigInt determinant(const IntMatrix& m) {
  const IntPoly c = char_poly(m);
  return (m.rows() % 2 == 0) ? c[0] : BigInt(-c[0]);
}

std::optional<IntMatrix> unimodular_inverse(const IntMatrix& m) {
  Faddeev f = faddeev(m);
  const BigInt& c0 = f.coeffs[0];
  if (c0 != 1 && c0 != -1) return std::nullopt;
  const Eigen::Index n = m.rows();
  IntMatrix inv(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const BigInt v = -f.last[i * n + j] * c0;  // -M_n / c_0 with c_0 = +-1
      inv(i, j) = v.convert_to<std::int64_t>();
    }
  }
  return inv;
}

RatPoly to_rational(const IntPoly& p) {
  RatPoly r;
  r.reserve(p.size());
  for (const auto& c : p) r.emplace_back(c);
  return r;
}

std::vector<std::pair<RatPoly, int>> square_free_factors(const RatPoly& p_in) {
  const RatPoly p = monic(p_in);
  if (p.size() <= 1) return {};
  std::vector<std::pair<RatPoly, int>> out;
  const RatPoly dp = derivative(p);
  const RatPoly a0 = gcd(p, dp);
  RatPoly b = divmod(p, a0).first;
  RatPoly c = divmod(dp, a0).first;
  RatPoly d = sub(c, derivative(b));
  for (int i = 1; !is_one(b) && b.size() > 1; ++i) {
    const RatPoly a = d.empty() ? monic(b) : gcd(b, d);
    if (!is_one(a)) out.emplace_back(a, i);
    b = divmod(b, a).first;
    c = divmod(d, a).first;
    d = sub(c, derivative(b));
  }
  return out;
}

std::complex<long double> evaluate(const RatPoly& p, std::complex<long double> z) {
  std::complex<long double> acc = 0;
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * z + p[k].convert_to<long double>();
  return acc;
}

std::vector<std::complex<long double>> simple_roots(const RatPoly& p_in) {
  using C = std::complex<long double>;
  const RatPoly p = monic(p_in);
  const std::size_t n = p.empty() ? 0 : p.size() - 1;
  if (n == 0) return {};
  std::vector<long double> coef(n + 1);
  for (std::size_t i = 0; i <= n; ++i) coef[i] = p[i].convert_to<long double>();
  if (n == 1) return {C(-coef[0], 0)};

  auto eval = [&](C z, C& dz) {
    C v = coef[n];
    C dv = 0;
    for (std::size_t k = n; k-- > 0;) {
      dv = dv * z + v;
      v = v * z + coef[k];
    }
    dz = dv;
    return v;
  };

  // Cauchy bound for the initial circle; the angular offset avoids
  // symmetric starting configurations.
  long double bound = 0;
  for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, std::abs(coef[i]));
  const long double radius = std::min<long double>(1 + bound, 1e6L) * 0.5L + 0.1L;
  std::vector<C> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const long double ang = 2 * std::numbers::pi_v<long double> * k / n + 0.4L;
    z[k] = std::polar(radius, ang);
  }
  for (int iter = 0; iter < 1000; ++iter) {
    long double worst = 0;
    for (std::size_t k = 0; k < n; ++k) {
      C dz;
      const C v = eval(z[k], dz);
      if (v == C(0)) continue;
      const C ratio = v / dz;
      C rep = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) rep += C(1) / (z[k] - z[j]);
      }
      const C step = ratio / (C(1) - ratio * rep);
      z[k] -= step;
      worst = std::max(worst, std::abs(step) / (1 + std::abs(z[k])));
    }
    if (worst < 1e-18L) break;
  }
  for (auto& r : z) {
    for (int k = 0; k < 3; ++k) {
      C dz;
      const C v = eval(r, dz);
      if (dz == C(0)) break;
      r -= v / dz;
    }
  }
  return z;
}

}  // namespace aperiodic
