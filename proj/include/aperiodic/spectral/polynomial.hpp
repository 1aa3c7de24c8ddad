#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "aperiodic/core/types.hpp"

namespace aperiodic {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Polynomials are coefficient vectors, lowest degree first.
using IntPoly = std::vector<BigInt>;
using RatPoly = std::vector<Rational>;

/// det(xI - M) over the integers (Faddeev-LeVerrier, all divisions exact).
IntPoly char_poly(const IntMatrix& m);

/// Exact determinant.
BigInt determinant(const IntMatrix& m);

/// Exact integer inverse when det(m) = +-1.
std::optional<IntMatrix> unimodular_inverse(const IntMatrix& m);

/// Square-free factorization over Q (Yun). Returns monic pairwise coprime
/// factors with their multiplicities; the product of f_i^k_i is monic(p).
std::vector<std::pair<RatPoly, int>> square_free_factors(const RatPoly& p);

/// All complex roots of a polynomial with simple roots (Aberth-Ehrlich,
/// then Newton polishing), in extended precision.
std::vector<std::complex<long double>> simple_roots(const RatPoly& p);

RatPoly to_rational(const IntPoly& p);
std::complex<long double> evaluate(const RatPoly& p, std::complex<long double> z);

}  // namespace aperiodic
