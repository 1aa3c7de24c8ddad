#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "aperiodic/core/pointset.hpp"
#include "aperiodic/core/types.hpp"

namespace aperiodic {

/// Alphabet and images only; enough for incidence and primitivity.
struct SymbolicRule {
  std::vector<std::string> alphabet;
  /// images[j] is the word substituted for symbol j, as symbol indices.
  std::vector<std::vector<int>> images;

  int size() const { return static_cast<int>(alphabet.size()); }
  /// Index of `symbol`, or -1.
  int index_of(std::string_view symbol) const;
  /// Throws InvalidArgument on empty images or out-of-range symbols.
  void validate() const;
};

/// A one-dimensional substitution realized as a self-similar tiling.
struct SubstitutionRule1D : SymbolicRule {
  std::string name;
  std::vector<double> tile_lengths;
  double expansion_factor = 0.0;
  /// False for one-letter (periodic) rules.
  bool aperiodic = true;

  /// Natural lengths (Perron eigenvector of M^T, min-normalized).
  static SubstitutionRule1D make(std::string name, std::vector<std::string> alphabet,
                                 std::vector<std::vector<int>> images);
  /// Parses images written as space-separated symbols ("a b b b").
  static SubstitutionRule1D from_words(std::string name, std::vector<std::string> alphabet,
                                       const std::vector<std::string>& words);
  /// Checks the self-similarity equation to 1e-9 relative and expansion > 1.
  void validate() const;
};

struct ProductSubstitution {
  std::vector<SubstitutionRule1D> factors;
  int d() const { return static_cast<int>(factors.size()); }
};

struct Patch1D {
  std::vector<int> symbols;
  std::vector<double> left;
  double total_length = 0.0;
};

/// entries(i, j) = number of symbol i in the image of symbol j.
IntMatrix incidence_matrix(const SymbolicRule& rule);

/// Some power M^l with l <= (m-1)^2 + 1 is entrywise positive.
bool is_primitive(const IntMatrix& m);

struct TileLengths {
  std::vector<double> lengths;
  double expansion_factor = 0.0;
};
TileLengths solve_tile_lengths(const IntMatrix& m);

/// Perron right eigenvector of M normalized to sum 1: asymptotic letter
/// frequencies per tile.
std::vector<double> letter_frequencies(const IntMatrix& m);

/// Column `seed` of M^n, saturating at INT64_MAX.
std::vector<std::int64_t> letter_counts(const IntMatrix& m, int seed, int n);

/// n-th image of `seed` laid out from 0.
Patch1D iterate_1d(const SubstitutionRule1D& rule, int seed, int n, std::size_t budget = kDefaultPointBudget);

/// Left endpoints of the tiles of iterate_1d, labelled by symbol.
PointSet point_set_1d(const SubstitutionRule1D& rule, int n, int seed = 0, std::size_t budget = kDefaultPointBudget);

/// Cartesian product of factor point sets (same n for every factor).
PointSet product_point_set(const ProductSubstitution& prod, int n, std::size_t budget = kDefaultPointBudget,
                           int threads = 1);

/// Largest n whose image of `seed` stays within `budget` letters (and
/// product budget when `power` > 1 factors of the same rule are used).
int max_iterations(const SubstitutionRule1D& rule, int seed, std::size_t budget, int power = 1);

}  // namespace aperiodic
