#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "aperiodic/core/error.hpp"
#include "aperiodic/substitution/substitution.hpp"

using namespace aperiodic;

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

SubstitutionRule1D fibonacci() { return SubstitutionRule1D::from_words("fibonacci", {"a", "b"}, {"a b", "a"}); }
SubstitutionRule1D nonpisot() { return SubstitutionRule1D::from_words("nonpisot13", {"a", "b"}, {"a b b b", "a"}); }
SubstitutionRule1D thue_morse() { return SubstitutionRule1D::from_words("thue-morse", {"a", "b"}, {"a b", "b a"}); }

IntMatrix mat2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  IntMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// Integer matrix power column by repeated multiplication.
std::vector<std::int64_t> power_column(const IntMatrix& m, int seed, int n) {
  IntMatrix p = IntMatrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < n; ++i) p = p * m;
  return {p.col(seed).data(), p.col(seed).data() + m.rows()};
}

}  // namespace

TEST_CASE("incidence matrices") {
  CHECK(incidence_matrix(fibonacci()) == mat2(1, 1, 1, 0));
  CHECK(incidence_matrix(nonpisot()) == mat2(1, 1, 3, 0));
  SymbolicRule id{{"a"}, {{0}}};
  CHECK(incidence_matrix(id) == IntMatrix::Constant(1, 1, 1));
}

TEST_CASE("primitivity") {
  CHECK(is_primitive(mat2(1, 1, 1, 0)));
  CHECK_FALSE(is_primitive(mat2(1, 0, 0, 1)));
  CHECK_FALSE(is_primitive(mat2(0, 1, 1, 0)));
  // Wielandt matrix needs exactly (m-1)^2 + 1 = 5 steps.
  IntMatrix w = IntMatrix::Zero(3, 3);
  w(0, 1) = w(1, 2) = w(2, 0) = w(2, 1) = 1;
  CHECK(is_primitive(w));
}

TEST_CASE("tile lengths") {
  const TileLengths f = solve_tile_lengths(mat2(1, 1, 1, 0));
  CHECK(f.expansion_factor == doctest::Approx(kPhi).epsilon(1e-14));
  CHECK(f.lengths[0] == doctest::Approx(kPhi).epsilon(1e-14));
  CHECK(f.lengths[1] == 1.0);
  const double xi = (1.0 + std::sqrt(13.0)) / 2.0;
  const TileLengths n = solve_tile_lengths(mat2(1, 1, 3, 0));
  CHECK(n.expansion_factor == doctest::Approx(xi).epsilon(1e-14));
  CHECK(n.lengths[0] == doctest::Approx(xi).epsilon(1e-14));
  const TileLengths one = solve_tile_lengths(IntMatrix::Constant(1, 1, 2));
  CHECK(one.expansion_factor == doctest::Approx(2.0));
  CHECK(one.lengths[0] == 1.0);
  CHECK_THROWS_AS(solve_tile_lengths(mat2(0, 1, 1, 0)), Error);
}

TEST_CASE("iterate fibonacci by hand") {
  const auto rule = fibonacci();
  const Patch1D p = iterate_1d(rule, 0, 3);
  CHECK(p.symbols == std::vector<int>{0, 1, 0, 0, 1});
  const std::vector<double> want{0, kPhi, kPhi + 1, 2 * kPhi + 1, 3 * kPhi + 1};
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(p.left[i] == doctest::Approx(want[i]).epsilon(1e-14));
  CHECK(p.total_length == doctest::Approx(3 * kPhi + 2));
  CHECK(iterate_1d(rule, 1, 0).symbols == std::vector<int>{1});
  const Patch1D big = iterate_1d(rule, 0, 10);
  CHECK(std::count(big.symbols.begin(), big.symbols.end(), 0) == 89);
  CHECK(std::count(big.symbols.begin(), big.symbols.end(), 1) == 55);
}

TEST_CASE("letter counts equal integer matrix powers") {
  for (const auto& rule : {fibonacci(), nonpisot(), thue_morse()}) {
    const IntMatrix m = incidence_matrix(rule);
    for (int seed = 0; seed < 2; ++seed) {
      for (int n = 0; n <= 12; ++n) {
        const Patch1D p = iterate_1d(rule, seed, n);
        const auto want = power_column(m, seed, n);
        for (int s = 0; s < 2; ++s) CHECK(std::count(p.symbols.begin(), p.symbols.end(), s) == want[s]);
        CHECK(letter_counts(m, seed, n) == want);
      }
    }
  }
}

TEST_CASE("budget is enforced before building") {
  CHECK_THROWS_AS(iterate_1d(fibonacci(), 0, 30, 1000), Error);
  try {
    iterate_1d(fibonacci(), 0, 30, 1000);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CapacityExceeded);
  }
  CHECK(max_iterations(fibonacci(), 0, 1000) == 14);  // F(16) = 987 letters
}

TEST_CASE("point sets") {
  const PointSet ps = point_set_1d(nonpisot(), 2);
  CHECK(ps.size() == 7);
  std::vector<int> labels;
  for (std::size_t i = 0; i < ps.size(); ++i) labels.push_back(ps.labels(i)[0]);
  CHECK(labels == std::vector<int>{0, 1, 1, 1, 0, 0, 0});
  CHECK(point_set_1d(fibonacci(), 0).size() == 1);
  CHECK(ps.meta.extent->contains(std::vector<double>{0.0}));
}

TEST_CASE("self-similarity: xi * points(n) is contained in points(n+1)") {
  for (const auto& rule : {fibonacci(), nonpisot()}) {
    const PointSet a = point_set_1d(rule, 9);
    const PointSet b = point_set_1d(rule, 10);
    std::vector<double> bx(b.axis(0).begin(), b.axis(0).end());
    for (double x : a.axis(0)) {
      const double y = rule.expansion_factor * x;
      auto it = std::lower_bound(bx.begin(), bx.end(), y - 1e-6);
      REQUIRE(it != bx.end());
      CHECK(std::abs(*it - y) <= 1e-6);
    }
  }
}

TEST_CASE("letter frequencies converge to the Perron vector") {
  for (const auto& rule : {fibonacci(), nonpisot(), thue_morse()}) {
    const auto f = letter_frequencies(incidence_matrix(rule));
    const Patch1D p = iterate_1d(rule, 0, 12);
    for (int s = 0; s < 2; ++s) {
      const double emp = double(std::count(p.symbols.begin(), p.symbols.end(), s)) / p.symbols.size();
      CHECK(std::abs(emp - f[s]) / f[s] < 0.01);
    }
  }
}

TEST_CASE("product point sets") {
  ProductSubstitution prod{{fibonacci(), fibonacci()}};
  const PointSet p = product_point_set(prod, 2);
  CHECK(p.size() == 9);
  CHECK(p.label_arity() == 2);
  CHECK(p.meta.expansion(0, 0) == doctest::Approx(kPhi));
  CHECK(product_point_set(prod, 0).size() == 1);
  ProductSubstitution np{{nonpisot(), nonpisot()}};
  CHECK(product_point_set(np, 2).size() == 49);
  // Thread count does not change the result.
  const PointSet a = product_point_set(np, 4, kDefaultPointBudget, 1);
  const PointSet b = product_point_set(np, 4, kDefaultPointBudget, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.coord(i, 0) == b.coord(i, 0));
    CHECK(a.coord(i, 1) == b.coord(i, 1));
  }
}

TEST_CASE("one-letter rules are flagged periodic") {
  const auto r = SubstitutionRule1D::from_words("double", {"a"}, {"a a"});
  CHECK_FALSE(r.aperiodic);
  CHECK(r.expansion_factor == doctest::Approx(2.0));
  CHECK_THROWS(SubstitutionRule1D::from_words("bad", {"a", "b"}, {"a c", "a"}));
  CHECK_THROWS(SubstitutionRule1D::from_words("identity", {"a"}, {"a"}));
}
