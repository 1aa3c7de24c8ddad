#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aperiodic/core/error.hpp"
#include "aperiodic/core/samples.hpp"
#include "aperiodic/cutproject/caps.hpp"
#include "aperiodic/diffraction/autocorrelation.hpp"
#include "aperiodic/diffraction/intensity.hpp"
#include "aperiodic/simd/kernels.hpp"
#include "aperiodic/substitution/substitution.hpp"

using namespace aperiodic;

namespace {

IntMatrix mat(int n, std::initializer_list<std::int64_t> v) {
  IntMatrix m(n, n);
  auto it = v.begin();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = *it++;
  }
  return m;
}

struct Caps {
  ProjectionScheme scheme;
  Window window;
  PointSet points;
};

Caps fibonacci_caps(double R) {
  auto s = build_scheme(mat(2, {2, 1, 1, 1}), 1);
  auto w = canonical_window(s);
  auto ps = generate_caps(s, w, R, default_shift(2));
  return {std::move(s), std::move(w), std::move(ps)};
}

Caps ammann_beenker(double R) {
  auto s = build_scheme(mat(4, {1, 1, 0, -1, 1, 1, 1, 0, 0, 1, 1, 1, -1, 0, 1, 1}), 2);
  auto w = canonical_window(s);
  auto ps = generate_caps(s, w, R, default_shift(4));
  return {std::move(s), std::move(w), std::move(ps)};
}

}  // namespace

TEST_CASE("lattice autocorrelation") {
  const PointSet z = lattice_point_set(Box{{-10.0}, {120.0}});
  const auto f = make_family(RealMatrix::Constant(1, 1, 2.0), Box{{0.0}, {1.0}});
  const auto ac = autocorrelation(z, f, 100.0, 2.5);
  CHECK(ac.bins.size() == 5);
  for (double v : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    const std::vector<double> vv{v};
    CHECK(std::abs(ac.weight_at(vv) - 1.0) <= 0.02 + 1e-12);
  }
  CHECK(ac.weight_at(std::vector<double>{0.0}) == 1.0);
  for (const auto& b : ac.bins) CHECK(ac.weight_at(std::vector<double>{-b.v[0]}) == b.weight);
}

TEST_CASE("single point and Fibonacci autocorrelation") {
  PointSet one = PointSet::from_columns({{0.25}});
  one.meta.extent = Region::box(Box{{0.0}, {1.0}});
  const auto a1 = autocorrelation(one, Region::box(Box{{0.0}, {1.0}}), 3.0);
  REQUIRE(a1.bins.size() == 1);
  CHECK(a1.bins[0].v[0] == 0.0);
  CHECK(a1.bins[0].weight == 1.0);

  const auto rule = SubstitutionRule1D::from_words("fibonacci", {"a", "b"}, {"a b", "a"});
  const PointSet ps = point_set_1d(rule, 18);
  const auto f = make_family(RealMatrix::Constant(1, 1, (1 + std::sqrt(5.0)) / 2), Box{{0.0}, {1.0}});
  const auto ac = autocorrelation(ps, f, 2000.0, 5.0);
  CHECK(ac.bins.size() < 20);
  CHECK(std::abs(ac.weight_at(std::vector<double>{0.0}) - static_cast<double>(ac.points) / 2000.0) < 1e-12);
  // Every bin is a realized difference of two points (direct enumeration).
  for (const auto& b : ac.bins) {
    bool found = false;
    for (std::size_t i = 0; i < 200 && !found; ++i) {
      for (std::size_t j = 0; j < 200 && !found; ++j) {
        found = std::abs(ps.coord(i, 0) - ps.coord(j, 0) - b.v[0]) < 1e-6;
      }
    }
    CHECK(found);
    CHECK(ac.weight_at(std::vector<double>{-b.v[0]}) == b.weight);
  }
}

TEST_CASE("lattice intensity") {
  const PointSet z = lattice_point_set(Box{{0.0}, {1000.0}});
  const Region r = Region::box(Box{{0.0}, {1000.0}});
  KGrid g;
  g.kx = {0.0, 1.0, 0.5, -0.5, 0.37};
  const auto m = intensity(z, r, g);
  CHECK(m.I[0] == 1000.0);
  CHECK(m.I0 == 1000.0);
  CHECK(std::abs(m.I[1] - 1000.0) < 1e-6);
  CHECK(m.I[2] <= 1.0 / 1000.0 + 1e-9);
  CHECK(m.I[2] == m.I[3]);
  CHECK_THROWS_AS(intensity(z, r, g, 100.0), Error);
}

TEST_CASE("intensity is independent of kernel set and thread count") {
  const auto ab = ammann_beenker(25.0);
  const Region ball = Region::ball({0.0, 0.0}, 24.0);
  const KGrid g = polar_grid(3.0, 12, 16);
  const auto base = intensity(ab.points, ball, g, kDefaultIntensityBudget, 1);
  const auto threaded = intensity(ab.points, ball, g, kDefaultIntensityBudget, 3);
  CHECK(base.I == threaded.I);
  simd::force_isa(simd::Isa::Scalar);
  const auto scalar = intensity(ab.points, ball, g);
  simd::force_isa(std::nullopt);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(base.I[i] >= 0.0);
    CHECK(std::abs(scalar.I[i] - base.I[i]) <= 1e-9 * base.I0);
  }
  CHECK(base.I[0] * base.vol == doctest::Approx(static_cast<double>(base.N * base.N)).epsilon(1e-12));
}

TEST_CASE("rotational symmetry checks") {
  const auto ab = ammann_beenker(60.0);
  const auto& s = ab.scheme;
  const double phase = std::atan2(s.E_par(0, 1), s.E_par(0, 0));
  const KGrid g = polar_grid(2.5, 40, 32, phase);
  const auto m = intensity(ab.points, Region::ball({0.0, 0.0}, 58.0), g);
  CHECK(symmetry_check(m, 1) == 0.0);
  CHECK(symmetry_check(m, 8) < 0.05);

  const PointSet z2 = lattice_point_set(Box{{-40.0, -40.0}, {40.0, 40.0}});
  const auto mz = intensity(z2, Region::ball({0.0, 0.0}, 38.0), polar_grid(1.5, 30, 32));
  CHECK(symmetry_check(mz, 4) < 0.02);
  CHECK(symmetry_check(mz, 8) > 0.2);
  CHECK_THROWS_AS(symmetry_check(mz, 5), Error);
}

TEST_CASE("Fibonacci cut-and-project Bragg peaks sit on the projected dual lattice") {
  const auto caps = fibonacci_caps(1000.0);
  const KGrid g = line_grid(0.0, 3.0, 6001);
  const auto m = intensity(caps.points, Region::box(Box{{-500.0}, {500.0}}), g);
  const auto peaks = strongest_peaks(m, 10, 0.0, 8.0 / 1000.0);
  auto oracle = bragg_oracle(caps.scheme, caps.window, 3.0 + g.resolution, 40);
  std::erase_if(oracle, [&](const Peak& p) { return p.k[0] < -g.resolution; });
  REQUIRE(peaks.size() == 10);
  for (const auto& p : peaks) {
    bool hit = false;
    for (std::size_t j = 0; j < 12 && !hit; ++j) hit = std::abs(oracle[j].k[0] - p.k[0]) <= g.resolution;
    CHECK(hit);
  }
  CHECK(oracle.front().intensity == doctest::Approx(1.0));
  CHECK_THROWS_AS(bragg_oracle(ammann_beenker(5.0).scheme, ammann_beenker(5.0).window, 1.0, 2), Error);
}

TEST_CASE("autocorrelation convergence") {
  const PointSet z = lattice_point_set(Box{{0.0}, {50000.0}});
  const auto f = make_family(RealMatrix::Constant(1, 1, 2.0), Box{{0.0}, {1.0}}, {0.0},
                             geometric_T_list(10240.0, 2.0, 10));
  const auto c = autocorr_convergence(z, f, std::vector<double>{1.0});
  CHECK(c.slope == doctest::Approx(-1.0).epsilon(0.05));
  CHECK_THROWS_AS(autocorr_convergence(z, f, std::vector<double>{0.5}), Error);

  const auto caps = fibonacci_caps(40000.0);
  const double phi2 = caps.scheme.A_par(0, 0);
  const auto fc = make_family(caps.scheme.A_par, Box{{-0.5}, {0.5}}, {0.0}, geometric_T_list(19000.0, std::sqrt(phi2), 12));
  double gap = 1e9;
  for (std::size_t i = 1; i < 100; ++i) gap = std::min(gap, std::abs(caps.points.coord(i, 0) - caps.points.coord(i - 1, 0)));
  const auto cc = autocorr_convergence(caps.points, fc, std::vector<double>{gap});
  CHECK(cc.slope <= -0.8);
}
