#include <doctest.h>

#include <cmath>
#include <random>

#include "aperiodic/core/error.hpp"
#include "aperiodic/core/samples.hpp"
#include "aperiodic/deviation/series.hpp"
#include "aperiodic/spectral/res.hpp"
#include "aperiodic/substitution/substitution.hpp"

using namespace aperiodic;

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

PointSet points_1d(std::vector<double> xs, double hi) {
  PointSet ps = PointSet::from_columns({std::move(xs)});
  ps.meta.extent = Region::box(Box{{0.0}, {hi}});
  return ps;
}

RealMatrix scalar(double v) { return RealMatrix::Constant(1, 1, v); }

}  // namespace

TEST_CASE("patch counting on a hand-enumerated Fibonacci patch") {
  const PointSet ps = points_1d({0.0, kPhi, kPhi + 1, 2 * kPhi + 1, 3 * kPhi + 1}, 3 * kPhi + 2);
  const Region region = Region::box(Box{{0.0}, {3 * kPhi + 1.5}});
  CHECK(count_patches(ps, PatchObservable::make({{0.0}, {kPhi}}), region) == 3);
  CHECK(count_patches(ps, PatchObservable::single_point(1), region) == 5);
  CHECK(count_patches(ps, PatchObservable::make({{0.0}, {0.5}}), region) == 0);
  // Anchor normalization: the same patch given from its far end.
  CHECK(count_patches(ps, PatchObservable::make({{kPhi}, {0.0}}), region) == 3);
  CHECK_THROWS_AS(count_patches(ps, PatchObservable::single_point(1), Region::box(Box{{0.0}, {10.0}})), Error);
}

TEST_CASE("labels restrict matches and -1 is a wildcard") {
  const auto rule = SubstitutionRule1D::from_words("fibonacci", {"a", "b"}, {"a b", "a"});
  const PointSet ps = point_set_1d(rule, 12);
  const Region all = *ps.meta.extent;
  const auto a = count_patches(ps, PatchObservable::single_point(1, {0}), all);
  const auto b = count_patches(ps, PatchObservable::single_point(1, {1}), all);
  const auto counts = letter_counts(incidence_matrix(rule), 0, 12);
  CHECK(a == counts[0]);
  CHECK(b == counts[1]);
  CHECK(count_patches(ps, PatchObservable::single_point(1, {-1}), all) == a + b);
}

TEST_CASE("family volume scales as T^d and is nested") {
  RealMatrix a(2, 2);
  a << 3.0, 0.0, 0.0, 2.0;
  const auto f = make_family(a, Box{{-0.5, -0.25}, {0.5, 1.0}}, {0.3, -0.2});
  CHECK(f.exponents[0] == doctest::Approx(2 * std::log(3.0) / std::log(6.0)));
  CHECK(f.exponents[0] + f.exponents[1] == doctest::Approx(2.0).epsilon(1e-12));
  for (double T : {1.5, 10.0, 1234.5}) {
    CHECK(std::abs(f.region(T).volume() / (f.volume(T)) - 1.0) < 1e-9);
    CHECK(std::abs(f.volume(T) / (T * T) / f.base_volume() - 1.0) < 1e-12);
    CHECK(f.region(T * 1.1).encloses(f.region(T), 0.0));
  }
  RealMatrix shear(2, 2);
  shear << 3.0, 1.0, 1.0, 2.0;
  const auto g = make_family(shear, Box{{-1.0, -1.0}, {1.0, 1.0}});
  CHECK(std::abs(g.region(50.0).volume() / g.volume(50.0) - 1.0) < 1e-9);
  RealMatrix rot(2, 2);
  rot << 0.0, -2.0, 2.0, 0.0;
  CHECK_THROWS_AS(make_family(rot, Box{{0.0, 0.0}, {1.0, 1.0}}), Error);
  const auto dil = make_family(RealMatrix::Identity(2, 2) * kPhi, Box{{0.0, 0.0}, {1.0, 1.0}});
  CHECK(dil.exponents == std::vector<double>{1.0, 1.0});
  CHECK(dil.frame.isIdentity(0.0));
  CHECK_THROWS_AS(make_family(a, Box{{0.1, 0.0}, {1.0, 1.0}}), Error);
}

TEST_CASE("anchor counter agrees with a direct scan") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  std::vector<double> xs, ys;
  for (int i = 0; i < 20000; ++i) {
    xs.push_back(u(rng));
    ys.push_back(u(rng));
  }
  // Points exactly on box faces exercise the boundary band.
  for (int i = 0; i < 50; ++i) {
    xs.push_back(5.0);
    ys.push_back(i * 0.1);
    xs.push_back(i * 0.1 - 2.5);
    ys.push_back(-2.5);
  }
  PointSet ps = PointSet::from_columns({xs, ys});
  ps.meta.extent = Region::box(Box{{-40.0, -40.0}, {40.0, 40.0}});
  RealMatrix shear(2, 2);
  shear << 3.0, 1.0, 1.0, 2.0;
  RealMatrix dil = RealMatrix::Identity(2, 2) * 2.0;
  for (const RealMatrix& a : {dil, shear}) {
    auto f = make_family(a, Box{{-0.5, -0.5}, {1.0, 1.0}}, {0.25, -0.125});
    const auto single = PatchObservable::single_point(2);
    const AnchorCounter counter(ps, single, f);
    for (double T : {1.0, 2.0, 2.5, 5.0, 7.25, 10.0, 13.3, 20.0}) {
      const Region r = f.region(T);
      if (!ps.meta.extent->encloses(r)) continue;
      CHECK(counter.count(T) == count_patches(ps, single, r));
    }
  }
}

TEST_CASE("deviation is translation invariant") {
  const auto rule = SubstitutionRule1D::from_words("nonpisot13", {"a", "b"}, {"a b b b", "a"});
  const PointSet ps = point_set_1d(rule, 9);
  const double lambda = solve_tile_lengths(incidence_matrix(rule)).expansion_factor;
  const double L = ps.meta.extent->frame_box().hi[0];
  auto f = make_family(scalar(lambda), Box{{0.0}, {1.0}}, {0.0}, geometric_T_list(L * 0.9, std::sqrt(lambda), 10));
  const auto obs = PatchObservable::single_point(1, {0});
  const auto s1 = deviation_series(ps, obs, f, 0.3);
  const std::vector<double> off{0.5};
  const PointSet moved = ps.translated(off);
  f.origin = {0.5};
  const auto s2 = deviation_series(moved, obs, f, 0.3);
  for (std::size_t k = 0; k < s1.samples.size(); ++k) {
    CHECK(s1.samples[k].count == s2.samples[k].count);
    CHECK(s1.samples[k].deviation == s2.samples[k].deviation);
  }
}

TEST_CASE("frequency estimates") {
  const auto rule = SubstitutionRule1D::from_words("fibonacci", {"a", "b"}, {"a b", "a"});
  const PointSet ps = point_set_1d(rule, 20);
  const double L = ps.meta.extent->frame_box().hi[0];
  const auto f = make_family(scalar(kPhi), Box{{0.0}, {1.0}}, {0.0}, geometric_T_list(L, std::sqrt(kPhi), 12));
  const auto freqs = letter_frequencies(incidence_matrix(rule));
  const auto len = solve_tile_lengths(incidence_matrix(rule)).lengths;
  const double density = 1.0 / (freqs[0] * len[0] + freqs[1] * len[1]);
  double refine = 0.0;
  const double fa = estimate_frequency(ps, PatchObservable::single_point(1, {0}), f, &refine);
  CHECK(std::abs(fa / (freqs[0] * density) - 1.0) < 0.01);
  CHECK(std::isfinite(refine));
  const double fp = estimate_frequency(ps, PatchObservable::single_point(1), f);
  CHECK(std::abs(fp / (static_cast<double>(ps.size()) / L) - 1.0) < 0.005);
  CHECK(estimate_frequency(ps, PatchObservable::make({{0.0}, {0.5}}), f) == 0.0);
}

TEST_CASE("synthetic fits") {
  std::vector<double> vol, d1, d2, d3;
  for (int i = 0; i < 20; ++i) {
    const double v = std::pow(1.7, i + 4);
    vol.push_back(v);
    d1.push_back(std::pow(v, 0.4));
    d2.push_back(std::pow(v, 0.5) * std::log(v));
    d3.push_back(3.0);
  }
  const auto r1 = fit_exponent(vol, d1, false);
  CHECK(std::abs(r1.slope - 0.4) < 1e-9);
  CHECK(r1.r2 == doctest::Approx(1.0));
  const auto r2 = fit_exponent(vol, d2, true);
  CHECK(std::abs(r2.slope - 0.5) < 0.02);
  CHECK(std::abs(*r2.log_power - 1.0) < 0.05);
  CHECK(std::abs(fit_exponent(vol, d3, false).slope) < 1e-9);
  CHECK_THROWS_AS(fit_exponent({1, 2, 3}, {1, 1, 1}, false), Error);
  CHECK_THROWS_AS(fit_exponent(vol, std::vector<double>(20, 0.0), false), Error);
}

TEST_CASE("slopes of classic one-dimensional systems") {
  struct Case {
    const char* name;
    std::vector<std::string> words;
    double lo, hi;
  };
  for (const Case& c : {Case{"fibonacci", {"a b", "a"}, -1.0, 0.15}, Case{"thue-morse", {"a b", "b a"}, -1.0, 0.2},
                        Case{"nonpisot13", {"a b b b", "a"}, 0.217, 0.417}}) {
    CAPTURE(c.name);
    const auto rule = SubstitutionRule1D::from_words(c.name, {"a", "b"}, c.words);
    const auto m = incidence_matrix(rule);
    const int n = max_iterations(rule, 0, 3'000'000);
    const PointSet ps = point_set_1d(rule, n);
    const auto tl = solve_tile_lengths(m);
    const auto freqs = letter_frequencies(m);
    double mean = 0.0;
    for (std::size_t i = 0; i < freqs.size(); ++i) mean += freqs[i] * tl.lengths[i];
    const double L = ps.meta.extent->frame_box().hi[0];
    const auto f = make_family(scalar(tl.expansion_factor), Box{{0.0}, {1.0}}, {0.0},
                               geometric_T_list(L * 0.999, std::sqrt(tl.expansion_factor), 24));
    const auto s = deviation_series(ps, PatchObservable::single_point(1, {0}), f, freqs[0] / mean);
    CHECK(s.fitted_slope() > c.lo);
    CHECK(s.fitted_slope() < c.hi);
  }
}

TEST_CASE("lattice and Poisson controls") {
  const PointSet z = lattice_point_set(Box{{0.0}, {5000.0}});
  const auto f = make_family(scalar(2.0), Box{{0.0}, {1.0}}, {0.0}, geometric_T_list(4000.0, std::sqrt(2.0), 16));
  const auto counter = AnchorCounter(z, PatchObservable::single_point(1), f);
  for (double T : f.T_list) CHECK(std::abs(counter.count(T) - T) <= 1.0);
  const PointSet p = poisson_point_set(Box{{0.0}, {5000.0}}, 1.0, 3);
  CHECK(std::abs(static_cast<double>(p.size()) - 5000.0) < 5 * std::sqrt(5000.0));
  CHECK(p.meta.provenance == "poisson");
}

TEST_CASE("predicted slopes from a report") {
  const ResReport penrose = classify_res(spectrum_from_values(std::vector<Complex>{kPhi * kPhi, kPhi}),
                                         ExpansionSpec::pure_dilation(2, kPhi));
  const auto p = predicted_slopes(penrose);
  REQUIRE(p.size() == 2);
  CHECK(p[0].cls == ResClass::Equality);
  CHECK(p[0].slope == doctest::Approx(0.5));
  CHECK(p[0].log_power >= 1);
  CHECK(p[1].boundary);
  CHECK(p[1].slope == doctest::Approx(0.5));
  const ResReport fib = classify_res(spectrum_from_values(std::vector<Complex>{kPhi, -1.0 / kPhi}),
                                     ExpansionSpec::from_moduli({kPhi}));
  const auto q = predicted_slopes(fib);
  REQUIRE(q.size() == 1);
  CHECK(q[0].slope == doctest::Approx(0.0));
}
