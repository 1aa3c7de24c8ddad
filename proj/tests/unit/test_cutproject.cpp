#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "aperiodic/core/error.hpp"
#include "aperiodic/cutproject/caps.hpp"
#include "aperiodic/cutproject/scheme.hpp"
#include "aperiodic/cutproject/window.hpp"

using namespace aperiodic;

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;
const double kSilver = 1.0 + std::sqrt(2.0);

IntMatrix fib_matrix() {
  IntMatrix m(2, 2);
  m << 2, 1, 1, 1;
  return m;
}

IntMatrix ab_matrix() {
  IntMatrix m(4, 4);
  m << 1, 1, 0, -1, 1, 1, 1, 0, 0, 1, 1, 1, -1, 0, 1, 1;
  return m;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

// Brute force: scan a generous integer cube and project with the
// orthogonal projector built independently from eigenvectors.
std::set<std::vector<std::int64_t>> brute_force(const ProjectionScheme& s, const Window& w, double R,
                                                const std::vector<double>& x, int half) {
  std::set<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> g(s.n, -half);
  while (true) {
    RealVector v(s.n);
    for (int i = 0; i < s.n; ++i) v(i) = g[i] + x[i];
    const RealVector par = s.E_par.transpose() * v;
    const RealVector perp = s.E_perp.transpose() * v;
    if (par.norm() <= R && w.contains({perp.data(), static_cast<std::size_t>(perp.size())})) out.insert(g);
    int i = s.n - 1;
    while (i >= 0 && g[i] == half) g[i--] = -half;
    if (i < 0) break;
    ++g[i];
  }
  return out;
}

std::set<std::vector<std::int64_t>> lattice_set(const PointSet& ps) {
  std::set<std::vector<std::int64_t>> out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto l = ps.lattice(i);
    out.insert(std::vector<std::int64_t>(l.begin(), l.end()));
  }
  return out;
}

}  // namespace

TEST_CASE("fibonacci scheme splitting") {
  const ProjectionScheme s = build_scheme(fib_matrix(), 1);
  CHECK(s.A_par(0, 0) == doctest::Approx(kPhi * kPhi).epsilon(1e-13));
  CHECK(s.A_perp(0, 0) == doctest::Approx(1.0 / (kPhi * kPhi)).epsilon(1e-12));
  // Expanding direction (1, 1/phi), normalized.
  const double norm = std::sqrt(1.0 + 1.0 / (kPhi * kPhi));
  CHECK(std::abs(s.E_par(0, 0)) == doctest::Approx(1.0 / norm).epsilon(1e-13));
  CHECK(s.E_par(1, 0) / s.E_par(0, 0) == doctest::Approx(1.0 / kPhi).epsilon(1e-13));
  CHECK(s.irrationality_checked_radius == 50);
  CHECK((s.A_inv * s.A_int).isIdentity());
}

TEST_CASE("AB scheme: A_par is a pure dilation by 1 + sqrt 2") {
  const ProjectionScheme s = build_scheme(ab_matrix(), 2);
  CHECK((s.A_par - kSilver * RealMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((s.A_perp - (1.0 - std::sqrt(2.0)) * RealMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  const RealMatrix A = ab_matrix().cast<double>();
  CHECK((A * s.E_par - s.E_par * s.A_par).norm() < 1e-9);
  CHECK((A * s.E_perp - s.E_perp * s.A_perp).norm() < 1e-9);
  CHECK(s.eigvec_condition < 10.0);
}

TEST_CASE("scheme errors") {
  CHECK(code_of([] { build_scheme(IntMatrix::Identity(2, 2), 1); }) == ErrorCode::NotHyperbolicSelection);
  IntMatrix flip(2, 2);
  flip << 1, 1, 1, 0;
  CHECK(code_of([&] { build_scheme(flip, 1); }) == ErrorCode::NotUnimodular);
  // Companion matrix of (x^2 - 3x + 1)^2: a 2x2 Jordan block on the
  // expanding side.
  IntMatrix comp = IntMatrix::Zero(4, 4);
  comp(1, 0) = comp(2, 1) = comp(3, 2) = 1;
  comp(0, 3) = -1;
  comp(1, 3) = 6;
  comp(2, 3) = -11;
  comp(3, 3) = 6;
  CHECK(code_of([&] { build_scheme(comp, 2); }) == ErrorCode::NonDiagonalizableParallel);
  // e3 lies in the internal space.
  IntMatrix split = IntMatrix::Zero(3, 3);
  split << 2, 1, 0, 1, 1, 0, 0, 0, 1;
  CHECK(code_of([&] { build_scheme(split, 1); }) == ErrorCode::IrrationalityFailed);
  CHECK(code_of([] { build_scheme(ab_matrix(), 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("nearest lattice distance finds rational directions") {
  RealMatrix line(2, 1);
  line << 3.0 / 5.0, 4.0 / 5.0;
  CHECK(nearest_lattice_distance(line, 10) < 1e-12);
  line << 1.0 / std::sqrt(1.0 + kPhi * kPhi), kPhi / std::sqrt(1.0 + kPhi * kPhi);
  CHECK(nearest_lattice_distance(line, 50) > 1e-4);
}

TEST_CASE("canonical windows") {
  const ProjectionScheme f = build_scheme(fib_matrix(), 1);
  const Window wf = canonical_window(f);
  const double a = std::abs(f.perp(std::vector<double>{1.0, 0.0})(0));
  const double b = std::abs(f.perp(std::vector<double>{0.0, 1.0})(0));
  CHECK(wf.measure() == doctest::Approx(a + b).epsilon(1e-14));

  const ProjectionScheme s = build_scheme(ab_matrix(), 2);
  const Window w = canonical_window(s);
  REQUIRE(w.vertices().size() == 8);
  std::vector<double> edges;
  for (std::size_t i = 0; i < 8; ++i) {
    const auto& p = w.vertices()[i];
    const auto& q = w.vertices()[(i + 1) % 8];
    edges.push_back(std::hypot(p[0] - q[0], p[1] - q[1]));
  }
  for (double e : edges) CHECK(std::abs(e - edges[0]) < 1e-9);
  CHECK(w.measure() == doctest::Approx(2.0 * kSilver * edges[0] * edges[0]).epsilon(1e-12));

  ProjectionScheme codim0 = f;
  codim0.d = 2;
  codim0.E_perp = RealMatrix(2, 0);
  codim0.P_perp = RealMatrix(0, 2);
  CHECK_THROWS(canonical_window(codim0));
}

TEST_CASE("window geometry") {
  const Window sq = Window::polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}});  // clockwise input
  CHECK(sq.measure() == doctest::Approx(1.0));
  CHECK(sq.signed_distance(std::vector<double>{0.5, 0.5}) == doctest::Approx(-0.5));
  CHECK(sq.signed_distance(std::vector<double>{2.0, 0.5}) == doctest::Approx(1.0));
  const double off[2] = {0.5, 0.5};
  CHECK(sq.intersect(sq.translated(off)).measure() == doctest::Approx(0.25));
  const Window iv = Window::intervals({{0, 1}, {2, 3}});
  CHECK(iv.signed_distance(std::vector<double>{1.5}) == doctest::Approx(0.5));
  CHECK(iv.contains(std::vector<double>{2.0}));
  RealMatrix m(1, 1);
  m << -2.0;
  CHECK(iv.transformed(m).bounds().lo[0] == doctest::Approx(-6.0));
  CHECK_THROWS(Window::polygon({{0, 0}, {2, 0}, {1, 0.1}, {1, 2}, {0, 2}}));
}

TEST_CASE("generate_caps matches a brute-force scan") {
  const ProjectionScheme f = build_scheme(fib_matrix(), 1);
  const auto x = default_shift(2);
  const PointSet pf = generate_caps(f, canonical_window(f), 30.0, x);
  CHECK(lattice_set(pf) == brute_force(f, canonical_window(f), 30.0, x, 40));
  CHECK(pf.size() > 0);

  const ProjectionScheme s = build_scheme(ab_matrix(), 2);
  const auto x4 = default_shift(4);
  const PointSet ps = generate_caps(s, canonical_window(s), 6.0, x4);
  CHECK(lattice_set(ps) == brute_force(s, canonical_window(s), 6.0, x4, 8));
  CHECK(ps.size() > 50);
}

TEST_CASE("generation does not depend on the thread count") {
  const ProjectionScheme s = build_scheme(ab_matrix(), 2);
  const auto x = default_shift(4);
  CapsOptions one, many;
  many.threads = 4;
  const PointSet a = generate_caps(s, canonical_window(s), 15.0, x, one);
  const PointSet b = generate_caps(s, canonical_window(s), 15.0, x, many);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.coord(i, 0) == b.coord(i, 0));
    CHECK(a.coord(i, 1) == b.coord(i, 1));
  }
}

TEST_CASE("fibonacci CAPS has two gap lengths in ratio phi") {
  const ProjectionScheme f = build_scheme(fib_matrix(), 1);
  const PointSet ps = generate_caps(f, canonical_window(f), 40.0, default_shift(2));
  std::vector<double> xs(ps.axis(0).begin(), ps.axis(0).end());
  std::sort(xs.begin(), xs.end());
  std::vector<double> gaps;
  for (std::size_t i = 1; i < xs.size(); ++i) gaps.push_back(xs[i] - xs[i - 1]);
  std::sort(gaps.begin(), gaps.end());
  std::vector<double> distinct{gaps[0]};
  for (double g : gaps) {
    if (g - distinct.back() > 1e-6) distinct.push_back(g);
  }
  REQUIRE(distinct.size() == 2);
  CHECK(distinct[1] / distinct[0] == doctest::Approx(kPhi).epsilon(1e-9));
  CHECK(generate_caps(f, canonical_window(f), 0.0, default_shift(2)).size() <= 1);
}

TEST_CASE("singular shifts") {
  const ProjectionScheme s = build_scheme(ab_matrix(), 2);
  const Window w = canonical_window(s);
  const std::vector<double> zero(4, 0.0);
  CHECK(is_singular(zero, s, w, 10.0));
  CHECK_FALSE(is_singular(default_shift(4), s, w, 10.0));
  CHECK(code_of([&] { generate_caps(s, w, 10.0, zero); }) == ErrorCode::SingularShift);
  CapsOptions lenient;
  lenient.tolerate_singular = true;
  const PointSet ps = generate_caps(s, w, 10.0, zero, lenient);
  CHECK(ps.meta.boundary_ambiguous > 0);
}

TEST_CASE("renormalization identity and its negative control") {
  const ProjectionScheme f = build_scheme(fib_matrix(), 1);
  const RenormalizationReport rf = verify_renormalization(f, canonical_window(f), 50.0, default_shift(2));
  CHECK(rf.pass);
  CHECK(rf.mismatch < 1e-9);
  CHECK(rf.left_points == rf.right_points);

  const ProjectionScheme s = build_scheme(ab_matrix(), 2);
  const Window w = canonical_window(s);
  const RenormalizationReport ra = verify_renormalization(s, w, 15.0, default_shift(4));
  CHECK(ra.pass);
  CHECK(ra.left_points > 100);
  const RenormalizationReport bad = verify_renormalization(s, w, 15.0, default_shift(4), &w);
  CHECK_FALSE(bad.pass);
  CHECK(bad.mismatch > 1e-3);
}

TEST_CASE("CAPS density stabilizes and matches the window volume") {
  const ProjectionScheme s = build_scheme(ab_matrix(), 2);
  const Window w = canonical_window(s);
  const double exact = caps_density(s, w);
  double prev = 0.0;
  for (double R : {40.0, 80.0}) {
    const PointSet ps = generate_caps(s, w, R, default_shift(4));
    const double dens = ps.size() / (M_PI * R * R);
    if (prev > 0.0) CHECK(std::abs(dens - prev) / prev < 0.02);
    CHECK(std::abs(dens - exact) / exact < 0.02);
    prev = dens;
  }
  const DeloneStats st = delone_stats(generate_caps(s, w, 30.0, default_shift(4)), 2000, 1, 3.0);
  CHECK(st.r_min > 0.5);
  CHECK(st.r_max < 2.0);
}

TEST_CASE("exact patch frequency matches empirical counts") {
  const ProjectionScheme f = build_scheme(fib_matrix(), 1);
  const Window w = canonical_window(f);
  const PointSet ps = generate_caps(f, w, 4000.0, default_shift(2));
  // Patch: anchor plus the lattice neighbour (1, 0).
  std::set<std::vector<std::int64_t>> all = lattice_set(ps);
  std::size_t count = 0;
  std::size_t inner = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (std::abs(ps.coord(i, 0)) > 3990.0) continue;
    ++inner;
    auto l = ps.lattice(i);
    if (all.count({l[0] + 1, l[1]})) ++count;
  }
  const double freq = caps_patch_frequency(f, w, {{1, 0}});
  const double emp = count / 7980.0;
  CHECK(std::abs(emp - freq) / freq < 0.01);
  CHECK(std::abs(inner / 7980.0 - caps_density(f, w)) / caps_density(f, w) < 0.01);
}
