#include <doctest.h>

#include <atomic>
#include <cmath>
#include <random>

#include "aperiodic/core/error.hpp"
#include "aperiodic/core/format.hpp"
#include "aperiodic/core/parallel.hpp"
#include "aperiodic/core/pointset.hpp"
#include "aperiodic/core/region.hpp"
#include "aperiodic/core/spatial_index.hpp"

using namespace aperiodic;

TEST_CASE("format_double round-trips with 17 digits") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("sha256 of a known string") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("exit codes") {
  CHECK(exit_code(ErrorCode::CapacityExceeded) == 3);
  CHECK(exit_code(ErrorCode::Internal) == 4);
  CHECK(exit_code(ErrorCode::NotPrimitive) == 2);
}

TEST_CASE("parallel_for covers every index once for any thread count") {
  for (int threads : {1, 2, 3, 8}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  CHECK_THROWS(parallel_for(10, 2, [](std::size_t i) {
    if (i == 7) throw std::runtime_error("boom");
  }));
}

TEST_CASE("region box is half-open, ball is closed") {
  const Region r = Region::box(Box{{0.0, 0.0}, {2.0, 1.0}});
  CHECK(r.contains(std::vector<double>{0.0, 0.0}));
  CHECK_FALSE(r.contains(std::vector<double>{2.0, 0.5}));
  CHECK(r.volume() == doctest::Approx(2.0));
  const Region b = Region::ball({0.0, 0.0}, 1.0);
  CHECK(b.contains(std::vector<double>{1.0, 0.0}));
  CHECK(b.volume() == doctest::Approx(M_PI));
  CHECK(r.encloses(Region::ball({1.0, 0.5}, 0.5)));
  CHECK_FALSE(r.encloses(Region::ball({1.0, 0.5}, 0.6)));
}

TEST_CASE("rotated region containment matches its frame") {
  RealMatrix frame(2, 2);
  frame << 1.0, -1.0, 1.0, 1.0;  // columns (1,1) and (-1,1)
  const Region r = Region::box(frame, Box{{0.0, 0.0}, {1.0, 1.0}});
  CHECK(r.volume() == doctest::Approx(2.0));
  CHECK(r.contains(std::vector<double>{0.0, 1.0}));
  CHECK_FALSE(r.contains(std::vector<double>{1.0, 0.0}));
  const Box bb = r.bounds();
  CHECK(bb.lo[0] == doctest::Approx(-1.0));
  CHECK(bb.hi[1] == doctest::Approx(2.0));
}

TEST_CASE("grid index finds the same neighbours as a brute-force scan") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  PointSet ps(2);
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> p{u(rng), u(rng)};
    ps.push_back(p);
  }
  GridIndex index(ps, 0.7);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> q{u(rng), u(rng)};
    std::size_t fast = 0;
    index.for_each_within(q, 1.3, [&](std::size_t) { ++fast; });
    std::size_t slow = 0;
    double best = 1e300;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const double d = std::hypot(ps.coord(i, 0) - q[0], ps.coord(i, 1) - q[1]);
      if (d <= 1.3) ++slow;
      best = std::min(best, d);
    }
    CHECK(fast == slow);
    CHECK(index.nearest(q)->second == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("delone stats of the integer lattice") {
  PointSet ps(2);
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) {
      std::vector<double> p{double(i), double(j)};
      ps.push_back(p);
    }
  }
  ps.meta.extent = Region::box(Box{{0.0, 0.0}, {39.0, 39.0}});
  const DeloneStats s = delone_stats(ps, 2000);
  CHECK(s.r_min == doctest::Approx(1.0));
  CHECK(s.r_max <= std::sqrt(0.5) + 1e-12);
  CHECK(s.r_max > 0.5);
}

TEST_CASE("translation moves the extent") {
  PointSet ps(1);
  const double x = 1.0;
  ps.push_back({&x, 1});
  ps.meta.extent = Region::box(Box{{0.0}, {2.0}});
  const double off = 5.0;
  const PointSet t = ps.translated({&off, 1});
  CHECK(t.coord(0, 0) == 6.0);
  CHECK(t.meta.extent->bounds().lo[0] == 5.0);
}
