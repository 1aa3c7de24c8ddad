#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "aperiodic/simd/kernels.hpp"

using namespace aperiodic;
using namespace aperiodic::simd;

namespace {

std::vector<Isa> vector_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (isa_available(isa)) out.push_back(isa);
  }
  return out;
}

// Independent oracle: std::polar on the unreduced phase.
std::complex<double> oracle_sum(const std::vector<double>& x, const std::vector<double>& y, double kx, double ky) {
  std::complex<long double> acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    long double t = -(static_cast<long double>(kx) * x[i]);
    if (!y.empty()) t -= static_cast<long double>(ky) * y[i];
    acc += std::polar(1.0L, 2.0L * 3.141592653589793238462643383279502884L * t);
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

}  // namespace

TEST_CASE("isa names parse back") {
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) CHECK(parse_isa(isa_name(isa)) == isa);
  CHECK_FALSE(parse_isa("sse9").has_value());
  CHECK(isa_available(Isa::Scalar));
}

TEST_CASE("scalar phase sum matches an extended-precision oracle") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::vector<double> x(1001), y(1001);
  for (auto& v : x) v = u(rng);
  for (auto& v : y) v = u(rng);
  for (double kx : {0.0, 0.37, 1.618, -3.25}) {
    const PhaseSum s = phase_sum(Isa::Scalar, x, y, kx, 0.5);
    const auto o = oracle_sum(x, y, kx, 0.5);
    CHECK(std::abs(s.re - o.real()) < 1e-10);
    CHECK(std::abs(s.im - o.imag()) < 1e-10);
  }
}

TEST_CASE("vector phase sums agree with the scalar reference") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  for (Isa isa : vector_isas()) {
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1024u, 4099u}) {
      std::vector<double> x(n), y(n);
      for (auto& v : x) v = u(rng);
      for (auto& v : y) v = u(rng);
      for (double kx : {0.0, 0.125, 0.7071067811865476, 2.5}) {
        const PhaseSum a = phase_sum(Isa::Scalar, x, y, kx, -0.31);
        const PhaseSum b = phase_sum(isa, x, y, kx, -0.31);
        CHECK(std::abs(a.re - b.re) <= 1e-13 * (1.0 + n));
        CHECK(std::abs(a.im - b.im) <= 1e-13 * (1.0 + n));
        const PhaseSum a1 = phase_sum(Isa::Scalar, x, {}, kx, 0.0);
        const PhaseSum b1 = phase_sum(isa, x, {}, kx, 0.0);
        CHECK(std::abs(a1.re - b1.re) <= 1e-13 * (1.0 + n));
        CHECK(std::abs(a1.im - b1.im) <= 1e-13 * (1.0 + n));
      }
    }
  }
}

TEST_CASE("vector phase sums are exactly conjugate under k -> -k") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-300.0, 300.0);
  std::vector<double> x(777), y(777);
  for (auto& v : x) v = u(rng);
  for (auto& v : y) v = u(rng);
  for (Isa isa : vector_isas()) {
    const PhaseSum p = phase_sum(isa, x, y, 0.4142, 1.25);
    const PhaseSum m = phase_sum(isa, x, y, -0.4142, -1.25);
    CHECK(p.re == m.re);
    CHECK(p.im == -m.im);
  }
}

TEST_CASE("vector projections are bit-identical to scalar") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Isa isa : vector_isas()) {
    for (int rows : {1, 2, 3}) {
      for (int cols : {1, 2, 4, 5}) {
        const std::size_t n = 1003;
        std::vector<double> m(rows * cols);
        for (auto& v : m) v = u(rng);
        std::vector<std::vector<double>> in(cols, std::vector<double>(n));
        for (auto& c : in) {
          for (auto& v : c) v = std::round(u(rng) * 1000.0);
        }
        std::vector<const double*> in_ptr;
        for (auto& c : in) in_ptr.push_back(c.data());
        std::vector<std::vector<double>> o1(rows, std::vector<double>(n)), o2 = o1;
        std::vector<double*> p1, p2;
        for (auto& c : o1) p1.push_back(c.data());
        for (auto& c : o2) p2.push_back(c.data());
        project(Isa::Scalar, m, rows, cols, in_ptr, n, p1);
        project(isa, m, rows, cols, in_ptr, n, p2);
        CHECK(o1 == o2);
      }
    }
  }
}

TEST_CASE("forcing a kernel set changes the active one") {
  force_isa(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  force_isa(std::nullopt);
  CHECK(isa_available(active_isa()));
}
