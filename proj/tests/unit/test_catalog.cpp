#include <doctest.h>

#include <cmath>

#include "aperiodic/catalog/catalog.hpp"
#include "aperiodic/core/error.hpp"
#include "aperiodic/io/text.hpp"

using namespace aperiodic;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("rule files") {
  const auto rules = parse_rules(R"(
# two rules
[rule np]
a -> a b b b
b -> a

[rule tm]
x -> x y   # comment
y -> y x
)");
  REQUIRE(rules.size() == 2);
  CHECK(rules[0].name == "np");
  CHECK(incidence_matrix(rules[0])(1, 0) == 3);
  CHECK(rules[1].alphabet == std::vector<std::string>{"x", "y"});
  CHECK(code_of([] { parse_rules("[rule r]\na -> a c\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_rules("a -> b\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_rules("[rule r]\na b -> a\n"); }) == ErrorCode::ParseError);
}

TEST_CASE("scheme files") {
  const auto schemes = parse_schemes(R"(
[scheme fib]
matrix = 2 2
2 1
1 1
d = 1
selector = leading
[window]
kind = interval
data = -0.5, 0.6
)");
  REQUIRE(schemes.size() == 1);
  const auto sys = system_from_scheme(schemes[0]);
  CHECK(sys.window->measure() == doctest::Approx(1.1));
  CHECK(sys.A_par(0, 0) == doctest::Approx((3 + std::sqrt(5.0)) / 2));
  CHECK(code_of([] { parse_schemes("[scheme s]\nmatrix = 2 2\n1 0\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_schemes("[scheme s]\nmatrix = 2 2\n1 0\n0 1\nd = 1\n")[0].build(); }) ==
        ErrorCode::NotHyperbolicSelection);
}

TEST_CASE("config files") {
  const auto cfg = parse_config("[run]\nsystem = fibonacci\nthreads = 2\n[rule r]\na -> a b\nb -> a\n");
  CHECK(cfg.run.at("system") == "fibonacci");
  CHECK(cfg.rules.size() == 1);
  CHECK(code_of([] { parse_config("[bogus]\n"); }) == ErrorCode::ParseError);
}

TEST_CASE("catalog spectra") {
  const double s2 = 1.0 + std::sqrt(2.0);
  for (const auto& name : catalog_names()) {
    CAPTURE(name);
    const System s = load_system(name);
    const ResReport r = res_report(s);
    CHECK(std::abs(r.nu1 - s.expansion.det_A) <= 1e-9 * r.nu1);
  }
  const ResReport ab = res_report(load_system("ammann-beenker-caps"));
  CHECK(ab.e_plus_dim == 3);
  CHECK(ab.equality_count == 2);
  CHECK(std::abs(ab.nu1 - s2 * s2) < 1e-9);
  const Spectrum abk = eigenvalues(ammann_beenker_kernel_block());
  const Spectrum abm = eigenvalues(load_system("ammann-beenker-caps").scheme->A_int);
  Spectrum part = spectrum_from_values(std::vector<Complex>{s2, s2, 1 - std::sqrt(2.0), 1 - std::sqrt(2.0)});
  CHECK(spectrum_containment(part, abk, 1e-8));
  CHECK(spectrum_containment(part, abm, 1e-8));
  CHECK(code_of([] { load_system("nope"); }) == ErrorCode::UnknownSystem);
  CHECK(code_of([] { generate(load_system("penrose")); }) == ErrorCode::SpectrumOnlySystem);
}

TEST_CASE("verify fibonacci-caps") {
  VerifyOptions opt;
  opt.budget = 400'000;
  for (const auto& line : verify_system(load_system("fibonacci-caps"), opt)) {
    CAPTURE(line.name);
    CAPTURE(line.detail);
    CHECK(line.pass);
  }
}

TEST_CASE("poisson control has the central-limit slope") {
  const System s = load_system("fibonacci");
  GenerateOptions g;
  g.budget = 200'000;
  const PointSet ps = generate(s, g);
  const auto family = default_family(s, ps, 24);
  const double density = static_cast<double>(ps.size()) / ps.meta.extent->volume();
  const auto control = poisson_control(family, ps.meta.extent->bounds(), density, 32, 11);
  CHECK(control.fitted_slope() > 0.35);
  CHECK(control.fitted_slope() < 0.65);
}
