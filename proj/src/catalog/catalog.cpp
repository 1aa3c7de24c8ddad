#include "aperiodic/catalog/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "aperiodic/core/error.hpp"
#include "aperiodic/core/samples.hpp"
#include "aperiodic/core/spatial_index.hpp"
#include "aperiodic/cutproject/caps.hpp"
#include "aperiodic/spectral/cohomology.hpp"

namespace aperiodic {

namespace {

IntMatrix int_matrix(int n, std::initializer_list<std::int64_t> v) {
  IntMatrix m(n, n);
  auto it = v.begin();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = *it++;
  }
  return m;
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

double mean_tile_length(const SubstitutionRule1D& rule) {
  const auto f = letter_frequencies(incidence_matrix(rule));
  double mean = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) mean += f[i] * rule.tile_lengths[i];
  return mean;
}

// Largest T whose averaging region lies in the sample extent.
double fitting_T(const AveragingFamily& f, const Region& extent) {
  double lo = 0.0, hi = 1.0;
  while (extent.encloses(f.region(hi), 0.0)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) fail(ErrorCode::Internal, "unbounded sample extent");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (extent.encloses(f.region(mid), 0.0) ? lo : hi) = mid;
  }
  if (!(lo > 0.0)) fail(ErrorCode::RegionExceedsExtent, "sample too small for the averaging box");
  return lo;
}

}  // namespace

IntMatrix ammann_beenker_torus_block() { return int_matrix(3, {3, -1, -1, -4, 1, 2, -4, 2, 1}); }

IntMatrix ammann_beenker_kernel_block() {
  return int_matrix(6, {1, -1, 0, 0, -1, 1, -2, 1, 0, 0, 2, -1, 0, 0, 1, 1, -1, 1,
                        0, 0, 2, 1, -1, 2, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0, -1});
}

std::vector<std::string> catalog_names() {
  return {"fibonacci",      "nonpisot13",          "thue-morse", "fib-squared", "nonpisot13-squared",
          "fibonacci-caps", "ammann-beenker-caps", "penrose"};
}

System system_from_rule(const SubstitutionRule1D& rule) {
  rule.validate();
  if (!is_primitive(incidence_matrix(rule))) fail(ErrorCode::NotPrimitive, "rule '" + rule.name + "' is not primitive");
  System s;
  s.name = rule.name;
  s.kind = SystemKind::Substitution1D;
  s.rule = rule;
  s.expansion = ExpansionSpec::from_moduli({rule.expansion_factor});
  s.A_par = RealMatrix::Constant(1, 1, rule.expansion_factor);
  return s;
}

System system_from_product(const std::string& name, const SubstitutionRule1D& rule, int power) {
  if (power < 1 || power > 3) fail(ErrorCode::InvalidArgument, "product power must be 1..3");
  System s = system_from_rule(rule);
  s.name = name;
  s.kind = SystemKind::Product;
  s.product = ProductSubstitution{std::vector<SubstitutionRule1D>(power, rule)};
  s.expansion = ExpansionSpec::pure_dilation(power, rule.expansion_factor);
  s.A_par = RealMatrix::Identity(power, power) * rule.expansion_factor;
  return s;
}

System system_from_scheme(const SchemeSpec& spec) {
  System s;
  s.name = spec.name;
  s.kind = SystemKind::CutProject;
  s.scheme = spec.build();
  s.window = spec.window(*s.scheme);
  s.A_par = s.scheme->A_par;
  s.expansion = ExpansionSpec::from_matrix(s.A_par);
  return s;
}

System load_system(const std::string& name) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  auto fib = [] { return SubstitutionRule1D::from_words("fibonacci", {"a", "b"}, {"a b", "a"}); };
  auto np13 = [] { return SubstitutionRule1D::from_words("nonpisot13", {"a", "b"}, {"a b b b", "a"}); };
  System s;
  if (name == "fibonacci") {
    s = system_from_rule(fib());
    s.description = "Fibonacci substitution a -> ab, b -> a";
  } else if (name == "nonpisot13") {
    s = system_from_rule(np13());
    s.description = "non-Pisot substitution a -> abbb, b -> a";
  } else if (name == "thue-morse") {
    s = system_from_rule(SubstitutionRule1D::from_words("thue-morse", {"a", "b"}, {"a b", "b a"}));
    s.description = "Thue-Morse substitution a -> ab, b -> ba";
  } else if (name == "fib-squared") {
    s = system_from_product(name, fib(), 2);
    s.description = "product of two Fibonacci tilings";
  } else if (name == "nonpisot13-squared") {
    s = system_from_product(name, np13(), 2);
    s.description = "product of two a -> abbb, b -> a tilings";
  } else if (name == "fibonacci-caps") {
    SchemeSpec spec;
    spec.name = name;
    spec.matrix = int_matrix(2, {2, 1, 1, 1});
    spec.d = 1;
    s = system_from_scheme(spec);
    s.description = "cut-and-project set of [[2,1],[1,1]] with its canonical interval window";
  } else if (name == "ammann-beenker-caps") {
    SchemeSpec spec;
    spec.name = name;
    spec.matrix = int_matrix(4, {1, 1, 0, -1, 1, 1, 1, 0, 0, 1, 1, 1, -1, 0, 1, 1});
    spec.d = 2;
    s = system_from_scheme(spec);
    s.cohomology = direct_sum(eigenvalues(ammann_beenker_torus_block()), eigenvalues(ammann_beenker_kernel_block()));
    s.description = "Ammann-Beenker vertex set from M(1,1,0,-1) with the octagonal window";
  } else if (name == "penrose") {
    s.name = name;
    s.kind = SystemKind::SpectrumOnly;
    s.cohomology = spectrum_from_values(std::vector<Complex>{phi * phi, phi});
    s.expansion = ExpansionSpec::pure_dilation(2, phi);
    s.A_par = RealMatrix::Identity(2, 2) * phi;
    s.description = "Penrose vertex set (leading cohomology eigenvalues only)";
  } else {
    std::string names;
    for (const auto& n : catalog_names()) names += (names.empty() ? "" : ", ") + n;
    fail(ErrorCode::UnknownSystem, "unknown system '" + name + "' (catalog: " + names + ")");
  }
  return s;
}

Spectrum cohomology_spectrum(const System& system) {
  if (system.cohomology) return *system.cohomology;
  switch (system.kind) {
    case SystemKind::Substitution1D:
      return induced_action_1d(*system.rule);
    case SystemKind::Product: {
      std::vector<Spectrum> factors;
      for (const auto& f : system.product->factors) factors.push_back(induced_action_1d(f));
      return kunneth_spectrum(factors);
    }
    case SystemKind::CutProject:
      return codim1_spectrum(*system.scheme);
    case SystemKind::SpectrumOnly:
      break;
  }
  fail(ErrorCode::Internal, "system '" + system.name + "' has no cohomology data");
}

ResReport res_report(const System& system) { return classify_res(cohomology_spectrum(system), system.expansion); }

PointSet generate(const System& system, const GenerateOptions& options) {
  PointSet ps(1);
  switch (system.kind) {
    case SystemKind::SpectrumOnly:
      fail(ErrorCode::SpectrumOnlySystem,
           "'" + system.name + "' is a spectrum-only system; it supports spectrum and verify but not generation");
    case SystemKind::Substitution1D: {
      const int n = options.iterations.value_or(max_iterations(*system.rule, 0, options.budget));
      ps = point_set_1d(*system.rule, n, 0, options.budget);
      break;
    }
    case SystemKind::Product: {
      const int d = system.product->d();
      const int n = options.iterations.value_or(max_iterations(system.product->factors[0], 0, options.budget, d));
      ps = product_point_set(*system.product, n, options.budget, options.threads);
      break;
    }
    case SystemKind::CutProject: {
      const auto& s = *system.scheme;
      const std::vector<double> shift = options.shift.empty() ? default_shift(s.n) : options.shift;
      double radius;
      if (options.radius) {
        radius = *options.radius;
      } else {
        const double density = caps_density(s, *system.window);
        radius = std::pow(0.9 * static_cast<double>(options.budget) / (density * unit_ball_volume(s.d)), 1.0 / s.d);
      }
      CapsOptions co;
      co.budget = options.budget;
      co.threads = options.threads;
      ps = generate_caps(s, *system.window, radius, shift, co);
      break;
    }
  }
  ps.meta.system = system.name;
  return ps;
}

AveragingFamily default_family(const System& system, const PointSet& ps, int samples, std::optional<double> T_max) {
  if (!ps.meta.extent) fail(ErrorCode::RegionExceedsExtent, "point set has no recorded extent");
  const int d = system.d();
  Box b0;
  if (system.kind == SystemKind::CutProject) {
    b0 = Box{std::vector<double>(d, -0.5), std::vector<double>(d, 0.5)};
  } else {
    b0 = Box{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
  }
  AveragingFamily f = make_family(system.A_par, b0);
  const double t_max = T_max.value_or(fitting_T(f, *ps.meta.extent));
  f.T_list = geometric_T_list(t_max, default_T_ratio(system.A_par), samples);
  return f;
}

DeviationRun run_deviations(const System& system, const PointSet& ps, const SeriesOptions& options, int samples,
                            std::optional<double> T_max) {
  DeviationRun run{PatchObservable::single_point(system.d()), "point", std::nullopt, default_family(system, ps, samples, T_max), {}};
  switch (system.kind) {
    case SystemKind::Substitution1D: {
      const auto& rule = *system.rule;
      run.observable = PatchObservable::single_point(1, {0});
      run.observable_name = "tile " + rule.alphabet[0];
      run.exact_frequency = letter_frequencies(incidence_matrix(rule))[0] / mean_tile_length(rule);
      break;
    }
    case SystemKind::Product: {
      const auto& rule = system.product->factors[0];
      const int d = system.d();
      std::vector<int> label(d, -1);
      label[0] = rule.size() > 1 ? 1 : 0;
      run.observable = PatchObservable::single_point(d, label);
      run.observable_name = "tile " + rule.alphabet[label[0]] + " in the first factor";
      run.exact_frequency = letter_frequencies(incidence_matrix(rule))[label[0]] /
                            std::pow(mean_tile_length(rule), d);
      break;
    }
    case SystemKind::CutProject:
      run.exact_frequency = caps_density(*system.scheme, *system.window);
      break;
    case SystemKind::SpectrumOnly:
      fail(ErrorCode::SpectrumOnlySystem, "'" + system.name + "' is a spectrum-only system");
  }
  run.series = deviation_series(ps, run.observable, run.family, run.exact_frequency, options);
  run.series.predicted = predicted_slopes(res_report(system));
  return run;
}

DeviationSeries poisson_control(const AveragingFamily& family, const Box& extent, double intensity, int realizations,
                                std::uint64_t seed, const SeriesOptions& options) {
  if (realizations < 1) fail(ErrorCode::InvalidArgument, "need at least one realization");
  DeviationSeries total;
  for (int r = 0; r < realizations; ++r) {
    const PointSet ps = poisson_point_set(extent, intensity, seed + static_cast<std::uint64_t>(r));
    const AnchorCounter counter(ps, PatchObservable::single_point(extent.dim()), family, options.threads);
    DeviationSeries one;
    one.samples = deviation_samples(counter, family, intensity, options);
    if (r == 0) {
      total = one;
      for (auto& s : total.samples) {
        s.deviation *= s.deviation;
        s.band *= s.band;
      }
    } else {
      for (std::size_t k = 0; k < one.samples.size(); ++k) {
        total.samples[k].deviation += one.samples[k].deviation * one.samples[k].deviation;
        total.samples[k].band += one.samples[k].band * one.samples[k].band;
      }
    }
  }
  for (auto& s : total.samples) {
    s.deviation = std::sqrt(s.deviation / realizations);
    s.band = std::sqrt(s.band / realizations);
  }
  total.freq = intensity;
  total.freq_source = "poisson_intensity";
  total.fit_on_band = options.band_subsamples > 0;
  total.fit = fit_series(total, options.with_log_correction);
  return total;
}

Codim1Report codim1_error_bound_check(const System& system, const PointSet& ps, int threads) {
  if (system.kind != SystemKind::CutProject || system.scheme->codim() != 1) {
    fail(ErrorCode::WrongCodimension, "codimension-1 check needs a codimension-1 cut-and-project system");
  }
  const auto& s = *system.scheme;
  const int d = s.d;
  if (ps.lattice_dim() != s.n || ps.size() < 16) fail(ErrorCode::InvalidArgument, "sample lacks lattice coordinates");
  Codim1Report report;
  report.boundary_slope = res_report(system).threshold;

  // Neighbours of the point closest to the origin define the patches.
  const GridIndex index(ps, default_cell_size(ps));
  const std::vector<double> origin(d, 0.0);
  const std::size_t p0 = index.nearest(origin)->first;
  std::vector<std::pair<double, std::size_t>> near;
  double radius = 2.0 * default_cell_size(ps);
  while (near.size() < 3) {
    near.clear();
    index.for_each_within(ps.point(p0), radius, [&](std::size_t j) {
      if (j == p0) return;
      double dist = 0.0;
      for (int a = 0; a < d; ++a) dist += (ps.coord(j, a) - ps.coord(p0, a)) * (ps.coord(j, a) - ps.coord(p0, a));
      near.emplace_back(std::sqrt(dist), j);
    });
    radius *= 2.0;
  }
  std::sort(near.begin(), near.end());
  // Second neighbour at a different distance than the first.
  std::size_t second = 1;
  while (second + 1 < near.size() && std::abs(near[second].first - near[0].first) < 1e-6) ++second;

  struct Spec {
    std::string name;
    std::vector<std::size_t> members;
  };
  const std::vector<Spec> specs{{"single point", {p0}},
                                {"point + nearest neighbour", {p0, near[0].second}},
                                {"point + next-nearest neighbour", {p0, near[second].second}},
                                {"three-point cluster", {p0, near[0].second, near[second].second}}};
  const auto family = default_family(system, ps);
  SeriesOptions opt;
  opt.threads = threads;
  report.pass = true;
  for (const auto& spec : specs) {
    std::vector<std::vector<double>> pts;
    std::vector<std::vector<std::int64_t>> deltas;
    for (std::size_t m : spec.members) {
      std::vector<double> p(d);
      for (int a = 0; a < d; ++a) p[a] = ps.coord(m, a) - ps.coord(p0, a);
      pts.push_back(std::move(p));
      if (m == p0) continue;
      std::vector<std::int64_t> g(s.n);
      for (int a = 0; a < s.n; ++a) g[a] = ps.lattice(m)[a] - ps.lattice(p0)[a];
      deltas.push_back(std::move(g));
    }
    PatchSlope out;
    out.patch = spec.name;
    out.frequency = caps_patch_frequency(s, *system.window, deltas);
    const auto series = deviation_series(ps, PatchObservable::make(pts), family, out.frequency, opt);
    out.slope = series.fitted_slope();
    out.pass = out.slope <= report.boundary_slope + report.allowance;
    report.pass = report.pass && out.pass;
    report.patches.push_back(out);
  }
  return report;
}

std::vector<CheckLine> verify_system(const System& system, const VerifyOptions& options) {
  std::vector<CheckLine> out;
  const Spectrum coh = cohomology_spectrum(system);
  const double nu1 = coh.max_modulus();
  const double det = system.expansion.det_A;
  out.push_back({"leading eigenvalue equals det A", std::abs(nu1 - det) <= 1e-9 * det,
                 "nu1 = " + fixed(nu1, 12) + ", det A = " + fixed(det, 12)});
  const ResReport res = classify_res(coh, system.expansion);
  out.push_back({"rapidly expanding subspace classified", true,
                 "E+ dimension " + std::to_string(res.e_plus_dim) + ", " + std::to_string(res.equality_count) +
                     " at equality"});
  if (!system.generates()) return out;

  if (system.kind == SystemKind::CutProject) {
    const auto shift = default_shift(system.scheme->n);
    for (double R : {10.0, 20.0, 40.0}) {
      const auto rep = verify_renormalization(*system.scheme, *system.window, R, shift, nullptr, options.threads);
      std::ostringstream detail;
      detail << "mismatch " << rep.mismatch << " (" << rep.left_points << " points)";
      out.push_back({"renormalization identity at R = " + fixed(R, 0), rep.pass, detail.str()});
    }
  }
  GenerateOptions gen;
  gen.budget = options.budget;
  gen.threads = options.threads;
  const PointSet ps = generate(system, gen);
  SeriesOptions so;
  so.threads = options.threads;
  const DeviationRun run = run_deviations(system, ps, so);
  double bound = -1.0;
  for (const auto& p : run.series.predicted) bound = std::max(bound, p.slope);
  const double slope = run.series.fitted_slope();
  out.push_back({"deviation slope of " + run.observable_name + " within bound", slope <= bound + 0.15,
                 "slope " + fixed(slope) + ", bound " + fixed(bound) + " + 0.15"});
  if (system.kind == SystemKind::CutProject && system.scheme->codim() == 1) {
    const auto rep = codim1_error_bound_check(system, ps, options.threads);
    for (const auto& p : rep.patches) {
      out.push_back({"codimension-1 bound for " + p.patch, p.pass,
                     "slope " + fixed(p.slope) + ", bound " + fixed(rep.boundary_slope) + " + 0.15"});
    }
  }
  return out;
}

}  // namespace aperiodic
