#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aperiodic/catalog/catalog.hpp"
#include "aperiodic/core/error.hpp"
#include "aperiodic/core/format.hpp"
#include "aperiodic/cutproject/caps.hpp"
#include "aperiodic/diffraction/autocorrelation.hpp"
#include "aperiodic/diffraction/intensity.hpp"
#include "aperiodic/io/text.hpp"
#include "aperiodic/simd/kernels.hpp"

#ifndef APERIODIC_VERSION
#define APERIODIC_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace aperiodic;
using json = nlohmann::json;

namespace {

constexpr std::size_t kDefaultCliBudget = 2'000'000;

/// Resolved run parameters: config `[run]` values overridden by flags.
class Params {
 public:
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string str(const std::string& key, const std::string& fallback = "") const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }
  double num(const std::string& key) const {
    const auto v = parse_numbers(str(key));
    if (v.size() != 1) fail(ErrorCode::InvalidArgument, "parameter '" + key + "' must be a single number");
    return v[0];
  }
  std::int64_t integer(const std::string& key) const {
    const double v = num(key);
    if (v != std::floor(v)) fail(ErrorCode::InvalidArgument, "parameter '" + key + "' must be an integer");
    return static_cast<std::int64_t>(v);
  }
  json to_json() const {
    json j = json::object();
    for (const auto& [k, v] : values_) {
      if (k != "out" && k != "threads" && k != "config") j[k] = v;
    }
    return j;
  }

 private:
  std::map<std::string, std::string> values_;
};

struct Context {
  std::string command;
  Params params;
  RunConfig config;
  fs::path out;
  int threads = 1;
  std::size_t budget = kDefaultCliBudget;
  json manifest = json::object();
  json outputs = json::object();
};

System resolve_system(const Context& ctx) {
  const std::string name = ctx.params.str("system");
  for (const auto& r : ctx.config.rules) {
    if (name.empty() || r.name == name) return system_from_rule(r);
  }
  for (const auto& s : ctx.config.schemes) {
    if (name.empty() || s.name == name) return system_from_scheme(s);
  }
  if (name.empty()) fail(ErrorCode::InvalidArgument, "no system given (use --system or a config file)");
  return load_system(name);
}

void emit(Context& ctx, const std::string& file, const std::string& content) {
  write_text_file(ctx.out / file, content);
  ctx.outputs[file] = sha256_hex(content);
}

void write_manifest(Context& ctx, const System& system) {
  json m;
  m["tool"] = "aperiodic";
  m["version"] = APERIODIC_VERSION;
  m["command"] = ctx.command;
  m["system"] = system.name;
  m["parameters"] = ctx.params.to_json();
  m["budgets"] = {{"points", ctx.budget}};
  m["threads"] = ctx.threads;
  m["kernel"] = std::string(simd::isa_name(simd::active_isa()));
  for (auto& [k, v] : ctx.manifest.items()) m[k] = v;
  m["outputs"] = ctx.outputs;
  write_text_file(ctx.out / "manifest.json", m.dump(2) + "\n");
}

GenerateOptions generate_options(const Context& ctx, const System& system) {
  GenerateOptions g;
  g.budget = ctx.budget;
  g.threads = ctx.threads;
  if (ctx.params.has("iterations")) g.iterations = static_cast<int>(ctx.params.integer("iterations"));
  if (ctx.params.has("radius")) g.radius = ctx.params.num("radius");
  if (ctx.params.has("shift")) g.shift = parse_numbers(ctx.params.str("shift"));
  if (system.kind == SystemKind::CutProject && g.shift.empty()) g.shift = default_shift(system.scheme->n);
  return g;
}

PointSet generate_for(Context& ctx, const System& system) {
  const GenerateOptions g = generate_options(ctx, system);
  PointSet ps = generate(system, g);
  json sample = {{"points", ps.size()}, {"provenance", ps.meta.provenance}};
  if (ps.meta.iterations >= 0) sample["iterations"] = ps.meta.iterations;
  if (!g.shift.empty()) {
    ctx.manifest["shift"] = g.shift;
    sample["radius"] = ps.meta.radius;
  }
  if (ps.meta.extent) {
    const Box b = ps.meta.extent->bounds();
    sample["extent_lo"] = b.lo;
    sample["extent_hi"] = b.hi;
  }
  ctx.manifest["sample"] = sample;
  return ps;
}

int cmd_generate(Context& ctx) {
  const System system = resolve_system(ctx);
  const PointSet ps = generate_for(ctx, system);
  emit(ctx, "points.csv", point_set_csv(ps));
  write_manifest(ctx, system);
  std::cout << "wrote " << ps.size() << " points to " << (ctx.out / "points.csv").string() << "\n";
  return 0;
}

int cmd_spectrum(Context& ctx) {
  const System system = resolve_system(ctx);
  const Spectrum coh = cohomology_spectrum(system);
  const ResReport report = classify_res(coh, system.expansion);
  json j = report.to_json();
  j["system"] = system.name;
  json ev = json::array();
  for (const auto& e : coh.eigenvalues) {
    ev.push_back({{"re", e.value.real()}, {"im", e.value.imag()}, {"multiplicity", e.multiplicity}});
  }
  j["eigenvalues"] = ev;
  j["proper_assumed"] = coh.proper_assumed;
  j["roots_of_unity_omitted"] = coh.roots_of_unity_omitted;
  const std::string text = j.dump(2) + "\n";
  emit(ctx, "spectrum.json", text);
  write_manifest(ctx, system);
  std::cout << text;
  return 0;
}

PatchObservable parse_patch(const std::string& spec, int d) {
  // "x1 y1; x2 y2; ..." relative offsets of a cluster.
  std::vector<std::vector<double>> pts;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto end = spec.find(';', start);
    const std::string part = spec.substr(start, end == std::string::npos ? std::string::npos : end - start);
    const auto v = parse_numbers(part);
    if (!v.empty()) {
      if (static_cast<int>(v.size()) != d) fail(ErrorCode::InvalidArgument, "patch point has the wrong dimension");
      pts.push_back(v);
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (pts.empty()) pts.push_back(std::vector<double>(d, 0.0));
  return PatchObservable::make(std::move(pts));
}

int cmd_deviations(Context& ctx) {
  const System system = resolve_system(ctx);
  const PointSet ps = generate_for(ctx, system);
  const int samples = ctx.params.has("samples") ? static_cast<int>(ctx.params.integer("samples")) : 24;
  if (samples < 4) fail(ErrorCode::InvalidArgument, "need at least 4 samples");
  std::optional<double> t_max;
  if (ctx.params.has("t-max")) t_max = ctx.params.num("t-max");
  SeriesOptions opt;
  opt.threads = ctx.threads;
  opt.with_log_correction = ctx.params.str("log-correction", "false") == "true";

  DeviationSeries series;
  AveragingFamily family;
  std::string observable;
  if (ctx.params.has("patch")) {
    family = default_family(system, ps, samples, t_max);
    const PatchObservable obs = parse_patch(ctx.params.str("patch"), system.d());
    series = deviation_series(ps, obs, family, std::nullopt, opt);
    series.predicted = predicted_slopes(res_report(system));
    observable = "patch " + ctx.params.str("patch");
  } else {
    DeviationRun run = run_deviations(system, ps, opt, samples, t_max);
    series = std::move(run.series);
    family = run.family;
    observable = run.observable_name;
  }
  emit(ctx, "deviations.csv", series.to_csv());
  json fit = series.summary_json();
  fit["observable"] = observable;
  const std::string fit_text = fit.dump(2) + "\n";
  emit(ctx, "fit.json", fit_text);
  ctx.manifest["family"] = {{"T_min", family.T_list.front()}, {"T_max", family.T_list.back()},
                            {"samples", family.T_list.size()}, {"b0_lo", family.b0.lo}, {"b0_hi", family.b0.hi}};
  write_manifest(ctx, system);
  std::cout << fit_text;
  return 0;
}

KGrid parse_grid(const std::string& spec, int d) {
  std::string kind = spec;
  std::vector<double> v;
  if (const auto colon = spec.find(':'); colon != std::string::npos) {
    kind = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    for (char& c : rest) {
      if (c == ':') c = ' ';
    }
    v = parse_numbers(rest);
  }
  auto need = [&](std::size_t n) {
    if (v.size() != n) fail(ErrorCode::InvalidArgument, "grid '" + kind + "' takes " + std::to_string(n) + " numbers");
  };
  auto count = [](double x) {
    if (!(x >= 1.0) || x != std::floor(x)) fail(ErrorCode::InvalidArgument, "grid counts must be positive integers");
    return static_cast<std::size_t>(x);
  };
  if (kind == "line") {
    if (d != 1) fail(ErrorCode::InvalidArgument, "line grids are for one-dimensional systems");
    need(3);
    return line_grid(v[0], v[1], count(v[2]));
  }
  if (kind == "rect") {
    if (d != 2) fail(ErrorCode::InvalidArgument, "rect grids are for two-dimensional systems");
    need(6);
    return rect_grid(v[0], v[1], count(v[2]), v[3], v[4], count(v[5]));
  }
  if (kind == "polar") {
    if (d != 2) fail(ErrorCode::InvalidArgument, "polar grids are for two-dimensional systems");
    if (v.size() == 3) v.push_back(0.0);
    need(4);
    return polar_grid(v[0], count(v[1]), count(v[2]), v[3]);
  }
  fail(ErrorCode::InvalidArgument, "unknown grid '" + kind + "' (line, rect or polar)");
}

int cmd_diffraction(Context& ctx) {
  const System system = resolve_system(ctx);
  const PointSet ps = generate_for(ctx, system);
  const int d = system.d();
  const AveragingFamily family = default_family(system, ps, 2);
  const double T = ctx.params.has("T") ? ctx.params.num("T") : family.T_list.back();
  const std::string grid_spec = ctx.params.str("grid", d == 1 ? "line:0:3:3001" : "polar:3:60:64");
  const KGrid grid = parse_grid(grid_spec, d);
  const IntensityMap map = intensity(ps, family, T, grid, kDefaultIntensityBudget, ctx.threads);
  emit(ctx, "intensity.csv", map.to_csv());
  json summary = {{"T", T}, {"points", map.N}, {"volume", map.vol}, {"I0", map.I0}, {"grid", grid_spec}};
  if (ctx.params.has("autocorr")) {
    const Autocorrelation ac = autocorrelation(ps, family, T, ctx.params.num("autocorr"), ctx.threads);
    emit(ctx, "autocorr.csv", ac.to_csv());
    summary["autocorr_bins"] = ac.bins.size();
  }
  if (ctx.params.has("symmetry")) {
    const int order = static_cast<int>(ctx.params.integer("symmetry"));
    summary["symmetry_order"] = order;
    summary["symmetry_deviation"] = symmetry_check(map, order);
  }
  ctx.manifest["diffraction"] = summary;
  write_manifest(ctx, system);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_verify(Context& ctx) {
  const System system = resolve_system(ctx);
  VerifyOptions opt;
  opt.budget = ctx.budget;
  opt.threads = ctx.threads;
  bool all = true;
  std::string report;
  for (const auto& line : verify_system(system, opt)) {
    const std::string text = std::string(line.pass ? "PASS" : "FAIL") + "  " + line.name + "  (" + line.detail + ")\n";
    std::cout << text;
    report += text;
    all = all && line.pass;
  }
  emit(ctx, "verify.txt", report);
  write_manifest(ctx, system);
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-affine aperiodic point sets: generation, renormalization spectra, deviations, diffraction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", APERIODIC_VERSION);

  struct Flags {
    std::string system, out = "out", config;
    int threads = 1;
    std::size_t budget = kDefaultCliBudget;
    std::map<std::string, std::string> extra;
  } flags;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"generate", "generate a point set and write points.csv"},
      {"spectrum", "cohomology spectrum and rapidly expanding subspace report"},
      {"deviations", "deviation series of a patch count with fitted and predicted slopes"},
      {"diffraction", "diffraction intensity on a k grid (and optional autocorrelation)"},
      {"verify", "run the system's acceptance checks and print PASS/FAIL lines"}};
  // Command-specific options, all optional and also accepted from [run].
  const std::map<std::string, std::vector<std::pair<std::string, std::string>>> specific{
      {"generate", {{"iterations", "substitution iterations"}, {"radius", "cut-and-project radius"},
                    {"shift", "cut-and-project shift, comma separated"}}},
      {"deviations", {{"iterations", "substitution iterations"}, {"radius", "cut-and-project radius"},
                      {"shift", "cut-and-project shift"}, {"samples", "number of T samples (default 24)"},
                      {"t-max", "largest T (default: largest box inside the sample)"},
                      {"patch", "cluster offsets 'x; x' or 'x y; x y' (default: catalog observable)"},
                      {"log-correction", "true to fit an extra log log Vol term"}}},
      {"diffraction", {{"iterations", "substitution iterations"}, {"radius", "cut-and-project radius"},
                       {"shift", "cut-and-project shift"}, {"T", "averaging scale"},
                       {"grid", "line:kmin:kmax:n | rect:x0:x1:nx:y0:y1:ny | polar:kmax:rings:directions[:phase]"},
                       {"autocorr", "also write the autocorrelation up to this radius"},
                       {"symmetry", "report the rotational symmetry deviation of this order"}}},
      {"spectrum", {}},
      {"verify", {}}};

  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--system", flags.system, "catalog system or a system defined in the config");
    sub->add_option("--out", flags.out, "output directory")->capture_default_str();
    sub->add_option("--threads", flags.threads, "worker threads (0 = all cores)")->capture_default_str();
    sub->add_option("--budget-points", flags.budget, "maximum number of generated points")->capture_default_str();
    sub->add_option("--config", flags.config, "run configuration file");
    for (const auto& [key, help2] : specific.at(name)) sub->add_option("--" + key, flags.extra[key], help2);
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Context ctx;
    for (const auto& [name, sub] : subs) {
      if (sub->parsed()) ctx.command = name;
    }
    CLI::App* sub = subs.at(ctx.command);
    if (!flags.config.empty()) {
      ctx.config = parse_config(read_text_file(flags.config));
      for (const auto& [k, v] : ctx.config.run) ctx.params.set(k, v);
    }
    auto given = [&](const std::string& opt) { return sub->count("--" + opt) > 0; };
    if (given("system")) ctx.params.set("system", flags.system);
    if (given("out") || !ctx.params.has("out")) ctx.params.set("out", flags.out);
    if (given("threads") || !ctx.params.has("threads")) ctx.params.set("threads", std::to_string(flags.threads));
    if (given("budget-points") || !ctx.params.has("budget-points")) {
      ctx.params.set("budget-points", std::to_string(flags.budget));
    }
    for (const auto& [key, help] : specific.at(ctx.command)) {
      if (given(key)) ctx.params.set(key, flags.extra[key]);
    }
    ctx.out = ctx.params.str("out");
    ctx.threads = static_cast<int>(ctx.params.integer("threads"));
    if (ctx.threads < 0) fail(ErrorCode::InvalidArgument, "--threads must be >= 0");
    const auto budget = ctx.params.integer("budget-points");
    if (budget < 1) fail(ErrorCode::InvalidArgument, "--budget-points must be positive");
    ctx.budget = static_cast<std::size_t>(budget);
    fs::create_directories(ctx.out);

    if (ctx.command == "generate") return cmd_generate(ctx);
    if (ctx.command == "spectrum") return cmd_spectrum(ctx);
    if (ctx.command == "deviations") return cmd_deviations(ctx);
    if (ctx.command == "diffraction") return cmd_diffraction(ctx);
    return cmd_verify(ctx);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
