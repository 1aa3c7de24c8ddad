#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aperiodic/core/pointset.hpp"
#include "aperiodic/cutproject/scheme.hpp"
#include "aperiodic/cutproject/window.hpp"
#include "aperiodic/deviation/series.hpp"
#include "aperiodic/io/text.hpp"
#include "aperiodic/spectral/res.hpp"
#include "aperiodic/spectral/spectrum.hpp"
#include "aperiodic/substitution/substitution.hpp"

namespace aperiodic {

enum class SystemKind { Substitution1D, Product, CutProject, SpectrumOnly };

/// A named self-affine system with everything needed to generate it and
/// predict its deviation exponents.
struct System {
  std::string name;
  std::string description;
  SystemKind kind = SystemKind::SpectrumOnly;
  std::optional<SubstitutionRule1D> rule;
  std::optional<ProductSubstitution> product;
  std::optional<ProjectionScheme> scheme;
  std::optional<Window> window;
  /// Cohomology action supplied as data (systems whose action is not
  /// derived here).
  std::optional<Spectrum> cohomology;
  ExpansionSpec expansion;
  RealMatrix A_par;

  int d() const { return expansion.d; }
  bool generates() const { return kind != SystemKind::SpectrumOnly; }
};

std::vector<std::string> catalog_names();
/// Errors: UnknownSystem.
System load_system(const std::string& name);
System system_from_rule(const SubstitutionRule1D& rule);
System system_from_product(const std::string& name, const SubstitutionRule1D& rule, int power);
System system_from_scheme(const SchemeSpec& spec);

/// Ammann-Beenker cohomology blocks: the action on the torus part and on
/// the kernel of H_1 of the singular tori.
IntMatrix ammann_beenker_torus_block();
IntMatrix ammann_beenker_kernel_block();

Spectrum cohomology_spectrum(const System& system);
ResReport res_report(const System& system);

struct GenerateOptions {
  std::optional<int> iterations;  ///< substitution systems
  std::optional<double> radius;   ///< cut-and-project systems
  std::vector<double> shift;      ///< cut-and-project; default generic shift
  std::size_t budget = kDefaultPointBudget;
  int threads = 1;
};

/// Errors: SpectrumOnlySystem, CapacityExceeded, module errors.
PointSet generate(const System& system, const GenerateOptions& options = {});

/// Default averaging family for a generated sample: unit box at the origin
/// ([0,1)^d for substitution samples, centred for cut-and-project samples),
/// `samples` values of T with ratio det(A)^(1/(2d)) up to the largest T
/// whose box fits the sample.
AveragingFamily default_family(const System& system, const PointSet& ps, int samples = 24,
                               std::optional<double> T_max = std::nullopt);

struct DeviationRun {
  PatchObservable observable;
  std::string observable_name;
  std::optional<double> exact_frequency;
  AveragingFamily family;
  DeviationSeries series;
};

/// Catalog observable: the first-letter indicator (substitution), the
/// first-factor letter-b indicator g (x) 1 (products), or points
/// (cut-and-project), with exact frequencies where known.
DeviationRun run_deviations(const System& system, const PointSet& ps, const SeriesOptions& options = {},
                            int samples = 24, std::optional<double> T_max = std::nullopt);

/// Deviation series of independent Poisson samples with the same density
/// and family; deviation and band are root mean squares over realizations.
DeviationSeries poisson_control(const AveragingFamily& family, const Box& extent, double intensity, int realizations,
                                std::uint64_t seed, const SeriesOptions& options = {});

struct PatchSlope {
  std::string patch;
  double frequency = 0.0;
  double slope = 0.0;
  bool pass = false;
};

struct Codim1Report {
  double boundary_slope = 0.0;
  double allowance = 0.15;
  std::vector<PatchSlope> patches;
  bool pass = false;
};

/// Deviation slopes of several small patches (1 to 3 points) with exact
/// window frequencies, each checked against the boundary slope plus the
/// allowance. Errors: WrongCodimension.
Codim1Report codim1_error_bound_check(const System& system, const PointSet& ps, int threads = 1);

struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  std::size_t budget = 2'000'000;
  int threads = 1;
};

/// The system's acceptance subset: leading eigenvalue = det A, the
/// renormalization identity for cut-and-project systems, and slope bounds.
std::vector<CheckLine> verify_system(const System& system, const VerifyOptions& options = {});

}  // namespace aperiodic
