#pragma once

#include <string_view>
#include <vector>

#include <json.hpp>

#include "aperiodic/core/types.hpp"
#include "aperiodic/spectral/spectrum.hpp"

namespace aperiodic {

/// Expansion on the physical space: eigenvalue moduli in decreasing order
/// and the determinant.
struct ExpansionSpec {
  int d = 0;
  std::vector<double> lambda_moduli;
  double det_A = 0.0;

  static ExpansionSpec from_matrix(const RealMatrix& a);
  static ExpansionSpec from_moduli(std::vector<double> moduli);
  static ExpansionSpec pure_dilation(int d, double lambda);
  /// Throws InvalidArgument unless moduli are > 1 and multiply to det_A.
  void validate() const;
};

enum class ResClass { Strict, Equality, Below };
std::string_view to_string(ResClass c);

struct ResEntry {
  double modulus = 0.0;
  int multiplicity = 0;
  /// log|nu_i| / log nu_1 (-inf for a zero eigenvalue).
  double ratio = 0.0;
  /// d * ratio, the growth exponent in T.
  double s_i = 0.0;
  ResClass cls = ResClass::Below;
  int log_power = 0;
};

struct ResReport {
  double nu1 = 0.0;
  double det_A = 0.0;
  int d = 0;
  /// 1 - log|lambda_d| / log nu_1.
  double threshold = 0.0;
  /// d * threshold.
  double boundary_exponent = 0.0;
  /// One entry per distinct modulus, decreasing.
  std::vector<ResEntry> entries;
  /// Multiplicity-weighted count of STRICT and EQUALITY eigenvalues.
  int e_plus_dim = 0;
  int equality_count = 0;

  nlohmann::json to_json() const;
};

inline constexpr double kResTolerance = 1e-9;

ResReport classify_res(const Spectrum& cohomology, const ExpansionSpec& expansion);

}  // namespace aperiodic
