#include "aperiodic/spectral/res.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aperiodic/core/error.hpp"

namespace aperiodic {

ExpansionSpec ExpansionSpec::from_matrix(const RealMatrix& a) {
  const Spectrum s = eigenvalues(a);
  std::vector<double> moduli;
  for (const auto& e : s.eigenvalues) moduli.insert(moduli.end(), e.multiplicity, std::abs(e.value));
  ExpansionSpec spec = from_moduli(std::move(moduli));
  spec.det_A = std::abs(a.determinant());
  return spec;
}

ExpansionSpec ExpansionSpec::from_moduli(std::vector<double> moduli) {
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  ExpansionSpec spec;
  spec.d = static_cast<int>(moduli.size());
  spec.det_A = 1.0;
  for (double m : moduli) spec.det_A *= m;
  spec.lambda_moduli = std::move(moduli);
  return spec;
}

ExpansionSpec ExpansionSpec::pure_dilation(int d, double lambda) {
  return from_moduli(std::vector<double>(static_cast<std::size_t>(d), std::abs(lambda)));
}

void ExpansionSpec::validate() const {
  if (d < 1 || lambda_moduli.size() != static_cast<std::size_t>(d)) {
    fail(ErrorCode::InvalidArgument, "expansion: need d eigenvalue moduli");
  }
  double prod = 1.0;
  for (std::size_t i = 0; i < lambda_moduli.size(); ++i) {
    if (!(lambda_moduli[i] > 1.0)) fail(ErrorCode::InvalidArgument, "expansion: eigenvalue modulus must exceed 1");
    if (i > 0 && lambda_moduli[i] > lambda_moduli[i - 1]) fail(ErrorCode::InvalidArgument, "expansion: moduli must decrease");
    prod *= lambda_moduli[i];
  }
  if (std::abs(prod - det_A) > 1e-9 * det_A) fail(ErrorCode::InvalidArgument, "expansion: moduli do not multiply to det");
}

std::string_view to_string(ResClass c) {
  switch (c) {
    case ResClass::Strict: return "STRICT";
    case ResClass::Equality: return "EQUALITY";
    case ResClass::Below: return "BELOW";
  }
  return "BELOW";
}

ResReport classify_res(const Spectrum& cohomology, const ExpansionSpec& expansion) {
  expansion.validate();
  if (cohomology.eigenvalues.empty()) fail(ErrorCode::InvalidArgument, "cohomology spectrum is empty");
  const double top = cohomology.max_modulus();
  if (std::abs(top - expansion.det_A) > 1e-6 * expansion.det_A) {
    fail(ErrorCode::LeadingEigenvalueMismatch, "leading cohomology eigenvalue " + std::to_string(top) +
                                                   " differs from det A = " + std::to_string(expansion.det_A));
  }
  ResReport r;
  r.nu1 = top;
  r.det_A = expansion.det_A;
  r.d = expansion.d;
  const double log_nu1 = std::log(r.nu1);
  r.threshold = 1.0 - std::log(expansion.lambda_moduli.back()) / log_nu1;
  r.boundary_exponent = r.d * r.threshold;

  // Merge eigenvalues sharing a modulus.
  for (std::size_t i = 0; i < cohomology.eigenvalues.size(); ++i) {
    const auto& e = cohomology.eigenvalues[i];
    const double mod = std::abs(e.value);
    auto it = std::find_if(r.entries.begin(), r.entries.end(),
                           [&](const ResEntry& x) { return std::abs(x.modulus - mod) <= kMergeTolerance; });
    const int j = cohomology.jordan(i);
    if (it == r.entries.end()) {
      ResEntry entry;
      entry.modulus = mod;
      entry.multiplicity = e.multiplicity;
      entry.log_power = j;  // provisional: largest Jordan block
      r.entries.push_back(entry);
    } else {
      it->multiplicity += e.multiplicity;
      it->log_power = std::max(it->log_power, j);
    }
  }
  std::sort(r.entries.begin(), r.entries.end(), [](const ResEntry& a, const ResEntry& b) { return a.modulus > b.modulus; });
  for (auto& entry : r.entries) {
    const int j = entry.log_power;
    if (entry.modulus <= 0.0) {
      entry.ratio = -std::numeric_limits<double>::infinity();
    } else {
      entry.ratio = std::log(entry.modulus) / log_nu1;
    }
    // The leading entry is nu_1 itself: its ratio is 1 by definition.
    if (&entry == &r.entries.front()) entry.ratio = 1.0;
    entry.s_i = r.d * entry.ratio;
    if (entry.ratio > r.threshold + kResTolerance) {
      entry.cls = ResClass::Strict;
      entry.log_power = j - 1;
    } else if (std::abs(entry.ratio - r.threshold) <= kResTolerance) {
      entry.cls = ResClass::Equality;
      entry.log_power = j;
    } else {
      entry.cls = ResClass::Below;
      entry.log_power = 0;
    }
    if (entry.cls != ResClass::Below) r.e_plus_dim += entry.multiplicity;
    if (entry.cls == ResClass::Equality) r.equality_count += entry.multiplicity;
  }
  return r;
}

nlohmann::json ResReport::to_json() const {
  nlohmann::json j;
  j["nu1"] = nu1;
  j["det_A"] = det_A;
  j["d"] = d;
  j["threshold"] = threshold;
  j["boundary_exponent"] = boundary_exponent;
  j["E_plus_dim"] = e_plus_dim;
  j["equality_count"] = equality_count;
  nlohmann::json entries_json = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json x;
    x["modulus"] = e.modulus;
    x["multiplicity"] = e.multiplicity;
    if (std::isfinite(e.s_i)) {
      x["s_i"] = e.s_i;
    } else {
      x["s_i"] = nullptr;
    }
    x["class"] = std::string(to_string(e.cls));
    x["log_power"] = e.log_power;
    entries_json.push_back(std::move(x));
  }
  j["entries"] = std::move(entries_json);
  return j;
}

}  // namespace aperiodic
