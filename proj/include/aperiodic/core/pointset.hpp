#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aperiodic/core/region.hpp"
#include "aperiodic/core/types.hpp"

namespace aperiodic {

struct PointSetMeta {
  std::string system;
  /// substitution | product | caps | poisson | lattice | custom
  std::string provenance = "custom";
  /// Region in which the sample is complete (no missing points).
  std::optional<Region> extent;
  double radius = 0.0;
  std::vector<double> shift;
  std::string window_id;
  std::size_t boundary_ambiguous = 0;
  bool aperiodic = true;
  bool budget_capped = false;
  int iterations = -1;
  /// Expansion matrix of the self-affinity, d x d (empty when unknown).
  RealMatrix expansion;
  /// Symbol names per label component (one entry per component).
  std::vector<std::vector<std::string>> label_alphabets;
};

/// Finite sample of a Delone set. Coordinates are stored per axis.
class PointSet {
 public:
  explicit PointSet(int dim = 1, int label_arity = 0, int lattice_dim = 0);

  int dim() const { return dim_; }
  std::size_t size() const { return axes_.empty() ? 0 : axes_[0].size(); }
  bool empty() const { return size() == 0; }

  std::span<const double> axis(int k) const { return axes_[k]; }
  double coord(std::size_t i, int k) const { return axes_[k][i]; }
  std::vector<double> point(std::size_t i) const;

  int label_arity() const { return label_arity_; }
  std::span<const std::int32_t> labels(std::size_t i) const {
    return {labels_.data() + i * label_arity_, static_cast<std::size_t>(label_arity_)};
  }

  int lattice_dim() const { return lattice_dim_; }
  std::span<const std::int64_t> lattice(std::size_t i) const {
    return {lattice_.data() + i * lattice_dim_, static_cast<std::size_t>(lattice_dim_)};
  }

  /// Takes ownership of per-axis coordinate columns and flat label/lattice
  /// arrays (label_arity resp. lattice_dim entries per point).
  static PointSet from_columns(std::vector<std::vector<double>> axes, int label_arity = 0,
                               std::vector<std::int32_t> labels = {}, int lattice_dim = 0,
                               std::vector<std::int64_t> lattice = {});

  void reserve(std::size_t n);
  void push_back(std::span<const double> p, std::span<const std::int32_t> labels = {},
                 std::span<const std::int64_t> lattice = {});
  /// Appends all points of `other` (same layout required).
  void append(const PointSet& other);

  /// Copy translated by `offset`; the extent moves along.
  PointSet translated(std::span<const double> offset) const;

  PointSetMeta meta;

 private:
  int dim_;
  int label_arity_;
  int lattice_dim_;
  std::vector<std::vector<double>> axes_;
  std::vector<std::int32_t> labels_;
  std::vector<std::int64_t> lattice_;
};

struct DeloneStats {
  double r_min = 0.0;  ///< smallest pairwise distance
  double r_max = 0.0;  ///< covering radius estimated on sampled probes
  std::size_t probes = 0;
};

/// Uniform discreteness is measured exactly; relative density is estimated
/// from `probes` uniform random probe points inside the extent shrunk by
/// `margin`.
DeloneStats delone_stats(const PointSet& ps, std::size_t probes = 10000, std::uint64_t seed = 1, double margin = 0.0);

}  // namespace aperiodic
