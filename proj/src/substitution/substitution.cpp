#include "aperiodic/substitution/substitution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "aperiodic/core/error.hpp"
#include "aperiodic/core/parallel.hpp"

namespace aperiodic {
namespace {

constexpr std::int64_t kSat = std::numeric_limits<std::int64_t>::max();

std::int64_t sat_add(std::int64_t a, std::int64_t b) { return a > kSat - b ? kSat : a + b; }
std::int64_t sat_mul(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSat / b ? kSat : a * b;
}

// Dominant eigenpair of a primitive nonnegative matrix: dense solver for the
// start, then power iteration to settle the last digits.
std::pair<RealVector, double> perron(const RealMatrix& m) {
  Eigen::EigenSolver<RealMatrix> solver(m);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < m.rows(); ++i) {
    if (solver.eigenvalues()(i).real() > solver.eigenvalues()(best).real()) best = i;
  }
  RealVector v = solver.eigenvectors().col(best).real().cwiseAbs();
  if (!(v.sum() > 0.0)) v = RealVector::Ones(m.rows());
  v /= v.sum();
  double lambda = solver.eigenvalues()(best).real();
  for (int it = 0; it < 200; ++it) {
    RealVector w = m * v;
    lambda = w.sum();
    w /= lambda;
    const double change = (w - v).cwiseAbs().maxCoeff();
    v = w;
    if (change < 1e-17) break;
  }
  return {v, lambda};
}

}  // namespace

int SymbolicRule::index_of(std::string_view symbol) const {
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (alphabet[i] == symbol) return static_cast<int>(i);
  }
  return -1;
}

void SymbolicRule::validate() const {
  if (alphabet.empty()) fail(ErrorCode::InvalidArgument, "substitution: empty alphabet");
  if (images.size() != alphabet.size()) fail(ErrorCode::InvalidArgument, "substitution: one image per symbol required");
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    for (std::size_t j = i + 1; j < alphabet.size(); ++j) {
      if (alphabet[i] == alphabet[j]) fail(ErrorCode::InvalidArgument, "substitution: duplicate symbol " + alphabet[i]);
    }
  }
  for (const auto& w : images) {
    if (w.empty()) fail(ErrorCode::InvalidArgument, "substitution: empty image word");
    for (int s : w) {
      if (s < 0 || s >= size()) fail(ErrorCode::InvalidArgument, "substitution: image symbol outside alphabet");
    }
  }
}

SubstitutionRule1D SubstitutionRule1D::make(std::string name, std::vector<std::string> alphabet,
                                            std::vector<std::vector<int>> images) {
  SubstitutionRule1D r;
  r.name = std::move(name);
  r.alphabet = std::move(alphabet);
  r.images = std::move(images);
  r.SymbolicRule::validate();
  const TileLengths tl = solve_tile_lengths(incidence_matrix(r));
  r.tile_lengths = tl.lengths;
  r.expansion_factor = tl.expansion_factor;
  r.aperiodic = r.alphabet.size() > 1;
  r.validate();
  return r;
}

SubstitutionRule1D SubstitutionRule1D::from_words(std::string name, std::vector<std::string> alphabet,
                                                  const std::vector<std::string>& words) {
  SymbolicRule tmp;
  tmp.alphabet = alphabet;
  std::vector<std::vector<int>> images;
  for (const auto& w : words) {
    std::istringstream in(w);
    std::vector<int> img;
    for (std::string tok; in >> tok;) {
      const int k = tmp.index_of(tok);
      if (k < 0) fail(ErrorCode::InvalidArgument, "substitution: unknown symbol '" + tok + "'");
      img.push_back(k);
    }
    images.push_back(std::move(img));
  }
  return make(std::move(name), std::move(alphabet), std::move(images));
}

void SubstitutionRule1D::validate() const {
  SymbolicRule::validate();
  if (tile_lengths.size() != alphabet.size()) fail(ErrorCode::InvalidArgument, "substitution: one length per symbol");
  if (!(expansion_factor > 1.0)) fail(ErrorCode::InvalidArgument, "substitution: expansion factor must exceed 1");
  for (std::size_t a = 0; a < alphabet.size(); ++a) {
    if (!(tile_lengths[a] > 0.0)) fail(ErrorCode::InvalidArgument, "substitution: tile lengths must be positive");
    double s = 0.0;
    for (int b : images[a]) s += tile_lengths[b];
    const double want = expansion_factor * tile_lengths[a];
    if (std::abs(s - want) > 1e-9 * want) {
      fail(ErrorCode::InvalidArgument, "substitution: lengths are not self-similar for symbol " + alphabet[a]);
    }
  }
}

IntMatrix incidence_matrix(const SymbolicRule& rule) {
  rule.validate();
  const int m = rule.size();
  IntMatrix out = IntMatrix::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    for (int i : rule.images[j]) out(i, j) += 1;
  }
  return out;
}

bool is_primitive(const IntMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) fail(ErrorCode::InvalidArgument, "is_primitive: square matrix required");
  if ((m.array() < 0).any()) fail(ErrorCode::InvalidArgument, "is_primitive: entries must be nonnegative");
  const Eigen::Index n = m.rows();
  using Bool = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
  const Bool base = (m.array() > 0).cast<int>();
  Bool p = base;
  const std::int64_t bound = (n - 1) * (n - 1) + 1;
  for (std::int64_t l = 1; l <= bound; ++l) {
    if ((p.array() > 0).all()) return true;
    p = ((p * base).array() > 0).cast<int>();
  }
  return false;
}

TileLengths solve_tile_lengths(const IntMatrix& m) {
  if (!is_primitive(m)) fail(ErrorCode::NotPrimitive, "incidence matrix is not primitive");
  const RealMatrix mt = m.cast<double>().transpose();
  auto [v, xi] = perron(mt);
  v /= v.minCoeff();
  const double residual = (mt * v - xi * v).cwiseAbs().maxCoeff();
  if (residual > 1e-9 * xi) fail(ErrorCode::IllConditioned, "tile length eigenvector residual too large");
  return {std::vector<double>(v.data(), v.data() + v.size()), xi};
}

std::vector<double> letter_frequencies(const IntMatrix& m) {
  if (!is_primitive(m)) fail(ErrorCode::NotPrimitive, "incidence matrix is not primitive");
  const RealVector v = perron(m.cast<double>()).first;
  return {v.data(), v.data() + v.size()};
}

std::vector<std::int64_t> letter_counts(const IntMatrix& m, int seed, int n) {
  const Eigen::Index k = m.rows();
  std::vector<std::int64_t> v(k, 0);
  v[seed] = 1;
  for (int it = 0; it < n; ++it) {
    std::vector<std::int64_t> w(k, 0);
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) w[i] = sat_add(w[i], sat_mul(m(i, j), v[j]));
    }
    v = std::move(w);
  }
  return v;
}

int max_iterations(const SubstitutionRule1D& rule, int seed, std::size_t budget, int power) {
  const IntMatrix m = incidence_matrix(rule);
  int n = 0;
  for (;; ++n) {
    const auto c = letter_counts(m, seed, n + 1);
    std::int64_t total = 0;
    for (auto x : c) total = sat_add(total, x);
    std::int64_t prod = 1;
    for (int p = 0; p < power; ++p) prod = sat_mul(prod, total);
    if (prod > static_cast<std::int64_t>(budget) || n > 200) return n;
  }
}

Patch1D iterate_1d(const SubstitutionRule1D& rule, int seed, int n, std::size_t budget) {
  if (n < 0) fail(ErrorCode::InvalidArgument, "iteration count must be >= 0");
  if (seed < 0 || seed >= rule.size()) fail(ErrorCode::InvalidArgument, "seed symbol outside alphabet");
  const auto counts = letter_counts(incidence_matrix(rule), seed, n);
  std::int64_t total = 0;
  for (auto c : counts) total = sat_add(total, c);
  if (total > static_cast<std::int64_t>(budget)) {
    fail(ErrorCode::CapacityExceeded, "substitution image has " + std::to_string(total) + " letters, budget " +
                                          std::to_string(budget));
  }
  std::vector<int> word{seed};
  for (int it = 0; it < n; ++it) {
    std::vector<int> next;
    next.reserve(static_cast<std::size_t>(word.size() * rule.expansion_factor) + 16);
    for (int s : word) next.insert(next.end(), rule.images[s].begin(), rule.images[s].end());
    word = std::move(next);
  }
  // Positions from per-symbol prefix counts keep rounding independent of the
  // word length.
  Patch1D patch;
  patch.left.reserve(word.size());
  std::vector<std::int64_t> seen(rule.size(), 0);
  auto position = [&] {
    double x = 0.0;
    for (int s = 0; s < rule.size(); ++s) x += static_cast<double>(seen[s]) * rule.tile_lengths[s];
    return x;
  };
  for (int s : word) {
    patch.left.push_back(position());
    ++seen[s];
  }
  patch.total_length = position();
  patch.symbols = std::move(word);
  return patch;
}

PointSet point_set_1d(const SubstitutionRule1D& rule, int n, int seed, std::size_t budget) {
  const Patch1D patch = iterate_1d(rule, seed, n, budget);
  PointSet ps(1, 1);
  ps.reserve(patch.left.size());
  for (std::size_t i = 0; i < patch.left.size(); ++i) {
    const double x = patch.left[i];
    const std::int32_t label = patch.symbols[i];
    ps.push_back({&x, 1}, {&label, 1});
  }
  ps.meta.system = rule.name;
  ps.meta.provenance = "substitution";
  ps.meta.extent = Region::box(Box{{0.0}, {patch.total_length}});
  ps.meta.aperiodic = rule.aperiodic;
  ps.meta.iterations = n;
  ps.meta.expansion = RealMatrix::Constant(1, 1, rule.expansion_factor);
  ps.meta.label_alphabets = {rule.alphabet};
  return ps;
}

PointSet product_point_set(const ProductSubstitution& prod, int n, std::size_t budget, int threads) {
  const int d = prod.d();
  if (d < 1) fail(ErrorCode::InvalidArgument, "product substitution needs at least one factor");
  std::vector<Patch1D> axes;
  std::int64_t total = 1;
  for (const auto& f : prod.factors) {
    f.validate();
    axes.push_back(iterate_1d(f, 0, n, budget));
    total = sat_mul(total, static_cast<std::int64_t>(axes.back().left.size()));
  }
  if (total > static_cast<std::int64_t>(budget)) {
    fail(ErrorCode::CapacityExceeded, "product point set has " + std::to_string(total) + " points, budget " +
                                          std::to_string(budget));
  }
  const std::size_t count = static_cast<std::size_t>(total);
  // Lexicographic order, last axis fastest.
  std::vector<std::vector<double>> coords(d, std::vector<double>(count));
  std::vector<std::int32_t> labels(count * d);
  const std::size_t outer = axes[0].left.size();
  const std::size_t stride = count / outer;
  parallel_for(outer, threads, [&](std::size_t i0) {
    for (std::size_t r = 0; r < stride; ++r) {
      const std::size_t idx = i0 * stride + r;
      std::size_t rem = idx;
      for (int k = d - 1; k >= 0; --k) {
        const std::size_t len = axes[k].left.size();
        const std::size_t j = rem % len;
        rem /= len;
        coords[k][idx] = axes[k].left[j];
        labels[idx * d + k] = axes[k].symbols[j];
      }
    }
  });
  PointSet ps = PointSet::from_columns(std::move(coords), d, std::move(labels));
  Box ext;
  RealMatrix expansion = RealMatrix::Zero(d, d);
  std::string name;
  bool aperiodic = false;
  for (int k = 0; k < d; ++k) {
    ext.lo.push_back(0.0);
    ext.hi.push_back(axes[k].total_length);
    expansion(k, k) = prod.factors[k].expansion_factor;
    name += (k ? "x" : "") + prod.factors[k].name;
    aperiodic = aperiodic || prod.factors[k].aperiodic;
    ps.meta.label_alphabets.push_back(prod.factors[k].alphabet);
  }
  ps.meta.system = name;
  ps.meta.provenance = "product";
  ps.meta.extent = Region::box(std::move(ext));
  ps.meta.aperiodic = aperiodic;
  ps.meta.iterations = n;
  ps.meta.expansion = std::move(expansion);
  return ps;
}

}  // namespace aperiodic
