#include "aperiodic/cutproject/caps.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "aperiodic/core/error.hpp"
#include "aperiodic/core/parallel.hpp"
#include "aperiodic/core/spatial_index.hpp"
#include "aperiodic/simd/kernels.hpp"

namespace aperiodic {
namespace {

constexpr double kAmbiguous = 1e-12;
constexpr std::size_t kBatch = 1024;

struct Shard {
  std::vector<std::vector<double>> par;
  std::vector<std::int64_t> lattice;
  std::size_t ambiguous = 0;
  double closest = std::numeric_limits<double>::infinity();  // to the boundary
};

// Interval of t with lo <= a + b t <= hi.
bool linear_range(double a, double b, double lo, double hi, double& t0, double& t1) {
  if (std::abs(b) < 1e-300) return a >= lo && a <= hi;
  double u = (lo - a) / b;
  double v = (hi - a) / b;
  if (u > v) std::swap(u, v);
  t0 = std::max(t0, u);
  t1 = std::min(t1, v);
  return t0 <= t1;
}

// Enumerates lattice points whose physical projection lies in the closed
// ball of radius R and whose internal projection lies in `box` (inflated by
// `pad`), then calls `accept` on batches.
class Enumerator {
 public:
  Enumerator(const ProjectionScheme& s, const Box& box, double radius, std::span<const double> shift, double pad)
      : s_(s), box_(box), radius_(radius), shift_(shift.begin(), shift.end()), pad_(pad) {
    const int n = s.n;
    lo_.resize(n);
    hi_.resize(n);
    for (int i = 0; i < n; ++i) {
      double lo = -s.E_par.row(i).norm() * radius;
      double hi = -lo;
      for (int j = 0; j < s.codim(); ++j) {
        const double c = s.E_perp(i, j);
        const double a = c * (box.lo[j] - pad);
        const double b = c * (box.hi[j] + pad);
        lo += std::min(a, b);
        hi += std::max(a, b);
      }
      lo_[i] = static_cast<std::int64_t>(std::ceil(lo - shift_[i] - 1e-9));
      hi_[i] = static_cast<std::int64_t>(std::floor(hi - shift_[i] + 1e-9));
    }
    proj_.resize(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) proj_[r * n + c] = r < s.d ? s.P_par(r, c) : s.P_perp(r - s.d, c);
    }
    if (s.codim() == 2 && n >= 3) {
      // First row of the inverse of the internal 2x2 block of the last two coordinates.
      const double a = s.P_perp(0, n - 2), b = s.P_perp(0, n - 1);
      const double c = s.P_perp(1, n - 2), d = s.P_perp(1, n - 1);
      pen_det_ = a * d - b * c;
      if (std::abs(pen_det_) > 1e-9) pen_inv_ = {d / pen_det_, -b / pen_det_};
    }
  }

  std::int64_t first_lo() const { return lo_[0]; }
  std::int64_t first_hi() const { return hi_[0]; }

  /// Candidate count bound (product of box widths).
  double box_size() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lo_.size(); ++i) v *= std::max<double>(0.0, double(hi_[i] - lo_[i] + 1));
    return v;
  }

  /// Visits all candidates with g_0 = first, in lexicographic order.
  /// fn(g, coords) receives n rows of projected coordinates per batch.
  template <class Fn>
  void run(std::int64_t first, Fn&& fn) const {
    const int n = s_.n;
    std::vector<std::int64_t> g(n, 0);
    g[0] = first;
    std::vector<std::vector<double>> w(n, std::vector<double>(kBatch));
    std::vector<std::vector<double>> out(n, std::vector<double>(kBatch));
    std::vector<std::int64_t> lat;
    lat.reserve(kBatch * n);
    std::size_t fill = 0;
    auto flush = [&] {
      if (fill == 0) return;
      std::vector<const double*> in_ptr(n);
      std::vector<double*> out_ptr(n);
      for (int i = 0; i < n; ++i) {
        in_ptr[i] = w[i].data();
        out_ptr[i] = out[i].data();
      }
      simd::project(proj_, n, n, in_ptr, fill, out_ptr);
      fn(out, lat, fill);
      fill = 0;
      lat.clear();
    };
    auto emit_last = [&] {
      // Tighten the last coordinate analytically.
      const int last = n - 1;
      double t0 = -std::numeric_limits<double>::infinity();
      double t1 = std::numeric_limits<double>::infinity();
      std::vector<double> base(n);
      for (int r = 0; r < n; ++r) {
        double a = 0.0;
        for (int c = 0; c < last; ++c) a += proj_[r * n + c] * (static_cast<double>(g[c]) + shift_[c]);
        base[r] = a + proj_[r * n + last] * shift_[last];
      }
      for (int j = 0; j < s_.codim(); ++j) {
        const int r = s_.d + j;
        if (!linear_range(base[r], proj_[r * n + last], box_.lo[j] - pad_ - 1e-9, box_.hi[j] + pad_ + 1e-9, t0, t1)) return;
      }
      // |base_par + b t|^2 <= R^2
      double qa = 0.0, qb = 0.0, qc = -radius_ * radius_;
      for (int r = 0; r < s_.d; ++r) {
        const double b = proj_[r * n + last];
        qa += b * b;
        qb += 2.0 * base[r] * b;
        qc += base[r] * base[r];
      }
      if (qa > 1e-300) {
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc < 0.0) return;
        const double sq = std::sqrt(disc);
        t0 = std::max(t0, (-qb - sq) / (2.0 * qa) - 1e-9);
        t1 = std::min(t1, (-qb + sq) / (2.0 * qa) + 1e-9);
      } else if (qc > 1e-9) {
        return;
      }
      const std::int64_t k0 = std::max<std::int64_t>(lo_[last], static_cast<std::int64_t>(std::ceil(t0)));
      const std::int64_t k1 = std::min<std::int64_t>(hi_[last], static_cast<std::int64_t>(std::floor(t1)));
      for (std::int64_t k = k0; k <= k1; ++k) {
        g[last] = k;
        for (int i = 0; i < n; ++i) w[i][fill] = static_cast<double>(g[i]) + shift_[i];
        lat.insert(lat.end(), g.begin(), g.end());
        if (++fill == kBatch) flush();
      }
    };
    // With two internal coordinates, the penultimate coordinate is bounded
    // by the parallelogram the window box cuts out of the last two.
    const bool parallelogram = s_.codim() == 2 && n >= 3 && std::abs(pen_det_) > 1e-9;
    auto emit_penultimate = [&] {
      std::int64_t k0 = lo_[n - 2], k1 = hi_[n - 2];
      if (parallelogram) {
        double base[2];
        for (int j = 0; j < 2; ++j) {
          const int r = s_.d + j;
          double a = 0.0;
          for (int c = 0; c < n - 2; ++c) a += proj_[r * n + c] * (static_cast<double>(g[c]) + shift_[c]);
          base[j] = a + proj_[r * n + n - 2] * shift_[n - 2] + proj_[r * n + n - 1] * shift_[n - 1];
        }
        double t0 = std::numeric_limits<double>::infinity(), t1 = -t0;
        for (int corner = 0; corner < 4; ++corner) {
          const double y0 = (corner & 1 ? box_.hi[0] + pad_ : box_.lo[0] - pad_) - base[0];
          const double y1 = (corner & 2 ? box_.hi[1] + pad_ : box_.lo[1] - pad_) - base[1];
          const double t = (pen_inv_[0] * y0 + pen_inv_[1] * y1);
          t0 = std::min(t0, t);
          t1 = std::max(t1, t);
        }
        k0 = std::max<std::int64_t>(k0, static_cast<std::int64_t>(std::ceil(t0 - 1e-9)));
        k1 = std::min<std::int64_t>(k1, static_cast<std::int64_t>(std::floor(t1 + 1e-9)));
      }
      for (std::int64_t k = k0; k <= k1; ++k) {
        g[n - 2] = k;
        emit_last();
      }
    };
    if (n <= 2) {
      emit_last();
    } else {
      // Odometer over coordinates 1..n-3.
      for (int i = 1; i < n - 2; ++i) g[i] = lo_[i];
      while (true) {
        emit_penultimate();
        int i = n - 3;
        while (i >= 1 && g[i] == hi_[i]) {
          g[i] = lo_[i];
          --i;
        }
        if (i < 1) break;
        ++g[i];
      }
    }
    flush();
  }

 private:
  const ProjectionScheme& s_;
  Box box_;
  double radius_;
  std::vector<double> shift_;
  double pad_;
  std::vector<std::int64_t> lo_, hi_;
  std::vector<double> proj_;
  double pen_det_ = 0.0;
  std::array<double, 2> pen_inv_{0.0, 0.0};
};

void check_inputs(const ProjectionScheme& s, const Window& window, double radius, std::span<const double> shift) {
  if (s.codim() < 1) fail(ErrorCode::InvalidArgument, "scheme has no internal space");
  if (window.dim() != s.codim()) fail(ErrorCode::InvalidArgument, "window dimension does not match the scheme");
  if (static_cast<int>(shift.size()) != s.n) fail(ErrorCode::InvalidArgument, "shift must have n components");
  if (!(radius >= 0.0)) fail(ErrorCode::InvalidArgument, "radius must be >= 0");
}

}  // namespace

Window canonical_window(const ProjectionScheme& s) {
  if (s.codim() < 1) fail(ErrorCode::InvalidArgument, "canonical window needs codimension >= 1");
  if (s.codim() > 2) fail(ErrorCode::InvalidArgument, "canonical window supports codimension 1 or 2");
  const int n = s.n;
  std::vector<std::array<double, 2>> pts;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    RealVector v(n);
    for (int i = 0; i < n; ++i) v(i) = (mask >> i) & 1 ? 1.0 : 0.0;
    const RealVector y = s.P_perp * v;
    if (s.codim() == 1) {
      lo = std::min(lo, y(0));
      hi = std::max(hi, y(0));
    } else {
      pts.push_back({y(0), y(1)});
    }
  }
  if (s.codim() == 1) return Window::intervals({{lo, hi}}, "canonical");
  return Window::polygon(convex_hull(std::move(pts)), "canonical");
}

std::vector<double> default_shift(int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = 1e-3 * std::exp(static_cast<double>(i + 1));
  return x;
}

PointSet generate_caps(const ProjectionScheme& s, const Window& window, double radius, std::span<const double> shift,
                       const CapsOptions& options) {
  check_inputs(s, window, radius, shift);
  const Box box = window.bounds();
  const double pad = options.singular_tol;
  Enumerator en(s, box, radius, shift, pad);
  const std::int64_t g0_lo = en.first_lo();
  const std::int64_t g0_hi = en.first_hi();
  const std::size_t shards = g0_hi >= g0_lo ? static_cast<std::size_t>(g0_hi - g0_lo + 1) : 0;
  std::vector<Shard> results(shards);
  const int d = s.d;
  const int n = s.n;
  const double r2 = radius * radius;
  parallel_for(shards, options.threads, [&](std::size_t k) {
    Shard& sh = results[k];
    sh.par.assign(d, {});
    std::vector<double> y(s.codim());
    en.run(g0_lo + static_cast<std::int64_t>(k), [&](const std::vector<std::vector<double>>& coords,
                                                     const std::vector<std::int64_t>& lat, std::size_t count) {
      for (std::size_t i = 0; i < count; ++i) {
        double norm2 = 0.0;
        for (int r = 0; r < d; ++r) norm2 += coords[r][i] * coords[r][i];
        if (norm2 > r2) continue;
        for (int j = 0; j < s.codim(); ++j) y[j] = coords[d + j][i];
        const double dist = window.signed_distance(y);
        if (dist > pad) continue;
        sh.closest = std::min(sh.closest, std::abs(dist));
        if (std::abs(dist) < kAmbiguous) {
          ++sh.ambiguous;
          continue;
        }
        if (dist > 0.0) continue;
        for (int r = 0; r < d; ++r) sh.par[r].push_back(coords[r][i]);
        sh.lattice.insert(sh.lattice.end(), lat.begin() + i * n, lat.begin() + (i + 1) * n);
      }
    });
  });

  std::size_t total = 0;
  std::size_t ambiguous = 0;
  double closest = std::numeric_limits<double>::infinity();
  for (const auto& sh : results) {
    total += sh.par.empty() ? 0 : sh.par[0].size();
    ambiguous += sh.ambiguous;
    closest = std::min(closest, sh.closest);
  }
  if (!options.tolerate_singular && closest < options.singular_tol) {
    fail(ErrorCode::SingularShift, "shift is singular: a lattice point projects within " +
                                       std::to_string(options.singular_tol) + " of the window boundary");
  }
  if (total > options.budget) {
    fail(ErrorCode::CapacityExceeded, "cut-and-project set has " + std::to_string(total) + " points, budget " +
                                          std::to_string(options.budget));
  }
  std::vector<std::vector<double>> axes(d);
  std::vector<std::int64_t> lattice;
  for (auto& a : axes) a.reserve(total);
  lattice.reserve(total * n);
  for (auto& sh : results) {
    if (sh.par.empty()) continue;
    for (int r = 0; r < d; ++r) axes[r].insert(axes[r].end(), sh.par[r].begin(), sh.par[r].end());
    lattice.insert(lattice.end(), sh.lattice.begin(), sh.lattice.end());
    sh = Shard{};
  }
  if (total == 0) {
    for (auto& a : axes) a.clear();
  }
  PointSet ps = PointSet::from_columns(std::move(axes), 0, {}, n, std::move(lattice));
  ps.meta.system = s.name;
  ps.meta.provenance = "caps";
  ps.meta.extent = Region::ball(std::vector<double>(d, 0.0), radius);
  ps.meta.radius = radius;
  ps.meta.shift.assign(shift.begin(), shift.end());
  ps.meta.window_id = window.id();
  ps.meta.boundary_ambiguous = ambiguous;
  ps.meta.expansion = s.A_par;
  return ps;
}

bool is_singular(std::span<const double> shift, const ProjectionScheme& s, const Window& window, double search_radius,
                 double tol) {
  check_inputs(s, window, search_radius, shift);
  Enumerator en(s, window.bounds(), search_radius, shift, tol);
  const double r2 = search_radius * search_radius;
  bool found = false;
  std::vector<double> y(s.codim());
  for (std::int64_t g0 = en.first_lo(); g0 <= en.first_hi() && !found; ++g0) {
    en.run(g0, [&](const std::vector<std::vector<double>>& coords, const std::vector<std::int64_t>&, std::size_t count) {
      for (std::size_t i = 0; i < count && !found; ++i) {
        double norm2 = 0.0;
        for (int r = 0; r < s.d; ++r) norm2 += coords[r][i] * coords[r][i];
        if (norm2 > r2) continue;
        for (int j = 0; j < s.codim(); ++j) y[j] = coords[s.d + j][i];
        if (std::abs(window.signed_distance(y)) < tol) found = true;
      }
    });
  }
  return found;
}

RenormalizationReport verify_renormalization(const ProjectionScheme& s, const Window& window, double radius,
                                             std::span<const double> shift, const Window* right_window, int threads) {
  check_inputs(s, window, radius, shift);
  const int d = s.d;
  const double slack = 1.0;
  const double inv_norm = Eigen::JacobiSVD<RealMatrix>(s.A_par.inverse()).singularValues()(0);
  CapsOptions opt;
  opt.threads = threads;

  // Left: A_par applied to Lambda_x(K), generated on the preimage ball.
  const PointSet raw = generate_caps(s, window, radius * inv_norm + slack, shift, opt);
  PointSet left(d);
  {
    std::vector<std::vector<double>> axes(d, std::vector<double>(raw.size()));
    for (std::size_t i = 0; i < raw.size(); ++i) {
      for (int r = 0; r < d; ++r) {
        double v = 0.0;
        for (int c = 0; c < d; ++c) v += s.A_par(r, c) * raw.coord(i, c);
        axes[r][i] = v;
      }
    }
    left = PointSet::from_columns(std::move(axes));
  }

  // Right: Lambda_{A x}(A_perp K).
  std::vector<double> ax(s.n, 0.0);
  for (int r = 0; r < s.n; ++r) {
    for (int c = 0; c < s.n; ++c) ax[r] += static_cast<double>(s.A_int(r, c)) * shift[c];
  }
  const Window scaled = right_window ? *right_window : window.transformed(s.A_perp);
  const PointSet right = generate_caps(s, scaled, radius + slack, ax, opt);

  RenormalizationReport rep;
  rep.radius = radius;
  auto inside = [&](const PointSet& ps, std::size_t i) {
    double n2 = 0.0;
    for (int r = 0; r < d; ++r) n2 += ps.coord(i, r) * ps.coord(i, r);
    return n2 <= radius * radius;
  };
  auto directed = [&](const PointSet& from, const PointSet& to, std::size_t& count) {
    double worst = 0.0;
    if (to.empty()) {
      for (std::size_t i = 0; i < from.size(); ++i) {
        if (inside(from, i)) worst = std::numeric_limits<double>::infinity();
      }
      return worst;
    }
    GridIndex index(to, default_cell_size(to));
    for (std::size_t i = 0; i < from.size(); ++i) {
      if (!inside(from, i)) continue;
      ++count;
      const auto hit = index.nearest(from.point(i));
      worst = std::max(worst, hit->second);
    }
    return worst;
  };
  rep.mismatch = std::max(directed(left, right, rep.left_points), directed(right, left, rep.right_points));
  rep.pass = rep.mismatch <= 1e-7;
  return rep;
}

double caps_density(const ProjectionScheme& s, const Window& window) { return s.basis_det * window.measure(); }

double caps_patch_frequency(const ProjectionScheme& s, const Window& window,
                            const std::vector<std::vector<std::int64_t>>& deltas) {
  Window acc = window;
  for (const auto& delta : deltas) {
    if (static_cast<int>(delta.size()) != s.n) fail(ErrorCode::InvalidArgument, "lattice offset must have n components");
    RealVector v(s.n);
    for (int i = 0; i < s.n; ++i) v(i) = static_cast<double>(delta[i]);
    const RealVector y = -(s.P_perp * v);
    acc = acc.intersect(window.translated({y.data(), static_cast<std::size_t>(y.size())}));
    if (acc.empty()) return 0.0;
  }
  return s.basis_det * acc.measure();
}

}  // namespace aperiodic
