#include "aperiodic/diffraction/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <sstream>

#include "aperiodic/core/error.hpp"
#include "aperiodic/core/format.hpp"
#include "aperiodic/core/parallel.hpp"
#include "aperiodic/deviation/patches.hpp"
#include "aperiodic/simd/kernels.hpp"

namespace aperiodic {

namespace {

constexpr std::size_t kBlock = 2048;

simd::PhaseSum pairwise(const std::vector<simd::PhaseSum>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return v[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  const auto a = pairwise(v, lo, mid);
  const auto b = pairwise(v, mid, hi);
  return {a.re + b.re, a.im + b.im};
}

}  // namespace

std::vector<double> KGrid::at(std::size_t i) const {
  if (dim == 1) return {kx[i]};
  return {kx[i], ky[i]};
}

KGrid line_grid(double k_min, double k_max, std::size_t count) {
  if (count < 2 || !(k_max > k_min)) fail(ErrorCode::InvalidArgument, "line grid needs count >= 2 and k_max > k_min");
  KGrid g;
  g.kind = "line";
  g.shape = {count};
  g.resolution = (k_max - k_min) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) g.kx.push_back(k_min + g.resolution * static_cast<double>(i));
  g.kx.back() = k_max;
  return g;
}

KGrid rect_grid(double kx_min, double kx_max, std::size_t nx, double ky_min, double ky_max, std::size_t ny) {
  if (nx < 2 || ny < 2 || !(kx_max > kx_min) || !(ky_max > ky_min)) {
    fail(ErrorCode::InvalidArgument, "rect grid needs at least 2 x 2 points and positive ranges");
  }
  KGrid g;
  g.dim = 2;
  g.kind = "rect";
  g.shape = {nx, ny};
  const double dx = (kx_max - kx_min) / static_cast<double>(nx - 1);
  const double dy = (ky_max - ky_min) / static_cast<double>(ny - 1);
  g.resolution = std::max(dx, dy);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      g.kx.push_back(kx_min + dx * static_cast<double>(i));
      g.ky.push_back(ky_min + dy * static_cast<double>(j));
    }
  }
  return g;
}

KGrid polar_grid(double k_max, std::size_t radial, std::size_t angular, double phase) {
  if (radial < 1 || angular < 1 || !(k_max > 0.0)) fail(ErrorCode::InvalidArgument, "bad polar grid");
  KGrid g;
  g.dim = 2;
  g.kind = "polar";
  g.shape = {radial, angular};
  g.resolution = k_max / static_cast<double>(radial);
  g.kx.push_back(0.0);
  g.ky.push_back(0.0);
  for (std::size_t r = 1; r <= radial; ++r) {
    const double rho = k_max * static_cast<double>(r) / static_cast<double>(radial);
    for (std::size_t a = 0; a < angular; ++a) {
      const double theta = phase + 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(angular);
      g.kx.push_back(rho * std::cos(theta));
      g.ky.push_back(rho * std::sin(theta));
    }
  }
  return g;
}

std::string IntensityMap::to_csv() const {
  std::ostringstream out;
  out << (grid.dim == 1 ? "kx,intensity\n" : "kx,ky,intensity\n");
  for (std::size_t i = 0; i < I.size(); ++i) {
    out << format_double(grid.kx[i]) << ',';
    if (grid.dim == 2) out << format_double(grid.ky[i]) << ',';
    out << format_double(I[i]) << '\n';
  }
  return out.str();
}

IntensityMap intensity(const PointSet& ps, const Region& region, const KGrid& grid, double budget, int threads) {
  if (ps.dim() != grid.dim || grid.dim > 2) fail(ErrorCode::InvalidArgument, "k grid dimension differs from the point set");
  require_inside_extent(ps, region);
  std::vector<double> xs, ys;
  std::vector<double> p(ps.dim());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (int a = 0; a < ps.dim(); ++a) p[a] = ps.coord(i, a);
    if (!region.contains(p)) continue;
    xs.push_back(p[0]);
    if (ps.dim() == 2) ys.push_back(p[1]);
  }
  const std::size_t n = xs.size();
  if (static_cast<double>(grid.size()) * static_cast<double>(n) > budget) {
    fail(ErrorCode::CapacityExceeded, "intensity needs " + std::to_string(grid.size()) + " x " + std::to_string(n) +
                                          " terms, over the budget; use a coarser k grid or a smaller T");
  }
  IntensityMap out;
  out.grid = grid;
  out.vol = region.volume();
  out.N = n;
  out.I0 = static_cast<double>(n) * static_cast<double>(n) / out.vol;
  out.I.assign(grid.size(), 0.0);
  const std::size_t blocks = std::max<std::size_t>(1, (n + kBlock - 1) / kBlock);
  parallel_for(grid.size(), threads, [&](std::size_t g) {
    const double kx = grid.kx[g];
    const double ky = grid.dim == 2 ? grid.ky[g] : 0.0;
    std::vector<simd::PhaseSum> part(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
      const std::size_t lo = b * kBlock;
      const std::size_t len = std::min(n, lo + kBlock) - std::min(n, lo);
      std::span<const double> x(xs.data() + std::min(n, lo), len);
      std::span<const double> y = ys.empty() ? std::span<const double>() : std::span<const double>(ys.data() + lo, len);
      part[b] = simd::phase_sum(x, y, kx, ky);
    }
    const auto s = pairwise(part, 0, blocks);
    out.I[g] = (s.re * s.re + s.im * s.im) / out.vol;
  });
  return out;
}

IntensityMap intensity(const PointSet& ps, const AveragingFamily& family, double T, const KGrid& grid, double budget,
                       int threads) {
  IntensityMap out = intensity(ps, family.region(T), grid, budget, threads);
  out.T = T;
  return out;
}

double symmetry_check(const IntensityMap& map, int order) {
  if (order < 1) fail(ErrorCode::InvalidArgument, "rotation order must be >= 1");
  const KGrid& g = map.grid;
  if (g.dim == 1 && order > 2) fail(ErrorCode::InvalidArgument, "one-dimensional maps only have orders 1 and 2");
  const double c = std::cos(2.0 * std::numbers::pi / order);
  const double s = std::sin(2.0 * std::numbers::pi / order);
  std::vector<std::size_t> order_x(g.size());
  std::iota(order_x.begin(), order_x.end(), 0);
  std::sort(order_x.begin(), order_x.end(), [&](std::size_t a, std::size_t b) { return g.kx[a] < g.kx[b]; });
  auto lookup = [&](double x, double y) -> std::size_t {
    const double tol = 1e-9 * std::max(1.0, std::hypot(x, y));
    auto it = std::lower_bound(order_x.begin(), order_x.end(), x - tol,
                               [&](std::size_t i, double v) { return g.kx[i] < v; });
    for (; it != order_x.end() && g.kx[*it] <= x + tol; ++it) {
      if (g.dim == 1 || std::abs(g.ky[*it] - y) <= tol) return *it;
    }
    fail(ErrorCode::GridNotClosed, "k grid is not closed under rotation by 2pi/" + std::to_string(order));
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::size_t j = i;
    if (order > 1) {
      if (g.dim == 1) {
        j = lookup(-g.kx[i], 0.0);
      } else {
        j = lookup(c * g.kx[i] - s * g.ky[i], s * g.kx[i] + c * g.ky[i]);
      }
    }
    worst = std::max(worst, std::abs(map.I[j] - map.I[i]));
  }
  return map.I0 > 0.0 ? worst / map.I0 : 0.0;
}

std::vector<Peak> strongest_peaks(const IntensityMap& map, std::size_t count, double min_rel, double min_separation) {
  const KGrid& g = map.grid;
  std::vector<std::size_t> maxima;
  auto value = [&](std::ptrdiff_t i) { return map.I[static_cast<std::size_t>(i)]; };
  if (g.kind == "line") {
    const auto n = static_cast<std::ptrdiff_t>(g.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const bool left = i == 0 || value(i) >= value(i - 1);
      const bool right = i + 1 == n || value(i) > value(i + 1);
      if (left && right) maxima.push_back(static_cast<std::size_t>(i));
    }
  } else if (g.kind == "rect") {
    const auto nx = static_cast<std::ptrdiff_t>(g.shape[0]);
    const auto ny = static_cast<std::ptrdiff_t>(g.shape[1]);
    for (std::ptrdiff_t j = 0; j < ny; ++j) {
      for (std::ptrdiff_t i = 0; i < nx; ++i) {
        const std::ptrdiff_t self = j * nx + i;
        bool peak = true;
        for (std::ptrdiff_t dj = -1; dj <= 1 && peak; ++dj) {
          for (std::ptrdiff_t di = -1; di <= 1 && peak; ++di) {
            const std::ptrdiff_t ii = i + di, jj = j + dj;
            if ((di == 0 && dj == 0) || ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
            const std::ptrdiff_t other = jj * nx + ii;
            peak = other < self ? value(self) >= value(other) : value(self) > value(other);
          }
        }
        if (peak) maxima.push_back(static_cast<std::size_t>(self));
      }
    }
  } else {
    fail(ErrorCode::InvalidArgument, "peak search needs a line or rect grid");
  }
  std::erase_if(maxima, [&](std::size_t i) { return map.I[i] < min_rel * map.I0; });
  std::stable_sort(maxima.begin(), maxima.end(), [&](std::size_t a, std::size_t b) { return map.I[a] > map.I[b]; });
  std::vector<Peak> out;
  for (std::size_t i : maxima) {
    if (out.size() == count) break;
    const std::vector<double> k = g.at(i);
    bool shadowed = false;
    for (const auto& p : out) {
      double dist = 0.0;
      for (std::size_t a = 0; a < k.size(); ++a) dist += (p.k[a] - k[a]) * (p.k[a] - k[a]);
      shadowed = shadowed || std::sqrt(dist) < min_separation;
    }
    if (!shadowed) out.push_back({k, map.I[i], {}});
  }
  return out;
}

std::vector<Peak> bragg_oracle(const ProjectionScheme& s, const Window& window, double k_max, int h_radius) {
  if (s.codim() != 1) fail(ErrorCode::WrongCodimension, "Bragg oracle needs a codimension-1 scheme");
  const int n = s.n;
  const double vol = window.measure();
  std::vector<Peak> out;
  std::vector<std::int64_t> h(n, -h_radius);
  for (;;) {
    RealVector hv(n);
    for (int i = 0; i < n; ++i) hv[i] = static_cast<double>(h[i]);
    const RealVector k = s.E_par.transpose() * hv;
    if (k.norm() <= k_max) {
      const double q = (s.E_perp.transpose() * hv)[0];
      std::complex<double> ft = 0.0;
      for (const auto& [a, b] : window.parts()) {
        if (q == 0.0) {
          ft += b - a;
        } else {
          const std::complex<double> ia(0.0, -2.0 * std::numbers::pi * q * a);
          const std::complex<double> ib(0.0, -2.0 * std::numbers::pi * q * b);
          ft += (std::exp(ia) - std::exp(ib)) / std::complex<double>(0.0, 2.0 * std::numbers::pi * q);
        }
      }
      out.push_back({{k.data(), k.data() + k.size()}, std::norm(ft) / (vol * vol), h});
    }
    int i = 0;
    while (i < n && h[i] == h_radius) h[i++] = -h_radius;
    if (i == n) break;
    ++h[i];
  }
  std::stable_sort(out.begin(), out.end(), [](const Peak& a, const Peak& b) { return a.intensity > b.intensity; });
  return out;
}

}  // namespace aperiodic
