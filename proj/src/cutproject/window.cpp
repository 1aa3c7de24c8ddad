#include "aperiodic/cutproject/window.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aperiodic/core/error.hpp"

namespace aperiodic {
namespace {

using P2 = std::array<double, 2>;

double cross(const P2& o, const P2& a, const P2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double polygon_area(const std::vector<P2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const P2& a = v[i];
    const P2& b = v[(i + 1) % v.size()];
    s += a[0] * b[1] - a[1] * b[0];
  }
  return 0.5 * s;
}

double segment_distance(const P2& p, const P2& a, const P2& b) {
  const double dx = b[0] - a[0];
  const double dy = b[1] - a[1];
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p[0] - (a[0] + t * dx), p[1] - (a[1] + t * dy));
}

}  // namespace

std::vector<P2> convex_hull(std::vector<P2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<P2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 1e-14) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-14) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

Window Window::intervals(std::vector<std::pair<double, double>> parts, std::string id) {
  if (parts.empty()) fail(ErrorCode::InvalidArgument, "window: no intervals");
  std::sort(parts.begin(), parts.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& [a, b] : parts) {
    if (!(b > a)) fail(ErrorCode::InvalidArgument, "window: interval must have positive length");
    if (!merged.empty() && a <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, b);
    } else {
      merged.emplace_back(a, b);
    }
  }
  Window w;
  w.kind_ = Kind::IntervalUnion;
  w.parts_ = std::move(merged);
  w.id_ = std::move(id);
  return w;
}

Window Window::polygon(std::vector<P2> vertices, std::string id) {
  if (vertices.size() < 3) fail(ErrorCode::InvalidArgument, "window: polygon needs at least 3 vertices");
  if (polygon_area(vertices) < 0.0) std::reverse(vertices.begin(), vertices.end());
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]) < -1e-12) {
      fail(ErrorCode::InvalidArgument, "window: polygon is not convex");
    }
  }
  if (!(polygon_area(vertices) > 0.0)) fail(ErrorCode::InvalidArgument, "window: polygon has no interior");
  Window w;
  w.kind_ = Kind::ConvexPolygon;
  w.vertices_ = std::move(vertices);
  w.id_ = std::move(id);
  return w;
}

double Window::signed_distance(std::span<const double> y) const {
  if (kind_ == Kind::IntervalUnion) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : parts_) {
      if (y[0] >= a && y[0] <= b) return -std::min(y[0] - a, b - y[0]);
      best = std::min(best, std::min(std::abs(y[0] - a), std::abs(y[0] - b)));
    }
    return best;
  }
  const P2 p{y[0], y[1]};
  const std::size_t n = vertices_.size();
  bool inside = true;
  double dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const P2& a = vertices_[i];
    const P2& b = vertices_[(i + 1) % n];
    if (cross(a, b, p) < 0.0) inside = false;
    dist = std::min(dist, segment_distance(p, a, b));
  }
  return inside ? -dist : dist;
}

Box Window::bounds() const {
  Box b;
  if (kind_ == Kind::IntervalUnion) {
    b.lo = {parts_.front().first};
    b.hi = {parts_.back().second};
    return b;
  }
  b.lo = {vertices_[0][0], vertices_[0][1]};
  b.hi = b.lo;
  for (const auto& v : vertices_) {
    for (int k = 0; k < 2; ++k) {
      b.lo[k] = std::min(b.lo[k], v[k]);
      b.hi[k] = std::max(b.hi[k], v[k]);
    }
  }
  return b;
}

double Window::measure() const {
  if (kind_ == Kind::IntervalUnion) {
    double s = 0.0;
    for (const auto& [a, b] : parts_) s += b - a;
    return s;
  }
  return std::abs(polygon_area(vertices_));
}

bool Window::empty() const { return measure() <= 0.0; }

Window Window::transformed(const RealMatrix& m) const {
  if (m.rows() != dim() || m.cols() != dim()) fail(ErrorCode::InvalidArgument, "window transform dimension mismatch");
  Window w;
  w.kind_ = kind_;
  w.id_ = id_;
  if (kind_ == Kind::IntervalUnion) {
    const double s = m(0, 0);
    if (s == 0.0) fail(ErrorCode::InvalidArgument, "window transform must be invertible");
    std::vector<std::pair<double, double>> parts;
    for (const auto& [a, b] : parts_) parts.emplace_back(std::min(s * a, s * b), std::max(s * a, s * b));
    return intervals(std::move(parts), id_);
  }
  std::vector<P2> v;
  for (const auto& p : vertices_) v.push_back({m(0, 0) * p[0] + m(0, 1) * p[1], m(1, 0) * p[0] + m(1, 1) * p[1]});
  return polygon(std::move(v), id_);
}

Window Window::translated(std::span<const double> offset) const {
  Window w = *this;
  if (kind_ == Kind::IntervalUnion) {
    for (auto& [a, b] : w.parts_) {
      a += offset[0];
      b += offset[0];
    }
  } else {
    for (auto& v : w.vertices_) {
      v[0] += offset[0];
      v[1] += offset[1];
    }
  }
  return w;
}

Window Window::intersect(const Window& other) const {
  if (other.kind_ != kind_) fail(ErrorCode::InvalidArgument, "window intersection needs matching kinds");
  Window w;
  w.kind_ = kind_;
  w.id_ = id_;
  if (kind_ == Kind::IntervalUnion) {
    for (const auto& [a, b] : parts_) {
      for (const auto& [c, d] : other.parts_) {
        const double lo = std::max(a, c);
        const double hi = std::min(b, d);
        if (hi > lo) w.parts_.emplace_back(lo, hi);
      }
    }
    std::sort(w.parts_.begin(), w.parts_.end());
    return w;
  }
  // Sutherland-Hodgman clipping of this polygon by the other's edges.
  std::vector<P2> poly = vertices_;
  const std::size_t m = other.vertices_.size();
  for (std::size_t e = 0; e < m && !poly.empty(); ++e) {
    const P2& a = other.vertices_[e];
    const P2& b = other.vertices_[(e + 1) % m];
    std::vector<P2> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const P2& p = poly[i];
      const P2& q = poly[(i + 1) % poly.size()];
      const double sp = cross(a, b, p);
      const double sq = cross(a, b, q);
      if (sp >= 0.0) out.push_back(p);
      if ((sp >= 0.0) != (sq >= 0.0)) {
        const double t = sp / (sp - sq);
        out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
      }
    }
    poly = std::move(out);
  }
  w.vertices_ = poly.size() >= 3 ? convex_hull(poly) : std::vector<P2>{};
  return w;
}

}  // namespace aperiodic
