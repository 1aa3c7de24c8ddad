#include "aperiodic/core/region.hpp"

#include <cmath>
#include <numbers>

#include "aperiodic/core/error.hpp"

namespace aperiodic {

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= (hi[i] - lo[i]);
  return v;
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

Region Region::box(Box b) {
  const int d = b.dim();
  return box(RealMatrix::Identity(d, d), std::move(b));
}

Region Region::box(RealMatrix frame, Box b) {
  const int d = b.dim();
  if (d == 0 || static_cast<int>(b.hi.size()) != d || frame.rows() != d || frame.cols() != d) {
    fail(ErrorCode::InvalidArgument, "region box/frame dimension mismatch");
  }
  for (int i = 0; i < d; ++i) {
    if (!(b.hi[i] > b.lo[i])) fail(ErrorCode::InvalidArgument, "region box must have positive extent");
  }
  Region r;
  r.kind_ = Kind::Box;
  r.dim_ = d;
  r.box_ = std::move(b);
  r.axis_aligned_ = frame.isIdentity(0.0);
  r.frame_inv_ = r.axis_aligned_ ? frame : RealMatrix(frame.inverse());
  r.frame_ = std::move(frame);
  return r;
}

Region Region::ball(std::vector<double> center, double radius) {
  if (center.empty() || !(radius >= 0.0)) fail(ErrorCode::InvalidArgument, "bad ball region");
  Region r;
  r.kind_ = Kind::Ball;
  r.dim_ = static_cast<int>(center.size());
  r.center_ = std::move(center);
  r.radius_ = radius;
  return r;
}

bool Region::contains(std::span<const double> p) const {
  if (kind_ == Kind::Ball) {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
      const double t = p[i] - center_[i];
      s += t * t;
    }
    return s <= radius_ * radius_;
  }
  if (axis_aligned_) {
    for (int i = 0; i < dim_; ++i) {
      if (p[i] < box_.lo[i] || !(p[i] < box_.hi[i])) return false;
    }
    return true;
  }
  for (int i = 0; i < dim_; ++i) {
    double u = 0.0;
    for (int j = 0; j < dim_; ++j) u += frame_inv_(i, j) * p[j];
    if (u < box_.lo[i] || !(u < box_.hi[i])) return false;
  }
  return true;
}

double Region::volume() const {
  if (kind_ == Kind::Ball) return unit_ball_volume(dim_) * std::pow(radius_, dim_);
  return std::abs(frame_.determinant()) * box_.volume();
}

std::vector<std::vector<double>> Region::corners() const {
  std::vector<std::vector<double>> out;
  if (kind_ == Kind::Ball) return out;
  const std::size_t count = std::size_t{1} << dim_;
  out.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    RealVector u(dim_);
    for (int i = 0; i < dim_; ++i) u[i] = (mask >> i) & 1 ? box_.hi[i] : box_.lo[i];
    RealVector p = frame_ * u;
    out.emplace_back(p.data(), p.data() + dim_);
  }
  return out;
}

Box Region::bounds() const {
  Box b;
  b.lo.assign(dim_, 0.0);
  b.hi.assign(dim_, 0.0);
  if (kind_ == Kind::Ball) {
    for (int i = 0; i < dim_; ++i) {
      b.lo[i] = center_[i] - radius_;
      b.hi[i] = center_[i] + radius_;
    }
    return b;
  }
  bool first = true;
  for (const auto& c : corners()) {
    for (int i = 0; i < dim_; ++i) {
      if (first || c[i] < b.lo[i]) b.lo[i] = c[i];
      if (first || c[i] > b.hi[i]) b.hi[i] = c[i];
    }
    first = false;
  }
  return b;
}

bool Region::encloses(const Region& inner, double tol) const {
  if (inner.dim_ != dim_) return false;
  if (inner.kind_ == Kind::Ball) {
    if (kind_ == Kind::Ball) {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) s += (inner.center_[i] - center_[i]) * (inner.center_[i] - center_[i]);
      return std::sqrt(s) + inner.radius_ <= radius_ + tol;
    }
    // Ball inside a parallelepiped: compare distances along each face normal.
    for (int i = 0; i < dim_; ++i) {
      const RealVector row = frame_inv_.row(i).transpose();
      double c = 0.0;
      for (int j = 0; j < dim_; ++j) c += row[j] * inner.center_[j];
      const double reach = inner.radius_ * row.norm();
      if (c - reach < box_.lo[i] - tol || c + reach > box_.hi[i] + tol) return false;
    }
    return true;
  }
  for (const auto& c : inner.corners()) {
    if (kind_ == Kind::Ball) {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) s += (c[i] - center_[i]) * (c[i] - center_[i]);
      if (std::sqrt(s) > radius_ + tol) return false;
    } else {
      for (int i = 0; i < dim_; ++i) {
        double u = 0.0;
        for (int j = 0; j < dim_; ++j) u += frame_inv_(i, j) * c[j];
        if (u < box_.lo[i] - tol || u > box_.hi[i] + tol) return false;
      }
    }
  }
  return true;
}

}  // namespace aperiodic
