#include "aperiodic/deviation/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "aperiodic/core/error.hpp"

namespace aperiodic {

namespace {

// Shift of the frame box that places the family at `origin`.
std::vector<double> frame_offset(const AveragingFamily& f) {
  const int d = f.dim();
  RealVector o(d);
  for (int i = 0; i < d; ++i) o[i] = f.origin[i];
  const RealVector c = f.frame.inverse() * o;
  return {c.data(), c.data() + d};
}

}  // namespace

Region AveragingFamily::region(double T) const {
  if (!(T > 0.0)) fail(ErrorCode::InvalidArgument, "averaging scale must be positive");
  const int d = dim();
  const std::vector<double> c = frame_offset(*this);
  Box b;
  b.lo.resize(d);
  b.hi.resize(d);
  for (int i = 0; i < d; ++i) {
    const double s = exponents[i] == 1.0 ? T : std::pow(T, exponents[i]);
    b.lo[i] = b0.lo[i] * s + c[i];
    b.hi[i] = b0.hi[i] * s + c[i];
  }
  return Region::box(frame, std::move(b));
}

double AveragingFamily::base_volume() const { return std::abs(frame.determinant()) * b0.volume(); }

double AveragingFamily::volume(double T) const { return base_volume() * std::pow(T, dim()); }

double AveragingFamily::entry_scale(std::span<const double> p, bool& strict) const {
  return EntryScale(*this)(p, strict);
}

EntryScale::EntryScale(const AveragingFamily& family)
    : family_(&family), inv_(family.region(1.0).frame_inverse()), offset_(frame_offset(family)) {}

double EntryScale::operator()(std::span<const double> p, bool& strict) const {
  const AveragingFamily& f = *family_;
  const int d = f.dim();
  double best = 0.0;
  strict = true;
  for (int i = 0; i < d; ++i) {
    // Same arithmetic as Region::contains so boundary cases agree.
    double u = 0.0;
    for (int j = 0; j < d; ++j) u += inv_(i, j) * p[j];
    const double v = u - offset_[i];
    double t;
    bool s;
    if (v >= 0.0) {
      t = v == 0.0 ? 0.0 : std::pow(v / f.b0.hi[i], 1.0 / f.exponents[i]);
      s = true;
    } else if (f.b0.lo[i] == 0.0) {
      t = std::numeric_limits<double>::infinity();
      s = false;
    } else {
      t = std::pow(v / f.b0.lo[i], 1.0 / f.exponents[i]);
      s = false;
    }
    if (t > best || (t == best && !s)) {
      best = t;
      strict = s;
    }
  }
  return best;
}

AveragingFamily make_family(const RealMatrix& A_par, Box b0, std::vector<double> origin, std::vector<double> T_list) {
  const int d = static_cast<int>(A_par.rows());
  if (d < 1 || A_par.cols() != d || b0.dim() != d || static_cast<int>(b0.hi.size()) != d) {
    fail(ErrorCode::InvalidArgument, "averaging family dimension mismatch");
  }
  for (int i = 0; i < d; ++i) {
    if (!(b0.lo[i] <= 0.0 && 0.0 < b0.hi[i])) {
      fail(ErrorCode::InvalidArgument, "base box must contain the origin (lo <= 0 < hi) so the family is nested");
    }
  }
  if (origin.empty()) origin.assign(d, 0.0);
  if (static_cast<int>(origin.size()) != d) fail(ErrorCode::InvalidArgument, "family origin has wrong dimension");

  AveragingFamily f;
  f.A_par = A_par;
  const double det = A_par.determinant();
  if (!(std::abs(det) > 1.0)) fail(ErrorCode::InvalidArgument, "expansion must have |det| > 1");
  f.sigma = d / std::log(std::abs(det));

  Eigen::EigenSolver<RealMatrix> es(A_par);
  const auto values = es.eigenvalues();
  const double lambda = A_par.trace() / d;
  const bool dilation = (A_par - lambda * RealMatrix::Identity(d, d)).norm() <= 1e-12 * std::abs(lambda);
  if (dilation) {
    f.frame = RealMatrix::Identity(d, d);
    f.exponents.assign(d, 1.0);
  } else {
    RealMatrix frame(d, d);
    f.exponents.resize(d);
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
      const Complex ev = values[i];
      if (std::abs(ev.imag()) > 1e-12 * std::abs(ev) || !(ev.real() > 1.0)) {
        fail(ErrorCode::InvalidArgument, "expansion has no real positive expanding eigenbasis for an eigen-aligned box");
      }
      RealVector col = es.eigenvectors().col(i).real();
      col /= col.norm();
      frame.col(i) = col;
      double e = d * std::log(ev.real()) / std::log(std::abs(det));
      if (std::abs(e - 1.0) <= 1e-12) e = 1.0;
      f.exponents[i] = e;
      total += e;
    }
    if (std::abs(total - d) > 1e-9) fail(ErrorCode::Internal, "family exponents do not sum to the dimension");
    f.frame = frame;
  }
  f.b0 = std::move(b0);
  f.origin = std::move(origin);
  for (std::size_t i = 1; i < T_list.size(); ++i) {
    if (!(T_list[i] > T_list[i - 1])) fail(ErrorCode::InvalidArgument, "T list must be strictly increasing");
  }
  if (!T_list.empty() && !(T_list.front() > 0.0)) fail(ErrorCode::InvalidArgument, "T values must be positive");
  f.T_list = std::move(T_list);
  return f;
}

std::vector<double> geometric_T_list(double T_max, double ratio, int count) {
  if (!(ratio > 1.0) || count < 1 || !(T_max > 0.0)) fail(ErrorCode::InvalidArgument, "bad geometric T list");
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = T_max * std::pow(ratio, -(count - 1 - i));
  out.back() = T_max;
  return out;
}

double default_T_ratio(const RealMatrix& A_par) {
  const int d = static_cast<int>(A_par.rows());
  return std::pow(std::abs(A_par.determinant()), 1.0 / (2.0 * d));
}

}  // namespace aperiodic
