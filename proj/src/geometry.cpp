#include "confext/geometry.hpp"

#include <cmath>
#include <limits>

#include "confext/errors.hpp"
#include "confext/kernels.hpp"

namespace confext {

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

Eigen::VectorXd to_eigen(std::span<const double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

HalfspacePoint::HalfspacePoint(std::vector<double> X, double height) : X_(std::move(X)), height_(height) {
  if (!(height_ > 0.0)) throw DomainError("HalfspacePoint: height must be positive");
  if (X_.empty()) throw DomainError("HalfspacePoint: dimension must be at least 2");
}

HalfspacePoint HalfspacePoint::from_coordinates(std::span<const double> z) {
  if (z.size() < 2) throw DomainError("HalfspacePoint: need at least two coordinates");
  return HalfspacePoint(std::vector<double>(z.begin(), z.end() - 1), z.back());
}

std::vector<double> HalfspacePoint::coordinates() const {
  std::vector<double> z = X_;
  z.push_back(height_);
  return z;
}

BallPoint BallPoint::interior(std::vector<double> eta) {
  if (!(norm2(eta) < 1.0)) throw DomainError("BallPoint: interior point must satisfy |eta| < 1");
  return BallPoint(std::move(eta), false);
}

BallPoint BallPoint::boundary(std::vector<double> xi) {
  const double r = std::sqrt(norm2(xi));
  if (std::abs(r - 1.0) > kBoundaryTolerance) throw DomainError("BallPoint: boundary point off the unit sphere");
  for (double& x : xi) x /= r;
  return BallPoint(std::move(xi), true);
}

double BallPoint::norm() const { return std::sqrt(norm2(eta_)); }

double shifted_norm(std::span<const double> z) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < z.size(); ++i) s += z[i] * z[i];
  const double h = z.back() + 0.5;
  return std::sqrt(s + h * h);
}

std::vector<double> phi(std::span<const double> z) {
  std::vector<double> w(z.begin(), z.end());
  w.back() += 0.5;
  const double s = norm2(w);
  for (double& x : w) x /= s;
  w.back() -= 1.0;
  return w;
}

BallPoint phi(const HalfspacePoint& p) { return BallPoint::interior(phi(p.coordinates())); }

std::vector<double> phi_boundary(std::span<const double> Y) {
  std::vector<double> z(Y.begin(), Y.end());
  z.push_back(0.0);
  std::vector<double> xi = phi(z);
  // Renormalize the rounding drift so the node stays on the sphere.
  const double r = std::sqrt(norm2(xi));
  for (double& x : xi) x /= r;
  return xi;
}

std::vector<double> phi_inverse(std::span<const double> q) {
  if (!(norm2(q) < 1.0)) throw DomainError("phi_inverse: point not in the open ball");
  std::vector<double> w(q.begin(), q.end());
  w.back() += 1.0;
  const double s = norm2(w);
  for (double& x : w) x /= s;
  w.back() -= 0.5;
  // Exact algebra gives w.back() > 0; guard against cancellation very near the sphere.
  if (!(w.back() > 0.0)) w.back() = std::numeric_limits<double>::min();
  return w;
}

HalfspacePoint phi_inverse(const BallPoint& q) {
  if (q.on_boundary()) throw DomainError("phi_inverse: boundary point has no half-space preimage");
  return HalfspacePoint::from_coordinates(phi_inverse(q.coordinates()));
}

std::vector<double> phi_inverse_boundary(std::span<const double> xi) {
  std::vector<double> w(xi.begin(), xi.end());
  w.back() += 1.0;
  const double s = norm2(w);
  if (s < 1e-300) throw DomainError("phi_inverse_boundary: the south pole maps to infinity");
  std::vector<double> Y(w.size() - 1);
  for (std::size_t i = 0; i + 1 < w.size(); ++i) Y[i] = w[i] / s;
  return Y;
}

double jacobian_phi(std::span<const double> z) {
  return std::pow(shifted_norm(z), -2.0 * static_cast<double>(z.size()));
}

double jacobian_phi_boundary(std::span<const double> Y) {
  const double s = norm2(Y) + 0.25;
  return std::pow(s, -static_cast<double>(Y.size()));
}

FieldFunction pullback_to_halfspace(const FieldFunction& ftilde, const KernelParams& params) {
  if (ftilde.domain != Domain::sphere && ftilde.domain != Domain::ball) {
    throw DomainError("pullback_to_halfspace: expects sphere or ball data");
  }
  const double exponent = 2.0 - params.n() - params.a();
  FieldFunction f;
  f.n = params.n();
  f.smooth = ftilde.smooth;
  if (ftilde.domain == Domain::sphere) {
    f.domain = Domain::plane;
    f.decay = -exponent;
    f.eval = [g = ftilde.eval, exponent](std::span<const double> Y) {
      const double s = norm2(Y) + 0.25;
      return std::pow(s, 0.5 * exponent) * g(phi_boundary(Y));
    };
  } else {
    f.domain = Domain::halfspace;
    f.decay = -exponent;
    f.eval = [g = ftilde.eval, exponent](std::span<const double> z) {
      return std::pow(shifted_norm(z), exponent) * g(phi(z));
    };
  }
  return f;
}

FieldFunction pushforward_to_ball(const FieldFunction& f, const KernelParams& params) {
  if (f.domain != Domain::plane && f.domain != Domain::halfspace) {
    throw DomainError("pushforward_to_ball: expects plane or half-space data");
  }
  const double eps = params.eps();
  FieldFunction g;
  g.n = params.n();
  g.smooth = f.smooth;
  if (f.domain == Domain::plane) {
    g.domain = Domain::sphere;
    g.eval = [h = f.eval, eps](std::span<const double> xi) {
      const std::vector<double> Y = phi_inverse_boundary(xi);
      const double s = norm2(Y) + 0.25;
      return std::pow(s, 0.5 * eps) * h(Y);
    };
  } else {
    g.domain = Domain::ball;
    g.eval = [h = f.eval, eps](std::span<const double> q) {
      const std::vector<double> z = phi_inverse(q);
      return std::pow(shifted_norm(z), eps) * h(z);
    };
  }
  return g;
}

FieldFunction invert_conjugate(const FieldFunction& f, const KernelParams& params) {
  if (f.domain != Domain::plane) throw DomainError("invert_conjugate: expects plane data");
  const double eps = params.eps();
  FieldFunction g = f;
  g.eval = [h = f.eval, eps](std::span<const double> Y) {
    const double s = norm2(Y);
    if (s == 0.0) return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> Z(Y.begin(), Y.end());
    for (double& x : Z) x /= s;
    return std::pow(s, -0.5 * eps) * h(Z);
  };
  // |f| ~ |Y|^-beta at infinity becomes |Y|^{beta - eps} near 0 and |Y|^-eps at infinity
  // times f(0); the conjugate decays like |Y|^-eps unless f vanishes at the origin.
  g.decay = eps;
  return g;
}

MobiusTransform::MobiusTransform(Eigen::MatrixXd rotation, Eigen::VectorXd b)
    : rotation_(std::move(rotation)), b_(std::move(b)) {
  if (rotation_.rows() != b_.size() || rotation_.cols() != b_.size()) {
    throw DomainError("MobiusTransform: rotation and center dimensions differ");
  }
  if (!(b_.squaredNorm() < 1.0)) throw DomainError("MobiusTransform: center must lie in the open ball");
  const Eigen::MatrixXd defect = rotation_.transpose() * rotation_ - Eigen::MatrixXd::Identity(n(), n());
  if (defect.norm() > 1e-9) throw DomainError("MobiusTransform: rotation is not orthogonal");
}

MobiusTransform MobiusTransform::identity(int n) {
  return {Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n)};
}

MobiusTransform MobiusTransform::translation(Eigen::VectorXd b) {
  const auto n = b.size();
  return {Eigen::MatrixXd::Identity(n, n), std::move(b)};
}

MobiusTransform MobiusTransform::rotation(Eigen::MatrixXd r) {
  const auto n = r.rows();
  return {std::move(r), Eigen::VectorXd::Zero(n)};
}

namespace {

Eigen::VectorXd tau(const Eigen::VectorXd& b, const Eigen::VectorXd& x) {
  const Eigen::VectorXd d = x - b;
  const double bb = b.squaredNorm();
  const double denom = 1.0 - 2.0 * x.dot(b) + x.squaredNorm() * bb;
  return ((1.0 - bb) * d - d.squaredNorm() * b) / denom;
}

// Rebuilds (R, b) for an automorphism given as a map and the point it sends to 0:
// map = R tau_b, so map o tau_{-b} is the orthogonal matrix R.
MobiusTransform from_map(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& map,
                         const Eigen::VectorXd& b) {
  const auto n = b.size();
  Eigen::MatrixXd cols(n, n);
  const double t = 0.5;
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(i) = t;
    cols.col(i) = map(tau(-b, e)) / t;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cols, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU() * svd.matrixV().transpose(), b};
}

}  // namespace

std::vector<double> MobiusTransform::apply(std::span<const double> x) const {
  return to_std(rotation_ * tau(b_, to_eigen(x)));
}

double MobiusTransform::conformal_factor(std::span<const double> x) const {
  const Eigen::VectorXd v = to_eigen(x);
  const double bb = b_.squaredNorm();
  return (1.0 - bb) / (1.0 - 2.0 * v.dot(b_) + v.squaredNorm() * bb);
}

double MobiusTransform::interior_jacobian(std::span<const double> x) const {
  return std::pow(conformal_factor(x), n());
}

double MobiusTransform::boundary_jacobian(std::span<const double> xi) const {
  return std::pow(conformal_factor(xi), n() - 1);
}

MobiusTransform MobiusTransform::inverse() const {
  // T^{-1} = tau_{-b} o R^T sends T(0) = -R b to 0.
  const Eigen::MatrixXd rt = rotation_.transpose();
  const Eigen::VectorXd b = b_;
  auto map = [rt, b](const Eigen::VectorXd& x) { return tau(-b, rt * x); };
  return from_map(map, -(rotation_ * b_));
}

MobiusTransform MobiusTransform::compose(const MobiusTransform& inner) const {
  const MobiusTransform outer_inv = inverse();
  const MobiusTransform inner_inv = inner.inverse();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n());
  const Eigen::VectorXd b = to_eigen(inner_inv.apply(outer_inv.apply(to_std(zero))));
  const MobiusTransform outer = *this;
  auto map = [outer, inner](const Eigen::VectorXd& x) {
    return to_eigen(outer.apply(inner.apply(to_std(x))));
  };
  return from_map(map, b);
}

double finite_difference_jacobian(const std::function<std::vector<double>(std::span<const double>)>& map,
                                  std::span<const double> x, double step) {
  const auto n = static_cast<Eigen::Index>(x.size());
  std::vector<double> xp(x.begin(), x.end());
  std::vector<double> xm(x.begin(), x.end());
  const std::size_t out_dim = map(x).size();
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(out_dim), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    xp = std::vector<double>(x.begin(), x.end());
    xm = xp;
    xp[j] += step;
    xm[j] -= step;
    const std::vector<double> fp = map(xp);
    const std::vector<double> fm = map(xm);
    for (std::size_t i = 0; i < out_dim; ++i) jac(static_cast<Eigen::Index>(i), j) = (fp[i] - fm[i]) / (2.0 * step);
  }
  return std::abs(jac.determinant());
}

double finite_difference_sphere_jacobian(
    const std::function<std::vector<double>(std::span<const double>)>& map, std::span<const double> xi,
    double step) {
  const Eigen::VectorXd p = to_eigen(xi);
  const auto n = p.size();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(p);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd d(n, n - 1);
  for (Eigen::Index k = 1; k < n; ++k) {
    const Eigen::VectorXd t = q.col(k);
    const Eigen::VectorXd plus = p * std::cos(step) + t * std::sin(step);
    const Eigen::VectorXd minus = p * std::cos(step) - t * std::sin(step);
    const Eigen::VectorXd fp = to_eigen(map(to_std(plus)));
    const Eigen::VectorXd fm = to_eigen(map(to_std(minus)));
    d.col(k - 1) = (fp - fm) / (2.0 * step);
  }
  return std::sqrt((d.transpose() * d).determinant());
}

}  // namespace confext
