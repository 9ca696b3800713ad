#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "confext/field.hpp"

namespace confext {

class KernelParams;

/// Point (X, x_n) of the open upper half-space; x_n > 0.
class HalfspacePoint {
 public:
  HalfspacePoint(std::vector<double> X, double height);
  /// From n packed coordinates (X..., x_n).
  static HalfspacePoint from_coordinates(std::span<const double> z);

  const std::vector<double>& X() const { return X_; }
  double height() const { return height_; }
  int n() const { return static_cast<int>(X_.size()) + 1; }
  std::vector<double> coordinates() const;

 private:
  std::vector<double> X_;
  double height_;
};

/// Point of the closed unit ball. Boundary points are tagged; a point within
/// 1e-12 of the sphere is renormalized onto it when tagged as boundary.
class BallPoint {
 public:
  static constexpr double kBoundaryTolerance = 1e-12;

  static BallPoint interior(std::vector<double> eta);
  static BallPoint boundary(std::vector<double> xi);

  const std::vector<double>& coordinates() const { return eta_; }
  bool on_boundary() const { return boundary_; }
  double norm() const;
  int n() const { return static_cast<int>(eta_.size()); }

 private:
  BallPoint(std::vector<double> eta, bool boundary) : eta_(std::move(eta)), boundary_(boundary) {}
  std::vector<double> eta_;
  bool boundary_;
};

// The conformal map from the upper half-space to the unit ball:
//   phi(X, x_n) = (X, x_n + 1/2) / |(X, x_n + 1/2)|^2 - (0, ..., 0, 1).
// Its boundary trace maps R^{n-1} onto the sphere minus the south pole.

/// phi on the half-space (x_n = 0 allowed and lands on the sphere).
std::vector<double> phi(std::span<const double> z);
BallPoint phi(const HalfspacePoint& p);

/// phi restricted to the boundary R^{n-1} (returns a point on S^{n-1}).
std::vector<double> phi_boundary(std::span<const double> Y);

/// Inverse of phi on the open ball; throws DomainError for |q| >= 1.
std::vector<double> phi_inverse(std::span<const double> q);
HalfspacePoint phi_inverse(const BallPoint& q);

/// Inverse of the boundary trace; throws DomainError at the south pole.
std::vector<double> phi_inverse_boundary(std::span<const double> xi);

/// |(X, x_n + 1/2)|; the conformal weight used throughout.
double shifted_norm(std::span<const double> z);

/// J(phi) = |(X, x_n + 1/2)|^{-2n}.
double jacobian_phi(std::span<const double> z);

/// J(phi restricted to the boundary) = |(Y, 1/2)|^{-2(n-1)}.
double jacobian_phi_boundary(std::span<const double> Y);

/// Weighted pullback f(z) = |(X, x_n + 1/2)|^{2-n-a} ftilde(phi(z)) from the ball
/// (resp. sphere) to the half-space (resp. plane). The weight exponent is 2-n-a.
FieldFunction pullback_to_halfspace(const FieldFunction& ftilde, const KernelParams& params);

/// Inverse of pullback_to_halfspace: ball/sphere function from half-space/plane data.
FieldFunction pushforward_to_ball(const FieldFunction& f, const KernelParams& params);

/// Inversion conjugation on the plane: ftilde(Y) = |Y|^{-(n-2+a)} f(Y / |Y|^2).
/// The value at Y = 0 is undefined (NaN).
FieldFunction invert_conjugate(const FieldFunction& f, const KernelParams& params);

/// Automorphism of the unit ball  T(x) = R tau_b(x)  where tau_b is the
/// hyperbolic translation moving b to the origin,
///   tau_b(x) = ((1-|b|^2)(x-b) - |x-b|^2 b) / (1 - 2 x.b + |x|^2 |b|^2),
/// and R is orthogonal. |T'(x)| = (1-|b|^2) / (1 - 2 x.b + |x|^2 |b|^2).
class MobiusTransform {
 public:
  MobiusTransform(Eigen::MatrixXd rotation, Eigen::VectorXd b);

  static MobiusTransform identity(int n);
  static MobiusTransform translation(Eigen::VectorXd b);
  static MobiusTransform rotation(Eigen::MatrixXd r);

  int n() const { return static_cast<int>(b_.size()); }
  const Eigen::MatrixXd& rotation_matrix() const { return rotation_; }
  const Eigen::VectorXd& center() const { return b_; }

  std::vector<double> apply(std::span<const double> x) const;
  /// Linear stretching factor |T'(x)| (T is conformal).
  double conformal_factor(std::span<const double> x) const;
  /// Interior Jacobian determinant |T'(x)|^n.
  double interior_jacobian(std::span<const double> x) const;
  /// Jacobian of the restriction to the sphere, |T'(xi)|^{n-1}.
  double boundary_jacobian(std::span<const double> xi) const;

  MobiusTransform inverse() const;
  /// this ∘ inner, renormalized to (rotation, center) form.
  MobiusTransform compose(const MobiusTransform& inner) const;

 private:
  Eigen::MatrixXd rotation_;
  Eigen::VectorXd b_;
};

/// Jacobian determinant of a map R^n -> R^n by central differences.
double finite_difference_jacobian(const std::function<std::vector<double>(std::span<const double>)>& map,
                                  std::span<const double> x, double step = 1e-5);

/// Jacobian of a map of the sphere to itself at xi, by central differences along
/// an orthonormal tangent frame: sqrt(det(D^T D)).
double finite_difference_sphere_jacobian(
    const std::function<std::vector<double>(std::span<const double>)>& map, std::span<const double> xi,
    double step = 1e-5);

}  // namespace confext
