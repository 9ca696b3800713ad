#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "confext/field.hpp"
#include "confext/quadrature.hpp"

namespace confext {

/// Parameters of the extension operator: dimension n, exponent a, eps = n-2+a and
/// the normalization d_{n,a} making the kernel integrate to one.
class KernelParams {
 public:
  /// Requires n >= 2 and 2-n <= a < 1.
  KernelParams(int n, double a);

  int n() const { return n_; }
  double a() const { return a_; }
  double eps() const { return n_ - 2.0 + a_; }
  double d() const { return d_; }

  /// Boundary exponent 2(n-1)/eps and interior exponent 2n/eps (eps > 0 required).
  double boundary_exponent() const;
  double interior_exponent() const;

 private:
  int n_;
  double a_;
  double d_;
};

/// d_{n,a} = Gamma((n-a)/2) / (pi^{(n-1)/2} Gamma((1-a)/2)).
double normalization_closed_form(int n, double a);

/// 1 / integral over R^{n-1} of (1+|U|^2)^{-(n-a)/2}, from the one-dimensional radial
/// integral |S^{n-2}| int_0^{pi/2} sin^{n-2} t cos^{-a} t dt (tanh-sinh).
double normalization_radial(int n, double a);

/// Both routes, cross-checked to 1e-10 (throws NonConvergent otherwise).
double normalization(int n, double a);

/// Kernel d x_n^{1-a} / (|X-Y|^2 + x_n^2)^{(n-a)/2}.
double halfspace_kernel(const KernelParams& params, std::span<const double> X, double xn,
                        std::span<const double> Y);

/// Rule over R^{n-1} for integrals against d (1+|U|^2)^{-(n-a)/2} dU: weights already
/// contain the kernel, so sum_i w_i = 1 up to quadrature error.
QuadratureRule kernel_rule(const KernelParams& params, int m);

struct PointValue {
  double value = 0.0;
  double error = 0.0;
};

/// u = P_a f evaluated through U = (Y-X)/x_n at resolutions m and 2m.
class HalfspaceExtension {
 public:
  HalfspaceExtension(FieldFunction f, KernelParams params, int m = 24);

  PointValue evaluate(std::span<const double> X, double xn) const;
  double operator()(std::span<const double> X, double xn) const { return evaluate(X, xn).value; }
  /// Resolution-m value alone (no error estimate).
  double coarse_value(std::span<const double> X, double xn) const;
  /// The same integral in the raw Y variables (plane rule scaled by `scale` around X).
  PointValue evaluate_raw(std::span<const double> X, double xn, double scale = 1.0) const;
  /// Half-space field with domain tag halfspace (coordinates (X, x_n)).
  FieldFunction as_field() const;

  const KernelParams& params() const { return params_; }

 private:
  FieldFunction f_;
  KernelParams params_;
  std::shared_ptr<const QuadratureRule> coarse_;
  std::shared_ptr<const QuadratureRule> fine_;
  int m_;
};

HalfspaceExtension extend_halfspace(const FieldFunction& f, const KernelParams& params, int m = 24);

/// f^lambda(Y) = lambda^{-(n-1)/p} f(Y/lambda).
FieldFunction scale_function(const FieldFunction& f, double lambda, double p);

/// Closed-form ball kernel P~_a: d 2^{a-1} (1-|eta|^2)^{1-a} / |eta - xi|^{n-a}.
double ball_kernel(const KernelParams& params, std::span<const double> eta, std::span<const double> xi);

/// Integral over the sphere of ball_kernel(eta, .) f, with a sphere rule graded around
/// eta/|eta|. Reports |I(2m) - I(m)| as the error. Near-boundary points (|eta| > 0.95)
/// escalate the resolution once; NonConvergent if the estimate still exceeds `tol`.
PointValue ball_extension_direct(const KernelParams& params, const FieldFunction& f,
                                 std::span<const double> eta, int m = 16, double tol = 1e-6);

/// P~_a f evaluated by the half-space route: for q in the open ball with z = phi^{-1}(q),
/// (P~_a f)(q) = |(X, x_n+1/2)|^{eps} P_a(pullback f)(z).
class BallExtension {
 public:
  BallExtension(FieldFunction ftilde, KernelParams params, int m = 24);
  PointValue evaluate(std::span<const double> q) const;
  double operator()(std::span<const double> q) const { return evaluate(q).value; }
  FieldFunction as_field() const;

 private:
  FieldFunction ftilde_;
  KernelParams params_;
  HalfspaceExtension halfspace_;
};

BallExtension extend_ball(const FieldFunction& ftilde, const KernelParams& params, int m = 24);

/// Funk-Hecke multipliers of P~_a: P~_a Y_l (r w) = lambda_l(r) Y_l(w) for spherical
/// harmonics of degree l.
std::vector<double> ball_multipliers(const KernelParams& params, double r, int max_degree);

/// P~_a f through the spherical-harmonic expansion of f: f_l(w) is computed by a sphere
/// rule exact for degree 2*degree+1 products, then P~_a f(r w) = sum_l lambda_l(r) f_l(w).
class SpectralExtension {
 public:
  SpectralExtension(KernelParams params, const FieldFunction& f, int degree, int projection_m = 0);

  /// Degree-l components f_l(w) at a unit vector w, l = 0..degree.
  std::vector<double> components(std::span<const double> w) const;
  double operator()(std::span<const double> eta) const;
  int degree() const { return degree_; }

 private:
  KernelParams params_;
  int degree_;
  QuadratureRule projection_;
  std::vector<double> weighted_values_;
  std::vector<double> coefficients_;
};

/// Values of P~_a f on ball_rule(n, m) through the spherical-harmonic expansion of f.
/// Polynomial data (polynomial_degree >= 0) is expanded exactly; otherwise the degree
/// is doubled from 8 until the sphere reconstruction error falls below `tol`.
struct SpectralValues {
  std::vector<double> values;  // one per ball-rule node
  int degree = 0;
  double reconstruction_error = 0.0;
};
SpectralValues spectral_ball_values(const KernelParams& params, const FieldFunction& f, int m,
                                    double tol = 1e-10, int max_degree = 32);

/// The same on a given ball rule with multipliers[i] = ball_multipliers(params, radii[i], L)
/// precomputed; L bounds the expansion degree.
SpectralValues spectral_ball_values(const KernelParams& params, const FieldFunction& f, const BallRuleParts& parts,
                                    const std::vector<std::vector<double>>& multipliers, double tol = 1e-10);

/// ball_multipliers at each radius, in parallel.
std::vector<std::vector<double>> multiplier_table(const KernelParams& params, std::span<const double> radii,
                                                  int max_degree);

/// P~_a 1 at radius r (the l = 0 multiplier).
double extension_of_one(const KernelParams& params, double r);

/// Centered finite difference of div(x_n^a grad u) at (X, x_n).
double cs_residual(const std::function<double(std::span<const double>)>& u, double a,
                   std::span<const double> point, double h);

/// Iterated five-point (2n+1 point) Laplacian applied k times at `point`.
double polyharmonic_residual(const std::function<double(std::span<const double>)>& u, int k,
                             std::span<const double> point, double h);

}  // namespace confext
