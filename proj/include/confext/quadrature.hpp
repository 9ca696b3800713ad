#pragma once

#include <span>
#include <vector>

#include "confext/field.hpp"
#include "confext/gauss.hpp"

namespace confext {

/// How a rule is built; rebuilding at 2m gives the refinement used for error estimates.
struct RuleSpec {
  Domain domain = Domain::sphere;
  int n = 2;
  /// Plane/half-space: algebraic decay exponent of the integrand (|g| = O(|x|^-decay)).
  double decay = 0.0;
  /// Plane/half-space: length scale of the radial compactification r = scale * tan(theta).
  double scale = 1.0;
  /// Half-space only: nodes are pulled back from a ball rule through phi^{-1}.
  bool pullback = false;
};

/// Nodes and positive weights on one domain. Coordinates are stored row-wise, `dim`
/// per node (n-1 on the plane, n elsewhere).
struct QuadratureRule {
  RuleSpec spec;
  int m = 0;
  int dim = 0;
  double target = 1e-8;
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  double total_weight() const;
};

QuadratureRule make_rule(const RuleSpec& spec, int m);

/// Product rule on S^{n-1}: Gauss-Jacobi in the last coordinate, recursing down to a
/// 2m-point trapezoid circle. Exact for polynomials of degree <= 2m-1.
QuadratureRule sphere_rule(int n, int m);

/// Ball rule: radial composite Gauss-Legendre graded toward r = 1, times sphere_rule(n, m).
QuadratureRule ball_rule(int n, int m);

/// The two factors of ball_rule: radial nodes (weights include r^{n-1}) and the unit
/// sphere rule. ball_rule nodes are ordered radial-major: node i*S + j is r_i w_j.
struct BallRuleParts {
  std::vector<double> radii;
  std::vector<double> radial_weights;
  QuadratureRule directions;
};
BallRuleParts ball_rule_parts(int n, int m);

/// Plane R^{n-1}: r = scale * tan(theta) with panels graded toward theta = pi/2; the last
/// panel carries (pi/2 - theta)^{decay - n} in Gauss-Jacobi form. Requires decay > n-1.
QuadratureRule plane_rule(int n, int m, double decay, double scale = 1.0);

/// Rule on [0, inf) for integrands decaying like r^-decay (the radial part of plane_rule).
Rule1D halfline_rule(int m, double decay, double scale = 1.0);

/// Half-space R^n_+ as a product of a graded x_n rule on (0, inf) and the plane rule.
QuadratureRule halfspace_rule(int n, int m, double decay, double scale = 1.0);

/// Half-space rule obtained by pulling a ball rule back through phi^{-1}: node
/// z = phi^{-1}(q), weight w_q |(X, x_n + 1/2)|^{2n}. Accurate for integrands that are
/// J(phi)-weighted pullbacks of smooth ball functions. `scale` dilates the nodes
/// (z -> scale z, weights times scale^n).
QuadratureRule halfspace_rule_from_ball(int n, int m, double scale = 1.0);

/// Sphere rule concentrated around the unit vector `axis`: polar angle from the axis
/// graded toward 0 down to about `width`, times a rule on S^{n-2}.
QuadratureRule sphere_rule_around(std::span<const double> axis, int m, double width);

/// Same as rule at twice the resolution.
QuadratureRule refined(const QuadratureRule& rule);

struct Integral {
  double value = 0.0;
  double error = 0.0;
};

/// Weighted sum of samples.
double weighted_sum(const QuadratureRule& rule, std::span<const double> values);

/// Integral of f at resolutions m and 2m (value from 2m, error |difference|).
/// Throws NonConvergent when the error exceeds rule.target * max(|value|, 1e-300) and
/// `strict` is set; BadDecay when an unbounded-domain integrand declares too little decay.
Integral integrate(const FieldFunction& f, const QuadratureRule& rule, bool strict = true);

/// Lorentz/Lebesgue exponent pair. q absent (0) means the plain L^p norm.
struct NormSpec {
  double p = 2.0;
  double q = 0.0;
  static constexpr double infinity = 1e308;
};

/// L^p norm of f. For p = infinity the maximum over the nodes of the rule and its
/// refinement. Error from two resolutions.
Integral lp_norm(const FieldFunction& f, const QuadratureRule& rule, const NormSpec& spec);

/// L^p norm of node samples (no refinement).
double lp_norm_values(const QuadratureRule& rule, std::span<const double> values, double p);

/// Measure of {|f| > t} on the node distribution (step indicator, ties excluded).
Integral distribution_function(const FieldFunction& f, const QuadratureRule& rule, double t);
double distribution_function_values(const QuadratureRule& rule, std::span<const double> values, double t);

/// Weak L^p quasinorm sup_t t |{|f|>t}|^{1/p} over the node distribution.
double weak_norm_values(const QuadratureRule& rule, std::span<const double> values, double p);
Integral weak_norm(const FieldFunction& f, const QuadratureRule& rule, double p);

/// Lorentz quasinorm p^{1/q} (int_0^inf t^q |{|f|>=t}|^{q/p} dt/t)^{1/q}. The node
/// distribution makes |{|f|>=t}| a step function, integrated exactly in t.
double lorentz_norm_values(const QuadratureRule& rule, std::span<const double> values, double p, double q);
Integral lorentz_norm(const FieldFunction& f, const QuadratureRule& rule, const NormSpec& spec);

/// Samples f at every node of the rule (parallel over nodes).
std::vector<double> sample(const FieldFunction& f, const QuadratureRule& rule);

}  // namespace confext
