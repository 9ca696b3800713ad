#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace confext {

/// Where a function lives. Coordinates: plane R^{n-1} has n-1 components; the
/// half-space R^n_+ has n with the height last; sphere and ball points have n.
enum class Domain { plane, halfspace, sphere, ball };

std::string_view to_string(Domain d);

/// Number of coordinates of a point of `domain` for problem dimension n.
inline int coordinate_count(Domain domain, int n) { return domain == Domain::plane ? n - 1 : n; }

using Evaluator = std::function<double(std::span<const double>)>;

/// A scalar function on one of the four domains, with the metadata quadrature
/// needs: an algebraic decay exponent on unbounded domains (|f| = O(|x|^-decay))
/// and, for sphere data that is a polynomial restricted to the sphere, its degree.
struct FieldFunction {
  Domain domain = Domain::sphere;
  int n = 2;
  Evaluator eval;
  double decay = 0.0;
  int polynomial_degree = -1;
  bool smooth = true;

  double operator()(std::span<const double> x) const { return eval(x); }
  double operator()(std::initializer_list<double> x) const {
    return eval(std::span<const double>(x.begin(), x.size()));
  }
};

/// Constant function on a domain.
FieldFunction constant_field(Domain domain, int n, double value);

/// Pointwise c * f, keeping metadata.
FieldFunction scaled(const FieldFunction& f, double c);

}  // namespace confext
