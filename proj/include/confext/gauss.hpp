#pragma once

#include <vector>

namespace confext {

/// One-dimensional rule: nodes and weights.
struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const { return x.size(); }
  void append(const Rule1D& other);
};

/// Gauss-Jacobi rule for weight (1-x)^alpha (1+x)^beta on [-1, 1] (Golub-Welsch).
/// Rules are cached; the returned reference stays valid for the program lifetime.
const Rule1D& gauss_jacobi(int m, double alpha, double beta);

inline const Rule1D& gauss_legendre(int m) { return gauss_jacobi(m, 0.0, 0.0); }

/// m-point Gauss-Legendre rule mapped to [lo, hi].
Rule1D gauss_legendre(int m, double lo, double hi);

/// Composite Gauss-Legendre rule on [lo, hi] with panels shrinking geometrically
/// (by `ratio`) toward one endpoint. Breakpoints sit at e -/+ (hi-lo)*ratio^k for
/// k = 1..depth where e is the graded endpoint. When `endpoint_exponent` is
/// nonzero the rule integrates h(x)|x - e|^endpoint_exponent: regular panels fold
/// the factor into their weights and the panel touching e uses Gauss-Jacobi.
Rule1D graded_rule(double lo, double hi, bool toward_hi, double ratio, int depth, int m,
                   double endpoint_exponent = 0.0);

/// m equispaced nodes on [0, 2*pi) with weight 2*pi/m.
Rule1D trapezoid_circle(int m);

}  // namespace confext
