#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "confext/errors.hpp"
#include "confext/gauss.hpp"
#include "confext/quadrature.hpp"
#include "confext/special.hpp"
#include "doctest.h"

using namespace confext;

namespace {

FieldFunction monomial(Domain domain, int n, int e0, int e1) {
  FieldFunction f;
  f.domain = domain;
  f.n = n;
  f.polynomial_degree = e0 + e1;
  f.eval = [e0, e1](std::span<const double> x) { return std::pow(x[0], e0) * std::pow(x[1], e1); };
  return f;
}

// int_{R^k} (1 + |y|^2)^{-s} dy
double bump_integral(int k, double s) {
  return std::pow(std::numbers::pi, 0.5 * k) * boost::math::tgamma(s - 0.5 * k) / boost::math::tgamma(s);
}

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("gauss-legendre is exact to degree 2m-1") {
  const Rule1D& r = gauss_legendre(5);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * std::pow(r.x[i], 8);
  CHECK(s == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("sphere rules integrate monomials exactly") {
  for (int n : {2, 3, 4, 5}) {
    const QuadratureRule rule = sphere_rule(n, 4);
    CHECK(rule.total_weight() == doctest::Approx(sphere_area(n - 1)).epsilon(1e-13));
    const std::vector<double> v = sample(monomial(Domain::sphere, n, 2, 0), rule);
    CHECK(weighted_sum(rule, v) == doctest::Approx(sphere_area(n - 1) / n).epsilon(1e-13));
  }
  // x^2 y^2 over S^2 is 4 pi / 15
  const QuadratureRule s2 = sphere_rule(3, 3);
  CHECK(weighted_sum(s2, sample(monomial(Domain::sphere, 3, 2, 2), s2)) ==
        doctest::Approx(4.0 * std::numbers::pi / 15.0).epsilon(1e-13));
}

TEST_CASE("ball rules integrate |x|^2") {
  for (int n : {2, 3, 4}) {
    const QuadratureRule rule = ball_rule(n, 6);
    CHECK(rule.total_weight() == doctest::Approx(ball_volume(n)).epsilon(1e-12));
    FieldFunction r2;
    r2.domain = Domain::ball;
    r2.n = n;
    r2.eval = [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v * v;
      return s;
    };
    CHECK(weighted_sum(rule, sample(r2, rule)) == doctest::Approx(sphere_area(n - 1) / (n + 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("plane rules handle algebraic decay") {
  for (int n : {2, 3, 4}) {
    for (double s : {0.5 * n, 0.5 * n + 0.75}) {
      FieldFunction f;
      f.domain = Domain::plane;
      f.n = n;
      f.decay = 2.0 * s;
      f.eval = [s](std::span<const double> y) {
        double r2 = 0.0;
        for (double v : y) r2 += v * v;
        return std::pow(1.0 + r2, -s);
      };
      const Integral I = integrate(f, plane_rule(n, 16, f.decay), false);
      CHECK(I.value == doctest::Approx(bump_integral(n - 1, s)).epsilon(1e-7));
    }
  }
}

TEST_CASE("too little decay is rejected") {
  FieldFunction f;
  f.domain = Domain::plane;
  f.n = 3;
  f.decay = 1.5;
  f.eval = [](std::span<const double> y) { return 1.0 / (1.0 + y[0] * y[0] + y[1] * y[1]); };
  CHECK_THROWS_AS(integrate(f, plane_rule(3, 8, 3.0)), BadDecay);
}

TEST_CASE("norms of a constant and the weak norm bound") {
  const QuadratureRule rule = sphere_rule(3, 6);
  const double area = 4.0 * std::numbers::pi;
  const Integral n3 = lp_norm(constant_field(Domain::sphere, 3, 2.0), rule, {3.0});
  CHECK(n3.value == doctest::Approx(2.0 * std::cbrt(area)).epsilon(1e-13));
  const std::vector<double> v = sample(monomial(Domain::sphere, 3, 1, 0), rule);
  std::vector<double> a(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) a[i] = std::abs(v[i]);
  CHECK(weak_norm_values(rule, a, 2.0) <= lp_norm_values(rule, a, 2.0) * (1.0 + 1e-12));
  // Lorentz L^{p,p} is L^p.
  CHECK(lorentz_norm_values(rule, a, 2.0, 2.0) == doctest::Approx(lp_norm_values(rule, a, 2.0)).epsilon(1e-12));
  // |{|x_1| > 1/2}| on S^2 is 2 pi.
  CHECK(distribution_function_values(sphere_rule(3, 40), sample(monomial(Domain::sphere, 3, 1, 0), sphere_rule(3, 40)),
                                     0.5) == doctest::Approx(2.0 * std::numbers::pi + 0.0).epsilon(5e-2));
}

}
