#include <cmath>
#include <numbers>
#include <random>

#include "confext/errors.hpp"
#include "confext/kernels.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace confext;

TEST_SUITE("kernels") {

TEST_CASE("normalization constants") {
  CHECK(normalization(2, 0.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-14));
  CHECK(normalization(3, 0.0) == doctest::Approx(0.5 / std::numbers::pi).epsilon(1e-14));
  for (auto [n, a] : {std::pair{3, 0.5}, std::pair{4, -1.0}, std::pair{4, -2.0}, std::pair{5, 0.3}})
    CHECK(normalization_closed_form(n, a) == doctest::Approx(normalization_radial(n, a)).epsilon(1e-10));
  for (auto [n, a] : {std::pair{2, 0.5}, std::pair{3, -0.5}}) {
    const KernelParams p(n, a);
    CHECK(kernel_rule(p, 16).total_weight() == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("parameter ranges") {
  CHECK_THROWS_AS(KernelParams(3, 1.0), DomainError);
  CHECK_THROWS_AS(KernelParams(3, -1.5), DomainError);
  CHECK_THROWS_AS(KernelParams(1, 0.0), DomainError);
  CHECK_NOTHROW(KernelParams(4, -2.0));
}

TEST_CASE("the half-space extension of one is one") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (auto [n, a] : {std::pair{3, 0.0}, std::pair{3, 0.5}, std::pair{4, -2.0}, std::pair{5, -1.0}}) {
    const KernelParams p(n, a);
    const HalfspaceExtension ext(constant_field(Domain::plane, n, 1.0), p, 12);
    for (int k = 0; k < 10; ++k) {
      std::vector<double> X(n - 1);
      for (double& x : X) x = u(rng);
      CHECK(ext(X, std::abs(u(rng)) + 0.01) == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("a = 0 reduces to the Poisson kernel") {
  const KernelParams p(3, 0.0);
  const std::vector<double> eta = {0.3, 0.2, 0.1};
  // Harmonic polynomials reproduce themselves.
  CHECK(ball_extension_direct(p, testing::coordinate(Domain::sphere, 3, 0), eta).value ==
        doctest::Approx(0.3).epsilon(1e-8));
  const auto mult = ball_multipliers(p, 0.6, 5);
  for (int l = 0; l <= 5; ++l) CHECK(mult[l] == doctest::Approx(std::pow(0.6, l)).epsilon(1e-10));
}

TEST_CASE("spectral and direct extensions agree") {
  std::mt19937_64 rng(21);
  for (auto [n, a] : {std::pair{2, 0.5}, std::pair{3, 0.5}, std::pair{4, -1.0}}) {
    const KernelParams p(n, a);
    FieldFunction f;
    f.domain = Domain::sphere;
    f.n = n;
    f.polynomial_degree = 3;
    f.eval = [](std::span<const double> x) { return 1.0 + 0.5 * x[0] * x[1] - 0.3 * x[1] * x[1] * x[1] + 0.2 * x[0]; };
    const SpectralExtension spec(p, f, 3);
    for (int k = 0; k < 4; ++k) {
      const auto eta = testing::random_in_ball(n, 0.7, rng);
      CHECK(spec(eta) == doctest::Approx(ball_extension_direct(p, f, eta).value).epsilon(1e-6));
    }
  }
}

TEST_CASE("half-space and ball routes agree") {
  const KernelParams p(3, 0.5);
  FieldFunction f;
  f.domain = Domain::sphere;
  f.n = 3;
  f.eval = [](std::span<const double> x) { return 1.0 + 0.4 * x[2] + 0.2 * x[0] * x[1]; };
  const BallExtension ext = extend_ball(f, p);
  for (const std::vector<double>& eta : {std::vector<double>{0.0, 0.0, 0.0}, std::vector<double>{0.2, -0.3, 0.4}}) {
    CHECK(ext(eta) == doctest::Approx(ball_extension_direct(p, f, eta).value).epsilon(1e-6));
  }
}

TEST_CASE("scaling preserves the L^p norm") {
  FieldFunction f;
  f.domain = Domain::plane;
  f.n = 3;
  f.decay = 4.0;
  f.eval = [](std::span<const double> y) { return 1.0 / (1.0 + y[0] * y[0] + y[1] * y[1]); };
  const double p = 3.0;
  const FieldFunction g = scale_function(f, 2.5, p);
  FieldFunction fp = f, gp = g;
  fp.eval = [f, p](std::span<const double> y) { return std::pow(f(y), p); };
  gp.eval = [g, p](std::span<const double> y) { return std::pow(g(y), p); };
  fp.decay = gp.decay = 12.0;
  CHECK(integrate(gp, plane_rule(3, 20, 12.0, 2.5), false).value ==
        doctest::Approx(integrate(fp, plane_rule(3, 20, 12.0), false).value).epsilon(1e-8));
}

TEST_CASE("finite-difference operators on exact solutions") {
  // x_n^{1-a} and x_1 solve div(x_n^a grad u) = 0.
  for (double a : {-0.5, 0.0, 0.5}) {
    const std::vector<double> z = {0.2, 0.1, 0.8};
    const auto power = [a](std::span<const double> x) { return std::pow(x[2], 1.0 - a); };
    const auto linear = [](std::span<const double> x) { return x[0]; };
    CHECK(std::abs(cs_residual(power, a, z, 1e-3)) < 1e-5);
    CHECK(std::abs(cs_residual(linear, a, z, 1e-3)) < 1e-8);
  }
  // Delta^2 |x|^4 = 8 n (n + 2)
  const auto quartic = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s * s;
  };
  const std::vector<double> x = {0.1, -0.2, 0.3, 0.05};
  CHECK(polyharmonic_residual(quartic, 2, x, 0.05) == doctest::Approx(8.0 * 4 * 6).epsilon(1e-8));
  // The five-point Laplacian of |x|^4 carries the exact O(h^2) term 8 h^2 in four dimensions.
  CHECK(polyharmonic_residual(quartic, 1, x, 0.05) == doctest::Approx(24.0 * 0.1425 + 8.0 * 0.0025).epsilon(1e-10));
}

}
