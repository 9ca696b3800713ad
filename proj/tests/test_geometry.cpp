#include <cmath>
#include <random>

#include "confext/errors.hpp"
#include "confext/geometry.hpp"
#include "confext/kernels.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace confext;

TEST_SUITE("geometry") {

TEST_CASE("phi sends (0, 1/2) to the origin and the north ray to itself") {
  const std::vector<double> z = {0.0, 0.0, 0.5};
  for (double x : phi(z)) CHECK(x == doctest::Approx(0.0).epsilon(1e-15));
  for (double r : {0.0, 0.2, 0.6, 0.95}) {
    const std::vector<double> zr = {0.0, 0.5 * (1.0 - r) / (1.0 + r)};
    CHECK(phi(zr)[1] == doctest::Approx(r).epsilon(1e-14));
  }
}

TEST_CASE("phi and phi_inverse round trip") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n : {2, 3, 4}) {
    for (int k = 0; k < 50; ++k) {
      std::vector<double> z(n);
      for (double& x : z) x = u(rng);
      z.back() = std::abs(z.back()) + 1e-3;
      const std::vector<double> q = phi(z);
      double r2 = 0.0;
      for (double x : q) r2 += x * x;
      REQUIRE(r2 < 1.0);
      const std::vector<double> back = phi_inverse(q);
      for (int i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(z[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("boundary trace lands on the sphere and inverts") {
  for (double y : {-40.0, -1.0, 0.0, 0.3, 7.0}) {
    const std::vector<double> Y = {y, 0.5 * y};
    const std::vector<double> xi = phi_boundary(Y);
    CHECK(std::hypot(xi[0], xi[1], xi[2]) == doctest::Approx(1.0).epsilon(1e-15));
    const std::vector<double> back = phi_inverse_boundary(xi);
    CHECK(back[0] == doctest::Approx(Y[0]).epsilon(1e-10));
    CHECK(back[1] == doctest::Approx(Y[1]).epsilon(1e-10));
  }
  CHECK_THROWS_AS(phi_inverse_boundary(std::vector<double>{0.0, -1.0}), DomainError);
}

TEST_CASE("jacobian of phi matches central differences") {
  const auto map = [](std::span<const double> z) { return phi(z); };
  for (const std::vector<double>& z : {std::vector<double>{0.3, 0.7}, std::vector<double>{-0.4, 1.1, 0.2},
                                       std::vector<double>{0.1, 0.2, -0.3, 0.9}}) {
    CHECK(jacobian_phi(z) == doctest::Approx(finite_difference_jacobian(map, z)).epsilon(1e-7));
  }
}

TEST_CASE("boundary jacobian in the plane case is the arc-length stretch") {
  for (double y : {-2.0, 0.0, 0.8}) {
    const double h = 1e-6;
    const auto p = phi_boundary(std::vector<double>{y + h});
    const auto m = phi_boundary(std::vector<double>{y - h});
    const double stretch = std::hypot(p[0] - m[0], p[1] - m[1]) / (2.0 * h);
    CHECK(jacobian_phi_boundary(std::vector<double>{y}) == doctest::Approx(stretch).epsilon(1e-8));
  }
}

TEST_CASE("point types reject invalid input") {
  CHECK_THROWS_AS(BallPoint::interior({1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(BallPoint::boundary({0.5, 0.0}), DomainError);
  CHECK_THROWS_AS(HalfspacePoint({0.0}, 0.0), DomainError);
  CHECK_THROWS_AS(phi_inverse(std::vector<double>{0.6, 0.8}), DomainError);
  const BallPoint b = BallPoint::boundary({1.0 + 1e-13, 0.0});
  CHECK(b.norm() == doctest::Approx(1.0).epsilon(1e-16));
  CHECK_THROWS_AS(phi_inverse(b), DomainError);
}

TEST_CASE("pushforward inverts pullback") {
  const KernelParams params(3, 0.5);
  FieldFunction f;
  f.domain = Domain::sphere;
  f.n = 3;
  f.eval = [](std::span<const double> xi) { return 1.0 + 0.3 * xi[0] - 0.2 * xi[2] * xi[1]; };
  const FieldFunction g = pushforward_to_ball(pullback_to_halfspace(f, params), params);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const auto xi = testing::random_on_sphere(3, rng);
    if (xi[2] < -0.99) continue;
    CHECK(g(xi) == doctest::Approx(f(xi)).epsilon(1e-10));
  }
}

TEST_CASE("Mobius translation moves b to the origin and preserves the sphere") {
  std::mt19937_64 rng(5);
  for (int n : {2, 3, 4}) {
    const std::vector<double> bv = testing::random_in_ball(n, 0.8, rng);
    const MobiusTransform t = MobiusTransform::translation(Eigen::Map<const Eigen::VectorXd>(bv.data(), n));
    for (double x : t.apply(bv)) CHECK(x == doctest::Approx(0.0).epsilon(1e-14));
    for (int k = 0; k < 10; ++k) {
      const auto xi = testing::random_on_sphere(n, rng);
      const auto y = t.apply(xi);
      double r2 = 0.0;
      for (double v : y) r2 += v * v;
      CHECK(r2 == doctest::Approx(1.0).epsilon(1e-13));
    }
    double b2 = 0.0;
    for (double v : bv) b2 += v * v;
    CHECK(t.conformal_factor(std::vector<double>(n, 0.0)) == doctest::Approx(1.0 - b2).epsilon(1e-14));
  }
}

TEST_CASE("Mobius jacobians match central differences") {
  std::mt19937_64 rng(8);
  for (int n : {2, 3, 4}) {
    const std::vector<double> bv = testing::random_in_ball(n, 0.6, rng);
    const MobiusTransform t = MobiusTransform::translation(Eigen::Map<const Eigen::VectorXd>(bv.data(), n));
    const auto map = [&t](std::span<const double> x) { return t.apply(x); };
    for (int k = 0; k < 5; ++k) {
      const auto x = testing::random_in_ball(n, 0.9, rng);
      CHECK(t.interior_jacobian(x) == doctest::Approx(finite_difference_jacobian(map, x)).epsilon(1e-7));
      const auto xi = testing::random_on_sphere(n, rng);
      CHECK(t.boundary_jacobian(xi) ==
            doctest::Approx(finite_difference_sphere_jacobian(map, xi)).epsilon(1e-7));
    }
  }
}

TEST_CASE("Mobius inverse and composition") {
  std::mt19937_64 rng(13);
  const int n = 3;
  const auto b1 = testing::random_in_ball(n, 0.7, rng);
  const auto b2 = testing::random_in_ball(n, 0.7, rng);
  const Eigen::Matrix3d rot = Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
  const MobiusTransform t1(rot, Eigen::Map<const Eigen::VectorXd>(b1.data(), n));
  const MobiusTransform t2 = MobiusTransform::translation(Eigen::Map<const Eigen::VectorXd>(b2.data(), n));
  const MobiusTransform c = t1.compose(t2);
  for (int k = 0; k < 10; ++k) {
    const auto x = testing::random_in_ball(n, 0.95, rng);
    const auto direct = t1.apply(t2.apply(x));
    const auto composed = c.apply(x);
    const auto back = t1.inverse().apply(t1.apply(x));
    for (int i = 0; i < n; ++i) {
      CHECK(composed[i] == doctest::Approx(direct[i]).epsilon(1e-12));
      CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
    }
  }
}

}
