#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "confext/field.hpp"

namespace testing {

inline std::vector<double> random_in_ball(int n, double radius, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u;
  std::vector<double> x(n);
  double s = 0.0;
  for (double& v : x) {
    v = g(rng);
    s += v * v;
  }
  const double r = radius * std::pow(u(rng), 1.0 / n) / std::sqrt(s);
  for (double& v : x) v *= r;
  return x;
}

inline std::vector<double> random_on_sphere(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> x(n);
  double s = 0.0;
  for (double& v : x) {
    v = g(rng);
    s += v * v;
  }
  for (double& v : x) v /= std::sqrt(s);
  return x;
}

inline confext::FieldFunction coordinate(confext::Domain domain, int n, int i) {
  confext::FieldFunction f;
  f.domain = domain;
  f.n = n;
  f.polynomial_degree = 1;
  f.eval = [i](std::span<const double> x) { return x[i]; };
  return f;
}

}  // namespace testing
