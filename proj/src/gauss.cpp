#include "confext/gauss.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace confext {

void Rule1D::append(const Rule1D& other) {
  x.insert(x.end(), other.x.begin(), other.x.end());
  w.insert(w.end(), other.w.begin(), other.w.end());
}

namespace {

Rule1D compute_gauss_jacobi(int m, double alpha, double beta) {
  if (m < 1) throw std::invalid_argument("gauss_jacobi: m must be positive");
  if (alpha <= -1.0 || beta <= -1.0) throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");
  const double ab = alpha + beta;
  Eigen::VectorXd diag(m);
  Eigen::VectorXd off(std::max(m - 1, 0));
  for (int k = 0; k < m; ++k) {
    if (k == 0) {
      diag(k) = (beta - alpha) / (ab + 2.0);
    } else {
      const double s = 2.0 * k + ab;
      diag(k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < m; ++k) {
    const double s = 2.0 * k + ab;
    double b;
    if (k == 1) {
      b = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      b = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    off(k - 1) = std::sqrt(b);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                              std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
  Rule1D rule;
  rule.x.resize(m);
  rule.w.resize(m);
  for (int i = 0; i < m; ++i) {
    rule.x[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.w[i] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace

const Rule1D& gauss_jacobi(int m, double alpha, double beta) {
  static std::mutex mutex;
  static std::map<std::tuple<int, double, double>, std::unique_ptr<Rule1D>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(m, alpha, beta);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<Rule1D>(compute_gauss_jacobi(m, alpha, beta))).first;
  }
  return *it->second;
}

Rule1D gauss_legendre(int m, double lo, double hi) {
  const Rule1D& ref = gauss_legendre(m);
  Rule1D out;
  out.x.resize(ref.size());
  out.w.resize(ref.size());
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    out.x[i] = mid + half * ref.x[i];
    out.w[i] = half * ref.w[i];
  }
  return out;
}

Rule1D graded_rule(double lo, double hi, bool toward_hi, double ratio, int depth, int m,
                   double endpoint_exponent) {
  if (!(hi > lo)) throw std::invalid_argument("graded_rule: empty interval");
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("graded_rule: ratio must be in (0,1)");
  const double len = hi - lo;
  const double e = toward_hi ? hi : lo;
  // Distances from the graded endpoint, decreasing: len, len*ratio, ..., len*ratio^depth, 0.
  std::vector<double> dist;
  dist.push_back(len);
  for (int k = 1; k <= depth; ++k) dist.push_back(len * std::pow(ratio, k));
  dist.push_back(0.0);

  Rule1D out;
  for (std::size_t p = 0; p + 1 < dist.size(); ++p) {
    const double d_far = dist[p];
    const double d_near = dist[p + 1];
    const bool touches = (p + 2 == dist.size());
    if (touches && endpoint_exponent != 0.0) {
      // x = e -/+ t with t in [0, d_far]; weight t^gamma. Map t = d_far (1+s)/2,
      // weight (1+s)^gamma -> Gauss-Jacobi(alpha=0, beta=gamma).
      const Rule1D& gj = gauss_jacobi(m, 0.0, endpoint_exponent);
      const double scale = std::pow(0.5 * d_far, endpoint_exponent + 1.0);
      for (std::size_t i = 0; i < gj.size(); ++i) {
        const double t = 0.5 * d_far * (1.0 + gj.x[i]);
        out.x.push_back(toward_hi ? e - t : e + t);
        out.w.push_back(gj.w[i] * scale);
      }
      continue;
    }
    const double a = toward_hi ? e - d_far : e + d_near;
    const double b = toward_hi ? e - d_near : e + d_far;
    Rule1D panel = gauss_legendre(m, a, b);
    if (endpoint_exponent != 0.0) {
      for (std::size_t i = 0; i < panel.size(); ++i) {
        panel.w[i] *= std::pow(std::abs(panel.x[i] - e), endpoint_exponent);
      }
    }
    out.append(panel);
  }
  return out;
}

Rule1D trapezoid_circle(int m) {
  Rule1D out;
  out.x.resize(m);
  out.w.assign(m, 2.0 * std::numbers::pi / m);
  for (int i = 0; i < m; ++i) out.x[i] = 2.0 * std::numbers::pi * i / m;
  return out;
}

}  // namespace confext
