#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "confext/errors.hpp"
#include "confext/gauss.hpp"
#include "confext/inequalities.hpp"
#include "confext/parallel.hpp"

namespace confext {

FieldFunction extremal_eval(const ExtremalCandidate& cand, const KernelParams& params) {
  if (!(cand.lambda > 0.0)) throw DomainError("extremal candidate: lambda must be positive");
  const int k = params.n() - 1;
  std::vector<double> y0 = cand.Y0.empty() ? std::vector<double>(k, 0.0) : cand.Y0;
  if (static_cast<int>(y0.size()) != k) throw DomainError("extremal candidate: Y0 has wrong dimension");
  FieldFunction f;
  f.domain = Domain::plane;
  f.n = params.n();
  f.decay = params.eps();
  const double c = cand.c, lam = cand.lambda, half_eps = 0.5 * params.eps();
  f.eval = [c, lam, half_eps, y0](std::span<const double> Y) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < y0.size(); ++i) d2 += (Y[i] - y0[i]) * (Y[i] - y0[i]);
    return c * std::pow(lam / (lam * lam + d2), half_eps);
  };
  return f;
}

QuotientReport halfspace_quotient(const FieldFunction& f, const KernelParams& params, int m, double scale,
                                  std::span<const double> center, int kernel_m) {
  if (f.domain != Domain::plane || f.n != params.n()) throw DomainError("halfspace_quotient: expects plane data");
  if (!(params.eps() > 0.0)) throw DomainError("halfspace_quotient: requires eps > 0");
  const int n = params.n();
  std::vector<double> shift(n - 1, 0.0);
  if (!center.empty()) {
    if (static_cast<int>(center.size()) != n - 1) throw DomainError("halfspace_quotient: center has wrong dimension");
    std::copy(center.begin(), center.end(), shift.begin());
  }
  const double p = params.boundary_exponent();
  const double q = params.interior_exponent();
  const HalfspaceExtension ext(f, params, kernel_m);

  auto numerator = [&](int mm, double* pointwise) {
    const QuadratureRule rule = halfspace_rule_from_ball(n, mm, scale);
    std::vector<double> u(rule.size()), du(rule.size());
    parallel_for(rule.size(), [&](std::size_t i) {
      auto z = rule.point(i);
      std::vector<double> X(z.begin(), z.end() - 1);
      for (int k = 0; k < n - 1; ++k) X[k] += shift[k];
      const PointValue v = ext.evaluate(X, z.back());
      u[i] = std::abs(v.value);
      du[i] = v.error;
    });
    KahanSum s, ds;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      s.add(rule.weights[i] * std::pow(u[i], q));
      ds.add(rule.weights[i] * std::pow(u[i], q - 1.0) * du[i]);
    }
    const double norm = std::pow(s.value(), 1.0 / q);
    *pointwise = ds.value() * std::pow(norm, 1.0 - q);
    return norm;
  };
  auto denominator = [&](int mm) {
    const QuadratureRule rule = plane_rule(n, mm, p * f.decay, scale);
    std::vector<double> v(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
      auto y = rule.point(i);
      std::vector<double> Y(y.begin(), y.end());
      for (int k = 0; k < n - 1; ++k) Y[k] += shift[k];
      v[i] = f.eval(Y);
    }
    return lp_norm_values(rule, v, p);
  };

  double pw_c = 0.0, pw_f = 0.0;
  const double num_c = numerator(m, &pw_c);
  const double num_f = numerator(m + m / 2, &pw_f);
  const double den_c = denominator(2 * m);
  const double den_f = denominator(3 * m);
  return make_report(num_f, std::abs(num_f - num_c) + pw_f, den_f, std::abs(den_f - den_c));
}

ELResidual el_residual(const FieldFunction& f, const KernelParams& params, double p,
                       std::span<const std::vector<double>> sample_points, int m, int kernel_m) {
  if (f.domain != Domain::plane || f.n != params.n()) throw DomainError("el_residual: expects plane data");
  if (!(params.eps() > 0.0)) throw DomainError("el_residual: requires eps > 0");
  if (sample_points.empty()) throw DomainError("el_residual: no sample points");
  const int n = params.n();
  const double a = params.a();
  const double power = n * p / (n - 1) - 1.0;
  const HalfspaceExtension ext(f, params, kernel_m);

  // Hemisphere directions w = (sqrt(1-t^2) sigma, t): t in (0,1) with weight
  // t^{1-a} (1-t^2)^{(n-3)/2}, sigma on S^{n-2}. P_a f carries x_n^{1-a} terms, so
  // both t and rho are graded toward 0.
  const double alpha = 0.5 * (n - 3);
  std::vector<double> ts, tw;
  {
    const Rule1D low = graded_rule(0.0, 0.5, false, 0.2, 4, m / 2 + 2, 1.0 - a);
    for (std::size_t i = 0; i < low.size(); ++i) {
      const double t = low.x[i];
      ts.push_back(t);
      tw.push_back(low.w[i] * std::pow((1.0 - t) * (1.0 + t), alpha));
    }
    // t = (3 + x)/4 on [1/2, 1]: (1-t)^alpha = ((1-x)/4)^alpha.
    const Rule1D& high = gauss_jacobi(m, alpha, 0.0);
    for (std::size_t i = 0; i < high.size(); ++i) {
      const double t = 0.25 * (3.0 + high.x[i]);
      ts.push_back(t);
      tw.push_back(high.w[i] * 0.25 * std::pow(0.25, alpha) * std::pow(1.0 + t, alpha) * std::pow(t, 1.0 - a));
    }
  }
  std::vector<std::vector<double>> sigmas;
  std::vector<double> sw;
  if (n == 2) {
    sigmas = {{-1.0}, {1.0}};
    sw = {1.0, 1.0};
  } else {
    const QuadratureRule s = sphere_rule(n - 1, m);
    for (std::size_t j = 0; j < s.size(); ++j) {
      auto pt = s.point(j);
      sigmas.emplace_back(pt.begin(), pt.end());
      sw.push_back(s.weights[j]);
    }
  }
  // rho on [0, 1] graded toward 0, and rho = 1/v on [1, inf) where the integrand decays
  // like rho^{-(2n - eps)}.
  Rule1D rho = graded_rule(0.0, 1.0, false, 0.25, m / 2 + 4, m);
  {
    const Rule1D tail = graded_rule(0.0, 1.0, false, 0.25, m / 2, m);
    for (std::size_t i = 0; i < tail.size(); ++i) {
      rho.x.push_back(1.0 / tail.x[i]);
      rho.w.push_back(tail.w[i] / (tail.x[i] * tail.x[i]));
    }
  }

  ELResidual out;
  for (const std::vector<double>& Y : sample_points) {
    if (static_cast<int>(Y.size()) != n - 1) throw DomainError("el_residual: sample point has wrong dimension");
    const double fy = f.eval(Y);
    if (!(fy > 0.0)) throw DomainError("el_residual: f must be positive at the sample points");
    const std::size_t nt = ts.size(), ns = sigmas.size();
    std::vector<double> rows(rho.size());
    parallel_for(rho.size(), [&](std::size_t ir) {
      KahanSum s;
      std::vector<double> X(n - 1);
      for (std::size_t it = 0; it < nt; ++it) {
        const double t = ts[it];
        const double lateral = rho.x[ir] * std::sqrt((1.0 - t) * (1.0 + t));
        for (std::size_t is = 0; is < ns; ++is) {
          for (int k = 0; k < n - 1; ++k) X[k] = Y[k] + lateral * sigmas[is][k];
          const double u = ext.coarse_value(X, rho.x[ir] * t);
          s.add(tw[it] * sw[is] * std::pow(std::abs(u), power));
        }
      }
      rows[ir] = rho.w[ir] * s.value();
    });
    KahanSum total;
    for (double r : rows) total.add(r);
    out.ratios.push_back(total.value() / std::pow(fy, p - 1.0));
  }
  double mean = 0.0;
  for (double r : out.ratios) mean += r;
  mean /= out.ratios.size();
  double var = 0.0;
  for (double r : out.ratios) var += (r - mean) * (r - mean);
  out.cov = std::sqrt(var / out.ratios.size()) / std::abs(mean);
  return out;
}

namespace {

// Relative deviations of v on rings about a trial center.
struct RingResidual {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  std::function<double(const Eigen::VectorXd&)> v;
  std::vector<double> radii;
  std::vector<Eigen::VectorXd> directions;

  int inputs() const { return static_cast<int>(directions.front().size()); }
  int values() const { return static_cast<int>(radii.size() * directions.size()); }

  // Angular deviations relative to each ring mean, divided by the relative change of
  // the ring means across radii (so far-away centers, where v looks flat on every
  // ring, are not rewarded).
  int operator()(const Eigen::VectorXd& c, Eigen::VectorXd& out) const {
    out.resize(values());
    std::vector<double> means;
    int k = 0;
    for (double r : radii) {
      const int start = k;
      double mean = 0.0;
      for (const auto& w : directions) {
        out(k) = v(c + r * w);
        mean += out(k++);
      }
      mean /= directions.size();
      for (int i = start; i < k; ++i) out(i) = out(i) / mean - 1.0;
      means.push_back(mean);
    }
    const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
    const double spread = (*hi - *lo) / (0.5 * (std::abs(*hi) + std::abs(*lo)));
    out /= spread;
    return 0;
  }

  double rms(const Eigen::VectorXd& c) const {
    Eigen::VectorXd r;
    (*this)(c, r);
    const double s = std::sqrt(r.squaredNorm() / r.size());
    return std::isfinite(s) ? s : INFINITY;
  }
};

}  // namespace

Lemma3Result lemma3_classify(const std::function<double(double)>& u, double alpha, int n, double threshold) {
  if (n < 2) throw DomainError("lemma3_classify: n must be at least 2");
  RingResidual res;
  res.v = [u, alpha](const Eigen::VectorXd& x) {
    const double r2 = x.squaredNorm();
    Eigen::VectorXd y = x / r2;
    y(0) -= 1.0;
    return std::pow(r2, 0.5 * alpha) * u(y.norm());
  };
  res.radii = {0.15, 0.3, 0.45};
  const QuadratureRule dirs = sphere_rule(n, 4);
  for (std::size_t j = 0; j < dirs.size(); ++j) {
    auto w = dirs.point(j);
    res.directions.emplace_back(Eigen::Map<const Eigen::VectorXd>(w.data(), n));
  }

  // Coarse scan over a box around the segment [0, e1], then a least-squares polish.
  Eigen::VectorXd best = Eigen::VectorXd::Zero(n);
  double best_rms = INFINITY;
  const int steps = n <= 3 ? 12 : 6;
  std::vector<int> idx(n, 0);
  while (true) {
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c(i) = (i == 0 ? -0.5 : -1.0) + (i == 0 ? 2.5 : 2.0) * idx[i] / steps;
    const double r = res.rms(c);
    if (r < best_rms) {
      best_rms = r;
      best = c;
    }
    int i = 0;
    while (i < n && ++idx[i] > steps) idx[i++] = 0;
    if (i == n) break;
  }
  Eigen::NumericalDiff<RingResidual> diff(res);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<RingResidual>> lm(diff);
  lm.parameters.xtol = 1e-15;
  lm.parameters.ftol = 1e-15;
  lm.parameters.maxfev = 2000;
  Eigen::VectorXd c = best;
  lm.minimize(c);
  const double polished = res.rms(c);
  if (polished < best_rms) {
    best = c;
    best_rms = polished;
  }
  Lemma3Result out;
  out.center.assign(best.data(), best.data() + n);
  out.residual = best_rms;
  out.is_radial = best_rms < threshold;
  return out;
}

}  // namespace confext
