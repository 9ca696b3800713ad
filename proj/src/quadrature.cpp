#include "confext/quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "confext/errors.hpp"
#include "confext/gauss.hpp"
#include "confext/geometry.hpp"
#include "confext/parallel.hpp"
#include "confext/special.hpp"

namespace confext {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

// Unit sphere S^{k-1} in R^k; k = 1 is the two-point set {-1, +1}.
QuadratureRule unit_sphere(int k, int m) {
  QuadratureRule rule;
  rule.dim = k;
  rule.m = m;
  if (k == 1) {
    rule.points = {-1.0, 1.0};
    rule.weights = {1.0, 1.0};
    return rule;
  }
  if (k == 2) {
    const Rule1D circle = trapezoid_circle(2 * m);
    for (std::size_t i = 0; i < circle.size(); ++i) {
      rule.points.push_back(std::cos(circle.x[i]));
      rule.points.push_back(std::sin(circle.x[i]));
      rule.weights.push_back(circle.w[i]);
    }
    return rule;
  }
  const double alpha = 0.5 * (k - 3);
  const Rule1D& gj = gauss_jacobi(m, alpha, alpha);
  const QuadratureRule sub = unit_sphere(k - 1, m);
  for (std::size_t i = 0; i < gj.size(); ++i) {
    const double t = gj.x[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (std::size_t j = 0; j < sub.size(); ++j) {
      auto p = sub.point(j);
      for (double c : p) rule.points.push_back(s * c);
      rule.points.push_back(t);
      rule.weights.push_back(gj.w[i] * sub.weights[j]);
    }
  }
  return rule;
}

// Radial rule on [0, inf) in theta with r = scale * tan(theta), weight r^{k-1} dr,
// panels graded toward pi/2 and a Gauss-Jacobi last panel for (pi/2 - theta)^gamma.
Rule1D radial_tan_rule(int k, int m, double decay, double scale) {
  const double gamma = decay - (k + 1);
  const int pts = m / 2 + 2;
  Rule1D theta = gauss_legendre(pts, 0.0, 0.25 * std::numbers::pi);
  const int depth = std::min(m / 2 + 4, 18);
  const double g = std::max(gamma, -0.999);
  Rule1D tail = graded_rule(0.25 * std::numbers::pi, kHalfPi, true, 0.25, depth, pts, g);
  // graded_rule folds |theta - pi/2|^g into the weights; divide it back out so the
  // integrand is evaluated plainly at the nodes.
  for (std::size_t i = 0; i < tail.size(); ++i) tail.w[i] /= std::pow(kHalfPi - tail.x[i], g);
  theta.append(tail);
  Rule1D out;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double t = theta.x[i];
    const double r = scale * std::tan(t);
    // Beyond this radius every admissible integrand is below double precision.
    if (!(r < 1e60 * scale)) continue;
    const double c = std::cos(t);
    const double jac = scale / (c * c);
    out.x.push_back(r);
    out.w.push_back(theta.w[i] * jac * std::pow(r, k - 1));
  }
  return out;
}

void check_decay(const RuleSpec& spec, int dimension) {
  if (!(spec.decay > dimension)) {
    std::ostringstream msg;
    msg << "integrand decay " << spec.decay << " must exceed the domain dimension " << dimension;
    throw BadDecay(msg.str());
  }
}

}  // namespace

double QuadratureRule::total_weight() const {
  KahanSum s;
  for (double w : weights) s.add(w);
  return s.value();
}

QuadratureRule sphere_rule(int n, int m) {
  if (n < 2) throw DomainError("sphere_rule: n must be at least 2");
  if (m < 1) throw DomainError("sphere_rule: resolution must be positive");
  QuadratureRule rule = unit_sphere(n, m);
  rule.spec = RuleSpec{Domain::sphere, n};
  rule.m = m;
  return rule;
}

BallRuleParts ball_rule_parts(int n, int m) {
  if (n < 2) throw DomainError("ball_rule: n must be at least 2");
  if (m < 1) throw DomainError("ball_rule: resolution must be positive");
  const int pts = m / 2 + 2;
  const Rule1D radial = graded_rule(0.0, 1.0, true, 0.3, m, pts);
  BallRuleParts parts;
  parts.radii = radial.x;
  for (std::size_t i = 0; i < radial.size(); ++i) parts.radial_weights.push_back(radial.w[i] * std::pow(radial.x[i], n - 1));
  parts.directions = sphere_rule(n, m);
  return parts;
}

QuadratureRule ball_rule(int n, int m) {
  const BallRuleParts parts = ball_rule_parts(n, m);
  const QuadratureRule& sph = parts.directions;
  QuadratureRule rule;
  rule.spec = RuleSpec{Domain::ball, n};
  rule.m = m;
  rule.dim = n;
  rule.points.reserve(parts.radii.size() * sph.size() * n);
  for (std::size_t i = 0; i < parts.radii.size(); ++i) {
    const double r = parts.radii[i];
    for (std::size_t j = 0; j < sph.size(); ++j) {
      for (double c : sph.point(j)) rule.points.push_back(r * c);
      rule.weights.push_back(parts.radial_weights[i] * sph.weights[j]);
    }
  }
  return rule;
}

QuadratureRule plane_rule(int n, int m, double decay, double scale) {
  RuleSpec spec{Domain::plane, n, decay, scale};
  check_decay(spec, n - 1);
  const int k = n - 1;
  const Rule1D radial = radial_tan_rule(k, m, decay, scale);
  const QuadratureRule sph = unit_sphere(k, m);
  QuadratureRule rule;
  rule.spec = spec;
  rule.m = m;
  rule.dim = k;
  for (std::size_t i = 0; i < radial.size(); ++i) {
    for (std::size_t j = 0; j < sph.size(); ++j) {
      for (double c : sph.point(j)) rule.points.push_back(radial.x[i] * c);
      rule.weights.push_back(radial.w[i] * sph.weights[j]);
    }
  }
  return rule;
}

Rule1D halfline_rule(int m, double decay, double scale) {
  if (!(decay > 1.0)) throw BadDecay("halfline_rule: decay must exceed 1");
  return radial_tan_rule(1, m, decay, scale);
}

QuadratureRule halfspace_rule(int n, int m, double decay, double scale) {
  RuleSpec spec{Domain::halfspace, n, decay, scale};
  check_decay(spec, n);
  // After integrating out X the x_n profile decays like x_n^{n-1-decay}.
  const Rule1D height = radial_tan_rule(1, m, decay - (n - 1), scale);
  // Graded toward x_n = 0 as well: split theta's first panel.
  Rule1D near = graded_rule(0.0, 0.25 * std::numbers::pi, false, 0.25, m / 2 + 4, m);
  Rule1D hx;
  for (std::size_t i = 0; i < near.size(); ++i) {
    const double c = std::cos(near.x[i]);
    hx.x.push_back(scale * std::tan(near.x[i]));
    hx.w.push_back(near.w[i] * scale / (c * c));
  }
  for (std::size_t i = 0; i < height.size(); ++i) {
    if (height.x[i] > scale * 1.0 - 1e-15) {
      hx.x.push_back(height.x[i]);
      hx.w.push_back(height.w[i]);
    }
  }
  const QuadratureRule plane = plane_rule(n, m, decay, scale);
  QuadratureRule rule;
  rule.spec = spec;
  rule.m = m;
  rule.dim = n;
  for (std::size_t i = 0; i < hx.size(); ++i) {
    for (std::size_t j = 0; j < plane.size(); ++j) {
      for (double c : plane.point(j)) rule.points.push_back(c);
      rule.points.push_back(hx.x[i]);
      rule.weights.push_back(hx.w[i] * plane.weights[j]);
    }
  }
  return rule;
}

QuadratureRule halfspace_rule_from_ball(int n, int m, double scale) {
  if (!(scale > 0.0)) throw DomainError("halfspace_rule_from_ball: scale must be positive");
  const QuadratureRule ball = ball_rule(n, m);
  QuadratureRule rule;
  rule.spec = RuleSpec{Domain::halfspace, n, 0.0, scale, true};
  rule.m = m;
  rule.dim = n;
  const double volume = std::pow(scale, n);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const std::vector<double> z = phi_inverse(ball.point(i));
    for (double c : z) rule.points.push_back(scale * c);
    rule.weights.push_back(volume * ball.weights[i] / jacobian_phi(z));
  }
  return rule;
}

QuadratureRule sphere_rule_around(std::span<const double> axis, int m, double width) {
  const auto n = static_cast<Eigen::Index>(axis.size());
  Eigen::VectorXd e(n);
  for (Eigen::Index i = 0; i < n; ++i) e(i) = axis[static_cast<std::size_t>(i)];
  e.normalize();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(e);
  const Eigen::MatrixXd frame = qr.householderQ();
  const double w = std::clamp(width, 1e-14, 1.0);
  const int depth = std::max(2, static_cast<int>(std::ceil(std::log(std::numbers::pi / w) / std::log(3.0))) + 2);
  const Rule1D psi = graded_rule(0.0, std::numbers::pi, false, 1.0 / 3.0, depth, m);
  const QuadratureRule sub = unit_sphere(static_cast<int>(n) - 1, m);
  QuadratureRule rule;
  rule.spec = RuleSpec{Domain::sphere, static_cast<int>(n)};
  rule.m = m;
  rule.dim = static_cast<int>(n);
  Eigen::VectorXd p(n);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double c = std::cos(psi.x[i]);
    const double s = std::sin(psi.x[i]);
    const double wpsi = psi.w[i] * std::pow(s, static_cast<double>(n - 2));
    for (std::size_t j = 0; j < sub.size(); ++j) {
      p = c * frame.col(0);
      auto dir = sub.point(j);
      for (Eigen::Index k = 1; k < n; ++k) p += s * dir[static_cast<std::size_t>(k - 1)] * frame.col(k);
      for (Eigen::Index k = 0; k < n; ++k) rule.points.push_back(p(k));
      rule.weights.push_back(wpsi * sub.weights[j]);
    }
  }
  return rule;
}

QuadratureRule make_rule(const RuleSpec& spec, int m) {
  switch (spec.domain) {
    case Domain::sphere:
      return sphere_rule(spec.n, m);
    case Domain::ball:
      return ball_rule(spec.n, m);
    case Domain::plane:
      return plane_rule(spec.n, m, spec.decay, spec.scale);
    case Domain::halfspace:
      return spec.pullback ? halfspace_rule_from_ball(spec.n, m, spec.scale) : halfspace_rule(spec.n, m, spec.decay, spec.scale);
  }
  throw DomainError("make_rule: unknown domain");
}

QuadratureRule refined(const QuadratureRule& rule) {
  QuadratureRule r = make_rule(rule.spec, 2 * rule.m);
  r.target = rule.target;
  return r;
}

double weighted_sum(const QuadratureRule& rule, std::span<const double> values) {
  KahanSum s;
  for (std::size_t i = 0; i < rule.size(); ++i) s.add(rule.weights[i] * values[i]);
  return s.value();
}

std::vector<double> sample(const FieldFunction& f, const QuadratureRule& rule) {
  std::vector<double> v(rule.size());
  parallel_for(rule.size(), [&](std::size_t i) { v[i] = f.eval(rule.point(i)); });
  return v;
}

namespace {

void check_field_decay(const FieldFunction& f, const QuadratureRule& rule, double power) {
  if (rule.spec.domain == Domain::plane || (rule.spec.domain == Domain::halfspace && !rule.spec.pullback)) {
    const int dimension = rule.spec.domain == Domain::plane ? rule.spec.n - 1 : rule.spec.n;
    if (!(f.decay * power > dimension)) {
      std::ostringstream msg;
      msg << "integrand decay " << f.decay * power << " does not exceed dimension " << dimension;
      throw BadDecay(msg.str());
    }
  }
}

Integral two_level(const QuadratureRule& rule, bool strict,
                   const std::function<double(const QuadratureRule&)>& eval) {
  const double coarse = eval(rule);
  const QuadratureRule fine_rule = refined(rule);
  const double fine = eval(fine_rule);
  Integral out{fine, std::abs(fine - coarse)};
  if (strict && out.error > rule.target * std::max(std::abs(fine), 1e-300) && out.error > 1e-14) {
    std::ostringstream msg;
    msg << "refinements disagree: " << coarse << " vs " << fine << " (m=" << rule.m << ")";
    throw NonConvergent(msg.str());
  }
  return out;
}

}  // namespace

Integral integrate(const FieldFunction& f, const QuadratureRule& rule, bool strict) {
  check_field_decay(f, rule, 1.0);
  return two_level(rule, strict, [&](const QuadratureRule& r) {
    const std::vector<double> v = sample(f, r);
    return weighted_sum(r, v);
  });
}

double lp_norm_values(const QuadratureRule& rule, std::span<const double> values, double p) {
  if (p >= NormSpec::infinity) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  KahanSum s;
  for (std::size_t i = 0; i < rule.size(); ++i) s.add(rule.weights[i] * std::pow(std::abs(values[i]), p));
  return std::pow(s.value(), 1.0 / p);
}

Integral lp_norm(const FieldFunction& f, const QuadratureRule& rule, const NormSpec& spec) {
  if (!(spec.p > 0.0)) throw DomainError("lp_norm: p must be positive");
  if (spec.q > 0.0) return lorentz_norm(f, rule, spec);
  if (spec.p < NormSpec::infinity) check_field_decay(f, rule, spec.p);
  return two_level(rule, false, [&](const QuadratureRule& r) {
    const std::vector<double> v = sample(f, r);
    return lp_norm_values(r, v, spec.p);
  });
}

double distribution_function_values(const QuadratureRule& rule, std::span<const double> values, double t) {
  if (!(t > 0.0)) throw DomainError("distribution_function: t must be positive");
  KahanSum s;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    if (std::abs(values[i]) > t) s.add(rule.weights[i]);
  }
  return s.value();
}

Integral distribution_function(const FieldFunction& f, const QuadratureRule& rule, double t) {
  return two_level(rule, false, [&](const QuadratureRule& r) {
    const std::vector<double> v = sample(f, r);
    return distribution_function_values(r, v, t);
  });
}

namespace {

// Node values sorted decreasingly by modulus with cumulative weights.
std::pair<std::vector<double>, std::vector<double>> decreasing_profile(const QuadratureRule& rule,
                                                                       std::span<const double> values) {
  std::vector<std::size_t> order(rule.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return std::abs(values[i]) > std::abs(values[j]); });
  std::vector<double> f(order.size());
  std::vector<double> cum(order.size());
  KahanSum s;
  for (std::size_t k = 0; k < order.size(); ++k) {
    f[k] = std::abs(values[order[k]]);
    s.add(rule.weights[order[k]]);
    cum[k] = s.value();
  }
  return {f, cum};
}

}  // namespace

double weak_norm_values(const QuadratureRule& rule, std::span<const double> values, double p) {
  const auto [f, cum] = decreasing_profile(rule, values);
  double best = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    // For t just below f[k], |{|f| > t}| is the weight of every node with value >= f[k].
    std::size_t j = k;
    while (j + 1 < f.size() && f[j + 1] == f[k]) ++j;
    best = std::max(best, f[k] * std::pow(cum[j], 1.0 / p));
    k = j;
  }
  return best;
}

Integral weak_norm(const FieldFunction& f, const QuadratureRule& rule, double p) {
  return two_level(rule, false, [&](const QuadratureRule& r) {
    const std::vector<double> v = sample(f, r);
    return weak_norm_values(r, v, p);
  });
}

double lorentz_norm_values(const QuadratureRule& rule, std::span<const double> values, double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) throw DomainError("lorentz_norm: exponents must be positive");
  if (q >= NormSpec::infinity) return weak_norm_values(rule, values, p);
  const auto [f, cum] = decreasing_profile(rule, values);
  // |{|f| >= t}| = cum[k] for t in (f[k+1], f[k]].
  KahanSum s;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double next = k + 1 < f.size() ? f[k + 1] : 0.0;
    const double band = std::pow(f[k], q) - std::pow(next, q);
    if (band > 0.0) s.add(std::pow(cum[k], q / p) * band / q);
  }
  return std::pow(p, 1.0 / q) * std::pow(s.value(), 1.0 / q);
}

Integral lorentz_norm(const FieldFunction& f, const QuadratureRule& rule, const NormSpec& spec) {
  return two_level(rule, false, [&](const QuadratureRule& r) {
    const std::vector<double> v = sample(f, r);
    return lorentz_norm_values(r, v, spec.p, spec.q);
  });
}

}  // namespace confext
