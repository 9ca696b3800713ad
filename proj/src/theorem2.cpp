#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <numbers>

#include "confext/errors.hpp"
#include "confext/inequalities.hpp"
#include "confext/parallel.hpp"
#include "confext/special.hpp"

namespace confext {

LimitFunctionalField::LimitFunctionalField(int n, int m) : n_(n), params_(n, 2.0 - n) {
  if (n <= 2) throw DomainError("limit functional: requires n > 2");
  coarse_ = std::make_shared<const QuadratureRule>(kernel_rule(params_, m));
  fine_ = std::make_shared<const QuadratureRule>(kernel_rule(params_, 2 * m));
}

PointValue LimitFunctionalField::evaluate(std::span<const double> eta) const {
  if (static_cast<int>(eta.size()) != n_) throw DomainError("limit functional: point has wrong dimension");
  const std::vector<double> z = phi_inverse(eta);
  const double xn = z.back();
  double lead = (xn + 0.5) * (xn + 0.5);
  for (int i = 0; i + 1 < n_; ++i) lead += z[i] * z[i];
  lead = std::log(lead);
  auto run = [&](const QuadratureRule& rule) {
    KahanSum s;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      auto U = rule.point(k);
      double r2 = 0.25;
      for (int i = 0; i + 1 < n_; ++i) {
        const double y = z[i] + xn * U[i];
        r2 += y * y;
      }
      s.add(rule.weights[k] * std::log(r2));
    }
    return lead - s.value();
  };
  const double coarse = run(*coarse_);
  const double fine = run(*fine_);
  return {fine, std::abs(fine - coarse)};
}

double LimitFunctionalField::profile(double r) const {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("limit functional: radius must lie in [0, 1]");
  // On the north ray phi^{-1}(r e_n) = (0, (1-r)/(2(1+r))), and the U integral is radial.
  const double xn = 0.5 * (1.0 - r) / (1.0 + r);
  if (xn == 0.0) return 0.0;
  const int k = n_ - 2;
  const double c = params_.d() * sphere_area(k);
  boost::math::quadrature::exp_sinh<double> integrator;
  const double integral = integrator.integrate(
      [&](double s) {
        if (s == 0.0) return 0.0;
        return std::pow(s, k) * std::pow(1.0 + s * s, -(n_ - 1.0)) * std::log(xn * xn * s * s + 0.25);
      },
      1e-14);
  return 2.0 * std::log(xn + 0.5) - c * integral;
}

FieldFunction LimitFunctionalField::as_field() const {
  FieldFunction u;
  u.domain = Domain::ball;
  u.n = n_;
  auto self = std::make_shared<LimitFunctionalField>(*this);
  u.eval = [self](std::span<const double> eta) {
    double r2 = 0.0;
    for (double x : eta) r2 += x * x;
    return self->profile(std::min(1.0, std::sqrt(r2)));
  };
  return u;
}

LimitFunctionalField compute_In(int n, int m) { return LimitFunctionalField(n, m); }

double limit_at_origin(int n) {
  using boost::math::digamma;
  return 2.0 * (std::numbers::ln2 - 0.5 * digamma(n - 1.0) + 0.5 * digamma(0.5 * (n - 1.0)));
}

PointValue limit_kernel_form4(std::span<const double> eta, const BiharmonicKernelConstants& consts) {
  const PointValue v = neumann_kernel_integral(constant_field(Domain::sphere, 4, 1.0), eta);
  return {consts.D * v.value, std::abs(consts.D) * v.error};
}

Theorem2Evaluator::Theorem2Evaluator(int n, int m) : n_(n), params_(n, 2.0 - n), max_degree_(32) {
  const LimitFunctionalField limit(n);
  auto level = [&](int mm) {
    Level l;
    l.parts = ball_rule_parts(n, mm);
    l.sphere = sphere_rule(n, mm);
    l.limit.resize(l.parts.radii.size());
    parallel_for(l.parts.radii.size(), [&](std::size_t i) { l.limit[i] = limit.profile(l.parts.radii[i]); });
    l.multipliers = multiplier_table(params_, l.parts.radii, max_degree_);
    return l;
  };
  coarse_ = level(m);
  fine_ = level(m + m / 2);
}

double Theorem2Evaluator::ball_integral(const Level& level, const FieldFunction& F, double* expansion_error) const {
  const SpectralValues sv = spectral_ball_values(params_, F, level.parts, level.multipliers, 1e-10);
  *expansion_error = std::max(*expansion_error, sv.reconstruction_error);
  const std::size_t nd = level.parts.directions.size();
  KahanSum s;
  for (std::size_t i = 0; i < level.parts.radii.size(); ++i) {
    KahanSum shell;
    for (std::size_t j = 0; j < nd; ++j)
      shell.add(level.parts.directions.weights[j] * std::exp(n_ * (level.limit[i] + sv.values[i * nd + j])));
    s.add(level.parts.radial_weights[i] * shell.value());
  }
  return s.value();
}

QuotientReport Theorem2Evaluator::quotient(const FieldFunction& F) const {
  if (F.domain != Domain::sphere || F.n != n_) throw DomainError("Theorem 2 quotient: expects sphere data");
  double expansion = 0.0;
  const double num_c = std::pow(ball_integral(coarse_, F, &expansion), 1.0 / n_);
  const double num_f = std::pow(ball_integral(fine_, F, &expansion), 1.0 / n_);
  auto boundary = [&](const QuadratureRule& rule) {
    std::vector<double> v = sample(F, rule);
    for (double& x : v) x = std::exp((n_ - 1.0) * x);
    return std::pow(weighted_sum(rule, v), 1.0 / (n_ - 1.0));
  };
  const double den_c = boundary(coarse_.sphere);
  const double den_f = boundary(fine_.sphere);
  // A sup-norm error e in the exponent moves the numerator by about e times itself.
  return make_report(num_f, std::abs(num_f - num_c) + expansion * num_f, den_f, std::abs(den_f - den_c));
}

QuotientReport quotient_thm2(const FieldFunction& F, int n, int m) { return Theorem2Evaluator(n, m).quotient(F); }

FieldFunction jacobian_shift(const MobiusTransform& t, double C) {
  FieldFunction F;
  F.domain = Domain::sphere;
  F.n = t.n();
  // log J / (n-1) with J = |T'|^{n-1} on the sphere.
  F.eval = [t, C](std::span<const double> xi) { return C + std::log(t.conformal_factor(xi)); };
  return F;
}

}  // namespace confext
