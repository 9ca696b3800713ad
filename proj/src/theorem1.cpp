#include <cmath>

#include "confext/errors.hpp"
#include "confext/inequalities.hpp"
#include "confext/parallel.hpp"
#include "confext/special.hpp"

namespace confext {

Theorem1Evaluator::Theorem1Evaluator(KernelParams params, int m) : params_(params), max_degree_(32) {
  if (!(params.eps() > 0.0)) throw DomainError("Theorem 1 requires eps = n-2+a > 0");
  auto level = [&](int mm) {
    Level l;
    l.parts = ball_rule_parts(params.n(), mm);
    l.sphere = sphere_rule(params.n(), mm);
    l.multipliers = multiplier_table(params, l.parts.radii, max_degree_);
    return l;
  };
  coarse_ = level(m);
  fine_ = level(m + m / 2);
}

double Theorem1Evaluator::ball_norm(const Level& level, const FieldFunction& f, double* expansion_error) const {
  const SpectralValues sv = spectral_ball_values(params_, f, level.parts, level.multipliers, 1e-10);
  *expansion_error = std::max(*expansion_error, sv.reconstruction_error);
  const double q = params_.interior_exponent();
  const std::size_t nd = level.parts.directions.size();
  KahanSum s;
  for (std::size_t i = 0; i < level.parts.radii.size(); ++i) {
    KahanSum shell;
    for (std::size_t j = 0; j < nd; ++j)
      shell.add(level.parts.directions.weights[j] * std::pow(std::abs(sv.values[i * nd + j]), q));
    s.add(level.parts.radial_weights[i] * shell.value());
  }
  return std::pow(s.value(), 1.0 / q);
}

QuotientReport Theorem1Evaluator::quotient(const FieldFunction& ftilde) const {
  if (ftilde.domain != Domain::sphere || ftilde.n != params_.n())
    throw DomainError("Theorem 1 quotient: expects sphere data of matching dimension");
  const double p = params_.boundary_exponent();
  const double q = params_.interior_exponent();
  double expansion = 0.0;
  const double num_c = ball_norm(coarse_, ftilde, &expansion);
  const double num_f = ball_norm(fine_, ftilde, &expansion);
  const double den_c = lp_norm_values(coarse_.sphere, sample(ftilde, coarse_.sphere), p);
  const double den_f = lp_norm_values(fine_.sphere, sample(ftilde, fine_.sphere), p);
  // A sup-norm expansion error moves the ball norm by at most its size times |B|^{1/q}.
  const double num_err = std::abs(num_f - num_c) + expansion * std::pow(ball_volume(params_.n()), 1.0 / q);
  return make_report(num_f, num_err, den_f, std::abs(den_f - den_c));
}

QuotientReport quotient_thm1(const FieldFunction& ftilde, const KernelParams& params, int m) {
  return Theorem1Evaluator(params, m).quotient(ftilde);
}

PointValue sharp_constant(const KernelParams& params, int m) {
  const QuotientReport r = quotient_thm1(constant_field(Domain::sphere, params.n(), 1.0), params, m);
  return {r.quotient, r.quotient_error()};
}

double sharp_constant_closed_form(int n) {
  if (n < 3) throw DomainError("sharp_constant_closed_form: requires n >= 3");
  const double nn = n;
  return std::pow(nn, -(nn - 2.0) / (2.0 * (nn - 1.0))) *
         std::pow(ball_volume(n), -(nn - 2.0) / (2.0 * nn * (nn - 1.0)));
}

FieldFunction conformal_transform(const FieldFunction& ftilde, const MobiusTransform& t, const KernelParams& params) {
  if (ftilde.domain != Domain::sphere) throw DomainError("conformal_transform: expects sphere data");
  FieldFunction g;
  g.domain = Domain::sphere;
  g.n = ftilde.n;
  const double half_eps = 0.5 * params.eps();
  g.eval = [ftilde, t, half_eps](std::span<const double> xi) {
    const std::vector<double> image = t.apply(xi);
    return std::pow(t.conformal_factor(xi), half_eps) * ftilde.eval(image);
  };
  return g;
}

InvarianceCheck conformal_invariance_check(const FieldFunction& ftilde, const MobiusTransform& t,
                                           const KernelParams& params,
                                           std::span<const std::vector<double>> points, int m) {
  if (params.eps() == 0.0) throw DomainError("conformal_invariance_check: requires eps != 0");
  const FieldFunction g = conformal_transform(ftilde, t, params);
  std::vector<double> dev(points.size()), tol(points.size());
  parallel_for(points.size(), [&](std::size_t k) {
    const std::vector<double>& eta = points[k];
    const PointValue lhs = ball_extension_direct(params, g, eta, m);
    const double w = std::pow(t.conformal_factor(eta), 0.5 * params.eps());
    const PointValue rhs = ball_extension_direct(params, ftilde, t.apply(eta), m);
    dev[k] = std::abs(lhs.value - w * rhs.value);
    tol[k] = 3.0 * (lhs.error + w * rhs.error) + 1e-9 * std::max(1.0, std::abs(lhs.value));
  });
  InvarianceCheck out;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (dev[k] - tol[k] > out.max_deviation - out.tolerance || k == 0) {
      out.max_deviation = dev[k];
      out.tolerance = tol[k];
    }
  }
  return out;
}

}  // namespace confext
