#include <cmath>
#include <numbers>
#include <sstream>

#include "confext/errors.hpp"
#include "confext/gauss.hpp"
#include "confext/inequalities.hpp"
#include "confext/parallel.hpp"
#include "confext/special.hpp"

namespace confext {
namespace {

// Interior sample points of B_n on a few shells, deterministic.
std::vector<std::vector<double>> interior_samples(int n, double max_radius) {
  std::vector<std::vector<double>> pts;
  const QuadratureRule dirs = sphere_rule(n, 2);
  for (double r : {0.0, 0.35 * max_radius, 0.7 * max_radius, max_radius}) {
    for (std::size_t j = 0; j < dirs.size(); ++j) {
      auto w = dirs.point(j);
      std::vector<double> p(n);
      for (int i = 0; i < n; ++i) p[i] = r * w[i];
      pts.push_back(p);
      if (r == 0.0) break;
    }
  }
  return pts;
}

double five_point_laplacian(const FieldFunction& u, std::span<const double> x, double h) {
  std::vector<double> p(x.begin(), x.end());
  const double u0 = u.eval(p);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = x[i] + h;
    acc += u.eval(p);
    p[i] = x[i] - h;
    acc += u.eval(p);
    p[i] = x[i];
    acc -= 2.0 * u0;
  }
  return acc / (h * h);
}

// Both sides of a ball/sphere exponential integral at resolutions m and 3m/2.
struct TwoLevel {
  double coarse = 0.0;
  double fine = 0.0;
  double error() const { return std::abs(fine - coarse); }
};

TwoLevel ball_exp_integral(const FieldFunction& u, int n, double k, int m) {
  TwoLevel out;
  for (int level = 0; level < 2; ++level) {
    const QuadratureRule rule = ball_rule(n, level == 0 ? m : m + m / 2);
    std::vector<double> v = sample(u, rule);
    for (double& x : v) x = std::exp(k * x);
    (level == 0 ? out.coarse : out.fine) = weighted_sum(rule, v);
  }
  return out;
}

TwoLevel sphere_exp_integral(const FieldFunction& u, int n, double k, int m) {
  TwoLevel out;
  for (int level = 0; level < 2; ++level) {
    const QuadratureRule rule = sphere_rule(n, level == 0 ? m : m + m / 2);
    std::vector<double> v = sample(u, rule);
    for (double& x : v) x = std::exp(k * x);
    (level == 0 ? out.coarse : out.fine) = weighted_sum(rule, v);
  }
  return out;
}

// u given on the ball, read on the sphere.
FieldFunction trace(const FieldFunction& u) {
  FieldFunction t = u;
  t.domain = Domain::sphere;
  return t;
}

}  // namespace

QuotientReport carleman_check(const FieldFunction& u, bool subharmonic, int m) {
  if (u.domain != Domain::ball || u.n != 2) throw DomainError("carleman_check: expects a function on B_2");
  // Richardson-extrapolated five-point Laplacian: fourth order, so harmonic polynomials
  // of degree <= 5 give rounding-level residuals.
  const double h = 0.02;
  for (const auto& x : interior_samples(2, 0.7)) {
    const double lap = (4.0 * five_point_laplacian(u, x, 0.5 * h) - five_point_laplacian(u, x, h)) / 3.0;
    const double tol = 1e-6 * std::max(1.0, std::abs(u.eval(x)));
    if (subharmonic ? lap < -tol : std::abs(lap) > tol) {
      std::ostringstream msg;
      msg << "carleman_check: input is not " << (subharmonic ? "subharmonic" : "harmonic") << " (Laplacian " << lap
          << " at (" << x[0] << ", " << x[1] << "))";
      throw Inadmissible(msg.str());
    }
  }
  const TwoLevel lhs = ball_exp_integral(u, 2, 2.0, m);
  const TwoLevel bd = sphere_exp_integral(trace(u), 2, 1.0, m);
  const double den = bd.fine * bd.fine;
  QuotientReport r = make_report(lhs.fine, lhs.error(), den, 2.0 * bd.fine * bd.error());
  judge(r, 1.0 / (4.0 * std::numbers::pi));
  return r;
}

QuotientReport corollary1_check(const FieldFunction& u, const FieldFunction& neumann, double reference,
                                double reference_error, int m) {
  if (u.domain != Domain::ball || u.n != 4) throw DomainError("corollary1_check: expects a function on B_4");
  if (neumann.domain != Domain::sphere || neumann.n != 4)
    throw DomainError("corollary1_check: Neumann data must live on S^3");
  // Spot check of the sign of the bilaplacian (stencil reach 2h stays inside the ball).
  const double h = 0.1;
  for (const auto& x : interior_samples(4, 0.6)) {
    const double b = polyharmonic_residual(u.eval, 2, x, h);
    if (b > 1e-8 * std::max(1.0, std::abs(u.eval(x)))) {
      std::ostringstream msg;
      msg << "corollary1_check: bilaplacian " << b << " > 0 at an interior sample";
      throw Inadmissible(msg.str());
    }
  }
  const QuadratureRule nodes = sphere_rule(4, m);
  for (double v : sample(neumann, nodes)) {
    if (v > 1.0 + 1e-8) {
      std::ostringstream msg;
      msg << "corollary1_check: -du/dgamma = " << v << " exceeds 1 on the boundary";
      throw Inadmissible(msg.str());
    }
  }
  const TwoLevel in = ball_exp_integral(u, 4, 4.0, m);
  const TwoLevel bd = sphere_exp_integral(trace(u), 4, 3.0, m);
  const double num = std::pow(in.fine, 0.25);
  const double den = std::cbrt(bd.fine);
  QuotientReport r = make_report(num, 0.25 * num * in.error() / in.fine, den, den * bd.error() / (3.0 * bd.fine));
  judge(r, reference, reference_error);
  return r;
}

PointValue corollary1_constant(int m) {
  const QuotientReport r = quotient_thm2(constant_field(Domain::sphere, 4, 0.0), 4, m);
  return {r.quotient, r.quotient_error()};
}

DominationCheck domination_bounds_check(const KernelParams& params, std::span<const std::vector<double>> points) {
  const int n = params.n();
  const double eps = params.eps();
  if (!(eps > 0.0 && eps <= 0.5)) throw DomainError("domination_bounds_check: requires 0 < eps <= 0.5");
  if (n < 3) throw DomainError("domination_bounds_check: requires n >= 3");
  DominationCheck out;
  const Rule1D gl = gauss_legendre(40, 0.0, 1.0);
  double integral = 0.0;
  for (std::size_t i = 0; i < gl.size(); ++i)
    integral += gl.w[i] * std::pow(gl.x[i], n - 2) * std::pow(1.0 + gl.x[i] * gl.x[i], -(n - 1.0));
  out.A = 0.5 * normalization(n, 0.0) * sphere_area(n - 2) * integral;
  out.B = normalization(n, 2.0 - n) / normalization(n, 0.0);
  std::vector<double> values(points.size());
  parallel_for(points.size(), [&](std::size_t k) {
    double r2 = 0.0;
    for (double x : points[k]) r2 += x * x;
    values[k] = extension_of_one(params, std::sqrt(r2));
  });
  out.min_value = INFINITY;
  out.max_power = 0.0;
  for (double v : values) {
    out.min_value = std::min(out.min_value, v);
    out.max_power = std::max(out.max_power, std::pow(v, (n - 2.0) / eps));
  }
  return out;
}

}  // namespace confext
