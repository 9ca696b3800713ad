#include "confext/kernels.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "confext/errors.hpp"
#include "confext/gauss.hpp"
#include "confext/geometry.hpp"
#include "confext/parallel.hpp"
#include "confext/special.hpp"

namespace confext {

namespace {

double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

double normalization_closed_form(int n, double a) {
  if (!(a < 1.0)) throw DomainError("normalization: a >= 1 makes the kernel non-integrable");
  if (n < 2) throw DomainError("normalization: n must be at least 2");
  const double log_d = std::lgamma(0.5 * (n - a)) - 0.5 * (n - 1) * std::log(std::numbers::pi) -
                       std::lgamma(0.5 * (1.0 - a));
  return std::exp(log_d);
}

double normalization_radial(int n, double a) {
  if (!(a < 1.0)) throw DomainError("normalization: a >= 1 makes the kernel non-integrable");
  if (n < 2) throw DomainError("normalization: n must be at least 2");
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double half_pi = 0.5 * std::numbers::pi;
  // The complement argument gives the distance to the nearer endpoint, which keeps
  // cos(theta) accurate next to pi/2 where cos^{-a} may be singular.
  auto integrand = [n, a, half_pi](double t, double tc) {
    const double c = (t > 0.5 * half_pi) ? std::sin(tc) : std::cos(t);
    return std::pow(std::sin(t), n - 2) * std::pow(c, -a);
  };
  const double value = integrator.integrate(integrand, 0.0, half_pi, 1e-14);
  return 1.0 / (sphere_area(n - 2) * value);
}

double normalization(int n, double a) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, double> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find({n, a});
    if (it != cache.end()) return it->second;
  }
  const double closed = normalization_closed_form(n, a);
  const double radial = normalization_radial(n, a);
  if (std::abs(closed - radial) > 1e-10 * closed) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "normalization routes disagree for n=" << n << ", a=" << a << ": " << closed << " vs " << radial;
    throw NonConvergent(msg.str());
  }
  std::lock_guard<std::mutex> lock(mutex);
  cache[{n, a}] = closed;
  return closed;
}

KernelParams::KernelParams(int n, double a) : n_(n), a_(a) {
  if (n < 2) throw DomainError("KernelParams: n must be at least 2");
  if (!(a < 1.0) || a < 2.0 - n - 1e-12) {
    std::ostringstream msg;
    msg << "KernelParams: a = " << a << " outside [" << 2 - n << ", 1)";
    throw DomainError(msg.str());
  }
  if (a_ < 2.0 - n) a_ = 2.0 - n;
  d_ = normalization(n, a_);
}

double KernelParams::boundary_exponent() const {
  if (!(eps() > 0.0)) throw DomainError("boundary exponent needs eps = n-2+a > 0");
  return 2.0 * (n_ - 1) / eps();
}

double KernelParams::interior_exponent() const {
  if (!(eps() > 0.0)) throw DomainError("interior exponent needs eps = n-2+a > 0");
  return 2.0 * n_ / eps();
}

double halfspace_kernel(const KernelParams& params, std::span<const double> X, double xn,
                        std::span<const double> Y) {
  const double s = dist2(X, Y) + xn * xn;
  return params.d() * std::pow(xn, 1.0 - params.a()) * std::pow(s, -0.5 * (params.n() - params.a()));
}

QuadratureRule kernel_rule(const KernelParams& params, int m) {
  const double s = params.n() - params.a();
  QuadratureRule rule = plane_rule(params.n(), m, s, 1.0);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    double r2 = 0.0;
    for (double c : rule.point(i)) r2 += c * c;
    rule.weights[i] *= params.d() * std::pow(1.0 + r2, -0.5 * s);
  }
  return rule;
}

HalfspaceExtension::HalfspaceExtension(FieldFunction f, KernelParams params, int m)
    : f_(std::move(f)),
      params_(params),
      coarse_(std::make_shared<QuadratureRule>(kernel_rule(params, m))),
      fine_(std::make_shared<QuadratureRule>(kernel_rule(params, 2 * m))),
      m_(m) {
  if (f_.domain != Domain::plane) throw DomainError("extend_halfspace: expects plane data");
}

namespace {

double u_form(const QuadratureRule& rule, const FieldFunction& f, std::span<const double> X, double xn) {
  const std::size_t k = X.size();
  std::vector<double> y(k);
  KahanSum s;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    auto u = rule.point(i);
    for (std::size_t j = 0; j < k; ++j) y[j] = X[j] + xn * u[j];
    s.add(rule.weights[i] * f.eval(y));
  }
  return s.value();
}

}  // namespace

PointValue HalfspaceExtension::evaluate(std::span<const double> X, double xn) const {
  if (!(xn > 0.0)) throw DomainError("extend_halfspace: x_n must be positive");
  if (static_cast<int>(X.size()) != params_.n() - 1) throw DomainError("extend_halfspace: X has wrong dimension");
  const double coarse = u_form(*coarse_, f_, X, xn);
  const double fine = u_form(*fine_, f_, X, xn);
  return {fine, std::abs(fine - coarse)};
}

double HalfspaceExtension::coarse_value(std::span<const double> X, double xn) const {
  if (!(xn > 0.0)) throw DomainError("extend_halfspace: x_n must be positive");
  if (static_cast<int>(X.size()) != params_.n() - 1) throw DomainError("extend_halfspace: X has wrong dimension");
  return u_form(*coarse_, f_, X, xn);
}

PointValue HalfspaceExtension::evaluate_raw(std::span<const double> X, double xn, double scale) const {
  const double decay = params_.n() - params_.a() + std::max(f_.decay, 0.0);
  auto run = [&](int m) {
    const QuadratureRule rule = plane_rule(params_.n(), m, decay, scale);
    KahanSum s;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      auto y = rule.point(i);
      s.add(rule.weights[i] * halfspace_kernel(params_, X, xn, y) * f_.eval(y));
    }
    return s.value();
  };
  const double coarse = run(m_);
  const double fine = run(2 * m_);
  return {fine, std::abs(fine - coarse)};
}

FieldFunction HalfspaceExtension::as_field() const {
  FieldFunction u;
  u.domain = Domain::halfspace;
  u.n = params_.n();
  u.decay = std::max(0.0, std::min(f_.decay, params_.n() - params_.a()));
  auto self = std::make_shared<HalfspaceExtension>(*this);
  u.eval = [self](std::span<const double> z) { return self->evaluate(z.first(z.size() - 1), z.back()).value; };
  return u;
}

HalfspaceExtension extend_halfspace(const FieldFunction& f, const KernelParams& params, int m) {
  return HalfspaceExtension(f, params, m);
}

FieldFunction scale_function(const FieldFunction& f, double lambda, double p) {
  if (!(lambda > 0.0)) throw DomainError("scale_function: lambda must be positive");
  if (f.domain != Domain::plane) throw DomainError("scale_function: expects plane data");
  const double factor = std::pow(lambda, -(f.n - 1) / p);
  FieldFunction g = f;
  g.eval = [h = f.eval, lambda, factor](std::span<const double> Y) {
    std::vector<double> Z(Y.begin(), Y.end());
    for (double& z : Z) z /= lambda;
    return factor * h(Z);
  };
  return g;
}

double ball_kernel(const KernelParams& params, std::span<const double> eta, std::span<const double> xi) {
  double r2 = 0.0;
  for (double x : eta) r2 += x * x;
  const double r = std::sqrt(r2);
  // |eta - xi|^2 = (1-r)^2 + r |eta/r - xi|^2 avoids cancellation as eta -> xi.
  double d2;
  if (r > 0.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i) {
      const double d = eta[i] / r - xi[i];
      s += d * d;
    }
    d2 = (1.0 - r) * (1.0 - r) + r * s;
  } else {
    d2 = 1.0;
  }
  const double n = params.n();
  const double a = params.a();
  return params.d() * std::pow(2.0, a - 1.0) * std::pow((1.0 - r) * (1.0 + r), 1.0 - a) * std::pow(d2, -0.5 * (n - a));
}

PointValue ball_extension_direct(const KernelParams& params, const FieldFunction& f, std::span<const double> eta,
                                 int m, double tol) {
  if (f.domain != Domain::sphere) throw DomainError("ball_extension_direct: expects sphere data");
  double r2 = 0.0;
  for (double x : eta) r2 += x * x;
  const double r = std::sqrt(r2);
  if (!(r < 1.0)) throw DomainError("ball_extension_direct: point must be interior");
  std::vector<double> axis(eta.begin(), eta.end());
  if (r == 0.0) {
    axis.assign(eta.size(), 0.0);
    axis.back() = 1.0;
  }
  const double width = std::max(1.0 - r, 1e-14);
  auto run = [&](int mm) {
    const QuadratureRule rule = sphere_rule_around(axis, mm, width);
    KahanSum s;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      auto xi = rule.point(i);
      s.add(rule.weights[i] * ball_kernel(params, eta, xi) * f.eval(xi));
    }
    return s.value();
  };
  int mm = r > 0.95 ? 2 * m : m;
  double coarse = run(mm);
  double fine = run(2 * mm);
  double err = std::abs(fine - coarse);
  if (err > tol * std::max(1.0, std::abs(fine))) {
    std::ostringstream msg;
    msg << "ball extension at |eta|=" << r << " did not converge (" << coarse << " vs " << fine << ")";
    throw NonConvergent(msg.str());
  }
  return {fine, err};
}

BallExtension::BallExtension(FieldFunction ftilde, KernelParams params, int m)
    : ftilde_(ftilde), params_(params), halfspace_(pullback_to_halfspace(ftilde, params), params, m) {}

PointValue BallExtension::evaluate(std::span<const double> q) const {
  const std::vector<double> z = phi_inverse(q);
  const double weight = std::pow(shifted_norm(z), params_.eps());
  const std::span<const double> zs(z);
  PointValue v = halfspace_.evaluate(zs.first(z.size() - 1), z.back());
  return {weight * v.value, weight * v.error};
}

FieldFunction BallExtension::as_field() const {
  FieldFunction u;
  u.domain = Domain::ball;
  u.n = params_.n();
  auto self = std::make_shared<BallExtension>(*this);
  u.eval = [self](std::span<const double> q) { return self->evaluate(q).value; };
  return u;
}

BallExtension extend_ball(const FieldFunction& ftilde, const KernelParams& params, int m) {
  if (ftilde.domain != Domain::sphere) throw DomainError("extend_ball: expects sphere data");
  return BallExtension(ftilde, params, m);
}

std::vector<double> ball_multipliers(const KernelParams& params, double r, int max_degree) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("ball_multipliers: radius must lie in [0, 1)");
  const int n = params.n();
  const double a = params.a();
  std::vector<double> out(max_degree + 1, 0.0);
  const double pre = sphere_area(n - 2) * params.d() * std::pow(2.0, a - 1.0) * std::pow((1.0 - r) * (1.0 + r), 1.0 - a);
  const double width = std::max(1.0 - r, 1e-15);
  const int depth = std::max(2, static_cast<int>(std::ceil(std::log(std::numbers::pi / width) / std::log(3.0))) + 3);
  const Rule1D psi = graded_rule(0.0, std::numbers::pi, false, 1.0 / 3.0, depth, 20);
  std::vector<double> p(max_degree + 1);
  std::vector<KahanSum> sums(max_degree + 1);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double half = std::sin(0.5 * psi.x[i]);
    const double d2 = (1.0 - r) * (1.0 - r) + 4.0 * r * half * half;
    const double k = psi.w[i] * std::pow(std::sin(psi.x[i]), n - 2) * std::pow(d2, -0.5 * (n - a));
    zonal_legendre(n, std::cos(psi.x[i]), p);
    for (int l = 0; l <= max_degree; ++l) sums[l].add(k * p[l]);
  }
  for (int l = 0; l <= max_degree; ++l) out[l] = pre * sums[l].value();
  return out;
}

double extension_of_one(const KernelParams& params, double r) { return ball_multipliers(params, r, 0)[0]; }

SpectralExtension::SpectralExtension(KernelParams params, const FieldFunction& f, int degree, int projection_m)
    : params_(params), degree_(degree) {
  if (f.domain != Domain::sphere) throw DomainError("SpectralExtension: expects sphere data");
  if (degree < 0) throw DomainError("SpectralExtension: degree must be nonnegative");
  const int m = projection_m > 0 ? projection_m : degree + 1;
  projection_ = sphere_rule(params.n(), m);
  weighted_values_ = sample(f, projection_);
  for (std::size_t i = 0; i < projection_.size(); ++i) weighted_values_[i] *= projection_.weights[i];
  coefficients_ = zonal_coefficients(params.n(), degree);
}

std::vector<double> SpectralExtension::components(std::span<const double> w) const {
  const int n = params_.n();
  std::vector<double> p(degree_ + 1);
  std::vector<KahanSum> sums(degree_ + 1);
  for (std::size_t k = 0; k < projection_.size(); ++k) {
    auto xi = projection_.point(k);
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += w[i] * xi[i];
    zonal_legendre(n, std::clamp(t, -1.0, 1.0), p);
    for (int l = 0; l <= degree_; ++l) sums[l].add(weighted_values_[k] * p[l]);
  }
  std::vector<double> out(degree_ + 1);
  for (int l = 0; l <= degree_; ++l) out[l] = coefficients_[l] * sums[l].value();
  return out;
}

double SpectralExtension::operator()(std::span<const double> eta) const {
  double r2 = 0.0;
  for (double x : eta) r2 += x * x;
  const double r = std::sqrt(r2);
  std::vector<double> w(eta.begin(), eta.end());
  if (r > 0.0) {
    for (double& x : w) x /= r;
  } else {
    w.assign(w.size(), 0.0);
    w.back() = 1.0;
  }
  const std::vector<double> comp = components(w);
  const std::vector<double> lam = ball_multipliers(params_, r, degree_);
  double s = 0.0;
  for (int l = 0; l <= degree_; ++l) s += lam[l] * comp[l];
  return s;
}

SpectralValues spectral_ball_values(const KernelParams& params, const FieldFunction& f, const BallRuleParts& parts,
                                    const std::vector<std::vector<double>>& multipliers, double tol) {
  const QuadratureRule& dirs = parts.directions;
  const std::size_t nd = dirs.size();
  const std::size_t nr = parts.radii.size();
  if (multipliers.size() != nr) throw DomainError("spectral_ball_values: one multiplier row per radius required");
  const int max_degree = static_cast<int>(multipliers.front().size()) - 1;

  std::vector<int> degrees;
  if (f.polynomial_degree >= 0) {
    if (f.polynomial_degree > max_degree) throw DomainError("spectral_ball_values: degree exceeds multiplier table");
    degrees.push_back(f.polynomial_degree);
  } else {
    for (int L = 8; L <= max_degree; L += 8) degrees.push_back(L);
  }

  SpectralValues out;
  std::vector<std::vector<double>> comps(nd);
  const std::vector<double> target = f.polynomial_degree >= 0 ? std::vector<double>{} : sample(f, dirs);
  for (std::size_t attempt = 0; attempt < degrees.size(); ++attempt) {
    const int L = degrees[attempt];
    const int pm = L + 1;
    const SpectralExtension ext(params, f, L, pm);
    parallel_for(nd, [&](std::size_t j) { comps[j] = ext.components(dirs.point(j)); });
    out.degree = L;
    if (f.polynomial_degree >= 0) break;
    double err = 0.0;
    for (std::size_t j = 0; j < nd; ++j) {
      double s = 0.0;
      for (double c : comps[j]) s += c;
      err = std::max(err, std::abs(s - target[j]));
    }
    out.reconstruction_error = err;
    if (err <= tol) break;
    if (attempt + 1 == degrees.size()) {
      std::ostringstream msg;
      msg << "spherical-harmonic expansion did not reach " << tol << " (error " << err << " at degree " << L << ")";
      throw NonConvergent(msg.str());
    }
  }

  out.values.assign(nr * nd, 0.0);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nd; ++j) {
      double s = 0.0;
      for (int l = 0; l <= out.degree; ++l) s += multipliers[i][l] * comps[j][l];
      out.values[i * nd + j] = s;
    }
  }
  return out;
}

std::vector<std::vector<double>> multiplier_table(const KernelParams& params, std::span<const double> radii,
                                                  int max_degree) {
  std::vector<std::vector<double>> lam(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) { lam[i] = ball_multipliers(params, radii[i], max_degree); });
  return lam;
}

SpectralValues spectral_ball_values(const KernelParams& params, const FieldFunction& f, int m, double tol,
                                    int max_degree) {
  const BallRuleParts parts = ball_rule_parts(params.n(), m);
  const int degree = f.polynomial_degree >= 0 ? f.polynomial_degree : max_degree;
  return spectral_ball_values(params, f, parts, multiplier_table(params, parts.radii, degree), tol);
}

double cs_residual(const std::function<double(std::span<const double>)>& u, double a, std::span<const double> point,
                   double h) {
  const std::size_t n = point.size();
  const double xn = point[n - 1];
  if (!(xn > 2.0 * h)) throw DomainError("cs_residual: point too close to the boundary for step h");
  std::vector<double> p(point.begin(), point.end());
  const double u0 = u(p);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    p[i] = point[i] + h;
    const double up = u(p);
    p[i] = point[i] - h;
    const double um = u(p);
    p[i] = point[i];
    acc += std::pow(xn, a) * (up - 2.0 * u0 + um);
  }
  p[n - 1] = xn + h;
  const double up = u(p);
  p[n - 1] = xn - h;
  const double um = u(p);
  acc += std::pow(xn + 0.5 * h, a) * (up - u0) - std::pow(xn - 0.5 * h, a) * (u0 - um);
  return acc / (h * h);
}

namespace {

double iterated_laplacian(const std::function<double(std::span<const double>)>& u, int k, std::vector<double>& p,
                          double h) {
  if (k == 0) return u(p);
  const double center = iterated_laplacian(u, k - 1, p, h);
  double acc = -2.0 * static_cast<double>(p.size()) * center;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = p[i];
    p[i] = x + h;
    acc += iterated_laplacian(u, k - 1, p, h);
    p[i] = x - h;
    acc += iterated_laplacian(u, k - 1, p, h);
    p[i] = x;
  }
  return acc / (h * h);
}

}  // namespace

double polyharmonic_residual(const std::function<double(std::span<const double>)>& u, int k,
                             std::span<const double> point, double h) {
  if (k < 1) throw DomainError("polyharmonic_residual: k must be positive");
  std::vector<double> p(point.begin(), point.end());
  return iterated_laplacian(u, k, p, h);
}

}  // namespace confext
