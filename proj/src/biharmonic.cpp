#include "confext/biharmonic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "confext/errors.hpp"
#include "confext/parallel.hpp"
#include "confext/quadrature.hpp"

namespace confext {
namespace {

// int over S^3 of (1-|eta|^2)^power / |eta-xi|^{2 power} g(xi), at m and 2m; escalated once
// toward the boundary (2m beyond |eta| = 0.6, 4m beyond 0.85).
PointValue kernel_integral(const FieldFunction& g, std::span<const double> eta, int m, int power) {
  if (g.domain != Domain::sphere || g.n != 4) throw DomainError("biharmonic kernels: expects data on S^3");
  if (eta.size() != 4) throw DomainError("biharmonic kernels: eta must have 4 coordinates");
  double r2 = 0.0;
  for (double x : eta) r2 += x * x;
  const double r = std::sqrt(r2);
  if (!(r < 1.0)) throw DomainError("biharmonic kernels: point must be interior");
  std::vector<double> axis(4, 0.0);
  if (r == 0.0) {
    axis[3] = 1.0;
  } else {
    for (int i = 0; i < 4; ++i) axis[i] = eta[i] / r;
  }
  const double one_minus = (1.0 - r) * (1.0 + r);
  auto run = [&](int mm) {
    const QuadratureRule rule = sphere_rule_around(axis, mm, std::max(1.0 - r, 1e-14));
    KahanSum s;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      auto xi = rule.point(i);
      // |eta - xi|^2 = (1-r)^2 + r |axis - xi|^2 keeps precision near the boundary.
      double d2 = 0.0;
      for (int k = 0; k < 4; ++k) d2 += (axis[k] - xi[k]) * (axis[k] - xi[k]);
      d2 = (1.0 - r) * (1.0 - r) + r * d2;
      s.add(rule.weights[i] * std::pow(one_minus / d2, power) * g.eval(xi));
    }
    return s.value();
  };
  const int mm = r > 0.85 ? 4 * m : (r > 0.6 ? 2 * m : m);
  const double coarse = run(mm);
  const double fine = run(2 * mm);
  const double err = std::abs(fine - coarse);
  if (err > 1e-6 * std::max(1.0, std::abs(fine))) {
    std::ostringstream msg;
    msg << "biharmonic kernel integral at |eta|=" << r << " did not converge (" << coarse << " vs " << fine << ")";
    throw NonConvergent(msg.str());
  }
  return {fine, err};
}

}  // namespace

PointValue dirichlet_kernel_integral(const FieldFunction& g, std::span<const double> eta, int m) {
  return kernel_integral(g, eta, m, 3);
}

PointValue neumann_kernel_integral(const FieldFunction& h, std::span<const double> eta, int m) {
  return kernel_integral(h, eta, m, 2);
}

BiharmonicKernelConstants calibrate_biharmonic_constants() {
  const FieldFunction one = constant_field(Domain::sphere, 4, 1.0);
  const FieldFunction two = constant_field(Domain::sphere, 4, 2.0);
  const double radii[] = {0.0, 0.3, 0.7};
  std::vector<double> cs, ds;
  for (double r : radii) {
    const double eta[] = {r, 0.0, 0.0, 0.0};
    cs.push_back(1.0 / dirichlet_kernel_integral(one, eta).value);
    // g = 1-|eta|^2 has zero trace, so only the Neumann term remains.
    ds.push_back((1.0 - r * r) / neumann_kernel_integral(two, eta).value);
  }
  auto spread = [](const std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return (*hi - *lo) / std::abs(v.front());
  };
  if (spread(cs) > 1e-8) throw NonConvergent("biharmonic calibration: C inconsistent across eta");
  if (spread(ds) > 1e-6) throw NonConvergent("biharmonic calibration: D inconsistent across eta");
  return {cs.front(), ds.front()};
}

PointValue biharmonic_represent(const FieldFunction& g_boundary, const FieldFunction& neumann,
                                const BiharmonicKernelConstants& consts, std::span<const double> eta, int m) {
  const PointValue dir = dirichlet_kernel_integral(g_boundary, eta, m);
  const PointValue neu = neumann_kernel_integral(neumann, eta, m);
  return {consts.C * dir.value + consts.D * neu.value,
          std::abs(consts.C) * dir.error + std::abs(consts.D) * neu.error};
}

}  // namespace confext
