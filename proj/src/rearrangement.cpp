#include "confext/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "confext/errors.hpp"
#include "confext/parallel.hpp"
#include "confext/special.hpp"

namespace confext {

double DiscretizedFunction::cell_measure() const { return std::pow(h, dim); }

std::array<double, 2> DiscretizedFunction::center(std::size_t k) const {
  return {h * cells[k][0], dim == 2 ? h * cells[k][1] : 0.0};
}

DiscretizedFunction DiscretizedFunction::on_interval(int first, std::vector<double> values, double h) {
  DiscretizedFunction f;
  f.dim = 1;
  f.h = h;
  for (std::size_t i = 0; i < values.size(); ++i) f.cells.push_back({first + static_cast<int>(i), 0});
  f.values = std::move(values);
  return f;
}

DiscretizedFunction DiscretizedFunction::on_grid(int x0, int y0, int nx, int ny, std::vector<double> values,
                                                 double h) {
  if (values.size() != static_cast<std::size_t>(nx) * ny) throw DomainError("on_grid: value count mismatch");
  DiscretizedFunction f;
  f.dim = 2;
  f.h = h;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) f.cells.push_back({x0 + i, y0 + j});
  f.values = std::move(values);
  return f;
}

std::vector<std::array<int, 2>> centered_cells(int dim, std::size_t count) {
  if (dim != 1 && dim != 2) throw DomainError("centered_cells: dim must be 1 or 2");
  std::vector<std::array<int, 2>> pool;
  if (dim == 1) {
    const int r = static_cast<int>(count / 2) + 1;
    for (int i = -r; i <= r; ++i) pool.push_back({i, 0});
  } else {
    const int r = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count)))) + 1;
    for (int i = -r; i <= r; ++i)
      for (int j = -r; j <= r; ++j) pool.push_back({i, j});
  }
  std::sort(pool.begin(), pool.end(), [](const auto& u, const auto& v) {
    const long du = static_cast<long>(u[0]) * u[0] + static_cast<long>(u[1]) * u[1];
    const long dv = static_cast<long>(v[0]) * v[0] + static_cast<long>(v[1]) * v[1];
    return std::tie(du, u[0], u[1]) < std::tie(dv, v[0], v[1]);
  });
  pool.resize(count);
  return pool;
}

DiscretizedFunction rearrange(const DiscretizedFunction& f) {
  for (double v : f.values)
    if (!std::isfinite(v) || v < 0.0) throw DomainError("rearrange: values must be finite and nonnegative");
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return f.values[i] > f.values[j]; });
  DiscretizedFunction out;
  out.dim = f.dim;
  out.h = f.h;
  out.cells = centered_cells(f.dim, f.size());
  out.values.reserve(f.size());
  for (std::size_t k : order) out.values.push_back(f.values[k]);
  return out;
}

double level_set_measure(const DiscretizedFunction& f, double t) {
  std::size_t count = 0;
  for (double v : f.values) count += v > t;
  return static_cast<double>(count) * f.cell_measure();
}

double lp_norm(const DiscretizedFunction& f, double p) {
  KahanSum s;
  for (double v : f.values) s.add(std::pow(std::abs(v), p));
  return std::pow(s.value() * f.cell_measure(), 1.0 / p);
}

bool RieszCheck::holds() const { return lhs <= rhs + tail_bound + 1e-12 * rhs; }

namespace {

// sum over the output window of g^p h^dim, g = k * f.
double convolve_norm_p(const DiscretizedFunction& f, double xn, const KernelParams& params, double p, int margin) {
  const int dim = f.dim;
  std::array<int, 2> lo{0, 0}, hi{0, 0};
  for (int k = 0; k < dim; ++k) {
    lo[k] = hi[k] = f.cells.front()[k];
    for (const auto& c : f.cells) {
      lo[k] = std::min(lo[k], c[k]);
      hi[k] = std::max(hi[k], c[k]);
    }
    lo[k] -= margin;
    hi[k] += margin;
  }
  const int wx = hi[0] - lo[0] + 1;
  const int wy = dim == 2 ? hi[1] - lo[1] + 1 : 1;
  const double beta = 0.5 * (params.n() - params.a());
  const double pre = params.d() * std::pow(xn, 1.0 - params.a()) * f.cell_measure();
  const double h2 = f.h * f.h;
  const double x2 = xn * xn;
  std::vector<double> rows(wy, 0.0);
  parallel_for(static_cast<std::size_t>(wy), [&](std::size_t jy) {
    KahanSum s;
    const int y = dim == 2 ? lo[1] + static_cast<int>(jy) : 0;
    for (int ix = 0; ix < wx; ++ix) {
      const int x = lo[0] + ix;
      double g = 0.0;
      for (std::size_t k = 0; k < f.size(); ++k) {
        if (f.values[k] == 0.0) continue;
        const double dx = x - f.cells[k][0];
        const double dy = y - f.cells[k][1];
        g += f.values[k] * pre * std::pow((dx * dx + dy * dy) * h2 + x2, -beta);
      }
      s.add(std::pow(g, p));
    }
    rows[jy] = s.value();
  });
  KahanSum total;
  for (double r : rows) total.add(r);
  return total.value() * f.cell_measure();
}

// Minkowski: the part of g = k * f outside the window has p-norm at most
// (sum f) * ||k restricted to |t|_inf > margin||_p, bounded by an integral of the
// kernel's power-law majorant over |s| >= margin - 1.
double tail_bound(const DiscretizedFunction& f, double xn, const KernelParams& params, double p, int margin) {
  const int dim = f.dim;
  const double two_beta_p = (params.n() - params.a()) * p;
  if (two_beta_p <= dim) return INFINITY;
  double mass = 0.0;
  for (double v : f.values) mass += v;
  const double c = params.d() * std::pow(xn, 1.0 - params.a()) * f.cell_measure() *
                   std::pow(f.h, -(params.n() - params.a()));
  const double radius = std::max(margin - 1, 1);
  const double integral = sphere_area(dim - 1) * std::pow(radius, dim - two_beta_p) / (two_beta_p - dim);
  return mass * std::pow(std::pow(c, p) * integral * f.cell_measure(), 1.0 / p);
}

int default_margin(const DiscretizedFunction& f, int margin) {
  if (margin > 0) return margin;
  return f.dim == 1 ? 64 * static_cast<int>(f.size()) : 64;
}

void validate(const DiscretizedFunction& f, const KernelParams& params, double p) {
  if (f.dim != 1 && f.dim != 2) throw DomainError("riesz check: dim must be 1 or 2");
  if (params.n() != f.dim + 1) throw DomainError("riesz check: params.n must equal dim + 1");
  if (f.size() == 0) throw DomainError("riesz check: empty function");
  if (f.size() > static_cast<std::size_t>(std::pow(64, f.dim))) throw DomainError("riesz check: grid too large");
  if (!(p >= 1.0)) throw DomainError("riesz check: p must be >= 1");
}

}  // namespace

RieszCheck riesz_convolution_check(const DiscretizedFunction& f, double xn, const KernelParams& params, double p,
                                   int margin) {
  validate(f, params, p);
  if (!(xn > 0.0)) throw DomainError("riesz check: x_n must be positive");
  const DiscretizedFunction star = rearrange(f);
  margin = default_margin(f, margin);
  RieszCheck out;
  out.lhs = std::pow(convolve_norm_p(f, xn, params, p, margin), 1.0 / p);
  out.rhs = std::pow(convolve_norm_p(star, xn, params, p, margin), 1.0 / p);
  out.tail_bound = tail_bound(f, xn, params, p, margin);
  return out;
}

RieszCheck riesz_halfspace_check(const DiscretizedFunction& f, const KernelParams& params, double p,
                                 const Rule1D& heights, int margin) {
  validate(f, params, p);
  const DiscretizedFunction star = rearrange(f);
  margin = default_margin(f, margin);
  KahanSum l, r;
  double tail = 0.0;
  for (std::size_t k = 0; k < heights.size(); ++k) {
    if (!(heights.x[k] > 0.0)) throw DomainError("riesz check: heights must be positive");
    l.add(heights.w[k] * convolve_norm_p(f, heights.x[k], params, p, margin));
    r.add(heights.w[k] * convolve_norm_p(star, heights.x[k], params, p, margin));
    tail += heights.w[k] * std::pow(tail_bound(f, heights.x[k], params, p, margin), p);
  }
  // ||a + b||_p <= ||a||_p + ||b||_p applied in the mixed norm over heights.
  return {std::pow(l.value(), 1.0 / p), std::pow(r.value(), 1.0 / p), std::pow(tail, 1.0 / p)};
}

}  // namespace confext
