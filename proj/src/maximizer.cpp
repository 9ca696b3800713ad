#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "confext/errors.hpp"
#include "confext/gauss.hpp"
#include "confext/inequalities.hpp"
#include "confext/parallel.hpp"

namespace confext {
namespace {

constexpr double kPi = std::numbers::pi;

// Quotient of ftilde constant on N equal arcs of S^1. The ball integral is a polar
// product rule: radial panels doubling away from the sphere and, inside each arc, nodes
// graded toward the arc edges at the scale of the distance to the sphere. The node
// pattern repeats from arc to arc, so one kernel table per radius serves every arc.
class ArcQuotient {
 public:
  ArcQuotient(const KernelParams& params, int cells)
      : cells_(cells), h_(2.0 * kPi / cells), a_(params.a()),
        p_(params.boundary_exponent()), q_(params.interior_exponent()) {
    const std::vector<double> origin{0.0, 0.0}, pole{0.0, 1.0};
    kernel_constant_ = ball_kernel(params, origin, pole);
    const double dmin = h_ * std::ldexp(1.0, -12);
    boundary_weight_ = dmin * (1.0 - 0.5 * dmin) * h_;
    for (double d = dmin; d < 1.0; d *= 2.0) {
      const double d1 = std::min(2.0 * d, 1.0);
      const Rule1D radial = gauss_legendre(6, 1.0 - d1, 1.0 - d);
      const Pattern pattern = arc_pattern(d);
      for (std::size_t i = 0; i < radial.size(); ++i)
        rings_.push_back({radial.x[i], radial.w[i] * radial.x[i], pattern, {}});
    }
    parallel_for(rings_.size(), [&](std::size_t i) { fill_table(rings_[i]); });
  }

  int cells() const { return cells_; }
  double arc() const { return h_; }
  double p() const { return p_; }

  double norm(const std::vector<double>& f) const {
    double s = 0.0;
    for (double v : f) s += std::pow(v, p_);
    return std::pow(h_ * s, 1.0 / p_);
  }

  double value(const std::vector<double>& f, std::vector<double>* grad = nullptr) const {
    const int nc = cells_;
    double sum = 0.0;
    // f repeated twice turns the circulant products into contiguous dot products.
    std::vector<double> f2(2 * nc), dsum2(grad ? 2 * nc : 0, 0.0);
    std::copy(f.begin(), f.end(), f2.begin());
    std::copy(f.begin(), f.end(), f2.begin() + nc);
    for (const Ring& ring : rings_) {
      const std::size_t np = ring.pattern.offsets.size();
      double ring_sum = 0.0;
      for (int k = 0; k < nc; ++k)
        for (std::size_t p = 0; p < np; ++p) {
          const double* row = &ring.table[p * nc];
          const double* fk = &f2[k];
          double v = 0.0;
          for (int j = 0; j < nc; ++j) v += row[j] * fk[j];
          const double vq1 = std::pow(v, q_ - 1.0);
          ring_sum += ring.pattern.weights[p] * vq1 * v;
          if (grad) {
            const double g = ring.weight * ring.pattern.weights[p] * q_ * vq1;
            double* dk = &dsum2[k];
            for (int j = 0; j < nc; ++j) dk[j] += g * row[j];
          }
        }
      sum += ring.weight * ring_sum;
    }
    std::vector<double> dsum(grad ? nc : 0, 0.0);
    for (std::size_t j = 0; j < dsum2.size(); ++j) dsum[j % nc] += dsum2[j];
    // The layer next to the sphere, where P~_a f = f up to the edges.
    for (int k = 0; k < nc; ++k) {
      sum += boundary_weight_ * std::pow(f[k], q_);
      if (grad) dsum[k] += boundary_weight_ * q_ * std::pow(f[k], q_ - 1.0);
    }
    double fp = 0.0;
    for (double v : f) fp += std::pow(v, p_);
    const double den = h_ * fp;
    const double quotient = std::pow(sum, 1.0 / q_) / std::pow(den, 1.0 / p_);
    if (grad) {
      grad->resize(nc);
      for (int j = 0; j < nc; ++j)
        (*grad)[j] = quotient * (dsum[j] / (q_ * sum) - h_ * std::pow(f[j], p_ - 1.0) / den);
    }
    return quotient;
  }

 private:
  struct Pattern {
    std::vector<double> offsets;  // within [0, h]
    std::vector<double> weights;
  };
  struct Ring {
    double r;
    double weight;
    Pattern pattern;
    std::vector<double> table;  // [node][arc offset]
  };

  double kernel(double r, double t) const {
    const double s = std::sin(0.5 * t);
    const double d = 1.0 - r;
    return kernel_constant_ * std::pow(1.0 - r * r, 1.0 - a_) * std::pow(d * d + 4.0 * r * s * s, -0.5 * (2.0 - a_));
  }

  Pattern arc_pattern(double d) const {
    Pattern out;
    auto add = [&](double lo, double hi, int m) {
      const Rule1D g = gauss_legendre(m, lo, hi);
      out.offsets.insert(out.offsets.end(), g.x.begin(), g.x.end());
      out.weights.insert(out.weights.end(), g.w.begin(), g.w.end());
    };
    if (d >= 0.5 * h_) {
      add(0.0, h_, 6);
      return out;
    }
    std::vector<double> cuts{0.0};
    for (double c = d; c < 0.5 * h_; c *= 2.0) cuts.push_back(c);
    cuts.push_back(0.5 * h_);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      add(cuts[i], cuts[i + 1], 4);
      add(h_ - cuts[i + 1], h_ - cuts[i], 4);
    }
    return out;
  }

  // Kernel at radius r integrated over angles [t0, t1] from the node, within [-pi, pi].
  double piece(double r, double t0, double t1) const {
    const Rule1D& gl = gauss_legendre(8);
    double total = 0.0;
    auto plain = [&](double lo, double hi) {
      const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / 0.5)));
      const double w = (hi - lo) / panels;
      for (int k = 0; k < panels; ++k)
        for (std::size_t i = 0; i < gl.size(); ++i) {
          const double t = lo + w * (k + 0.5 * (1.0 + gl.x[i]));
          total += 0.5 * w * gl.w[i] * kernel(r, t);
        }
    };
    if (r < 0.5) {
      plain(t0, t1);
      return total;
    }
    const double lo = std::max(t0, -0.5 * kPi), hi = std::min(t1, 0.5 * kPi);
    if (t0 < lo) plain(t0, std::min(t1, lo));
    if (t1 > hi) plain(std::max(t0, hi), t1);
    if (lo < hi) {
      // s = asinh(k sin(t/2)) with k = 2 sqrt(r)/(1-r) flattens the peak at t = 0:
      // the kernel becomes proportional to cosh(s)^{a-2}.
      const double d = 1.0 - r;
      const double kk = 2.0 * std::sqrt(r) / d;
      const double s0 = std::asinh(kk * std::sin(0.5 * lo)), s1 = std::asinh(kk * std::sin(0.5 * hi));
      const double lead = kernel_constant_ * std::pow(1.0 - r * r, 1.0 - a_) * std::pow(d, a_ - 2.0) * 2.0 / kk;
      const int panels = std::max(1, static_cast<int>(std::ceil(s1 - s0)));
      const double w = (s1 - s0) / panels;
      for (int k = 0; k < panels; ++k)
        for (std::size_t i = 0; i < gl.size(); ++i) {
          const double s = s0 + w * (k + 0.5 * (1.0 + gl.x[i]));
          const double z = std::sinh(s) / kk;
          total += 0.5 * w * gl.w[i] * lead * std::pow(std::cosh(s), a_ - 1.0) / std::sqrt(1.0 - z * z);
        }
    }
    return total;
  }

  double arc_integral(double r, double t0, double t1) const {
    const double shift = 2.0 * kPi * std::floor((t0 + kPi) / (2.0 * kPi));
    t0 -= shift;
    t1 -= shift;
    if (t1 <= kPi) return piece(r, t0, t1);
    return piece(r, t0, kPi) + piece(r, -kPi, t1 - 2.0 * kPi);
  }

  void fill_table(Ring& ring) const {
    const std::size_t np = ring.pattern.offsets.size();
    ring.table.assign(np * cells_, 0.0);
    for (std::size_t p = 0; p < np; ++p)
      for (int j = 0; j < cells_; ++j) {
        const double o = ring.pattern.offsets[p];
        ring.table[p * cells_ + j] = arc_integral(ring.r, j * h_ - o, (j + 1) * h_ - o);
      }
  }

  int cells_;
  double h_, a_, p_, q_;
  double kernel_constant_ = 0.0;
  double boundary_weight_ = 0.0;
  std::vector<Ring> rings_;
};

// The candidate pushed to the sphere, ftilde = (1/4 + Y^2)^{eps/2} f with Y = tan(w/2)/2,
// written in cos(w/2), sin(w/2) so that it stays bounded at the south pole.
double candidate_on_sphere(const ExtremalCandidate& cand, double eps, double w) {
  const double c = std::cos(0.5 * w), s = std::sin(0.5 * w);
  const double y0 = cand.Y0.empty() ? 0.0 : cand.Y0[0];
  const double l = cand.lambda;
  const double e = 0.5 * s - y0 * c;
  return cand.c * std::pow(0.25 * l / (l * l * c * c + e * e), 0.5 * eps);
}

std::vector<double> arc_averages(const ExtremalCandidate& cand, double eps, const std::vector<double>& edges) {
  const Rule1D& gl = gauss_legendre(8);
  std::vector<double> out;
  for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < gl.size(); ++i)
      s += 0.5 * gl.w[i] * candidate_on_sphere(cand, eps, 0.5 * (edges[j] + edges[j + 1]) +
                                                             0.5 * (edges[j + 1] - edges[j]) * gl.x[i]);
    out.push_back(s);
  }
  return out;
}

// Cap rearrangement about the north pole: sorted values are paired and each pair's
// average fills the two arcs at the matching distance from the pole.
std::vector<double> rearrange_arcs(std::vector<double> f) {
  const std::size_t nc = f.size(), half = nc / 2;
  std::sort(f.begin(), f.end(), std::greater<>());
  std::vector<double> out(nc);
  for (std::size_t k = 0; k < half; ++k) {
    const double v = 0.5 * (f[2 * k] + f[2 * k + 1]);
    out[half - 1 - k] = v;
    out[half + k] = v;
  }
  return out;
}

struct CandidateFit {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const std::vector<double>* f;
  const std::vector<double>* edges;
  double eps;
  double weight;

  int inputs() const { return 3; }
  int values() const { return static_cast<int>(f->size()); }

  static ExtremalCandidate candidate(const Eigen::VectorXd& x) {
    ExtremalCandidate c;
    c.c = std::exp(x(0));
    c.lambda = std::exp(x(1));
    c.Y0 = {x(2)};
    return c;
  }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
    const std::vector<double> g = arc_averages(candidate(x), eps, *edges);
    out.resize(values());
    for (int j = 0; j < values(); ++j) out(j) = weight * ((*f)[j] - g[j]);
    return 0;
  }
};

}  // namespace

MaximizerResult maximizer_search(const KernelParams& params, const MaximizerOptions& options) {
  if (params.n() != 2) throw DomainError("maximizer_search: implemented for n = 2 (data on R^1)");
  if (!(params.eps() > 0.0)) throw DomainError("maximizer_search: requires eps > 0");
  if (options.cells < 8 || options.cells > 128 || options.cells % 2 != 0)
    throw DomainError("maximizer_search: cells must be even and within [8, 128]");
  if (options.max_steps < 0) throw DomainError("maximizer_search: max_steps must be nonnegative");
  const int nc = options.cells;
  const double eps = params.eps();
  const ArcQuotient aq(params, nc);

  MaximizerResult result;
  for (int j = 0; j <= nc; ++j) result.edges.push_back(-kPi + aq.arc() * j);
  std::vector<double> f(nc, 1.0);
  if (!options.start_from_extremal) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    for (double& v : f) v = unif(rng);
  }
  auto normalize = [&](std::vector<double>& g) {
    const double s = aq.norm(g);
    for (double& v : g) v /= s;
  };
  normalize(f);

  std::vector<double> grad;
  double q = aq.value(f, &grad);
  result.trace.push_back(q);
  double step = 0.1;
  int accepted = 0;
  while (accepted < options.max_steps) {
    double gmax = 0.0, fmax = 0.0;
    for (int j = 0; j < nc; ++j) {
      gmax = std::max(gmax, std::abs(grad[j]));
      fmax = std::max(fmax, f[j]);
    }
    if (!(gmax > 1e-15 * q / fmax)) break;
    bool moved = false;
    for (int halving = 0; halving < 40 && !moved; ++halving) {
      std::vector<double> trial(nc);
      const double t = step * fmax / gmax;
      for (int j = 0; j < nc; ++j) trial[j] = std::max(0.0, f[j] + t * grad[j]);
      normalize(trial);
      std::vector<double> tg;
      const double tq = aq.value(trial, &tg);
      if (std::isfinite(tq) && tq > q) {
        f = std::move(trial);
        grad = std::move(tg);
        q = tq;
        step = std::min(1.0, 1.5 * step);
        moved = true;
      } else {
        step *= 0.5;
      }
    }
    if (!moved) break;
    ++accepted;
    if (q < result.trace.back() - 1e-10) throw NonConvergent("maximizer_search: quotient trace decreased");
    result.trace.push_back(q);
    // Stalled: the last 25 accepted steps gained less than 1e-13 relative.
    if (result.trace.size() > 25 && q - result.trace[result.trace.size() - 26] < 1e-13 * q) break;
    if (options.rearrange_every > 0 && accepted % options.rearrange_every == 0) {
      std::vector<double> star = rearrange_arcs(f);
      normalize(star);
      std::vector<double> sg;
      const double sq = aq.value(star, &sg);
      if (sq >= q) {
        f = std::move(star);
        grad = std::move(sg);
        q = sq;
        ++result.rearrangements;
        result.trace.push_back(q);
      }
    }
  }
  result.steps = accepted;
  result.values = f;
  result.quotient = q;

  // Least squares fit of the candidate family to the arc values, from a few starts.
  const CandidateFit fit{&result.values, &result.edges, eps, std::sqrt(aq.arc())};
  double mean = 0.0;
  int peak = 0;
  for (int j = 0; j < nc; ++j) {
    mean += f[j] / nc;
    if (f[j] > f[peak]) peak = j;
  }
  const double wpeak = 0.5 * (result.edges[peak] + result.edges[peak + 1]);
  const double ypeak = 0.5 * std::tan(std::clamp(0.5 * wpeak, -1.4, 1.4));
  double best = INFINITY;
  for (double lambda : {0.5, 0.1, 2.0})
    for (double y0 : {0.0, ypeak}) {
      Eigen::VectorXd x(3);
      x << std::log(mean * std::pow(2.0, 0.5 * eps)), std::log(lambda), y0;
      Eigen::NumericalDiff<CandidateFit> diff(fit);
      Eigen::LevenbergMarquardt<Eigen::NumericalDiff<CandidateFit>> lm(diff);
      lm.parameters.maxfev = 2000;
      lm.minimize(x);
      Eigen::VectorXd res;
      fit(x, res);
      if (std::isfinite(res.norm()) && res.norm() < best) {
        best = res.norm();
        result.fit = CandidateFit::candidate(x);
      }
    }
  const std::vector<double> g = arc_averages(result.fit, eps, result.edges);
  std::vector<double> diffv(nc);
  for (int j = 0; j < nc; ++j) diffv[j] = std::abs(f[j] - g[j]);
  result.fit_residual = aq.norm(diffv) / aq.norm(f);
  return result;
}

}  // namespace confext
