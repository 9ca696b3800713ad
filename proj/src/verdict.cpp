#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "confext/errors.hpp"
#include "confext/inequalities.hpp"

namespace confext {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::below:
      return "below";
    case Verdict::saturates:
      return "saturates";
    case Verdict::violates:
      return "violates";
  }
  return "unknown";
}

double QuotientReport::quotient_error() const {
  return std::abs(quotient) * (numerator_error / std::abs(numerator) + denominator_error / std::abs(denominator));
}

QuotientReport make_report(double numerator, double numerator_error, double denominator, double denominator_error) {
  if (!std::isfinite(denominator) || denominator == 0.0) throw DomainError("quotient: zero or non-finite denominator");
  if (!std::isfinite(numerator)) throw NonConvergent("quotient: non-finite numerator");
  QuotientReport r;
  r.numerator = numerator;
  r.denominator = denominator;
  r.quotient = numerator / denominator;
  r.numerator_error = numerator_error;
  r.denominator_error = denominator_error;
  return r;
}

Verdict judge(QuotientReport& report, double reference, double reference_error, double window) {
  if (!(reference > 0.0)) throw DomainError("judge: reference must be positive");
  report.reference_constant = reference;
  report.reference_error = reference_error;
  const double e = report.quotient_error() + reference_error;
  const double gap = report.quotient - reference;
  if (std::abs(gap) <= std::max(window * reference, 3.0 * e)) {
    report.verdict = Verdict::saturates;
  } else if (gap > 3.0 * e + 1e-12 * reference) {
    report.verdict = Verdict::violates;
  } else {
    report.verdict = Verdict::below;
  }
  return report.verdict;
}

namespace {

void exponents(int n, int degree, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == n) {
    const int total = std::accumulate(current.begin(), current.end(), 0);
    if (total >= 1) out.push_back(current);
    return;
  }
  const int used = std::accumulate(current.begin(), current.end(), 0);
  for (int k = 0; used + k <= degree; ++k) {
    current.push_back(k);
    exponents(n, degree, current, out);
    current.pop_back();
  }
}

}  // namespace

FieldFunction random_sphere_polynomial(int n, int degree, double amplitude, std::mt19937_64& rng) {
  if (degree < 1) throw DomainError("random_sphere_polynomial: degree must be at least 1");
  std::vector<std::vector<int>> monomials;
  std::vector<int> current;
  exponents(n, degree, current, monomials);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> coef(monomials.size());
  double total = 0.0;
  for (double& c : coef) {
    c = normal(rng);
    total += std::abs(c);
  }
  for (double& c : coef) c *= amplitude / total;
  FieldFunction f;
  f.domain = Domain::sphere;
  f.n = n;
  f.polynomial_degree = degree;
  f.eval = [monomials, coef](std::span<const double> x) {
    double s = 1.0;
    for (std::size_t k = 0; k < monomials.size(); ++k) {
      double term = coef[k];
      for (std::size_t i = 0; i < monomials[k].size(); ++i)
        for (int e = 0; e < monomials[k][i]; ++e) term *= x[i];
      s += term;
    }
    return s;
  };
  return f;
}

FieldFunction random_harmonic_polynomial(int degree, double amplitude, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, amplitude);
  const double c0 = normal(rng);
  std::vector<std::complex<double>> coef(degree + 1);
  for (int k = 1; k <= degree; ++k) coef[k] = {normal(rng), normal(rng)};
  FieldFunction u;
  u.domain = Domain::ball;
  u.n = 2;
  u.polynomial_degree = degree;
  u.eval = [c0, coef](std::span<const double> x) {
    const std::complex<double> z(x[0], x[1]);
    std::complex<double> zk = 1.0;
    double s = c0;
    for (std::size_t k = 1; k < coef.size(); ++k) {
      zk *= z;
      s += coef[k].real() * zk.real() + coef[k].imag() * zk.imag();
    }
    return s;
  };
  return u;
}

}  // namespace confext
