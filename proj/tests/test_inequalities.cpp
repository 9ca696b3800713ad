#include <cmath>
#include <numbers>
#include <random>

#include "confext/errors.hpp"
#include "confext/inequalities.hpp"
#include "doctest.h"

using namespace confext;

TEST_SUITE("inequalities") {

TEST_CASE("verdicts") {
  QuotientReport r = make_report(1.0, 0.0, 1.0, 0.0);
  CHECK(judge(r, 1.0) == Verdict::saturates);
  r = make_report(0.9, 0.0, 1.0, 0.0);
  CHECK(judge(r, 1.0) == Verdict::below);
  r = make_report(1.01, 0.0, 1.0, 0.0);
  CHECK(judge(r, 1.0) == Verdict::violates);
  // A wide error bar turns a small excess into saturation, not a violation.
  r = make_report(1.01, 0.01, 1.0, 0.0);
  CHECK(judge(r, 1.0) == Verdict::saturates);
  CHECK(judge(r, 1.0, 0.0, 0.05) == Verdict::saturates);
  CHECK_THROWS_AS(make_report(1.0, 0.0, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(make_report(1.0, 0.0, NAN, 0.0), DomainError);
}

TEST_CASE("sharp constant at a = 0 matches the closed form") {
  for (int n : {3, 4, 5}) {
    const PointValue S = sharp_constant(KernelParams(n, 0.0));
    CHECK(S.value == doctest::Approx(sharp_constant_closed_form(n)).epsilon(1e-8));
  }
  CHECK(sharp_constant_closed_form(3) == doctest::Approx(0.6743400734).epsilon(1e-9));
}

TEST_CASE("Theorem 1 quotient is homogeneous and bounded by the constant") {
  const KernelParams params(3, 0.5);
  const Theorem1Evaluator ev(params, 10);
  const double S = ev.quotient(constant_field(Domain::sphere, 3, 1.0)).quotient;
  CHECK(S == doctest::Approx(0.4470529317).epsilon(1e-8));
  std::mt19937_64 rng(4);
  for (int k = 0; k < 20; ++k) {
    const FieldFunction f = random_sphere_polynomial(3, 1 + k % 4, 0.8, rng);
    const QuotientReport q = ev.quotient(f);
    CHECK(q.quotient <= S * (1.0 + 1e-8));
    const QuotientReport q3 = ev.quotient(scaled(f, 3.0));
    CHECK(q3.quotient == doctest::Approx(q.quotient).epsilon(1e-12));
  }
}

TEST_CASE("extremal candidates") {
  const KernelParams params(2, 0.5);
  ExtremalCandidate c;
  c.lambda = -1.0;
  CHECK_THROWS_AS(extremal_eval(c, params), DomainError);
  c.lambda = 0.5;
  c.Y0 = {0.0};
  const FieldFunction f = extremal_eval(c, params);
  // lambda = 1/2 at the origin is the boundary trace of the constant.
  for (double y : {0.0, 0.7, -3.0})
    CHECK(f({y}) == doctest::Approx(std::pow(0.5 / (0.25 + y * y), 0.25)).epsilon(1e-14));
}

TEST_CASE("limit function at the origin") {
  CHECK(limit_at_origin(3) == doctest::Approx(2.0 * std::numbers::ln2 - 1.0).epsilon(1e-14));
  CHECK(limit_at_origin(4) == doctest::Approx(0.5).epsilon(1e-14));
  const LimitFunctionalField I3(3);
  CHECK(I3.profile(0.0) == doctest::Approx(limit_at_origin(3)).epsilon(1e-10));
  const std::vector<double> eta = {0.0, 0.0, 0.4};
  CHECK(I3.evaluate(eta).value == doctest::Approx(I3.profile(0.4)).epsilon(1e-7));
  CHECK(I3.profile(1.0) == 0.0);
  CHECK_THROWS_AS(LimitFunctionalField(2), DomainError);
}

TEST_CASE("Theorem 2 constant at n = 3") {
  const Theorem2Evaluator ev(3, 8);
  const QuotientReport q = ev.quotient(constant_field(Domain::sphere, 3, 0.0));
  CHECK(q.quotient == doctest::Approx(0.5457545879).epsilon(1e-8));
  const QuotientReport shifted = ev.quotient(constant_field(Domain::sphere, 3, 0.7));
  CHECK(shifted.quotient == doctest::Approx(q.quotient).epsilon(1e-12));
}

TEST_CASE("Carleman") {
  const QuotientReport zero = carleman_check(constant_field(Domain::ball, 2, 0.0));
  CHECK(zero.quotient == doctest::Approx(0.25 / std::numbers::pi).epsilon(1e-12));
  CHECK(zero.verdict == Verdict::saturates);
  std::mt19937_64 rng(6);
  for (int k = 0; k < 5; ++k) {
    const QuotientReport q = carleman_check(random_harmonic_polynomial(1 + k, 0.5, rng));
    CHECK(q.quotient < 0.25 / std::numbers::pi);
  }
  FieldFunction bad;
  bad.domain = Domain::ball;
  bad.n = 2;
  bad.eval = [](std::span<const double> x) { return x[0] * x[0]; };
  CHECK_THROWS_AS(carleman_check(bad), Inadmissible);
}

TEST_CASE("maximizer on arcs") {
  const KernelParams params(2, 0.5);
  const double S = 0.6510683984;
  MaximizerOptions opt;
  opt.cells = 16;
  opt.max_steps = 200;
  opt.start_from_extremal = true;
  const MaximizerResult from_extremal = maximizer_search(params, opt);
  CHECK(from_extremal.quotient == doctest::Approx(S).epsilon(1e-3));
  opt.start_from_extremal = false;
  const MaximizerResult r = maximizer_search(params, opt);
  CHECK(r.quotient == doctest::Approx(S).epsilon(1e-3));
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] >= r.trace[i - 1] - 1e-10);
  CHECK(r.fit_residual < 5e-2);
  opt.cells = 15;
  CHECK_THROWS_AS(maximizer_search(params, opt), DomainError);
}

}
