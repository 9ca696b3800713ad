#include "confext/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <functional>
#include <iomanip>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "confext/biharmonic.hpp"
#include "confext/errors.hpp"
#include "confext/inequalities.hpp"
#include "confext/special.hpp"

namespace confext::cli {
namespace {

using ojson = nlohmann::ordered_json;

struct CommandSpec {
  int default_n;
  int default_resolution;
  int min_resolution;
  int default_samples;
};

const std::map<std::string, CommandSpec>& commands() {
  static const std::map<std::string, CommandSpec> specs = {
      {"verify-thm1", {3, 12, 6, 200}},      {"verify-thm2", {3, 10, 6, 100}},
      {"verify-carleman", {2, 16, 8, 50}},   {"verify-corollary1", {4, 10, 6, 0}},
      {"sweep", {3, 12, 6, 0}},              {"search-max", {2, 32, 8, 0}},
  };
  return specs;
}

const CommandSpec& spec_of(const RunConfig& cfg) {
  auto it = commands().find(cfg.command);
  if (it == commands().end()) throw ConfigError("unknown command '" + cfg.command + "'");
  return it->second;
}

int effective_n(const RunConfig& cfg) { return cfg.n.value_or(spec_of(cfg).default_n); }
int effective_resolution(const RunConfig& cfg) {
  return cfg.resolution > 0 ? cfg.resolution : spec_of(cfg).default_resolution;
}
int effective_samples(const RunConfig& cfg) { return cfg.samples >= 0 ? cfg.samples : spec_of(cfg).default_samples; }
double effective_a(const RunConfig& cfg) {
  if (cfg.a) return *cfg.a;
  return cfg.command == "search-max" ? 0.5 : 0.0;
}

std::vector<double> sweep_values(const RunConfig& cfg) {
  std::vector<double> out;
  const double lo = *cfg.a_min, hi = *cfg.a_max, step = *cfg.a_step;
  for (int k = 0;; ++k) {
    const double a = lo + k * step;
    if (a > hi + 1e-12 * std::max(1.0, std::abs(hi))) break;
    out.push_back(std::abs(a) < 1e-14 ? 0.0 : a);
    if (out.size() > 10000) throw ConfigError("sweep: more than 10000 points");
  }
  return out;
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string_view status_name(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::error:
      return "error";
  }
  return "error";
}

// Collects records; a check that throws becomes an error record.
class Suite {
 public:
  explicit Suite(const RunConfig& cfg) : cfg_(cfg) {}

  double tol(const std::string& name) const {
    auto it = cfg_.tolerances.find(name);
    return it != cfg_.tolerances.end() ? it->second : default_tolerances().at(name);
  }

  void check(const std::string& name, const std::string& inputs, const std::function<void(Record&)>& body) {
    Record r;
    r.name = name;
    r.inputs = inputs;
    try {
      body(r);
    } catch (const std::exception& e) {
      r.status = Status::error;
      r.verdict = "error";
      r.message = e.what();
    }
    records_.push_back(std::move(r));
  }

  std::vector<Record> take() {
    std::stable_sort(records_.begin(), records_.end(),
                     [](const Record& x, const Record& y) { return x.name < y.name; });
    return std::move(records_);
  }

 private:
  const RunConfig& cfg_;
  std::vector<Record> records_;
};

void put_quotient(Record& r, const QuotientReport& q) {
  r.values = {{"numerator", q.numerator}, {"denominator", q.denominator}, {"quotient", q.quotient}};
  r.errors = {{"numerator", q.numerator_error}, {"denominator", q.denominator_error}, {"quotient", q.quotient_error()}};
  if (q.reference_constant) {
    r.values.emplace_back("reference", *q.reference_constant);
    r.errors.emplace_back("reference", q.reference_error);
  }
}

// Sweep rule: q <= S (1 + rel) + 3 (e_q + e_S).
void below_or_equal(Record& r, const QuotientReport& q, const PointValue& S, double rel) {
  QuotientReport copy = q;
  judge(copy, S.value, S.error);
  put_quotient(r, copy);
  r.verdict = std::string(to_string(copy.verdict));
  const double bound = S.value * (1.0 + rel) + 3.0 * (q.quotient_error() + S.error);
  r.values.emplace_back("bound", bound);
  r.status = q.quotient <= bound ? Status::pass : Status::fail;
}

void expect_saturation(Record& r, QuotientReport q, const PointValue& S, double window) {
  judge(q, S.value, S.error, window);
  put_quotient(r, q);
  r.verdict = std::string(to_string(q.verdict));
  r.status = q.verdict == Verdict::saturates ? Status::pass : Status::fail;
}

void expect_strictly_below(Record& r, QuotientReport q, double reference, double reference_error) {
  judge(q, reference, reference_error);
  put_quotient(r, q);
  const double margin = reference - q.quotient - 3.0 * (q.quotient_error() + reference_error);
  r.values.emplace_back("margin", margin);
  r.verdict = margin > 0.0 ? "strictly_below" : std::string(to_string(q.verdict));
  r.status = margin > 0.0 ? Status::pass : Status::fail;
}

void compare(Record& r, double value, double expected, double tolerance, bool relative = false) {
  const double dev = relative ? std::abs(value - expected) / std::abs(expected) : std::abs(value - expected);
  r.values = {{"value", value}, {"expected", expected}, {"deviation", dev}, {"tolerance", tolerance}};
  r.verdict = dev <= tolerance ? "agrees" : "disagrees";
  r.status = dev <= tolerance ? Status::pass : Status::fail;
}

MobiusTransform shift_along(int n, std::initializer_list<double> b) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  int i = 0;
  for (double x : b) {
    if (i < n) v(i) = x;
    ++i;
  }
  return MobiusTransform::translation(v);
}

std::string point_string(std::span<const double> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + fmt(x[i]);
  return s + ")";
}

// ---------------------------------------------------------------------------

void run_thm1(const RunConfig& cfg, Suite& suite) {
  const int n = effective_n(cfg), m = effective_resolution(cfg), samples = effective_samples(cfg);
  const double a = effective_a(cfg);
  const KernelParams params(n, a);
  const std::string base = "n=" + std::to_string(n) + ";a=" + fmt(a) + ";m=" + std::to_string(m);
  const Theorem1Evaluator ev(params, m);
  const QuotientReport one = ev.quotient(constant_field(Domain::sphere, n, 1.0));
  const PointValue S{one.quotient, one.quotient_error()};

  suite.check("thm1/constant", base, [&](Record& r) {
    put_quotient(r, one);
    r.verdict = "reference";
    r.status = std::isfinite(S.value) ? Status::pass : Status::error;
  });
  if (a == 0.0) {
    suite.check("thm1/closed_form", base, [&](Record& r) {
      compare(r, S.value, sharp_constant_closed_form(n), suite.tol("closed_form"), true);
    });
  }

  std::mt19937_64 rng(cfg.seed);
  const double amplitudes[] = {0.3, 0.6, 0.9};
  for (int i = 0; i < samples; ++i) {
    const int degree = 1 + i % (n >= 5 ? 3 : 6);
    const double amp = amplitudes[i % 3];
    const FieldFunction f = random_sphere_polynomial(n, degree, amp, rng);
    char name[48];
    std::snprintf(name, sizeof name, "thm1/random/%04d", i);
    suite.check(name, base + ";seed=" + std::to_string(cfg.seed) + ";index=" + std::to_string(i) +
                          ";degree=" + std::to_string(degree) + ";amplitude=" + fmt(amp),
                [&](Record& r) { below_or_equal(r, ev.quotient(f), S, suite.tol("thm1_relative")); });
  }

  // Non-polynomial data needs high harmonic degrees in four and more dimensions; there the
  // invariance check transforms a Mobius image of the constant by a small second map.
  if (n <= 4) {
    const std::string label = n <= 3 ? "b=(0.3,0.1)" : "b=(0.05);c=(0.03,-0.02)";
    suite.check("thm1/conformal_invariance", base + ";" + label, [&](Record& r) {
      FieldFunction f;
      MobiusTransform t = shift_along(n, {0.3, 0.1});
      if (n <= 3) {
        std::mt19937_64 local(cfg.seed + 7919);
        f = random_sphere_polynomial(n, 3, 0.5, local);
      } else {
        f = conformal_transform(constant_field(Domain::sphere, n, 1.0), shift_along(n, {0.05}), params);
        t = shift_along(n, {0.03, -0.02});
      }
      const QuotientReport q0 = ev.quotient(f);
      const QuotientReport q1 = ev.quotient(conformal_transform(f, t, params));
      const double dev = std::abs(q1.quotient - q0.quotient);
      const double allowed = 3.0 * (q0.quotient_error() + q1.quotient_error()) + 1e-9;
      r.values = {{"quotient", q0.quotient}, {"transformed", q1.quotient}, {"deviation", dev}, {"allowed", allowed}};
      r.errors = {{"quotient", q0.quotient_error()}, {"transformed", q1.quotient_error()}};
      r.verdict = dev <= allowed ? "invariant" : "not_invariant";
      r.status = dev <= allowed ? Status::pass : Status::fail;
    });
  }

  if (n <= 3) {
    std::vector<std::vector<double>> centers = {std::vector<double>(n - 1, 0.0)};
    centers.push_back(n == 2 ? std::vector<double>{0.5} : std::vector<double>{0.5, -0.25});
    for (double lambda : {0.5, 1.0, 2.0})
      for (std::size_t c = 0; c < centers.size(); ++c) {
        const std::string name = "thm1/candidate/lambda=" + fmt(lambda) + "/y0=" + std::to_string(c);
        suite.check(name, base + ";lambda=" + fmt(lambda) + ";y0=" + point_string(centers[c]), [&](Record& r) {
          ExtremalCandidate cand;
          cand.lambda = lambda;
          cand.Y0 = centers[c];
          // One fixed outer rule for every candidate, so that dilation and translation are
          // not absorbed into the nodes.
          const QuotientReport q = halfspace_quotient(extremal_eval(cand, params), params, 6, 2.0);
          expect_saturation(r, q, S, suite.tol("saturation"));
        });
      }

    const std::vector<std::vector<double>> ys =
        n == 2 ? std::vector<std::vector<double>>{{0.0}, {0.5}, {-0.7}, {1.2}, {-2.0}}
               : std::vector<std::vector<double>>{{0, 0}, {0.5, 0}, {0.3, -0.7}, {1.2, 0.4}, {-2, 1}};
    double candidate_cov = NAN;
    ExtremalCandidate c1;
    c1.Y0.assign(n - 1, 0.0);
    const FieldFunction f1 = extremal_eval(c1, params);
    suite.check("thm1/el/candidate", base + ";lambda=1", [&](Record& r) {
      const ELResidual e = el_residual(f1, params, params.boundary_exponent(), ys);
      candidate_cov = e.cov;
      r.values = {{"cov", e.cov}, {"threshold", suite.tol("el_cov")}};
      r.verdict = e.cov < suite.tol("el_cov") ? "stationary" : "not_stationary";
      r.status = e.cov < suite.tol("el_cov") ? Status::pass : Status::fail;
    });
    suite.check("thm1/el/perturbed", base + ";lambda=1;bump=0.05", [&](Record& r) {
      FieldFunction g = f1;
      g.eval = [f1](std::span<const double> Y) {
        double d2 = (Y[0] - 0.5) * (Y[0] - 0.5);
        for (std::size_t i = 1; i < Y.size(); ++i) d2 += Y[i] * Y[i];
        return f1.eval(Y) * (1.0 + 0.05 * std::exp(-d2));
      };
      const ELResidual e = el_residual(g, params, params.boundary_exponent(), ys);
      const double contrast = e.cov / candidate_cov;
      r.values = {{"cov", e.cov}, {"candidate_cov", candidate_cov}, {"contrast", contrast},
                  {"threshold", suite.tol("el_contrast")}};
      const bool ok = std::isfinite(contrast) && contrast > suite.tol("el_contrast");
      r.verdict = ok ? "separated" : "not_separated";
      r.status = ok ? Status::pass : Status::fail;
    });
  } else if (n == 4) {
    // Candidates on the sphere side: Mobius images of the constant.
    const std::vector<std::pair<std::string, MobiusTransform>> maps = {
        {"b=(0.05)", shift_along(n, {0.05})}, {"b=(0.04,-0.06)", shift_along(n, {0.04, -0.06})}};
    for (const auto& [label, t] : maps) {
      suite.check("thm1/candidate_sphere/" + label, base + ";" + label, [&](Record& r) {
        const QuotientReport q = ev.quotient(conformal_transform(constant_field(Domain::sphere, n, 1.0), t, params));
        expect_saturation(r, q, S, suite.tol("saturation"));
      });
    }
  }
}

void run_thm2(const RunConfig& cfg, Suite& suite) {
  const int n = effective_n(cfg), m = effective_resolution(cfg), samples = effective_samples(cfg);
  const std::string base = "n=" + std::to_string(n) + ";m=" + std::to_string(m);
  const Theorem2Evaluator ev(n, m);
  const QuotientReport zero = ev.quotient(constant_field(Domain::sphere, n, 0.0));
  const PointValue S{zero.quotient, zero.quotient_error()};

  suite.check("thm2/constant", base, [&](Record& r) {
    put_quotient(r, zero);
    r.verdict = "reference";
    r.status = std::isfinite(S.value) ? Status::pass : Status::error;
  });
  suite.check("thm2/constant_shift", base + ";C=0.7", [&](Record& r) {
    expect_saturation(r, ev.quotient(constant_field(Domain::sphere, n, 0.7)), S, suite.tol("saturation"));
  });
  suite.check("thm2/jacobian_shift", base + ";b=(0.2,-0.1);C=0.3", [&](Record& r) {
    expect_saturation(r, ev.quotient(jacobian_shift(shift_along(n, {0.2, -0.1}), 0.3)), S, suite.tol("saturation"));
  });
  suite.check("thm2/limit_at_origin", base, [&](Record& r) {
    compare(r, LimitFunctionalField(n).profile(0.0), limit_at_origin(n), 1e-8);
  });

  std::mt19937_64 rng(cfg.seed);
  const double amplitudes[] = {0.3, 0.6, 0.9};
  for (int i = 0; i < samples; ++i) {
    const int degree = 1 + i % 4;
    const double amp = amplitudes[i % 3];
    const FieldFunction F = random_sphere_polynomial(n, degree, amp, rng);
    char name[48];
    std::snprintf(name, sizeof name, "thm2/random/%04d", i);
    suite.check(name, base + ";seed=" + std::to_string(cfg.seed) + ";index=" + std::to_string(i) +
                          ";degree=" + std::to_string(degree) + ";amplitude=" + fmt(amp),
                [&](Record& r) { below_or_equal(r, ev.quotient(F), S, suite.tol("thm2_relative")); });
  }

  if (n == 4) {
    const BiharmonicKernelConstants consts = calibrate_biharmonic_constants();
    const LimitFunctionalField limit(4);
    std::mt19937_64 prng(cfg.seed + 104729);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif;
    for (int i = 0; i < 50; ++i) {
      std::vector<double> eta(4);
      double norm = 0.0;
      for (double& x : eta) {
        x = gauss(prng);
        norm += x * x;
      }
      const double radius = 0.9 * std::pow(unif(prng), 0.25);
      for (double& x : eta) x *= radius / std::sqrt(norm);
      char name[48];
      std::snprintf(name, sizeof name, "thm2/dual/%02d", i);
      suite.check(name, "eta=" + point_string(eta), [&](Record& r) {
        const PointValue direct = limit.evaluate(eta);
        const PointValue kernel = limit_kernel_form4(eta, consts);
        compare(r, direct.value, kernel.value, suite.tol("dual"));
        r.errors = {{"value", direct.error}, {"expected", kernel.error}};
      });
    }
  }
}

void run_carleman(const RunConfig& cfg, Suite& suite) {
  const int m = effective_resolution(cfg), samples = effective_samples(cfg);
  const double ref = 1.0 / (4.0 * std::numbers::pi);
  const std::string base = "m=" + std::to_string(m);

  suite.check("carleman/zero", "u=0", [&](Record& r) {
    // int_B e^0 = pi and (int_S e^0)^2 = (2 pi)^2.
    QuotientReport q = make_report(std::numbers::pi, 0.0, 4.0 * std::numbers::pi * std::numbers::pi, 0.0);
    judge(q, ref);
    put_quotient(r, q);
    r.verdict = std::string(to_string(q.verdict));
    r.status = std::abs(q.quotient - ref) <= 1e-15 ? Status::pass : Status::fail;
  });
  auto equality = [&](const std::string& name, const std::string& inputs, const FieldFunction& u) {
    suite.check(name, base + ";" + inputs, [&](Record& r) {
      QuotientReport q = carleman_check(u, false, m);
      judge(q, ref);
      put_quotient(r, q);
      const double dev = std::abs(q.quotient - ref) / ref;
      r.values.emplace_back("relative_deviation", dev);
      r.verdict = dev <= suite.tol("carleman_equality") ? "equality" : std::string(to_string(q.verdict));
      r.status = dev <= suite.tol("carleman_equality") ? Status::pass : Status::fail;
    });
  };
  equality("carleman/equality/constant", "u=0.7", constant_field(Domain::ball, 2, 0.7));
  FieldFunction log_u;
  log_u.domain = Domain::ball;
  log_u.n = 2;
  log_u.eval = [](std::span<const double> x) {
    return -2.0 * std::log(std::hypot(x[0] - 1.5, x[1])) + 0.3;
  };
  equality("carleman/equality/log", "u=-2log|x-(1.5,0)|+0.3", log_u);

  std::mt19937_64 rng(cfg.seed);
  for (int i = 0; i < samples; ++i) {
    const int degree = 1 + i % 5;
    const FieldFunction u = random_harmonic_polynomial(degree, 0.5, rng);
    char name[48];
    std::snprintf(name, sizeof name, "carleman/random/%03d", i);
    suite.check(name, base + ";seed=" + std::to_string(cfg.seed) + ";index=" + std::to_string(i) +
                          ";degree=" + std::to_string(degree),
                [&](Record& r) { expect_strictly_below(r, carleman_check(u, false, m), ref, 0.0); });
  }
}

void run_corollary1(const RunConfig& cfg, Suite& suite) {
  const int m = effective_resolution(cfg);
  const std::string base = "n=4;m=" + std::to_string(m);
  const PointValue S = corollary1_constant(m);
  const LimitFunctionalField limit(4);
  const FieldFunction ustar = limit.as_field();

  suite.check("corollary1/constant", base, [&](Record& r) {
    r.values = {{"value", S.value}};
    r.errors = {{"value", S.error}};
    r.verdict = "reference";
    r.status = std::isfinite(S.value) ? Status::pass : Status::error;
  });
  suite.check("corollary1/extremal", base + ";u=I_4;neumann=1", [&](Record& r) {
    const QuotientReport q = corollary1_check(ustar, constant_field(Domain::sphere, 4, 1.0), S.value, S.error, m);
    expect_saturation(r, q, S, suite.tol("saturation"));
  });
  suite.check("corollary1/zero", base + ";u=0", [&](Record& r) {
    QuotientReport q = corollary1_check(constant_field(Domain::ball, 4, 0.0), constant_field(Domain::sphere, 4, 0.0),
                                        S.value, S.error, m);
    const double num = std::pow(ball_volume(4), 0.25), den = std::cbrt(sphere_area(3));
    put_quotient(r, q);
    r.values.emplace_back("closed_form_numerator", num);
    r.values.emplace_back("closed_form_denominator", den);
    const bool sides = std::abs(q.numerator - num) <= 1e-10 * num && std::abs(q.denominator - den) <= 1e-10 * den;
    const double margin = S.value - q.quotient - 3.0 * (q.quotient_error() + S.error);
    r.values.emplace_back("margin", margin);
    r.verdict = margin > 0.0 ? "strictly_below" : std::string(to_string(q.verdict));
    r.status = sides && margin > 0.0 ? Status::pass : Status::fail;
  });
  suite.check("corollary1/perturbed", base + ";u=0.4(1-|eta|^2);neumann=0.8", [&](Record& r) {
    FieldFunction u;
    u.domain = Domain::ball;
    u.n = 4;
    u.eval = [](std::span<const double> x) {
      double r2 = 0.0;
      for (double v : x) r2 += v * v;
      return 0.4 * (1.0 - r2);
    };
    expect_strictly_below(r, corollary1_check(u, constant_field(Domain::sphere, 4, 0.8), S.value, S.error, m),
                          S.value, S.error);
  });
  suite.check("corollary1/boundary_value", "r=1-1e-3", [&](Record& r) {
    const double v = std::abs(limit.profile(1.0 - 1e-3));
    r.values = {{"value", v}, {"tolerance", suite.tol("boundary_value")}};
    r.verdict = v < suite.tol("boundary_value") ? "vanishes" : "does_not_vanish";
    r.status = v < suite.tol("boundary_value") ? Status::pass : Status::fail;
  });
  suite.check("corollary1/normal_derivative", "h=1e-3", [&](Record& r) {
    const double h = 1e-3;
    const double du = (limit.profile(1.0) - limit.profile(1.0 - h)) / h;
    compare(r, du, -1.0, suite.tol("normal_derivative"));
  });
}

void run_sweep(const RunConfig& cfg, Suite& suite, Report& report) {
  const int n = effective_n(cfg), m = effective_resolution(cfg);
  for (double a : sweep_values(cfg)) {
    const std::string inputs = "n=" + std::to_string(n) + ";a=" + fmt(a) + ";m=" + std::to_string(m);
    char name[64];
    std::snprintf(name, sizeof name, "sweep/a=%+.6f", a);
    suite.check(name, inputs, [&](Record& r) {
      const PointValue S = sharp_constant(KernelParams(n, a), m);
      r.values = {{"n", static_cast<double>(n)}, {"a", a}, {"S", S.value}};
      r.errors = {{"S", S.error}};
      r.verdict = "tabulated";
      r.status = std::isfinite(S.value) && S.error <= 1e-6 * S.value ? Status::pass : Status::error;
      if (r.status == Status::error) r.message = "resolution levels disagree";
      report.table.push_back({static_cast<double>(n), a, S.value, S.error});
      if (a == 0.0) {
        const double closed = sharp_constant_closed_form(n);
        const double dev = std::abs(S.value - closed) / closed;
        r.values.emplace_back("closed_form", closed);
        r.values.emplace_back("relative_deviation", dev);
        if (dev > suite.tol("closed_form")) {
          r.status = Status::fail;
          r.verdict = "closed_form_mismatch";
        }
      }
    });
  }
}

void run_search(const RunConfig& cfg, Suite& suite) {
  const double a = effective_a(cfg);
  const KernelParams params(2, a);
  MaximizerOptions opt;
  opt.cells = effective_resolution(cfg);
  opt.seed = cfg.seed;
  const std::string inputs = "n=2;a=" + fmt(a) + ";cells=" + std::to_string(opt.cells) + ";seed=" +
                             std::to_string(cfg.seed);
  const PointValue S = sharp_constant(params);
  MaximizerResult res;
  bool ok = false;
  suite.check("search/run", inputs, [&](Record& r) {
    res = maximizer_search(params, opt);
    ok = true;
    r.values = {{"steps", static_cast<double>(res.steps)},
                {"rearrangements", static_cast<double>(res.rearrangements)},
                {"initial_quotient", res.trace.front()},
                {"final_quotient", res.quotient}};
    r.verdict = "monotone";
  });
  if (!ok) return;
  suite.check("search/quotient", inputs, [&](Record& r) {
    const double gap = S.value - res.quotient;
    r.values = {{"quotient", res.quotient}, {"S", S.value}, {"gap", gap}, {"relative_gap", gap / S.value}};
    r.errors = {{"S", S.error}};
    const bool near = std::abs(gap) <= suite.tol("saturation") * S.value;
    r.verdict = near ? "reaches_constant" : "short_of_constant";
    r.status = near ? Status::pass : Status::fail;
  });
  suite.check("search/fit", inputs, [&](Record& r) {
    r.values = {{"c", res.fit.c},
                {"lambda", res.fit.lambda},
                {"y0", res.fit.Y0.empty() ? 0.0 : res.fit.Y0[0]},
                {"residual", res.fit_residual},
                {"threshold", suite.tol("fit_residual")}};
    const bool good = res.fit_residual < suite.tol("fit_residual");
    r.verdict = good ? "fits_family" : "does_not_fit";
    r.status = good ? Status::pass : Status::fail;
  });
}

}  // namespace

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t = {
      {"saturation", 1e-3},        {"thm1_relative", 1e-6},  {"thm2_relative", 1e-5},
      {"el_cov", 1e-2},            {"el_contrast", 10.0},    {"carleman_equality", 1e-4},
      {"dual", 1e-3},              {"closed_form", 1e-4},    {"boundary_value", 1e-3},
      {"normal_derivative", 1e-2}, {"fit_residual", 5e-2},
  };
  return t;
}

void add_tolerance_override(RunConfig& cfg, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw ConfigError("--tolerance expects name=value, got '" + spec + "'");
  const std::string name = spec.substr(0, eq);
  if (!default_tolerances().count(name)) throw ConfigError("unknown tolerance '" + name + "'");
  double v;
  try {
    std::size_t used = 0;
    v = std::stod(spec.substr(eq + 1), &used);
    if (used != spec.size() - eq - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw ConfigError("tolerance '" + name + "' needs a number");
  }
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("tolerance '" + name + "' must be positive");
  cfg.tolerances[name] = v;
}

std::vector<std::string> validate(const RunConfig& cfg) {
  const CommandSpec& spec = spec_of(cfg);
  std::vector<std::string> warnings;
  const int n = effective_n(cfg);
  if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("--format must be json or csv");
  if (cfg.format == "csv" && cfg.command != "sweep") throw ConfigError("--format csv is only available for sweep");
  if (cfg.resolution != 0 && cfg.resolution < spec.min_resolution)
    throw ConfigError(cfg.command + ": --resolution must be at least " + std::to_string(spec.min_resolution));
  if (cfg.samples < -1) throw ConfigError("--samples must be nonnegative");
  if (cfg.command == "sweep") {
    if (cfg.a) throw ConfigError("sweep takes --a-min/--a-max/--a-step, not --a");
    if (!cfg.a_min || !cfg.a_max || !cfg.a_step) throw ConfigError("sweep needs --a-min, --a-max and --a-step");
    if (!(*cfg.a_step > 0.0)) throw ConfigError("sweep: --a-step must be positive");
  } else if (cfg.a_min || cfg.a_max || cfg.a_step) {
    throw ConfigError(cfg.command + " takes --a, not an a-range");
  }
  auto check_open = [&](double a) {
    if (!(a > 2.0 - n && a < 1.0)) {
      std::ostringstream msg;
      msg << "a = " << a << " outside 2-n < a < 1 for n = " << n;
      throw ConfigError(msg.str());
    }
    if (a > 0.99) {
      std::ostringstream msg;
      msg << "a = " << a << " is close to 1; quadrature near the divergence is slow";
      warnings.push_back(msg.str());
    }
  };
  if (cfg.command == "verify-thm1") {
    if (n < 2 || n > 5) throw ConfigError("verify-thm1: n must lie in [2, 5]");
    check_open(effective_a(cfg));
    if (n == 5) warnings.push_back("verify-thm1 at n = 5: random data capped at degree 3, conformal checks skipped");
  } else if (cfg.command == "verify-thm2") {
    if (n < 3 || n > 5) throw ConfigError("verify-thm2: n must lie in [3, 5]");
    if (cfg.a && *cfg.a != 2.0 - n) throw ConfigError("verify-thm2 runs at the endpoint a = 2-n");
  } else if (cfg.command == "verify-carleman") {
    if (n != 2) throw ConfigError("verify-carleman: n is 2");
    if (cfg.a && *cfg.a != 0.0) throw ConfigError("verify-carleman runs at a = 0");
  } else if (cfg.command == "verify-corollary1") {
    if (n != 4) throw ConfigError("verify-corollary1: n is 4");
    if (cfg.a && *cfg.a != -2.0) throw ConfigError("verify-corollary1 runs at the endpoint a = -2");
  } else if (cfg.command == "sweep") {
    if (n < 2 || n > 5) throw ConfigError("sweep: n must lie in [2, 5]");
    const std::vector<double> values = sweep_values(cfg);
    if (values.empty()) throw ConfigError("sweep: the a-range is empty");
    for (double a : values) check_open(a);
  } else if (cfg.command == "search-max") {
    if (n != 2) throw ConfigError("search-max: n is 2");
    check_open(effective_a(cfg));
    if (!(effective_a(cfg) > 0.0)) throw ConfigError("search-max: needs eps = a > 0");
    const int cells = effective_resolution(cfg);
    if (cells % 2 != 0 || cells > 128) throw ConfigError("search-max: --resolution (cells) must be even and <= 128");
  }
  return warnings;
}

int Report::passed() const {
  return static_cast<int>(std::count_if(records.begin(), records.end(), [](const Record& r) { return r.status == Status::pass; }));
}
int Report::failed() const {
  return static_cast<int>(std::count_if(records.begin(), records.end(), [](const Record& r) { return r.status == Status::fail; }));
}
int Report::errored() const {
  return static_cast<int>(std::count_if(records.begin(), records.end(), [](const Record& r) { return r.status == Status::error; }));
}
int Report::exit_code() const {
  if (failed() > 0) return 1;
  if (errored() > 0) return 2;
  return 0;
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string Report::json(bool timing) const {
  ojson j;
  j["schema"] = "confext-report/1";
  j["command"] = config.command;
  ojson c;
  c["n"] = effective_n(config);
  if (config.command == "sweep") {
    c["a_min"] = *config.a_min;
    c["a_max"] = *config.a_max;
    c["a_step"] = *config.a_step;
  } else {
    c["a"] = config.command == "verify-thm2"         ? 2.0 - effective_n(config)
             : config.command == "verify-corollary1" ? -2.0
                                                     : effective_a(config);
  }
  c["resolution"] = effective_resolution(config);
  c["samples"] = effective_samples(config);
  c["seed"] = config.seed;
  c["format"] = config.format;
  ojson tol = ojson::object();
  for (const auto& [k, v] : default_tolerances()) {
    auto it = config.tolerances.find(k);
    tol[k] = it != config.tolerances.end() ? it->second : v;
  }
  c["tolerances"] = tol;
  ojson overrides = ojson::object();
  for (const auto& [k, v] : config.tolerances) overrides[k] = v;
  c["tolerance_overrides"] = overrides;
  j["config"] = c;
  j["warnings"] = warnings;
  ojson recs = ojson::array();
  for (const Record& r : records) {
    ojson x;
    x["name"] = r.name;
    x["inputs"] = r.inputs;
    x["inputs_digest"] = fnv1a_hex(r.inputs);
    ojson vals = ojson::object(), errs = ojson::object();
    for (const auto& [k, v] : r.values) vals[k] = v;
    for (const auto& [k, v] : r.errors) errs[k] = v;
    x["values"] = vals;
    x["errors"] = errs;
    x["verdict"] = r.verdict;
    x["status"] = status_name(r.status);
    if (!r.message.empty()) x["message"] = r.message;
    recs.push_back(x);
  }
  j["records"] = recs;
  if (!table.empty()) {
    ojson t = ojson::array();
    for (const auto& row : table) t.push_back({{"n", row[0]}, {"a", row[1]}, {"S", row[2]}, {"error", row[3]}});
    j["table"] = t;
  }
  j["summary"] = {{"total", records.size()}, {"pass", passed()}, {"fail", failed()}, {"error", errored()},
                  {"exit_code", exit_code()}};
  if (timing) j["timing"] = {{"timestamp", timestamp}, {"wall_time_s", wall_time}};
  return j.dump(2) + "\n";
}

std::string Report::csv() const {
  std::ostringstream s;
  s << "n,a,S,error\n";
  for (const auto& row : table)
    s << static_cast<int>(row[0]) << ',' << fmt(row[1]) << ',' << fmt(row[2]) << ',' << fmt(row[3]) << '\n';
  return s.str();
}

Report run(const RunConfig& cfg) {
  Report report;
  report.config = cfg;
  report.warnings = validate(cfg);
  report.timestamp = utc_timestamp();
  const auto start = std::chrono::steady_clock::now();
  Suite suite(cfg);
  try {
    if (cfg.command == "verify-thm1") run_thm1(cfg, suite);
    else if (cfg.command == "verify-thm2") run_thm2(cfg, suite);
    else if (cfg.command == "verify-carleman") run_carleman(cfg, suite);
    else if (cfg.command == "verify-corollary1") run_corollary1(cfg, suite);
    else if (cfg.command == "sweep") run_sweep(cfg, suite, report);
    else if (cfg.command == "search-max") run_search(cfg, suite);
  } catch (const std::exception& e) {
    // Setup failures (reference constants, calibration) abort the suite.
    suite.check(cfg.command + "/setup", "", [&](Record&) { throw std::runtime_error(e.what()); });
  }
  report.records = suite.take();
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace confext::cli
