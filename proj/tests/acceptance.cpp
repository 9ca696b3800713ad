// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
// Usage: confext_acceptance <path to the confext binary> [criterion number]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "confext/biharmonic.hpp"
#include "confext/cli.hpp"
#include "confext/inequalities.hpp"
#include "confext/rearrangement.hpp"
#include "confext/special.hpp"

using namespace confext;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::vector<double> random_in_ball(int n, double radius, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u;
  std::vector<double> x(n);
  double s = 0.0;
  for (double& v : x) {
    v = g(rng);
    s += v * v;
  }
  const double r = radius * std::pow(u(rng), 1.0 / n) / std::sqrt(s);
  for (double& v : x) v *= r;
  return x;
}

// Runs a CLI command in process; pass means every record passed.
Outcome suite(const std::string& command, std::optional<int> n, std::optional<double> a, int samples = -1) {
  cli::RunConfig cfg;
  cfg.command = command;
  cfg.n = n;
  cfg.a = a;
  cfg.samples = samples;
  const cli::Report r = cli::run(cfg);
  std::ostringstream s;
  s << command << (n ? " n=" + std::to_string(*n) : "") << ": " << r.passed() << "/" << r.records.size();
  for (const auto& rec : r.records)
    if (rec.status != cli::Status::pass) s << " [" << rec.name << " " << rec.verdict << "]";
  return {r.exit_code() == 0 && r.passed() == static_cast<int>(r.records.size()), s.str()};
}

Outcome join(std::initializer_list<Outcome> parts) {
  Outcome o{true, ""};
  for (const auto& p : parts) {
    o.pass = o.pass && p.pass;
    o.detail += (o.detail.empty() ? "" : "; ") + p.detail;
  }
  return o;
}

Outcome normalization_one() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0), h(0.01, 3.0);
  double worst = 0.0, slowest = 0.0;
  for (auto [n, a] : {std::pair{3, 0.0}, std::pair{3, 0.5}, std::pair{4, -2.0}, std::pair{5, -1.0}}) {
    const auto start = std::chrono::steady_clock::now();
    const HalfspaceExtension ext(constant_field(Domain::plane, n, 1.0), KernelParams(n, a), 12);
    for (int k = 0; k < 100; ++k) {
      std::vector<double> X(n - 1);
      for (double& x : X) x = u(rng);
      worst = std::max(worst, std::abs(ext(X, h(rng)) - 1.0));
    }
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return {worst < 1e-6 && slowest < 60.0, "max |P_a 1 - 1| = " + fmt("%.2e", worst) + ", slowest " + fmt("%.2f s", slowest)};
}

Outcome classical_normalization() {
  const double targets[] = {1.0 / std::numbers::pi, 0.5 / std::numbers::pi};
  double worst = 0.0;
  for (int n : {2, 3}) {
    worst = std::max(worst, std::abs(normalization_radial(n, 0.0) - targets[n - 2]));
    worst = std::max(worst, std::abs(normalization_closed_form(n, 0.0) - targets[n - 2]));
  }
  return {worst < 1e-8, "max deviation " + fmt("%.2e", worst)};
}

Outcome closed_form_constant() {
  double worst = 0.0;
  for (int n : {3, 4}) {
    const PointValue S = sharp_constant(KernelParams(n, 0.0));
    worst = std::max(worst, std::abs(S.value - sharp_constant_closed_form(n)));
  }
  const double n3 = std::pow(3.0, -0.25) * std::pow(4.0 * std::numbers::pi / 3.0, -1.0 / 12.0);
  worst = std::max(worst, std::abs(sharp_constant_closed_form(3) - n3));
  return {worst < 1e-4, "max deviation " + fmt("%.2e", worst)};
}

Outcome biharmonic() {
  const BiharmonicKernelConstants c = calibrate_biharmonic_constants();
  FieldFunction zero = constant_field(Domain::sphere, 4, 0.0);
  FieldFunction two = constant_field(Domain::sphere, 4, 2.0);
  FieldFunction two_x1;
  two_x1.domain = Domain::sphere;
  two_x1.n = 4;
  two_x1.eval = [](std::span<const double> xi) { return 2.0 * xi[0]; };
  std::mt19937_64 rng(9);
  double worst = 0.0;
  for (int k = 0; k < 12; ++k) {
    const auto eta = random_in_ball(4, 0.9, rng);
    double r2 = 0.0;
    for (double x : eta) r2 += x * x;
    worst = std::max(worst, std::abs(biharmonic_represent(zero, two, c, eta).value - (1.0 - r2)));
    worst = std::max(worst, std::abs(biharmonic_represent(zero, two_x1, c, eta).value - eta[0] * (1.0 - r2)));
  }
  return {worst < 1e-4, "C = " + fmt("%.10f", c.C) + ", D = " + fmt("%.10f", c.D) + ", max error " + fmt("%.2e", worst)};
}

Outcome rearrangement() {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> len(1, 64), shift(-20, 20);
  std::exponential_distribution<double> val(1.0);
  std::bernoulli_distribution hole(0.25);
  std::uniform_real_distribution<double> height(0.05, 3.0), av(0.05, 0.95);
  int violations = 0, unequal = 0;
  const auto start = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(len(rng));
    for (double& x : v) x = hole(rng) ? 0.0 : val(rng);
    const DiscretizedFunction f = DiscretizedFunction::on_interval(shift(rng), v, 0.25);
    const DiscretizedFunction g = rearrange(f);
    for (double t : {0.0, 0.3, 1.0, 2.5})
      if (level_set_measure(f, t) != level_set_measure(g, t)) ++unequal;
    const KernelParams params(2, av(rng));
    if (!riesz_convolution_check(f, height(rng), params, 4.0 / params.eps()).holds()) ++violations;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {violations == 0 && unequal == 0 && secs < 60.0,
          std::to_string(violations) + " violations, " + std::to_string(unequal) + " level-set mismatches, " +
              fmt("%.1f s", secs)};
}

double order(double coarse, double fine) { return std::log2(std::abs(coarse) / std::abs(fine)); }

Outcome pde_residuals() {
  double worst = INFINITY;
  std::ostringstream s;
  FieldFunction f;
  f.domain = Domain::plane;
  f.n = 3;
  f.decay = 2.0;
  f.eval = [](std::span<const double> y) { return 1.0 / (1.0 + y[0] * y[0] + 0.5 * y[1] * y[1]); };
  const std::vector<double> z = {0.3, -0.2, 0.9};
  for (double a : {-0.5, 0.0, 0.5}) {
    const HalfspaceExtension ext(f, KernelParams(3, a), 32);
    const auto u = [&ext](std::span<const double> x) { return ext(x.first(2), x[2]); };
    const double o = order(cs_residual(u, a, z, 0.2), cs_residual(u, a, z, 0.1));
    worst = std::min(worst, o);
    s << "a=" << a << " order " << fmt("%.2f", o) << ", ";
  }
  const KernelParams p(4, -2.0);
  FieldFunction g;
  g.domain = Domain::sphere;
  g.n = 4;
  // Degree 6 data: below that the extension is a polynomial of degree <= 5, which the
  // iterated stencil differentiates exactly and leaves only rounding.
  g.polynomial_degree = 6;
  g.eval = [](std::span<const double> x) {
    return 1.0 + x[0] * x[1] * x[2] - 0.5 * std::pow(x[3], 6) + 0.3 * std::pow(x[0], 4) * x[1] * x[1];
  };
  const SpectralExtension ext(p, g, 6);
  const auto u = [&ext](std::span<const double> x) { return ext(x); };
  const std::vector<double> x = {0.1, 0.2, -0.1, 0.15};
  const double r1 = polyharmonic_residual(u, 2, x, 0.1), r2 = polyharmonic_residual(u, 2, x, 0.05);
  const double o = order(r1, r2);
  worst = std::min(worst, o);
  s << "bilaplacian " << fmt("%.2e", r1) << " -> " << fmt("%.2e", r2) << " order " << fmt("%.2f", o);
  return {worst >= 1.8, s.str()};
}

Outcome domination() {
  std::mt19937_64 rng(41);
  std::vector<std::vector<double>> pts;
  for (int k = 0; k < 100; ++k) pts.push_back(random_in_ball(4, 0.999, rng));
  bool ok = true;
  std::ostringstream s;
  for (double eps : {0.1, 0.25, 0.5}) {
    const DominationCheck d = domination_bounds_check(KernelParams(4, eps - 2.0), pts);
    ok = ok && d.holds();
    s << "eps=" << eps << " min " << fmt("%.4f", d.min_value) << ">=" << fmt("%.4f", d.A) << " max "
      << fmt("%.4f", d.max_power) << "<=" << fmt("%.4f", d.B) << "; ";
  }
  return {ok, s.str()};
}

std::string strip_timing(const std::string& path) {
  std::ifstream in(path);
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(in);
  j.erase("timing");
  return j.dump();
}

Outcome determinism(const std::string& binary) {
  if (binary.empty()) return {false, "no CLI binary given"};
  bool ok = true;
  std::string detail;
  for (const std::string args : {"verify-carleman --seed 7", "verify-thm1 --n 2 --a 0.5 --samples 30 --seed 3",
                                 "sweep --n 3 --a-min -0.5 --a-max 0.5 --a-step 0.5"}) {
    std::string runs[2];
    for (int k = 0; k < 2; ++k) {
      const std::string out = "acceptance_determinism_" + std::to_string(k) + ".json";
      const std::string cmd = binary + " " + args + " --out " + out + " 2>/dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "run failed: " + args};
      runs[k] = strip_timing(out);
      std::remove(out.c_str());
    }
    ok = ok && runs[0] == runs[1];
    detail += (detail.empty() ? "" : ", ") + args.substr(0, args.find(' ')) + (runs[0] == runs[1] ? " identical" : " DIFFERS");
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string binary = argc > 1 ? argv[1] : "";
  const std::size_t only = argc > 2 ? std::stoul(argv[2]) : 0;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"normalization P_a 1 = 1", normalization_one},
      {"classical constants d_{2,0}, d_{3,0}", classical_normalization},
      {"sharp constant closed form", closed_form_constant},
      {"Theorem 1 property suite",
       [] {
         return join({suite("verify-thm1", 3, 0.0), suite("verify-thm1", 3, 0.5), suite("verify-thm1", 2, 0.5)});
       }},
      {"Carleman", [] { return suite("verify-carleman", 2, std::nullopt, 50); }},
      {"Theorem 2", [] { return join({suite("verify-thm2", 3, std::nullopt), suite("verify-thm2", 4, std::nullopt)}); }},
      {"Corollary 1", [] { return suite("verify-corollary1", 4, std::nullopt); }},
      {"biharmonic representation", biharmonic},
      {"rearrangement", rearrangement},
      {"PDE residual orders", pde_residuals},
      {"domination bounds", domination},
      {"determinism", [&binary] { return determinism(binary); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && only != i + 1) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
