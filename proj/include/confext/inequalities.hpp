#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "confext/biharmonic.hpp"
#include "confext/field.hpp"
#include "confext/geometry.hpp"
#include "confext/kernels.hpp"
#include "confext/quadrature.hpp"

namespace confext {

enum class Verdict { below, saturates, violates };

std::string_view to_string(Verdict v);

/// numerator / denominator with error bars and, once judged, a verdict against a
/// reference constant.
struct QuotientReport {
  double numerator = 0.0;
  double denominator = 0.0;
  double quotient = 0.0;
  double numerator_error = 0.0;
  double denominator_error = 0.0;
  std::optional<double> reference_constant;
  double reference_error = 0.0;
  Verdict verdict = Verdict::below;

  /// First-order propagation of the two side errors into the quotient.
  double quotient_error() const;
};

/// Throws DomainError for a zero or non-finite denominator.
QuotientReport make_report(double numerator, double numerator_error, double denominator, double denominator_error);

/// saturates: |q/ref - 1| <= max(window, 3 e/ref) with e the combined error;
/// violates: q > ref + 3 e (plus a 1e-12 relative rounding floor); below otherwise.
Verdict judge(QuotientReport& report, double reference, double reference_error = 0.0, double window = 1e-3);

// ---------------------------------------------------------------------------
// Random test data.

/// 1 + amplitude * p on S^{n-1}, p a random polynomial of degree <= `degree` in the
/// ambient coordinates scaled so that |p| <= 1 on the sphere. polynomial_degree is set.
FieldFunction random_sphere_polynomial(int n, int degree, double amplitude, std::mt19937_64& rng);

/// Random harmonic polynomial on B_2: c0 + sum_{k=1}^{degree} (a_k Re z^k + b_k Im z^k),
/// coefficients normal with standard deviation `amplitude`.
FieldFunction random_harmonic_polynomial(int degree, double amplitude, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Theorem 1: ||P~_a f||_{L^{2n/eps}(B)} <= S_{n,a} ||f||_{L^{2(n-1)/eps}(S)}.

/// Evaluates Theorem 1 quotients of sphere data at two resolutions (m and 3m/2),
/// reusing the ball rules and the Funk-Hecke multipliers across functions.
/// Polynomial data is expanded exactly; other data adaptively up to degree 32.
class Theorem1Evaluator {
 public:
  explicit Theorem1Evaluator(KernelParams params, int m = 12);

  QuotientReport quotient(const FieldFunction& ftilde) const;
  const KernelParams& params() const { return params_; }

 private:
  struct Level {
    BallRuleParts parts;
    QuadratureRule sphere;
    std::vector<std::vector<double>> multipliers;  // [radius][degree]
  };
  double ball_norm(const Level& level, const FieldFunction& f, double* expansion_error) const;

  KernelParams params_;
  int max_degree_;
  Level coarse_;
  Level fine_;
};

QuotientReport quotient_thm1(const FieldFunction& ftilde, const KernelParams& params, int m = 12);

/// S_{n,a} as the quotient of the constant function; value and error.
PointValue sharp_constant(const KernelParams& params, int m = 12);

/// Closed form at a = 0: n^{-(n-2)/(2(n-1))} |B_n|^{-(n-2)/(2n(n-1))}.
double sharp_constant_closed_form(int n);

/// |T'|^{eps/2} f o T restricted to the sphere.
FieldFunction conformal_transform(const FieldFunction& ftilde, const MobiusTransform& t, const KernelParams& params);

struct InvarianceCheck {
  double max_deviation = 0.0;
  double tolerance = 0.0;  // combined quadrature error bound at the worst point
  bool holds() const { return max_deviation <= tolerance; }
};

/// max over points eta of |P~_a(|T'|^{eps/2} f o T)(eta) - |T'(eta)|^{eps/2} (P~_a f)(T eta)|,
/// both sides by ball_extension_direct. The tolerance is 3x their error estimates plus 1e-9.
InvarianceCheck conformal_invariance_check(const FieldFunction& ftilde, const MobiusTransform& t,
                                           const KernelParams& params,
                                           std::span<const std::vector<double>> points, int m = 16);

// ---------------------------------------------------------------------------
// The extremal family c (lambda / (lambda^2 + |Y - Y0|^2))^{eps/2} on R^{n-1}.

struct ExtremalCandidate {
  double c = 1.0;
  double lambda = 1.0;
  std::vector<double> Y0;  // empty means the origin
};

/// The candidate as a plane function with decay eps. DomainError unless lambda > 0.
FieldFunction extremal_eval(const ExtremalCandidate& cand, const KernelParams& params);

/// Half-space quotient ||P_a f||_{L^{2n/eps}(R^n_+)} / ||f||_{L^{2(n-1)/eps}(R^{n-1})}.
/// The outer rule is the pulled-back ball rule dilated by `scale` and shifted by
/// `center` (adapt both to the bulk of f); P_a f comes from the U-form at `kernel_m`.
/// Errors combine the outer rule at m and 3m/2 with the pointwise extension errors.
QuotientReport halfspace_quotient(const FieldFunction& f, const KernelParams& params, int m = 6,
                                  double scale = 1.0, std::span<const double> center = {}, int kernel_m = 8);

/// Ratios R(Y) = [int x_n^{1-a} ((X-Y)^2 + x_n^2)^{-(n-a)/2} (P_a f)^{np/(n-1) - 1}] / f(Y)^{p-1}
/// and their coefficient of variation. The integral is taken in polar coordinates about
/// (Y, 0), where the kernel times the volume element reduces to t^{1-a} with t = x_n/rho.
struct ELResidual {
  std::vector<double> ratios;
  double cov = 0.0;
};
ELResidual el_residual(const FieldFunction& f, const KernelParams& params, double p,
                       std::span<const std::vector<double>> sample_points, int m = 8, int kernel_m = 8);

// ---------------------------------------------------------------------------
// Lemma 3: v(x) = |x|^alpha u(x/|x|^2 - e1) is radial about some point.

struct Lemma3Result {
  bool is_radial = false;
  std::vector<double> center;
  double residual = 0.0;  // RMS angular spread of v on rings about the center, relative to its radial change
};

/// u is a radial profile (u(|y|)) in R^n. The center is found by a coarse scan and a
/// Levenberg-Marquardt polish of the ring residuals.
Lemma3Result lemma3_classify(const std::function<double(double)>& u, double alpha, int n = 3,
                             double threshold = 1e-6);

// ---------------------------------------------------------------------------
// Theorem 2 and the limit function I_n.

/// I_n(eta) = log(|X|^2 + (x_n+1/2)^2) - d_{n,2-n} int (1+|U|^2)^{-(n-1)} log(|X + x_n U|^2 + 1/4) dU
/// at (X, x_n) = phi^{-1}(eta). I_n is radial; `profile` evaluates it along the north
/// ray by a one-dimensional integral, `evaluate` uses the full formula at any point.
class LimitFunctionalField {
 public:
  explicit LimitFunctionalField(int n, int m = 16);

  int n() const { return n_; }
  PointValue evaluate(std::span<const double> eta) const;
  double operator()(std::span<const double> eta) const { return evaluate(eta).value; }
  double profile(double r) const;
  /// Ball field through profile(|eta|).
  FieldFunction as_field() const;

 private:
  int n_;
  KernelParams params_;
  std::shared_ptr<const QuadratureRule> coarse_;
  std::shared_ptr<const QuadratureRule> fine_;
};

/// Requires n > 2.
LimitFunctionalField compute_In(int n, int m = 16);

/// I_n(0) = 2 (log 2 - psi(n-1)/2 + psi((n-1)/2)/2), from differentiating P~_a 1 in eps.
double limit_at_origin(int n);

/// The n = 4 kernel form D int (1-|eta|^2)^2/|eta-xi|^4 dxi.
PointValue limit_kernel_form4(std::span<const double> eta, const BiharmonicKernelConstants& consts);

/// Theorem 2 quotients ||e^{I_n + P~_{2-n} F}||_{L^n(B)} / ||e^F||_{L^{n-1}(S)}, two resolutions.
class Theorem2Evaluator {
 public:
  explicit Theorem2Evaluator(int n, int m = 10);

  QuotientReport quotient(const FieldFunction& F) const;
  int n() const { return n_; }

 private:
  struct Level {
    BallRuleParts parts;
    QuadratureRule sphere;
    std::vector<double> limit;                     // I_n at each radius
    std::vector<std::vector<double>> multipliers;  // [radius][degree], a = 2-n
  };
  double ball_integral(const Level& level, const FieldFunction& F, double* expansion_error) const;

  int n_;
  KernelParams params_;
  int max_degree_;
  Level coarse_;
  Level fine_;
};

QuotientReport quotient_thm2(const FieldFunction& F, int n, int m = 10);

/// F = C + log J_T / (n-1) for the boundary Jacobian of T.
FieldFunction jacobian_shift(const MobiusTransform& t, double C);

// ---------------------------------------------------------------------------
// Classical inequalities.

/// Carleman: int_{B_2} e^{2u} <= (1/4pi) (int_{S^1} e^u)^2. numerator = int e^{2u},
/// denominator = (int e^u)^2, reference 1/(4 pi). The input is certified harmonic
/// (or subharmonic when `subharmonic`) by a Richardson-extrapolated five-point
/// Laplacian at interior samples; Inadmissible otherwise.
QuotientReport carleman_check(const FieldFunction& u, bool subharmonic = false, int m = 16);

/// Corollary 1 on B_4: (int e^{4u})^{1/4} vs S (int_{S^3} e^{3u})^{1/3}. `neumann` holds
/// -du/dgamma on the sphere. Admissibility: FD bilaplacian <= 1e-8 at interior samples and
/// neumann <= 1 + 1e-8 at the sphere nodes; Inadmissible otherwise. Judged against `reference`.
QuotientReport corollary1_check(const FieldFunction& u, const FieldFunction& neumann, double reference,
                                double reference_error = 0.0, int m = 10);

/// The constant of Corollary 1 from its extremal u* = I_4; value and error.
PointValue corollary1_constant(int m = 10);

struct DominationCheck {
  double A = 0.0;     // lower bound for P~_a 1
  double B = 0.0;     // d_{n,2-n} / d_{n,0}
  double min_value = 0.0;  // min of P~_a 1 over the samples
  double max_power = 0.0;  // max of (P~_a 1)^{(n-2)/eps}
  bool holds(double tolerance = 1e-6) const { return min_value >= A && max_power <= B + tolerance; }
};

/// Bounds on P~_a 1 used to control the eps -> 0 limit, at the given ball points.
/// Requires 0 < eps <= 0.5.
DominationCheck domination_bounds_check(const KernelParams& params, std::span<const std::vector<double>> points);

// ---------------------------------------------------------------------------
// Maximizer search for n = 2.
//
// The search runs over ftilde on S^1 that are constant on N equal arcs; through
// the boundary trace of phi these are the functions f(Y) = (1/4 + Y^2)^{-eps/2} ftilde
// on R, constant in ftilde on the cells [tan(w_j/2)/2, tan(w_{j+1}/2)/2]. The quotient
// is the same on both sides, and the constant ftilde is the lambda = 1/2 candidate.

struct MaximizerOptions {
  int cells = 32;
  std::uint64_t seed = 1;
  int max_steps = 600;
  int rearrange_every = 10;
  bool start_from_extremal = false;
};

struct MaximizerResult {
  std::vector<double> edges;   // cells + 1 arc edges w_j in [-pi, pi], angle from the north pole
  std::vector<double> values;  // ftilde per arc, ||ftilde||_{L^p(S^1)} = 1
  double quotient = 0.0;
  std::vector<double> trace;   // quotient after every accepted step
  ExtremalCandidate fit;
  double fit_residual = 0.0;   // ||ftilde - fit||_p / ||ftilde||_p over the arcs
  int steps = 0;
  int rearrangements = 0;
};

/// Projected gradient ascent of the discretized quotient over nonnegative arc values,
/// with step halving on rejection and a rearrangement every `rearrange_every` steps
/// (kept only when it does not lower the quotient). The ball integral uses exact-in-
/// rotation arc kernel tables and a rule graded toward the arc edges. The ascent loop
/// is single threaded and deterministic given seed and cells. NonConvergent if an
/// accepted step lowers the quotient by more than 1e-10.
MaximizerResult maximizer_search(const KernelParams& params, const MaximizerOptions& options);

}  // namespace confext
