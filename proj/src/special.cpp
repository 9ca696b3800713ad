#include "confext/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace confext {

double sphere_area(int k) {
  if (k < 0) throw std::invalid_argument("sphere_area: negative dimension");
  const double h = 0.5 * (k + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double ball_volume(int n) {
  if (n < 1) throw std::invalid_argument("ball_volume: dimension must be positive");
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double harmonic_dimension(int n, int l) {
  if (n == 2) return l == 0 ? 1.0 : 2.0;
  // C(l+n-1, n-1) - C(l+n-3, n-1)
  auto binom = [](int top, int k) {
    if (top < k || top < 0) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (top - k + i) / i;
    return r;
  };
  return binom(l + n - 1, n - 1) - binom(l + n - 3, n - 1);
}

void zonal_legendre(int n, double t, std::span<double> out) {
  const std::size_t count = out.size();
  if (count == 0) return;
  out[0] = 1.0;
  if (count == 1) return;
  if (n == 2) {
    out[1] = t;
    for (std::size_t l = 1; l + 1 < count; ++l) out[l + 1] = 2.0 * t * out[l] - out[l - 1];
    return;
  }
  // Normalized Gegenbauer recurrence: with P_l = C_l / C_l(1),
  // (l + 2nu) P_{l+1} = (2l + 2nu) t P_l - l P_{l-1}.
  const double two_nu = n - 2.0;
  out[1] = t;
  for (std::size_t l = 1; l + 1 < count; ++l) {
    const double ld = static_cast<double>(l);
    out[l + 1] = ((2.0 * ld + two_nu) * t * out[l] - ld * out[l - 1]) / (ld + two_nu);
  }
}

std::vector<double> zonal_coefficients(int n, int max_degree) {
  std::vector<double> c(max_degree + 1);
  const double area = sphere_area(n - 1);
  for (int l = 0; l <= max_degree; ++l) c[l] = harmonic_dimension(n, l) / area;
  return c;
}

}  // namespace confext
