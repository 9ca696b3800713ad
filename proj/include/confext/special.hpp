#pragma once

#include <span>
#include <vector>

namespace confext {

/// Surface measure of the unit sphere S^k in R^{k+1}; |S^0| = 2.
double sphere_area(int k);

/// Volume of the unit ball B_n in R^n.
double ball_volume(int n);

/// Dimension of the space of degree-l spherical harmonics on S^{n-1}.
double harmonic_dimension(int n, int l);

/// Legendre-type polynomials of S^{n-1}, normalized to P_l(1) = 1, for l = 0..out.size()-1.
/// n = 2 gives Chebyshev T_l; n >= 3 gives C_l^{(n-2)/2}(t) / C_l^{(n-2)/2}(1).
void zonal_legendre(int n, double t, std::span<double> out);

/// Reproducing-kernel coefficients dim(H_l)/|S^{n-1}|, so the projection of f onto
/// degree l is  f_l(w) = sum_l-coeff * integral f(xi) P_l(w . xi) dxi.
std::vector<double> zonal_coefficients(int n, int max_degree);

}  // namespace confext
