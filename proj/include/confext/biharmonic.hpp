#pragma once

#include <span>

#include "confext/field.hpp"
#include "confext/kernels.hpp"

namespace confext {

/// Constants of the representation of biharmonic functions on B_4:
///   u(eta) = C int (1-|eta|^2)^3/|eta-xi|^6 g dxi + D int (1-|eta|^2)^2/|eta-xi|^4 (-dg/dgamma) dxi.
struct BiharmonicKernelConstants {
  double C = 0.0;
  double D = 0.0;
};

/// Sphere integrals of the two kernels against data, at eta in B_4 (resolution doubled
/// beyond |eta| = 0.6 and doubled again beyond 0.85).
PointValue dirichlet_kernel_integral(const FieldFunction& g, std::span<const double> eta, int m = 16);
PointValue neumann_kernel_integral(const FieldFunction& h, std::span<const double> eta, int m = 16);

/// C from the normalization C int (1-|eta|^2)^3/|eta-xi|^6 = 1 and D from the oracle
/// g = 1-|eta|^2 (zero boundary value, -dg/dgamma = 2), each at eta in {0, 0.3 e1, 0.7 e1}.
/// Throws NonConvergent when C disagrees by more than 1e-8 or D by more than 1e-6.
BiharmonicKernelConstants calibrate_biharmonic_constants();

/// The representation formula at an interior eta. `neumann` holds -dg/dgamma.
PointValue biharmonic_represent(const FieldFunction& g_boundary, const FieldFunction& neumann,
                                const BiharmonicKernelConstants& consts, std::span<const double> eta,
                                int m = 16);

}  // namespace confext
