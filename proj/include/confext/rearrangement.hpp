#pragma once

#include <array>
#include <vector>

#include "confext/gauss.hpp"
#include "confext/kernels.hpp"

namespace confext {

/// Nonnegative step function on the lattice h Z^dim (dim = 1 or 2). Cell k is the cube
/// of side h centered at h * cells[k]; every cell has measure h^dim.
struct DiscretizedFunction {
  int dim = 1;
  double h = 1.0;
  std::vector<std::array<int, 2>> cells;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double cell_measure() const;
  std::array<double, 2> center(std::size_t k) const;

  /// Cells first, first+1, ... on the line.
  static DiscretizedFunction on_interval(int first, std::vector<double> values, double h = 1.0);
  /// nx * ny cells starting at (x0, y0), values row-major in x.
  static DiscretizedFunction on_grid(int x0, int y0, int nx, int ny, std::vector<double> values, double h = 1.0);
};

/// Lattice cells ordered by distance of their centers to the origin, ties broken by
/// coordinates (in 1-D: 0, -1, 1, -2, 2, ...). The first `count` of them.
std::vector<std::array<int, 2>> centered_cells(int dim, std::size_t count);

/// Symmetric decreasing rearrangement: values sorted decreasingly (ties by cell index)
/// and placed on centered_cells. Equimeasurable exactly. DomainError on negative or
/// non-finite values.
DiscretizedFunction rearrange(const DiscretizedFunction& f);

/// Measure of {f > t}.
double level_set_measure(const DiscretizedFunction& f, double t);

double lp_norm(const DiscretizedFunction& f, double p);

struct RieszCheck {
  double lhs = 0.0;         // ||P_{a,x_n} * f||_p over the output window
  double rhs = 0.0;         // ||P_{a,x_n} * f*||_p over the output window
  double tail_bound = 0.0;  // bound on the p-norm of either convolution outside its window
  bool holds() const;       // lhs <= rhs + tail_bound + 1e-12 rhs
};

/// Discrete convolution with the cell-integrated kernel P_{a,x_n}(Y) = d x_n^{1-a}/(|Y|^2+x_n^2)^{(n-a)/2},
/// n = dim + 1. The output window is the bounding box of the support widened by `margin`
/// cells (0 picks 64 N in 1-D, 64 in 2-D). Rejects more than 64^dim cells.
RieszCheck riesz_convolution_check(const DiscretizedFunction& f, double xn, const KernelParams& params, double p,
                                   int margin = 0);

/// The same comparison integrated over heights: (sum_k w_k ||P_{a,x_k} * f||_p^p)^{1/p}.
RieszCheck riesz_halfspace_check(const DiscretizedFunction& f, const KernelParams& params, double p,
                                 const Rule1D& heights, int margin = 0);

}  // namespace confext
