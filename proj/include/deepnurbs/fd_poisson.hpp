#pragma once

#include <vector>

namespace dn {

/// Five-point finite-difference solution of -Lap u = 1 on the slit square
/// (-1,1)^2 \ [0,1)x{0} with homogeneous Dirichlet data; the slit nodes are
/// grid nodes pinned to zero.
struct FdSolution {
  double h = 0.0;
  int n = 0;                // nodes per direction = n + 1, x = -1 + i h
  std::vector<double> u;    // (n+1)^2 values, row-major in y then x
  double residual = 0.0;    // max-norm residual of the discrete system

  double at(int ix, int iy) const { return u[static_cast<size_t>(iy * (n + 1) + ix)]; }
  /// Bilinear interpolation at a physical point inside [-1,1]^2.
  double interpolate(double x, double y) const;
};

/// h must divide 2 into an even number of cells so slit nodes align with
/// the grid. Throws on a residual above 1e-10.
FdSolution fd_poisson_oracle(double h);

}  // namespace dn
