#include "deepnurbs/fd_poisson.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <string>

#include "deepnurbs/errors.hpp"

namespace dn {

double FdSolution::interpolate(double x, double y) const {
  const double gx = (x + 1.0) / h;
  const double gy = (y + 1.0) / h;
  int ix = static_cast<int>(std::floor(gx));
  int iy = static_cast<int>(std::floor(gy));
  ix = std::max(0, std::min(n - 1, ix));
  iy = std::max(0, std::min(n - 1, iy));
  const double tx = gx - ix;
  const double ty = gy - iy;
  return (1 - tx) * (1 - ty) * at(ix, iy) + tx * (1 - ty) * at(ix + 1, iy) +
         (1 - tx) * ty * at(ix, iy + 1) + tx * ty * at(ix + 1, iy + 1);
}

FdSolution fd_poisson_oracle(double h) {
  const double cells = 2.0 / h;
  const int n = static_cast<int>(std::lround(cells));
  if (std::abs(cells - n) > 1e-12 || n % 2 != 0)
    throw ValidationError("fd_poisson_oracle: h must divide 2 into an even cell count");
  const int nodes = n + 1;
  const int mid = n / 2;

  // Dirichlet mask: outer boundary plus the slit nodes y = 0, 0 <= x < 1.
  auto is_dirichlet = [&](int ix, int iy) {
    if (ix == 0 || iy == 0 || ix == n || iy == n) return true;
    return iy == mid && ix >= mid && ix < n;
  };

  std::vector<int> unknown_index(static_cast<size_t>(nodes * nodes), -1);
  int num_unknowns = 0;
  for (int iy = 0; iy < nodes; ++iy)
    for (int ix = 0; ix < nodes; ++ix)
      if (!is_dirichlet(ix, iy))
        unknown_index[static_cast<size_t>(iy * nodes + ix)] = num_unknowns++;

  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<size_t>(num_unknowns) * 5);
  Eigen::VectorXd rhs(num_unknowns);
  const double inv_h2 = 1.0 / (h * h);
  for (int iy = 0; iy < nodes; ++iy)
    for (int ix = 0; ix < nodes; ++ix) {
      const int row = unknown_index[static_cast<size_t>(iy * nodes + ix)];
      if (row < 0) continue;
      triplets.emplace_back(row, row, 4.0 * inv_h2);
      rhs[row] = 1.0;
      const int nbr[4][2] = {{ix - 1, iy}, {ix + 1, iy}, {ix, iy - 1}, {ix, iy + 1}};
      for (const auto& nb : nbr) {
        const int col = unknown_index[static_cast<size_t>(nb[1] * nodes + nb[0])];
        if (col >= 0) triplets.emplace_back(row, col, -inv_h2);
        // Dirichlet neighbours contribute 0 to the right-hand side.
      }
    }

  Eigen::SparseMatrix<double> A(num_unknowns, num_unknowns);
  A.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  const Eigen::VectorXd sol = solver.solve(rhs);
  const double residual = (A * sol - rhs).cwiseAbs().maxCoeff() * h * h;
  if (!(residual < 1e-10))
    throw std::runtime_error("fd_poisson_oracle: linear solve residual " +
                             std::to_string(residual));

  FdSolution out;
  out.h = h;
  out.n = n;
  out.residual = residual;
  out.u.assign(static_cast<size_t>(nodes * nodes), 0.0);
  for (int iy = 0; iy < nodes; ++iy)
    for (int ix = 0; ix < nodes; ++ix) {
      const int k = unknown_index[static_cast<size_t>(iy * nodes + ix)];
      if (k >= 0) out.u[static_cast<size_t>(iy * nodes + ix)] = sol[k];
    }
  return out;
}

}  // namespace dn
