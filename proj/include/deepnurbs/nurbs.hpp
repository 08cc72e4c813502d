#pragma once

#include <array>
#include <vector>

#include "deepnurbs/knots.hpp"

namespace dn {

/// Parametric / physical point, first dim() components meaningful.
using Vec3 = std::array<double, 3>;

/// Tensor-product NURBS patch: per-direction knot vectors, a row-major grid
/// of control points with strictly positive rational weights. Physical
/// dimension equals parametric dimension.
struct ControlNet {
  std::vector<KnotVector> kvs;   // size = parametric dimension, 1..3
  int point_dim = 0;             // physical dimension, >= dim() (0 = same as dim)
  std::vector<double> points;    // grid_size() * physical_dim(), row-major, last index fastest
  std::vector<double> weights;   // grid_size()

  int dim() const { return static_cast<int>(kvs.size()); }
  int physical_dim() const { return point_dim > 0 ? point_dim : dim(); }
  int extent(int direction) const { return kvs[static_cast<size_t>(direction)].num_basis(); }
  int grid_size() const {
    int s = 1;
    for (const auto& kv : kvs) s *= kv.num_basis();
    return s;
  }
  // Flattened index of grid entry (i, j, k); trailing indices ignored below dim().
  int flat(int i, int j = 0, int k = 0) const;
};

/// Throws ValidationError on mismatched extents or non-positive weights.
void validate_control_net(const ControlNet& net);

struct JacobianSample {
  std::array<std::array<double, 3>, 3> matrix{};  // matrix[a][b] = d x_a / d xi_b
  double det = 0.0;
};

/// Geometry map x = chi(xi) = sum N w p / sum N w. Domain error outside [0,1]^d.
Vec3 eval_geometry(const ControlNet& net, const Vec3& xi);

/// Rational weight function W(xi) = sum N w.
double eval_weight(const ControlNet& net, const Vec3& xi);

/// Jacobian of the geometry map at xi, with its determinant. A zero
/// determinant is legal output (degenerate control points).
JacobianSample jacobian(const ControlNet& net, const Vec3& xi);

}  // namespace dn
