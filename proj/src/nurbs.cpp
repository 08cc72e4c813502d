#include "deepnurbs/nurbs.hpp"

#include <cmath>
#include <stdexcept>

#include "deepnurbs/errors.hpp"

namespace dn {

int ControlNet::flat(int i, int j, int k) const {
  const int d = dim();
  if (d == 1) return i;
  if (d == 2) return i * extent(1) + j;
  return (i * extent(1) + j) * extent(2) + k;
}

void validate_control_net(const ControlNet& net) {
  const int d = net.dim();
  if (d < 1 || d > 3) throw ValidationError("control net: dimension must be 1, 2, or 3");
  for (const auto& kv : net.kvs) validate_knot_vector(kv);
  const int n = net.grid_size();
  if (static_cast<int>(net.weights.size()) != n)
    throw ValidationError("control net: weight grid extent mismatch");
  const int pd = net.physical_dim();
  if (pd < d || pd > 3) throw ValidationError("control net: physical dimension must be in [dim, 3]");
  if (static_cast<int>(net.points.size()) != n * pd)
    throw ValidationError("control net: point grid extent mismatch");
  for (double w : net.weights)
    if (!(w > 0.0)) throw ValidationError("control net: weights must be strictly positive");
}

namespace {

void check_domain(const ControlNet& net, const Vec3& xi) {
  for (int j = 0; j < net.dim(); ++j)
    if (!(xi[static_cast<size_t>(j)] >= 0.0 && xi[static_cast<size_t>(j)] <= 1.0))
      throw std::domain_error("geometry evaluation: xi outside [0,1]^d");
}

struct TensorEval {
  // Per-direction basis values and first derivatives at xi.
  std::array<std::vector<double>, 3> basis;
  std::array<std::vector<double>, 3> deriv;

  TensorEval(const ControlNet& net, const Vec3& xi, bool with_deriv) {
    for (int j = 0; j < net.dim(); ++j) {
      const auto ju = static_cast<size_t>(j);
      basis[ju] = eval_basis(net.kvs[ju], xi[ju]);
      if (with_deriv) deriv[ju] = eval_basis_derivative(net.kvs[ju], xi[ju], 1);
    }
  }

  // Tensor basis product with direction `d_dir` replaced by its derivative
  // row (d_dir = -1 for the plain product).
  double factor(const ControlNet& net, int i, int j, int k, int d_dir) const {
    const int idx[3] = {i, j, k};
    double f = 1.0;
    for (int dir = 0; dir < net.dim(); ++dir) {
      const auto& row = dir == d_dir ? deriv[static_cast<size_t>(dir)]
                                     : basis[static_cast<size_t>(dir)];
      f *= row[static_cast<size_t>(idx[dir])];
    }
    return f;
  }
};

// Accumulates numerator A = sum NNw p (and its parametric derivatives) and
// the weight W = sum NNw (and derivatives).
struct RationalParts {
  Vec3 num{};
  double w = 0.0;
  std::array<Vec3, 3> num_d{};
  Vec3 w_d{};
};

RationalParts accumulate(const ControlNet& net, const Vec3& xi, bool with_deriv) {
  TensorEval te(net, xi, with_deriv);
  const int d = net.dim();
  const int pd = net.physical_dim();
  const int e0 = net.extent(0);
  const int e1 = d > 1 ? net.extent(1) : 1;
  const int e2 = d > 2 ? net.extent(2) : 1;
  RationalParts out;
  for (int i = 0; i < e0; ++i)
    for (int j = 0; j < e1; ++j)
      for (int k = 0; k < e2; ++k) {
        const int g = net.flat(i, j, k);
        const double w = net.weights[static_cast<size_t>(g)];
        const double base = te.factor(net, i, j, k, -1) * w;
        out.w += base;
        for (int a = 0; a < pd; ++a)
          out.num[static_cast<size_t>(a)] +=
              base * net.points[static_cast<size_t>(g * pd + a)];
        if (with_deriv)
          for (int b = 0; b < d; ++b) {
            const double dbase = te.factor(net, i, j, k, b) * w;
            out.w_d[static_cast<size_t>(b)] += dbase;
            for (int a = 0; a < pd; ++a)
              out.num_d[static_cast<size_t>(b)][static_cast<size_t>(a)] +=
                  dbase * net.points[static_cast<size_t>(g * pd + a)];
          }
      }
  return out;
}

}  // namespace

Vec3 eval_geometry(const ControlNet& net, const Vec3& xi) {
  check_domain(net, xi);
  const RationalParts p = accumulate(net, xi, false);
  Vec3 x{};
  for (int a = 0; a < net.physical_dim(); ++a)
    x[static_cast<size_t>(a)] = p.num[static_cast<size_t>(a)] / p.w;
  return x;
}

double eval_weight(const ControlNet& net, const Vec3& xi) {
  check_domain(net, xi);
  return accumulate(net, xi, false).w;
}

JacobianSample jacobian(const ControlNet& net, const Vec3& xi) {
  check_domain(net, xi);
  if (net.physical_dim() != net.dim())
    throw ValidationError("jacobian: requires matching parametric and physical dimensions");
  const RationalParts p = accumulate(net, xi, true);
  const int d = net.dim();
  JacobianSample js;
  // Quotient rule on x = A / W, per parametric direction b.
  for (int b = 0; b < d; ++b)
    for (int a = 0; a < d; ++a) {
      const auto au = static_cast<size_t>(a);
      const auto bu = static_cast<size_t>(b);
      js.matrix[au][bu] =
          (p.num_d[bu][au] * p.w - p.num[au] * p.w_d[bu]) / (p.w * p.w);
    }
  const auto& m = js.matrix;
  if (d == 1) {
    js.det = m[0][0];
  } else if (d == 2) {
    js.det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  } else {
    js.det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }
  return js;
}

}  // namespace dn
