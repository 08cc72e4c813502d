#include "deepnurbs/admissible.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "deepnurbs/errors.hpp"

namespace dn {

namespace {

void check_2d(const ControlNet& net) {
  if (net.dim() != 2)
    throw ValidationError("admissible field: only 2D patches are supported");
}

void check_domain(const Vec3& xi) {
  if (!(xi[0] >= 0.0 && xi[0] <= 1.0 && xi[1] >= 0.0 && xi[1] <= 1.0))
    throw std::domain_error("admissible field: xi outside [0,1]^2");
}

// Value and parametric gradient of a rational coefficient field
// sum N N w c / W with one scalar coefficient channel.
struct RationalField {
  double value;
  double d1, d2;  // d/dxi1, d/dxi2
};

RationalField eval_rational(const ControlNet& net, const double* coeff, int stride,
                            const Vec3& xi, bool with_grad) {
  const auto n1 = static_cast<size_t>(net.extent(0));
  const auto n2 = static_cast<size_t>(net.extent(1));
  const std::vector<double> b1 = eval_basis(net.kvs[0], xi[0]);
  const std::vector<double> b2 = eval_basis(net.kvs[1], xi[1]);
  std::vector<double> db1, db2;
  if (with_grad) {
    db1 = eval_basis_derivative(net.kvs[0], xi[0], 1);
    db2 = eval_basis_derivative(net.kvs[1], xi[1], 1);
  }
  double num = 0, w = 0, num1 = 0, num2 = 0, w1 = 0, w2 = 0;
  for (size_t i = 0; i < n1; ++i)
    for (size_t j = 0; j < n2; ++j) {
      const size_t g = i * n2 + j;
      const double wg = net.weights[g];
      const double c = coeff[g * static_cast<size_t>(stride)];
      num += b1[i] * b2[j] * wg * c;
      w += b1[i] * b2[j] * wg;
      if (with_grad) {
        num1 += db1[i] * b2[j] * wg * c;
        num2 += b1[i] * db2[j] * wg * c;
        w1 += db1[i] * b2[j] * wg;
        w2 += b1[i] * db2[j] * wg;
      }
    }
  RationalField out{num / w, 0.0, 0.0};
  if (with_grad) {
    out.d1 = (num1 * w - num * w1) / (w * w);
    out.d2 = (num2 * w - num * w2) / (w * w);
  }
  return out;
}

}  // namespace

double eval_phi(const AdmissibleScalarField& field, const Vec3& xi) {
  check_domain(xi);
  return eval_rational(*field.geometry, field.coefficients.data(), 1, xi, false).value;
}

Vec3 eval_zeta(const AdmissibleVectorField& field, const Vec3& xi) {
  check_domain(xi);
  const int d = field.geometry->dim();
  Vec3 out{};
  for (int a = 0; a < d; ++a)
    out[static_cast<size_t>(a)] =
        eval_rational(*field.geometry, field.coefficients.data() + a, d, xi, false).value;
  return out;
}

PhiSample eval_phi_with_grad(const AdmissibleScalarField& field, const Vec3& xi) {
  check_domain(xi);
  const ControlNet& net = *field.geometry;
  const RationalField rf = eval_rational(net, field.coefficients.data(), 1, xi, true);
  const JacobianSample js = jacobian(net, xi);
  if (std::abs(js.det) <= kDetEpsilon)
    throw SingularJacobian("grad_phi_physical: Jacobian determinant below threshold");
  // Solve J^T grad_x phi = grad_xi phi for the 2x2 case.
  const auto& m = js.matrix;
  PhiSample out;
  out.value = rf.value;
  out.grad[0] = (m[1][1] * rf.d1 - m[1][0] * rf.d2) / js.det;
  out.grad[1] = (-m[0][1] * rf.d1 + m[0][0] * rf.d2) / js.det;
  return out;
}

Vec3 grad_phi_physical(const AdmissibleScalarField& field, const Vec3& xi) {
  return eval_phi_with_grad(field, xi).grad;
}

AdmissibleScalarField build_admissible_scalar(std::shared_ptr<const ControlNet> geometry,
                                              std::vector<Edge> dirichlet_edges,
                                              const InteriorFill& fill) {
  check_2d(*geometry);
  const auto n1 = static_cast<size_t>(geometry->extent(0));
  const auto n2 = static_cast<size_t>(geometry->extent(1));

  std::vector<bool> zeroed(n1 * n2, false);
  for (Edge e : dirichlet_edges)
    for (size_t i = 0; i < n1; ++i)
      for (size_t j = 0; j < n2; ++j) {
        const bool on_edge = (e == Edge::Xi1Min && i == 0) ||
                             (e == Edge::Xi1Max && i == n1 - 1) ||
                             (e == Edge::Xi2Min && j == 0) ||
                             (e == Edge::Xi2Max && j == n2 - 1);
        if (on_edge) zeroed[i * n2 + j] = true;
      }

  bool any_free = false;
  for (bool z : zeroed)
    if (!z) any_free = true;
  if (!any_free)
    throw ValidationError(
        "build_admissible_scalar: grid too small, every coefficient lies on a Dirichlet edge");

  std::mt19937_64 rng(fill.seed);
  AdmissibleScalarField field;
  field.geometry = std::move(geometry);
  field.dirichlet_edges = std::move(dirichlet_edges);
  field.coefficients.assign(n1 * n2, 0.0);
  for (size_t g = 0; g < n1 * n2; ++g) {
    if (zeroed[g]) continue;
    if (fill.kind == InteriorFill::Kind::Constant) {
      field.coefficients[g] = fill.constant;
    } else {
      // (x >> 11) * 2^-53 is uniform in [0,1); reflect into (0,1].
      field.coefficients[g] =
          1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }
  }
  return field;
}

AdmissibilityReport validate_admissibility(const AdmissibleScalarField& field,
                                           int samples_per_edge) {
  if (samples_per_edge < 2)
    throw ValidationError("validate_admissibility: samples_per_edge must be >= 2");
  AdmissibilityReport report;
  for (Edge e : field.dirichlet_edges)
    for (int s = 0; s < samples_per_edge; ++s) {
      const double t = static_cast<double>(s) / static_cast<double>(samples_per_edge - 1);
      Vec3 xi{};
      switch (e) {
        case Edge::Xi1Min: xi = {0.0, t, 0.0}; break;
        case Edge::Xi1Max: xi = {1.0, t, 0.0}; break;
        case Edge::Xi2Min: xi = {t, 0.0, 0.0}; break;
        case Edge::Xi2Max: xi = {t, 1.0, 0.0}; break;
      }
      report.max_boundary_abs =
          std::max(report.max_boundary_abs, std::abs(eval_phi(field, xi)));
    }
  report.pass = report.max_boundary_abs < 1e-12;
  return report;
}

}  // namespace dn
