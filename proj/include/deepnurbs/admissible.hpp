#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "deepnurbs/nurbs.hpp"

namespace dn {

/// Parametric boundary edges of a 2D patch.
enum class Edge { Xi1Min, Xi1Max, Xi2Min, Xi2Max };

/// NURBS scalar field phi = sum N N w phibar / W sharing the geometry's knot
/// vectors and weights. Coefficients on Dirichlet edges are zero, so phi
/// vanishes exactly on those edges.
struct AdmissibleScalarField {
  std::shared_ptr<const ControlNet> geometry;
  std::vector<double> coefficients;  // row-major, same extents as the geometry grid
  std::vector<Edge> dirichlet_edges;
};

/// As AdmissibleScalarField but with d-vector coefficients; boundary
/// rows/columns carry the Dirichlet data values.
struct AdmissibleVectorField {
  std::shared_ptr<const ControlNet> geometry;
  std::vector<double> coefficients;  // grid_size * dim, row-major
  std::vector<Edge> dirichlet_edges;
};

/// Interior fill policy for build_admissible_scalar.
struct InteriorFill {
  enum class Kind { Constant, SeededRandom } kind = Kind::Constant;
  double constant = 1.0;
  std::uint64_t seed = 0;

  static InteriorFill Const(double c) { return {Kind::Constant, c, 0}; }
  static InteriorFill Random(std::uint64_t seed) { return {Kind::SeededRandom, 0.0, seed}; }
};

double eval_phi(const AdmissibleScalarField& field, const Vec3& xi);

Vec3 eval_zeta(const AdmissibleVectorField& field, const Vec3& xi);

/// Physical-space gradient of phi: solves (grad_xi x)^T grad_x phi = grad_xi phi.
/// Throws SingularJacobian when |det| <= kDetEpsilon.
Vec3 grad_phi_physical(const AdmissibleScalarField& field, const Vec3& xi);

/// Value and physical gradient in one evaluation (shared basis work).
struct PhiSample {
  double value = 0.0;
  Vec3 grad{};
};
PhiSample eval_phi_with_grad(const AdmissibleScalarField& field, const Vec3& xi);

/// Zeroes the coefficient row/column of each Dirichlet edge and fills the
/// rest per `fill` (seeded random draws lie in (0,1]). Rejects grids whose
/// coefficients would all be zero.
AdmissibleScalarField build_admissible_scalar(std::shared_ptr<const ControlNet> geometry,
                                              std::vector<Edge> dirichlet_edges,
                                              const InteriorFill& fill);

struct AdmissibilityReport {
  double max_boundary_abs = 0.0;
  bool pass = false;
};

/// Samples |phi| at uniformly spaced parametric points on every Dirichlet
/// edge; passes iff the maximum is below 1e-12.
AdmissibilityReport validate_admissibility(const AdmissibleScalarField& field,
                                           int samples_per_edge);

}  // namespace dn
