#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "deepnurbs/admissible.hpp"
#include "deepnurbs/fd_poisson.hpp"
#include "deepnurbs/nurbs.hpp"

namespace dn {

using ScalarField2 = std::function<double(double, double)>;

enum class ReferenceKind { Manufactured, FdOracle, None };

/// One Poisson benchmark: geometry patch, admissible field, source term,
/// and a reference solution (closed form or finite-difference grid).
struct ProblemSpec {
  std::string name;
  std::shared_ptr<const ControlNet> geometry;
  AdmissibleScalarField phi;
  std::vector<Edge> dirichlet_edges;
  ScalarField2 source;
  ReferenceKind reference_kind = ReferenceKind::None;
  ScalarField2 exact;                    // manufactured u* or FD interpolant
  std::shared_ptr<FdSolution> fd;        // set for FdOracle references
};

/// Checked manufactured pair: given u* and its hand-derived Laplacian,
/// returns (u*, f = -Lap u*) after verifying the closed forms against a
/// second-difference numerical Laplacian at random interior points.
struct ManufacturedPair {
  ScalarField2 u_star;
  ScalarField2 f;
};
ManufacturedPair manufactured_pair(const ScalarField2& u_star, const ScalarField2& laplacian,
                                   const std::function<Vec3(const Vec3&)>& sample_point,
                                   int checks = 100);

/// Identity unit square, u* = sin(pi x) sin(pi y) (smoke-test problem).
ProblemSpec unit_square_problem();

/// (-1,1)^2 minus the slit [0,1)x{0}; f = 1; reference from the
/// finite-difference oracle at h = 1/128.
ProblemSpec slit_square_problem();

/// Quarter annulus r in [0.2, 2], exact circles via rational quadratics;
/// manufactured reference.
ProblemSpec annulus_problem();

/// [-4,4]^2 minus the closed unit disk, hole circle exact; manufactured
/// reference.
ProblemSpec square_with_hole_problem();

/// Lookup by CLI name: unit_square, slit_square, quarter_annulus,
/// square_with_hole. Throws ValidationError for unknown names.
ProblemSpec problem_by_name(const std::string& name);

/// Uniformly spaced parametric points on a Dirichlet edge (used for hard
/// boundary checks and Deep Ritz boundary sampling).
Vec3 edge_point(Edge e, double t);

}  // namespace dn
