#pragma once

#include <vector>

namespace dn {

/// Open (clamped) knot vector: endpoint multiplicity degree+1, entries
/// non-decreasing in [0,1]. Number of basis functions is
/// knots.size() - degree - 1.
struct KnotVector {
  int degree = 0;
  std::vector<double> knots;

  int num_basis() const { return static_cast<int>(knots.size()) - degree - 1; }
};

/// Clamped knot vector with uniformly spaced interior knots.
/// Requires num_basis >= degree + 1.
KnotVector make_open_knot_vector(int degree, int num_basis);

/// Throws ValidationError if the vector is not a valid open knot vector.
void validate_knot_vector(const KnotVector& kv);

/// All num_basis B-spline values N_{i,p}(xi) by the Cox-deBoor recursion.
/// The last interval is treated as closed so N_{n}(1) = 1; 0/0 quotients
/// evaluate to 0. Throws std::domain_error for xi outside [0,1].
std::vector<double> eval_basis(const KnotVector& kv, double xi);

/// Derivatives d^order N_{i,p} / d xi^order via the B-spline derivative
/// identity. order > degree yields all zeros.
std::vector<double> eval_basis_derivative(const KnotVector& kv, double xi, int order);

}  // namespace dn
