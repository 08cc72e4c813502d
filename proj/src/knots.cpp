#include "deepnurbs/knots.hpp"

#include <cmath>
#include <stdexcept>

#include "deepnurbs/errors.hpp"

namespace dn {

KnotVector make_open_knot_vector(int degree, int num_basis) {
  if (degree < 0) throw ValidationError("make_open_knot_vector: degree must be >= 0");
  if (num_basis < degree + 1)
    throw ValidationError("make_open_knot_vector: num_basis must be >= degree + 1");
  KnotVector kv;
  kv.degree = degree;
  const int interior = num_basis - degree - 1;
  kv.knots.reserve(static_cast<size_t>(num_basis + degree + 1));
  for (int i = 0; i <= degree; ++i) kv.knots.push_back(0.0);
  for (int i = 1; i <= interior; ++i)
    kv.knots.push_back(static_cast<double>(i) / static_cast<double>(interior + 1));
  for (int i = 0; i <= degree; ++i) kv.knots.push_back(1.0);
  return kv;
}

void validate_knot_vector(const KnotVector& kv) {
  if (kv.degree < 0) throw ValidationError("knot vector: negative degree");
  const int m = static_cast<int>(kv.knots.size());
  if (kv.num_basis() < kv.degree + 1)
    throw ValidationError("knot vector: too few knots for degree");
  for (int i = 1; i < m; ++i)
    if (kv.knots[i] < kv.knots[i - 1])
      throw ValidationError("knot vector: knots must be non-decreasing");
  for (int i = 0; i <= kv.degree; ++i) {
    if (kv.knots[i] != 0.0) throw ValidationError("knot vector: not clamped at 0");
    if (kv.knots[m - 1 - i] != 1.0) throw ValidationError("knot vector: not clamped at 1");
  }
}

namespace {

// Safe Cox-deBoor quotient: 0/0 -> 0.
inline double quot(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

void check_domain(double xi) {
  if (!(xi >= 0.0 && xi <= 1.0))
    throw std::domain_error("basis evaluation: xi outside [0,1]");
}

// Degree-0 indicator row over all knot spans. The last nonempty span is
// closed on the right so evaluation at xi = 1 lands in it.
std::vector<double> degree0_row(const KnotVector& kv, double xi) {
  const int m = static_cast<int>(kv.knots.size());
  const double last = kv.knots[m - 1];
  std::vector<double> row(static_cast<size_t>(m - 1), 0.0);
  for (int i = 0; i < m - 1; ++i) {
    const double a = kv.knots[i], b = kv.knots[i + 1];
    if ((xi >= a && xi < b) || (xi == last && b == last && a < b)) row[i] = 1.0;
  }
  return row;
}

}  // namespace

std::vector<double> eval_basis(const KnotVector& kv, double xi) {
  check_domain(xi);
  std::vector<double> row = degree0_row(kv, xi);
  for (int q = 1; q <= kv.degree; ++q) {
    const int len = static_cast<int>(row.size()) - 1;
    for (int i = 0; i < len; ++i) {
      const double left = quot(xi - kv.knots[i], kv.knots[i + q] - kv.knots[i]);
      const double right = quot(kv.knots[i + q + 1] - xi, kv.knots[i + q + 1] - kv.knots[i + 1]);
      row[i] = left * row[i] + right * row[i + 1];
    }
    row.resize(static_cast<size_t>(len));
  }
  row.resize(static_cast<size_t>(kv.num_basis()));
  return row;
}

std::vector<double> eval_basis_derivative(const KnotVector& kv, double xi, int order) {
  check_domain(xi);
  if (order < 1) throw std::invalid_argument("eval_basis_derivative: order must be >= 1");
  if (order > kv.degree)
    return std::vector<double>(static_cast<size_t>(kv.num_basis()), 0.0);

  std::vector<double> row = degree0_row(kv, xi);
  for (int q = 1; q <= kv.degree; ++q) {
    const int len = static_cast<int>(row.size()) - 1;
    const bool derivative_step = q > kv.degree - order;
    for (int i = 0; i < len; ++i) {
      if (derivative_step) {
        const double left = quot(static_cast<double>(q), kv.knots[i + q] - kv.knots[i]);
        const double right = quot(static_cast<double>(q), kv.knots[i + q + 1] - kv.knots[i + 1]);
        row[i] = left * row[i] - right * row[i + 1];
      } else {
        const double left = quot(xi - kv.knots[i], kv.knots[i + q] - kv.knots[i]);
        const double right = quot(kv.knots[i + q + 1] - xi, kv.knots[i + q + 1] - kv.knots[i + 1]);
        row[i] = left * row[i] + right * row[i + 1];
      }
    }
    row.resize(static_cast<size_t>(len));
  }
  row.resize(static_cast<size_t>(kv.num_basis()));
  return row;
}

}  // namespace dn
