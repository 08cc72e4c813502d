#pragma once

#include <stdexcept>
#include <string>

namespace dn {

/// Jacobian determinant magnitude below which a parametric point is treated
/// as geometrically degenerate (collapsed control points, slit tips).
inline constexpr double kDetEpsilon = 1e-12;

struct SingularJacobian : std::runtime_error {
  explicit SingularJacobian(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyBatch : std::runtime_error {
  explicit EmptyBatch(const std::string& what) : std::runtime_error(what) {}
};

struct NonFiniteGradient : std::runtime_error {
  explicit NonFiniteGradient(const std::string& what) : std::runtime_error(what) {}
};

struct ConsistencyCheckFailed : std::runtime_error {
  explicit ConsistencyCheckFailed(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dn
