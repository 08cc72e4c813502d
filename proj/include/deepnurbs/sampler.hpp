#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "deepnurbs/nurbs.hpp"

namespace dn {

using Point2 = std::array<double, 2>;

/// Uniform [0,1) double from a seedable, fully specified generator
/// (mt19937_64 with 53-bit mantissa conversion), reproducible across
/// platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

/// Parametric batch pushed through the geometry map. Samples with
/// |det| < kDetEpsilon are flagged skipped, never dropped.
struct SampleBatch {
  std::vector<Point2> xi;
  std::vector<Point2> x;
  std::vector<double> det_abs;
  std::vector<std::uint8_t> skipped;
  std::uint64_t seed = 0;
  int n = 0;
};

/// n i.i.d. uniform points in [0,1]^2; deterministic given seed. n >= 1.
std::vector<Point2> sample_parametric(int n, std::uint64_t seed);

SampleBatch push_forward(const ControlNet& geometry, const std::vector<Point2>& xi_batch,
                         std::uint64_t seed = 0);

/// Physical-domain density rho_D(x) = 1 / |det grad_xi x| at xi.
/// Throws SingularJacobian below threshold.
double density_at(const ControlNet& geometry, const Vec3& xi);

/// Monte Carlo estimate (1/n) sum g(x_i, xi_i) |det J_i| over non-skipped
/// samples; skipped samples contribute 0 while n counts all samples.
/// Throws EmptyBatch if every sample is skipped.
double integrate(const std::function<double(const Point2& x, const Point2& xi)>& integrand,
                 const SampleBatch& batch);

/// Writes the batch as CSV with columns xi1, xi2, x1, x2, det_abs, skipped.
void dump_batch_csv(const SampleBatch& batch, const std::string& path);

}  // namespace dn
