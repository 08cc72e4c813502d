#pragma once

#include <vector>

namespace dn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long step = 1;  // index of the next update

  explicit AdamState(size_t q = 0) : m(q, 0.0), v(q, 0.0) {}
};

/// One Adam update in place: m <- b1 m + (1-b1) g, v <- b2 v + (1-b2) g^2,
/// theta <- theta - lr * mhat / (sqrt(vhat) + eps) with the standard bias
/// corrections. Throws NonFiniteGradient on non-finite entries.
void adam_apply(std::vector<double>& theta, const std::vector<double>& grad,
                AdamState& state, const AdamConfig& config);

}  // namespace dn
