#include "deepnurbs/adam.hpp"

#include <cmath>
#include <string>

#include "deepnurbs/errors.hpp"

namespace dn {

void adam_apply(std::vector<double>& theta, const std::vector<double>& grad,
                AdamState& state, const AdamConfig& config) {
  if (theta.size() != grad.size() || theta.size() != state.m.size())
    throw ValidationError("adam_apply: size mismatch");
  for (size_t i = 0; i < grad.size(); ++i)
    if (!std::isfinite(grad[i]))
      throw NonFiniteGradient("adam_apply: non-finite gradient component at index " +
                              std::to_string(i) + " (step " +
                              std::to_string(state.step) + ")");
  const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
  for (size_t i = 0; i < theta.size(); ++i) {
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * grad[i];
    state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * grad[i] * grad[i];
    const double mhat = state.m[i] / c1;
    const double vhat = state.v[i] / c2;
    theta[i] -= config.learning_rate * mhat / (std::sqrt(vhat) + config.epsilon);
  }
  ++state.step;
}

}  // namespace dn
