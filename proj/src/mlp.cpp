#include "deepnurbs/mlp.hpp"

#include <cmath>
#include <random>

#include "deepnurbs/adam.hpp"
#include "deepnurbs/errors.hpp"
#include "deepnurbs/sampler.hpp"

namespace dn {

void validate_params(const MLPParams& params) {
  if (params.layer_sizes.size() < 3)
    throw ValidationError("mlp: need input, at least one hidden, and output layer");
  if (params.layer_sizes.front() != 2)
    throw ValidationError("mlp: input dimension must be 2");
  if (params.layer_sizes.back() != 1)
    throw ValidationError("mlp: output dimension must be 1");
  for (int s : params.layer_sizes)
    if (s < 1) throw ValidationError("mlp: layer sizes must be positive");
  if (static_cast<int>(params.theta.size()) != params.q())
    throw ValidationError("mlp: flat parameter vector length does not match layer sizes");
}

double mlp_forward(const MLPParams& params, double x1, double x2) {
  double u = 0, ux = 0, uy = 0;
  mlp_forward_core(params.layer_sizes, params.activation, params.theta.data(), x1, x2,
                   false, u, ux, uy);
  return u;
}

InputGradient grad_input(const MLPParams& params, double x1, double x2) {
  double u = 0, ux = 0, uy = 0;
  mlp_forward_core(params.layer_sizes, params.activation, params.theta.data(), x1, x2,
                   true, u, ux, uy);
  return {u, ux, uy};
}

LossGradient grad_params(const MLPParams& params, const LossBuilder& builder) {
  ad::Tape tape;
  std::vector<ad::Var> theta_vars;
  theta_vars.reserve(params.theta.size());
  for (double t : params.theta) theta_vars.push_back(ad::make_leaf(tape, t));
  const ad::Var loss = builder(tape, theta_vars);
  LossGradient out;
  out.value = loss.v;
  out.grad.assign(params.theta.size(), 0.0);
  if (loss.on_tape()) {
    tape.backward(loss.idx);
    for (size_t i = 0; i < theta_vars.size(); ++i)
      out.grad[i] = tape.adjoint(theta_vars[i].idx);
  }
  return out;
}

MLPParams init_params(std::vector<int> layer_sizes, Activation activation,
                      const InitScheme& scheme) {
  MLPParams params;
  params.layer_sizes = std::move(layer_sizes);
  params.activation = activation;
  params.theta.assign(static_cast<size_t>(params.q()), 0.0);

  Rng rng(scheme.seed);
  size_t off = 0;
  for (size_t layer = 1; layer < params.layer_sizes.size(); ++layer) {
    const int in = params.layer_sizes[layer - 1];
    const int out = params.layer_sizes[layer];
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    for (int k = 0; k < out * in; ++k)
      params.theta[off + static_cast<size_t>(k)] = limit * (2.0 * rng.uniform01() - 1.0);
    off += static_cast<size_t>(out * in + out);  // biases stay 0
  }
  validate_params(params);

  if (scheme.kind == InitScheme::Kind::PretrainedIdentity) {
    // Fit the identity estimator u(x) ~ x1 before the PDE training starts.
    AdamConfig adam_cfg;
    AdamState adam_state(params.theta.size());
    const int batch = 128;
    for (int step = 0; step < scheme.pretrain_steps; ++step) {
      const auto xi = sample_parametric(batch, scheme.seed + 0x9e3779b97f4a7c15ULL +
                                                   static_cast<std::uint64_t>(step));
      const LossGradient lg = grad_params(params, [&](ad::Tape&, const std::vector<ad::Var>& tv) {
        ad::Var loss(0.0);
        for (const auto& p : xi) {
          ad::Var u(0.0), ux(0.0), uy(0.0);
          mlp_forward_core(params.layer_sizes, params.activation, tv.data(), p[0], p[1],
                           false, u, ux, uy);
          const ad::Var r = u - ad::Var(p[0]);
          loss += r * r;
        }
        return loss * ad::Var(1.0 / batch);
      });
      adam_apply(params.theta, lg.grad, adam_state, adam_cfg);
    }
  }
  return params;
}

}  // namespace dn
