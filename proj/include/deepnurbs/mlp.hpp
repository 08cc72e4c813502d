#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "deepnurbs/autodiff.hpp"

namespace dn {

enum class Activation { Relu3, Tanh };

/// Shallow MLP u(x) = beta . z_l( ... z_1(x)) + b with a linear output
/// layer. Parameters live in one flat vector: layer-major, row-major
/// weights, biases after weights per layer, output layer last.
struct MLPParams {
  std::vector<int> layer_sizes;  // [d, K, ..., 1]
  Activation activation = Activation::Relu3;
  std::vector<double> theta;

  int q() const {
    int total = 0;
    for (size_t i = 1; i < layer_sizes.size(); ++i)
      total += layer_sizes[i] * layer_sizes[i - 1] + layer_sizes[i];
    return total;
  }
};

void validate_params(const MLPParams& params);

/// Forward pass through weights of scalar type S on inputs held constant.
/// When want_grad is set, also produces the input gradient (d/dx1, d/dx2)
/// carried in the same scalar type, so it stays differentiable w.r.t. S.
template <class S>
void mlp_forward_core(const std::vector<int>& sizes, Activation act, const S* theta,
                      double x1, double x2, bool want_grad, S& u, S& ux, S& uy) {
  std::vector<S> z{S(x1), S(x2)}, zx, zy, nz, nx, ny;
  if (want_grad) {
    zx = {S(1.0), S(0.0)};
    zy = {S(0.0), S(1.0)};
  }
  size_t off = 0;
  const size_t layers = sizes.size() - 1;
  for (size_t layer = 1; layer < layers; ++layer) {
    const int in = sizes[layer - 1];
    const int out = sizes[layer];
    nz.clear(); nx.clear(); ny.clear();
    for (int k = 0; k < out; ++k) {
      const S* w = theta + off + static_cast<size_t>(k * in);
      const S& b = theta[off + static_cast<size_t>(out * in + k)];
      S pre = ad::dot(w, z.data(), in) + b;
      S a = act == Activation::Relu3 ? ad::relu3(pre) : ad::tanh(pre);
      nz.push_back(a);
      if (want_grad) {
        S dpre = act == Activation::Relu3 ? ad::relu3_prime(pre) : ad::tanh_prime(pre);
        nx.push_back(dpre * (ad::dot(w, zx.data(), in)));
        ny.push_back(dpre * (ad::dot(w, zy.data(), in)));
      }
    }
    z.swap(nz); zx.swap(nx); zy.swap(ny);
    off += static_cast<size_t>(out * in + out);
  }
  // Linear output layer.
  const int in = sizes[layers - 1];
  const S* beta = theta + off;
  const S& b = theta[off + static_cast<size_t>(in)];
  u = ad::dot(beta, z.data(), in) + b;
  if (want_grad) {
    ux = ad::dot(beta, zx.data(), in);
    uy = ad::dot(beta, zy.data(), in);
  }
}

/// Plain value evaluation.
double mlp_forward(const MLPParams& params, double x1, double x2);

struct InputGradient {
  double value = 0.0;
  double dx = 0.0;
  double dy = 0.0;
};

/// Exact input gradient of the network output.
InputGradient grad_input(const MLPParams& params, double x1, double x2);

/// Loss builder: pure function of the tape-resident parameter vector. It may
/// route through mlp_forward_core with want_grad to consume input gradients;
/// the resulting parameter gradient stays exact (mixed second order).
using LossBuilder = std::function<ad::Var(ad::Tape&, const std::vector<ad::Var>&)>;

struct LossGradient {
  double value = 0.0;
  std::vector<double> grad;
};

/// Exact gradient of the loss w.r.t. all Q flat parameters.
LossGradient grad_params(const MLPParams& params, const LossBuilder& builder);

struct InitScheme {
  enum class Kind { FanInUniform, PretrainedIdentity } kind = Kind::FanInUniform;
  std::uint64_t seed = 0;
  int pretrain_steps = 2000;

  static InitScheme FanIn(std::uint64_t seed) { return {Kind::FanInUniform, seed, 0}; }
  static InitScheme Identity(std::uint64_t seed, int steps) {
    return {Kind::PretrainedIdentity, seed, steps};
  }
};

/// FanInUniform: weights uniform in +-sqrt(6/(fan_in+fan_out)), biases 0.
/// PretrainedIdentity: fan-in init followed by Adam steps minimizing
/// E[(u(x) - x1)^2] over uniform samples in [0,1]^2.
MLPParams init_params(std::vector<int> layer_sizes, Activation activation,
                      const InitScheme& scheme);

}  // namespace dn
