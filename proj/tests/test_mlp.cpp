#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "deepnurbs/errors.hpp"
#include "deepnurbs/mlp.hpp"

using dn::Activation;
using dn::MLPParams;

namespace {

// Tiny 2-3-1 relu3 network with hand-picked parameters. Layer weights are
// row-major, biases follow the weight block, linear output layer last.
MLPParams tiny_net() {
  MLPParams p;
  p.layer_sizes = {2, 3, 1};
  p.activation = Activation::Relu3;
  p.theta = {
      // hidden weights (3 x 2)
      1.0, 0.5,
      -0.5, 1.0,
      0.25, -0.25,
      // hidden biases
      0.1, -0.2, 0.0,
      // output weights (1 x 3)
      1.0, 2.0, -1.0,
      // output bias
      0.3,
  };
  return p;
}

double relu3(double v) { return v > 0 ? v * v * v : 0.0; }

double tiny_reference(double x1, double x2) {
  const double h1 = relu3(1.0 * x1 + 0.5 * x2 + 0.1);
  const double h2 = relu3(-0.5 * x1 + 1.0 * x2 - 0.2);
  const double h3 = relu3(0.25 * x1 - 0.25 * x2);
  return h1 + 2.0 * h2 - h3 + 0.3;
}

}  // namespace

TEST_CASE("parameter count") {
  MLPParams p;
  p.layer_sizes = {2, 50, 1};
  CHECK(p.q() == 2 * 50 + 50 + 50 + 1);
  p.layer_sizes = {2, 50, 50, 1};
  CHECK(p.q() == 2 * 50 + 50 + 50 * 50 + 50 + 50 + 1);
}

TEST_CASE("validation") {
  MLPParams p = tiny_net();
  CHECK_NOTHROW(dn::validate_params(p));
  p.theta.pop_back();
  CHECK_THROWS_AS(dn::validate_params(p), dn::ValidationError);
  p = tiny_net();
  p.layer_sizes = {2, 3};
  CHECK_THROWS_AS(dn::validate_params(p), dn::ValidationError);
}

TEST_CASE("forward pass against a hand computation") {
  const MLPParams p = tiny_net();
  for (auto [a, b] : {std::pair{0.2, 0.7}, {0.0, 0.0}, {1.0, -1.0}, {-0.4, 0.3}})
    CHECK(dn::mlp_forward(p, a, b) == doctest::Approx(tiny_reference(a, b)).epsilon(1e-14));
}

TEST_CASE("input gradient matches finite differences") {
  const MLPParams p = tiny_net();
  const double h = 1e-6;
  for (auto [a, b] : {std::pair{0.2, 0.7}, {0.9, 0.1}, {-0.3, 0.5}}) {
    const auto g = dn::grad_input(p, a, b);
    CHECK(g.value == doctest::Approx(dn::mlp_forward(p, a, b)).epsilon(1e-15));
    const double fx = (dn::mlp_forward(p, a + h, b) - dn::mlp_forward(p, a - h, b)) / (2 * h);
    const double fy = (dn::mlp_forward(p, a, b + h) - dn::mlp_forward(p, a, b - h)) / (2 * h);
    CHECK(g.dx == doctest::Approx(fx).epsilon(1e-6).scale(1.0));
    CHECK(g.dy == doctest::Approx(fy).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("parameter gradient of the plain value matches finite differences") {
  MLPParams p = tiny_net();
  const double a = 0.37, b = 0.81;
  auto builder = [&](dn::ad::Tape&, const std::vector<dn::ad::Var>& theta) {
    dn::ad::Var u, ux, uy;
    dn::mlp_forward_core(p.layer_sizes, p.activation, theta.data(), a, b, false, u, ux, uy);
    return u;
  };
  const auto lg = dn::grad_params(p, builder);
  CHECK(lg.value == doctest::Approx(dn::mlp_forward(p, a, b)).epsilon(1e-14));
  const double h = 1e-6;
  for (size_t i = 0; i < p.theta.size(); ++i) {
    MLPParams pp = p, pm = p;
    pp.theta[i] += h;
    pm.theta[i] -= h;
    const double fd = (dn::mlp_forward(pp, a, b) - dn::mlp_forward(pm, a, b)) / (2 * h);
    CHECK(lg.grad[i] == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("mixed second order: parameter gradient of |grad_x u|^2") {
  MLPParams p = tiny_net();
  const double a = 0.43, b = 0.29;
  auto builder = [&](dn::ad::Tape&, const std::vector<dn::ad::Var>& theta) {
    dn::ad::Var u, ux, uy;
    dn::mlp_forward_core(p.layer_sizes, p.activation, theta.data(), a, b, true, u, ux, uy);
    return ux * ux + uy * uy;
  };
  const auto lg = dn::grad_params(p, builder);
  auto loss_at = [&](const MLPParams& q) {
    const auto g = dn::grad_input(q, a, b);
    return g.dx * g.dx + g.dy * g.dy;
  };
  CHECK(lg.value == doctest::Approx(loss_at(p)).epsilon(1e-13));
  const double h = 1e-6;
  for (size_t i = 0; i < p.theta.size(); ++i) {
    MLPParams pp = p, pm = p;
    pp.theta[i] += h;
    pm.theta[i] -= h;
    const double fd = (loss_at(pp) - loss_at(pm)) / (2 * h);
    CHECK(lg.grad[i] == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
  }
}

TEST_CASE("tanh activation variant") {
  MLPParams p = tiny_net();
  p.activation = Activation::Tanh;
  const double a = 0.6, b = -0.2;
  const double h1 = std::tanh(1.0 * a + 0.5 * b + 0.1);
  const double h2 = std::tanh(-0.5 * a + 1.0 * b - 0.2);
  const double h3 = std::tanh(0.25 * a - 0.25 * b);
  CHECK(dn::mlp_forward(p, a, b) ==
        doctest::Approx(h1 + 2 * h2 - h3 + 0.3).epsilon(1e-14));
  const auto g = dn::grad_input(p, a, b);
  const double hh = 1e-6;
  const double fx = (dn::mlp_forward(p, a + hh, b) - dn::mlp_forward(p, a - hh, b)) / (2 * hh);
  CHECK(g.dx == doctest::Approx(fx).epsilon(1e-6).scale(1.0));
}

TEST_CASE("two hidden layers") {
  MLPParams p;
  p.layer_sizes = {2, 2, 2, 1};
  p.activation = Activation::Relu3;
  p.theta = {
      0.7, -0.3, 0.2, 0.5,      // layer 1 weights
      0.05, -0.05,              // layer 1 biases
      0.4, 0.6, -0.2, 0.3,      // layer 2 weights
      0.0, 0.1,                 // layer 2 biases
      1.5, -0.8,                // output weights
      0.2,                      // output bias
  };
  REQUIRE(static_cast<int>(p.theta.size()) == p.q());
  const double a = 0.8, b = 0.35;
  const double z11 = relu3(0.7 * a - 0.3 * b + 0.05);
  const double z12 = relu3(0.2 * a + 0.5 * b - 0.05);
  const double z21 = relu3(0.4 * z11 + 0.6 * z12 + 0.0);
  const double z22 = relu3(-0.2 * z11 + 0.3 * z12 + 0.1);
  CHECK(dn::mlp_forward(p, a, b) ==
        doctest::Approx(1.5 * z21 - 0.8 * z22 + 0.2).epsilon(1e-14));
  const double h = 1e-6;
  const auto g = dn::grad_input(p, a, b);
  const double fx = (dn::mlp_forward(p, a + h, b) - dn::mlp_forward(p, a - h, b)) / (2 * h);
  CHECK(g.dx == doctest::Approx(fx).epsilon(1e-6).scale(1.0));
}

TEST_CASE("fan-in initialization is deterministic, bounded, biases zero") {
  auto p1 = dn::init_params({2, 50, 1}, Activation::Relu3, dn::InitScheme::FanIn(12));
  auto p2 = dn::init_params({2, 50, 1}, Activation::Relu3, dn::InitScheme::FanIn(12));
  auto p3 = dn::init_params({2, 50, 1}, Activation::Relu3, dn::InitScheme::FanIn(13));
  CHECK(p1.theta == p2.theta);
  CHECK(p1.theta != p3.theta);
  REQUIRE(static_cast<int>(p1.theta.size()) == p1.q());
  const double bound1 = std::sqrt(6.0 / (2 + 50));
  for (int i = 0; i < 100; ++i) CHECK(std::abs(p1.theta[static_cast<size_t>(i)]) <= bound1);
  for (int i = 100; i < 150; ++i) CHECK(p1.theta[static_cast<size_t>(i)] == 0.0);
  CHECK(p1.theta.back() == 0.0);
}

TEST_CASE("pretrained identity init approximates x1") {
  auto p = dn::init_params({2, 16, 1}, Activation::Relu3,
                           dn::InitScheme::Identity(5, 1500));
  double mse = 0.0;
  int cnt = 0;
  for (double a = 0.05; a < 1.0; a += 0.09)
    for (double b = 0.05; b < 1.0; b += 0.09) {
      const double e = dn::mlp_forward(p, a, b) - a;
      mse += e * e;
      ++cnt;
    }
  mse /= cnt;
  CHECK(mse < 5e-3);
}
