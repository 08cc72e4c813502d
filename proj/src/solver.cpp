#include "deepnurbs/solver.hpp"

#include <algorithm>
#include <cmath>

#include "deepnurbs/errors.hpp"

namespace dn {

std::vector<int> SolverConfig::layer_sizes() const {
  std::vector<int> sizes{2};
  for (int i = 0; i < hidden_layers; ++i) sizes.push_back(neurons);
  sizes.push_back(1);
  return sizes;
}

void SolverConfig::validate() const {
  if (!(adam.learning_rate > 0)) throw ValidationError("config: learning_rate must be > 0");
  if (!(adam.beta1 >= 0 && adam.beta1 < 1)) throw ValidationError("config: beta1 in [0,1)");
  if (!(adam.beta2 >= 0 && adam.beta2 < 1)) throw ValidationError("config: beta2 in [0,1)");
  if (!(adam.epsilon > 0)) throw ValidationError("config: epsilon must be > 0");
  if (epochs < 1) throw ValidationError("config: epochs must be >= 1");
  if (batch_size < 1) throw ValidationError("config: batch_size must be >= 1");
  if (hidden_layers < 1) throw ValidationError("config: hidden_layers must be >= 1");
  if (neurons < 1) throw ValidationError("config: neurons must be >= 1");
  if (eval_interval < 1) throw ValidationError("config: eval_interval must be >= 1");
  if (grid_resolution < 2) throw ValidationError("config: grid_resolution must be >= 2");
  if (mode == Mode::DeepRitz && boundary_batch_size < 1)
    throw ValidationError("config: boundary_batch_size must be >= 1");
}

Composed compose_solution(const AdmissibleScalarField& phi, const MLPParams& params,
                          const Vec3& xi, const AdmissibleScalarField* lift) {
  const PhiSample ps = eval_phi_with_grad(phi, xi);
  const Vec3 x = eval_geometry(*phi.geometry, xi);
  const InputGradient g = grad_input(params, x[0], x[1]);
  Composed out;
  out.u = ps.value * g.value;
  out.ux = g.value * ps.grad[0] + ps.value * g.dx;
  out.uy = g.value * ps.grad[1] + ps.value * g.dy;
  if (lift) {
    const PhiSample ls = eval_phi_with_grad(*lift, xi);
    out.u += ls.value;
    out.ux += ls.grad[0];
    out.uy += ls.grad[1];
  }
  return out;
}

double compose_value(const AdmissibleScalarField& phi, const MLPParams& params, const Vec3& xi,
                     const AdmissibleScalarField* lift) {
  const double pv = eval_phi(phi, xi);
  const Vec3 x = eval_geometry(*phi.geometry, xi);
  double u = pv * mlp_forward(params, x[0], x[1]);
  if (lift) u += eval_phi(*lift, xi);
  return u;
}

std::vector<PreparedSample> prepare_energy_samples(const AdmissibleScalarField& phi,
                                                   const SampleBatch& batch,
                                                   const ScalarField2& f, bool use_phi) {
  std::vector<PreparedSample> out;
  out.reserve(batch.xi.size());
  for (size_t i = 0; i < batch.xi.size(); ++i) {
    if (batch.skipped[i]) continue;
    const Vec3 xi{batch.xi[i][0], batch.xi[i][1], 0.0};
    PreparedSample s{};
    s.x1 = batch.x[i][0];
    s.x2 = batch.x[i][1];
    s.det = batch.det_abs[i];
    s.f = f(s.x1, s.x2);
    if (use_phi) {
      const PhiSample ps = eval_phi_with_grad(phi, xi);
      s.phi = ps.value;
      s.phix = ps.grad[0];
      s.phiy = ps.grad[1];
    } else {
      s.phi = 1.0;
      s.phix = 0.0;
      s.phiy = 0.0;
    }
    out.push_back(s);
  }
  return out;
}

ad::Var energy_loss(ad::Tape&, const std::vector<ad::Var>& theta, const MLPParams& arch,
                    const std::vector<PreparedSample>& samples, int batch_total) {
  if (samples.empty()) throw EmptyBatch("energy_loss: every sample in the batch was skipped");
  ad::Var loss(0.0);
  for (const PreparedSample& s : samples) {
    ad::Var u(0.0), ux(0.0), uy(0.0);
    mlp_forward_core(arch.layer_sizes, arch.activation, theta.data(), s.x1, s.x2, true, u,
                     ux, uy);
    // u_c = phi * ubar, grad u_c = ubar grad phi + phi grad ubar.
    const ad::Var uc = ad::Var(s.phi) * u;
    const ad::Var ucx = ad::Var(s.phix) * u + ad::Var(s.phi) * ux;
    const ad::Var ucy = ad::Var(s.phiy) * u + ad::Var(s.phi) * uy;
    const ad::Var integrand = ad::Var(0.5) * (ucx * ucx + ucy * ucy) - ad::Var(s.f) * uc;
    loss += integrand * ad::Var(s.det);
  }
  return loss * ad::Var(1.0 / static_cast<double>(batch_total));
}

BoundaryBatch sample_boundary(const ControlNet& geometry, const std::vector<Edge>& edges,
                              int n, std::uint64_t seed) {
  if (edges.empty()) throw ValidationError("sample_boundary: no Dirichlet edges");
  Rng rng(seed);
  const auto num_edges = static_cast<double>(edges.size());
  BoundaryBatch batch;
  batch.x.reserve(static_cast<size_t>(n));
  batch.weight.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto e = static_cast<size_t>(rng.uniform01() * num_edges);
    if (e >= edges.size()) e = edges.size() - 1;
    const double t = rng.uniform01();
    const Vec3 xi = edge_point(edges[e], t);
    const Vec3 x = eval_geometry(geometry, xi);
    const JacobianSample js = jacobian(geometry, xi);
    // Tangent along the moving parameter of the edge.
    const int dir = (edges[e] == Edge::Xi1Min || edges[e] == Edge::Xi1Max) ? 1 : 0;
    const double len = std::hypot(js.matrix[0][static_cast<size_t>(dir)],
                                  js.matrix[1][static_cast<size_t>(dir)]);
    batch.x.push_back({x[0], x[1]});
    batch.weight.push_back(len * num_edges);
  }
  return batch;
}

ad::Var deep_ritz_loss(ad::Tape& tape, const std::vector<ad::Var>& theta,
                       const MLPParams& arch, const std::vector<PreparedSample>& interior,
                       int batch_total, const BoundaryBatch& boundary, double lambda) {
  if (boundary.x.empty()) throw EmptyBatch("deep_ritz_loss: empty boundary batch");
  ad::Var loss = energy_loss(tape, theta, arch, interior, batch_total);
  ad::Var penalty(0.0);
  for (size_t i = 0; i < boundary.x.size(); ++i) {
    ad::Var u(0.0), ux(0.0), uy(0.0);
    mlp_forward_core(arch.layer_sizes, arch.activation, theta.data(), boundary.x[i][0],
                     boundary.x[i][1], false, u, ux, uy);
    penalty += u * u * ad::Var(boundary.weight[i]);
  }
  return loss + ad::Var(lambda / static_cast<double>(boundary.x.size())) * penalty;
}

void adam_step(TrainState& state, const std::vector<double>& grad, const SolverConfig& config) {
  adam_apply(state.params.theta, grad, state.adam, config.adam);
}

Metrics compute_metrics(const std::vector<double>& predicted,
                        const std::vector<double>& reference) {
  if (predicted.size() != reference.size() || predicted.empty())
    throw ValidationError("compute_metrics: grid size mismatch");
  double se = 0.0, ref_sq = 0.0, linf = 0.0;
  for (size_t i = 0; i < predicted.size(); ++i) {
    const double e = predicted[i] - reference[i];
    se += e * e;
    ref_sq += reference[i] * reference[i];
    linf = std::max(linf, std::abs(e));
  }
  Metrics m;
  m.mse = se / static_cast<double>(predicted.size());
  m.l_inf = linf;
  if (ref_sq > 0.0) {
    m.rel_l2 = std::sqrt(se / ref_sq);
    m.rel_l2_valid = true;
  } else {
    m.rel_l2 = 0.0;
    m.rel_l2_valid = false;
  }
  return m;
}

SolutionGrid evaluate_solution_grid(const SolverConfig& config, const ProblemSpec& problem,
                                    const MLPParams& params, int resolution) {
  SolutionGrid grid;
  const int r = resolution;
  grid.x.reserve(static_cast<size_t>(r * r));
  grid.u_pred.reserve(static_cast<size_t>(r * r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const Vec3 xi{static_cast<double>(i) / (r - 1), static_cast<double>(j) / (r - 1), 0.0};
      const Vec3 x = eval_geometry(*problem.geometry, xi);
      grid.x.push_back({x[0], x[1]});
      const double u = config.mode == Mode::DeepNurbs
                           ? compose_value(problem.phi, params, xi)
                           : mlp_forward(params, x[0], x[1]);
      grid.u_pred.push_back(u);
      if (problem.exact) grid.u_ref.push_back(problem.exact(x[0], x[1]));
    }
  return grid;
}

TrainResult train(const SolverConfig& config, const ProblemSpec& problem) {
  config.validate();
  TrainResult result;
  result.state.params =
      init_params(config.layer_sizes(), config.activation, config.init);
  result.state.adam = AdamState(result.state.params.theta.size());
  result.history.reserve(static_cast<size_t>(config.epochs));

  ad::Tape tape;
  std::vector<ad::Var> theta_vars(result.state.params.theta.size());
  std::vector<double> grad(result.state.params.theta.size());

  auto eval_metrics = [&]() {
    const SolutionGrid grid = evaluate_solution_grid(config, problem, result.state.params,
                                                     config.grid_resolution);
    return compute_metrics(grid.u_pred, grid.u_ref);
  };

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto xi = sample_parametric(config.batch_size,
                                      config.seed + static_cast<std::uint64_t>(epoch));
    const SampleBatch batch = push_forward(*problem.geometry, xi);
    const auto samples = prepare_energy_samples(problem.phi, batch, problem.source,
                                                config.mode == Mode::DeepNurbs);

    tape.clear();
    for (size_t i = 0; i < theta_vars.size(); ++i)
      theta_vars[i] = ad::make_leaf(tape, result.state.params.theta[i]);
    ad::Var loss(0.0);
    if (config.mode == Mode::DeepNurbs) {
      loss = energy_loss(tape, theta_vars, result.state.params, samples, batch.n);
    } else {
      const BoundaryBatch boundary = sample_boundary(
          *problem.geometry, problem.dirichlet_edges, config.boundary_batch_size,
          config.seed + static_cast<std::uint64_t>(epoch) + 0x9e3779b97f4a7c15ULL);
      loss = deep_ritz_loss(tape, theta_vars, result.state.params, samples, batch.n,
                            boundary, config.lambda);
    }
    if (loss.on_tape()) {
      tape.backward(loss.idx);
      for (size_t i = 0; i < theta_vars.size(); ++i)
        grad[i] = tape.adjoint(theta_vars[i].idx);
    } else {
      std::fill(grad.begin(), grad.end(), 0.0);
    }
    adam_step(result.state, grad, config);

    HistoryRow row;
    row.epoch = epoch;
    row.loss = loss.v;
    if (problem.exact && (epoch % config.eval_interval == 0 || epoch == config.epochs))
      row.metrics = eval_metrics();
    result.history.push_back(row);
  }
  result.final_metrics = result.history.back().metrics.value_or(Metrics{});
  if (!result.history.back().metrics && problem.exact)
    result.final_metrics = eval_metrics();
  return result;
}

}  // namespace dn
