#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deepnurbs/adam.hpp"
#include "deepnurbs/admissible.hpp"
#include "deepnurbs/mlp.hpp"
#include "deepnurbs/problems.hpp"
#include "deepnurbs/sampler.hpp"

namespace dn {

enum class Mode { DeepNurbs, DeepRitz };

struct SolverConfig {
  Mode mode = Mode::DeepNurbs;
  int hidden_layers = 1;
  int neurons = 50;
  Activation activation = Activation::Relu3;
  AdamConfig adam;             // lr 1e-3, beta1 0.9, beta2 0.999, eps 1e-8
  int batch_size = 1024;
  int epochs = 1;
  std::uint64_t seed = 0;
  int eval_interval = 50;
  int grid_resolution = 101;   // parametric reference grid per direction
  InitScheme init = InitScheme::FanIn(0);
  // Deep Ritz only:
  double lambda = 500.0;
  int boundary_batch_size = 256;

  std::vector<int> layer_sizes() const;
  void validate() const;
};

struct TrainState {
  MLPParams params;
  AdamState adam;
};

struct Metrics {
  double mse = 0.0;
  double rel_l2 = 0.0;
  double l_inf = 0.0;
  bool rel_l2_valid = true;  // false when the reference norm is zero
};

struct HistoryRow {
  int epoch = 0;
  double loss = 0.0;
  std::optional<Metrics> metrics;
};

struct TrainResult {
  TrainState state;
  std::vector<HistoryRow> history;
  Metrics final_metrics;
};

/// Composed solution u = phi * ubar (+ lift) and its physical gradient
/// grad u = ubar grad phi + phi grad ubar (+ grad lift).
/// Throws SingularJacobian where the pullback is unavailable.
struct Composed {
  double u = 0.0;
  double ux = 0.0;
  double uy = 0.0;
};
Composed compose_solution(const AdmissibleScalarField& phi, const MLPParams& params,
                          const Vec3& xi, const AdmissibleScalarField* lift = nullptr);

/// Value-only composition (no Jacobian needed); usable on the boundary.
double compose_value(const AdmissibleScalarField& phi, const MLPParams& params, const Vec3& xi,
                     const AdmissibleScalarField* lift = nullptr);

/// Per-sample constants of the energy estimator, frozen w.r.t. theta.
struct PreparedSample {
  double x1, x2;
  double phi, phix, phiy;
  double det;
  double f;
};

/// Non-skipped samples with phi, grad phi, |det J| and f precomputed.
/// use_phi = false prepares the bare-network (Deep Ritz) energy.
std::vector<PreparedSample> prepare_energy_samples(const AdmissibleScalarField& phi,
                                                   const SampleBatch& batch,
                                                   const ScalarField2& f, bool use_phi);

/// Monte Carlo energy R = (1/n) sum [ 1/2 |grad u|^2 - f u ] |det J| as a
/// differentiable scalar over tape-resident parameters. n counts all batch
/// samples including skipped ones. Throws EmptyBatch.
ad::Var energy_loss(ad::Tape& tape, const std::vector<ad::Var>& theta,
                    const MLPParams& arch, const std::vector<PreparedSample>& samples,
                    int batch_total);

/// Boundary quadrature points for the Deep Ritz penalty term.
struct BoundaryBatch {
  std::vector<Point2> x;
  std::vector<double> weight;  // arclength element times edge count
};
BoundaryBatch sample_boundary(const ControlNet& geometry, const std::vector<Edge>& edges,
                              int n, std::uint64_t seed);

/// Deep Ritz penalty loss: bare-network energy plus
/// lambda * mean(ubar^2 * weight) over the boundary batch.
ad::Var deep_ritz_loss(ad::Tape& tape, const std::vector<ad::Var>& theta,
                       const MLPParams& arch, const std::vector<PreparedSample>& interior,
                       int batch_total, const BoundaryBatch& boundary, double lambda);

/// One Adam update on the training state. Throws NonFiniteGradient.
void adam_step(TrainState& state, const std::vector<double>& grad, const SolverConfig& config);

/// Full training loop: one Adam step per epoch on a fresh batch seeded by
/// run-seed + epoch; deterministic given the config.
TrainResult train(const SolverConfig& config, const ProblemSpec& problem);

/// Grid error metrics against reference values at the same points.
Metrics compute_metrics(const std::vector<double>& predicted,
                        const std::vector<double>& reference);

/// Predicted solution on the pushed-forward parametric grid.
struct SolutionGrid {
  std::vector<Point2> x;
  std::vector<double> u_pred;
  std::vector<double> u_ref;  // empty when the problem has no reference
};
SolutionGrid evaluate_solution_grid(const SolverConfig& config, const ProblemSpec& problem,
                                    const MLPParams& params, int resolution);

}  // namespace dn
