#include "deepnurbs/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "deepnurbs/errors.hpp"

namespace dn {

namespace {

namespace fs = std::filesystem;

/// Write-temp-then-rename so partially written artifacts never appear
/// under their final name.
void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + tmp);
    out << content;
  }
  fs::rename(tmp, path);
}

std::string format_metric(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::map<std::string, std::string> read_metrics_file(const std::string& dir) {
  std::ifstream in(dir + "/metrics.csv");
  if (!in) throw ValidationError("missing metrics file in " + dir);
  std::string header, row;
  if (!std::getline(in, header) || !std::getline(in, row))
    throw ValidationError("malformed metrics file in " + dir);
  std::map<std::string, std::string> out;
  std::istringstream hs(header), rs(row);
  std::string h, r;
  while (std::getline(hs, h, ',') && std::getline(rs, r, ',')) out[h] = r;
  return out;
}

}  // namespace

void save_checkpoint(const MLPParams& params, std::uint64_t seed, const std::string& path) {
  std::ostringstream out;
  out << "layer_sizes";
  for (int s : params.layer_sizes) out << " " << s;
  out << "\nactivation " << (params.activation == Activation::Relu3 ? "relu3" : "tanh");
  out << "\nseed " << seed;
  out << "\nq " << params.q() << "\n";
  char buf[32];
  for (double t : params.theta) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", t);
    out << buf;
  }
  atomic_write(path, out.str());
}

MLPParams load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("load_checkpoint: cannot open " + path);
  std::string tok;
  MLPParams params;
  if (!(in >> tok) || tok != "layer_sizes") throw ParseError(path + ": expected layer_sizes");
  int v;
  while (in >> v) params.layer_sizes.push_back(v);
  in.clear();
  if (!(in >> tok) || tok != "activation") throw ParseError(path + ": expected activation");
  in >> tok;
  params.activation = tok == "tanh" ? Activation::Tanh : Activation::Relu3;
  std::uint64_t seed;
  if (!(in >> tok) || tok != "seed" || !(in >> seed)) throw ParseError(path + ": expected seed");
  int q;
  if (!(in >> tok) || tok != "q" || !(in >> q)) throw ParseError(path + ": expected q");
  params.theta.resize(static_cast<size_t>(q));
  for (double& t : params.theta)
    if (!(in >> t)) throw ParseError(path + ": truncated parameter block");
  validate_params(params);
  return params;
}

int run_experiment(const RunConfig& config) {
  fs::create_directories(config.output_dir);
  const ProblemSpec problem = config.make_problem();

  std::string metadata = "# deepnurbs run metadata (parses as a config file)\n" +
                         config_echo(config);
  try {
    const TrainResult result = train(config.solver, problem);

    // history.csv
    std::ostringstream hist;
    hist << "epoch,loss,mse,rel_l2,l_inf\n";
    for (const HistoryRow& row : result.history) {
      hist << row.epoch << "," << format_metric(row.loss);
      if (row.metrics) {
        hist << "," << format_metric(row.metrics->mse) << ","
             << format_metric(row.metrics->rel_l2) << ","
             << format_metric(row.metrics->l_inf) << "\n";
      } else {
        hist << ",nan,nan,nan\n";
      }
    }
    atomic_write(config.output_dir + "/history.csv", hist.str());

    // metrics.csv
    std::ostringstream met;
    met << "problem,mode,mse,rel_l2,l_inf,final_loss\n";
    met << problem.name << ","
        << (config.solver.mode == Mode::DeepNurbs ? "deep_nurbs" : "deep_ritz") << ","
        << format_metric(result.final_metrics.mse) << ","
        << format_metric(result.final_metrics.rel_l2) << ","
        << format_metric(result.final_metrics.l_inf) << ","
        << format_metric(result.history.back().loss) << "\n";
    atomic_write(config.output_dir + "/metrics.csv", met.str());

    // solution.csv
    const SolutionGrid grid = evaluate_solution_grid(config.solver, problem,
                                                     result.state.params,
                                                     config.solver.grid_resolution);
    std::ostringstream sol;
    const bool has_ref = !grid.u_ref.empty();
    sol << (has_ref ? "x1,x2,u_pred,u_ref,abs_err\n" : "x1,x2,u_pred\n");
    for (size_t i = 0; i < grid.x.size(); ++i) {
      sol << format_metric(grid.x[i][0]) << "," << format_metric(grid.x[i][1]) << ","
          << format_metric(grid.u_pred[i]);
      if (has_ref)
        sol << "," << format_metric(grid.u_ref[i]) << ","
            << format_metric(std::abs(grid.u_pred[i] - grid.u_ref[i]));
      sol << "\n";
    }
    atomic_write(config.output_dir + "/solution.csv", sol.str());

    save_checkpoint(result.state.params, config.solver.seed,
                    config.output_dir + "/checkpoint.txt");

    if (config.dump_samples) {
      const auto xi = sample_parametric(config.solver.batch_size, config.solver.seed + 1);
      dump_batch_csv(push_forward(*problem.geometry, xi, config.solver.seed + 1),
                     config.output_dir + "/samples.csv");
    }

    atomic_write(config.output_dir + "/metadata.txt", metadata);
    std::printf("run complete: %s  mse=%.6g rel_l2=%.6g l_inf=%.6g\n", problem.name.c_str(),
                result.final_metrics.mse, result.final_metrics.rel_l2,
                result.final_metrics.l_inf);
    return 0;
  } catch (const NonFiniteGradient& e) {
    metadata += "# status = incomplete: " + std::string(e.what()) + "\n";
    atomic_write(config.output_dir + "/metadata.txt", metadata);
    std::fprintf(stderr, "run aborted: %s\n", e.what());
    return 2;
  }
}

int compare_runs(const std::string& dir_a, const std::string& dir_b) {
  const auto ma = read_metrics_file(dir_a);
  const auto mb = read_metrics_file(dir_b);
  if (ma.at("problem") != mb.at("problem"))
    throw ValidationError("compare: runs target different problems: " + ma.at("problem") +
                          " vs " + mb.at("problem"));
  const char* cols[] = {"mse", "rel_l2", "l_inf"};
  std::ostringstream csv;
  csv << "row,mse,rel_l2,l_inf\n";
  std::printf("problem: %s\n", ma.at("problem").c_str());
  std::printf("%-12s %14s %14s %14s\n", "run", "MSE", "rel_L2", "L_inf");
  std::printf("%-12s %14s %14s %14s\n", ma.at("mode").c_str(), ma.at("mse").c_str(),
              ma.at("rel_l2").c_str(), ma.at("l_inf").c_str());
  std::printf("%-12s %14s %14s %14s\n", mb.at("mode").c_str(), mb.at("mse").c_str(),
              mb.at("rel_l2").c_str(), mb.at("l_inf").c_str());
  csv << ma.at("mode");
  for (const char* c : cols) csv << "," << ma.at(c);
  csv << "\n" << mb.at("mode");
  for (const char* c : cols) csv << "," << mb.at(c);
  csv << "\nratio";
  std::printf("%-12s", "ratio");
  for (const char* c : cols) {
    const double ratio = std::stod(ma.at(c)) / std::stod(mb.at(c));
    csv << "," << format_metric(ratio);
    std::printf(" %14.6g", ratio);
  }
  std::printf("\n");
  csv << "\n";
  atomic_write(dir_a + "/comparison.csv", csv.str());
  return 0;
}

int validate_run(const RunConfig& config) {
  // Problem construction already runs the manufactured-solution
  // consistency check where one exists.
  const ProblemSpec problem = config.make_problem();
  bool ok = true;

  const AdmissibilityReport report = validate_admissibility(problem.phi, 256);
  std::printf("admissibility: max |phi| on Dirichlet edges = %.3g -> %s\n",
              report.max_boundary_abs, report.pass ? "pass" : "FAIL");
  ok = ok && report.pass;

  const auto xi = sample_parametric(20000, config.solver.seed);
  const SampleBatch batch = push_forward(*problem.geometry, xi);
  int skipped = 0;
  for (auto s : batch.skipped) skipped += s;
  const double area = integrate([](const Point2&, const Point2&) { return 1.0; }, batch);
  std::printf("geometry: MC area = %.6g, skipped samples = %d / %d\n", area, skipped,
              batch.n);
  if (problem.exact)
    std::printf("reference: %s\n", problem.reference_kind == ReferenceKind::Manufactured
                                       ? "manufactured (consistency check passed)"
                                       : "finite-difference oracle");
  std::printf("validate: %s\n", ok ? "pass" : "FAIL");
  return ok ? 0 : 1;
}

}  // namespace dn
