#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "deepnurbs/config.hpp"
#include "deepnurbs/errors.hpp"
#include "deepnurbs/knots.hpp"
#include "deepnurbs/runner.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

const char* kSmallRun =
    "problem = unit_square\n"
    "neurons = 8\n"
    "batch_size = 64\n"
    "epochs = 12\n"
    "eval_interval = 6\n"
    "grid_resolution = 9\n"
    "seed = 3\n";

}  // namespace

TEST_CASE("config parsing happy path and defaults") {
  auto cfg = dn::parse_config_text("problem = slit_square\n");
  CHECK(cfg.problem == "slit_square");
  CHECK(cfg.solver.mode == dn::Mode::DeepNurbs);
  CHECK(cfg.solver.neurons == 50);
  CHECK(cfg.solver.hidden_layers == 1);
  CHECK(cfg.solver.batch_size == 1024);
  CHECK(cfg.solver.adam.learning_rate == 1e-3);
  CHECK(cfg.solver.lambda == 500.0);

  cfg = dn::parse_config_text(
      "problem = quarter_annulus\n"
      "mode = deep_ritz\n"
      "activation = tanh\n"
      "hidden_layers = 2\n"
      "neurons = 20  # comment after value\n"
      "learning_rate = 5e-4\n"
      "seed = 11\n"
      "dump_samples = true\n");
  CHECK(cfg.solver.mode == dn::Mode::DeepRitz);
  CHECK(cfg.solver.activation == dn::Activation::Tanh);
  CHECK(cfg.solver.hidden_layers == 2);
  CHECK(cfg.solver.neurons == 20);
  CHECK(cfg.solver.adam.learning_rate == 5e-4);
  CHECK(cfg.solver.seed == 11);
  CHECK(cfg.solver.init.seed == 11);
  CHECK(cfg.dump_samples);
}

TEST_CASE("config parse errors carry line numbers and key names") {
  CHECK_THROWS_AS(dn::parse_config_text("problem = unit_square\nbogus_key = 1\n"),
                  dn::ValidationError);
  try {
    dn::parse_config_text("problem = unit_square\nbogus_key = 1\n");
  } catch (const dn::ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("bogus_key") != std::string::npos);
  }
  CHECK_THROWS_AS(dn::parse_config_text("problem = unit_square\nepochs = abc\n"),
                  dn::ParseError);
  CHECK_THROWS_AS(dn::parse_config_text("problem = unit_square\nno_equals_here\n"),
                  dn::ParseError);
  CHECK_THROWS_AS(dn::parse_config_text(""), dn::ValidationError);
  CHECK_THROWS_AS(
      dn::parse_config_text("problem = unit_square\ngeometry_file = g.txt\n"),
      dn::ValidationError);
  CHECK_THROWS_AS(dn::parse_config_text("problem = unit_square\nbatch_size = 0\n"),
                  dn::ValidationError);
}

TEST_CASE("config echo round trips") {
  auto cfg = dn::parse_config_text(
      "problem = square_with_hole\n"
      "hidden_layers = 2\n"
      "learning_rate = 0.0025\n"
      "seed = 42\n"
      "mode = deep_ritz\n"
      "activation = tanh\n");
  const std::string echoed = dn::config_echo(cfg);
  auto cfg2 = dn::parse_config_text(echoed);
  CHECK(cfg2.problem == cfg.problem);
  CHECK(cfg2.solver.hidden_layers == cfg.solver.hidden_layers);
  CHECK(cfg2.solver.adam.learning_rate == cfg.solver.adam.learning_rate);
  CHECK(cfg2.solver.seed == cfg.solver.seed);
  CHECK(cfg2.solver.mode == cfg.solver.mode);
  CHECK(dn::config_echo(cfg2) == echoed);
}

TEST_CASE("control net serialization round trip") {
  TempDir tmp("dn_test_net");
  dn::ControlNet net;
  net.kvs = {dn::make_open_knot_vector(2, 4), dn::make_open_knot_vector(1, 2)};
  net.points.resize(16);
  net.weights.assign(8, 1.0);
  for (int i = 0; i < 8; ++i) {
    net.points[static_cast<size_t>(2 * i)] = 0.125 * i;
    net.points[static_cast<size_t>(2 * i + 1)] = 1.0 / 3.0 + i;
    net.weights[static_cast<size_t>(i)] = 1.0 + 0.1 * i;
  }
  const std::string path = (tmp.path / "net.txt").string();
  dn::save_control_net(net, path);
  auto loaded = dn::load_control_net(path);
  CHECK(loaded.kvs.size() == 2);
  CHECK(loaded.kvs[0].degree == 2);
  CHECK(loaded.kvs[0].knots == net.kvs[0].knots);
  CHECK(loaded.points == net.points);
  CHECK(loaded.weights == net.weights);
  CHECK_THROWS_AS(dn::load_control_net((tmp.path / "missing.txt").string()), dn::ParseError);
}

TEST_CASE("checkpoint round trip") {
  TempDir tmp("dn_test_ckpt");
  auto params = dn::init_params({2, 7, 1}, dn::Activation::Tanh, dn::InitScheme::FanIn(77));
  const std::string path = (tmp.path / "ckpt.txt").string();
  dn::save_checkpoint(params, 77, path);
  auto loaded = dn::load_checkpoint(path);
  CHECK(loaded.layer_sizes == params.layer_sizes);
  CHECK(loaded.activation == params.activation);
  CHECK(loaded.theta == params.theta);
}

TEST_CASE("run experiment writes the full artifact set") {
  TempDir tmp("dn_test_run");
  auto cfg = dn::parse_config_text(std::string(kSmallRun) + "output_dir = " +
                                   (tmp.path / "out").string() + "\ndump_samples = true\n");
  CHECK(dn::run_experiment(cfg) == 0);
  const fs::path out = tmp.path / "out";
  for (const char* f : {"metadata.txt", "history.csv", "metrics.csv", "solution.csv",
                        "checkpoint.txt", "samples.csv"})
    CHECK(fs::exists(out / f));

  const std::string hist = read_file(out / "history.csv");
  CHECK(hist.rfind("epoch,loss,mse,rel_l2,l_inf", 0) == 0);
  int lines = 0;
  for (char c : hist)
    if (c == '\n') ++lines;
  CHECK(lines == 13);  // header + 12 epochs

  const std::string metrics = read_file(out / "metrics.csv");
  CHECK(metrics.rfind("problem,mode,mse,rel_l2,l_inf,final_loss", 0) == 0);
  CHECK(metrics.find("unit_square,deep_nurbs,") != std::string::npos);

  const std::string sol = read_file(out / "solution.csv");
  CHECK(sol.rfind("x1,x2,u_pred,u_ref,abs_err", 0) == 0);

  const std::string meta = read_file(out / "metadata.txt");
  CHECK(meta.find("problem = unit_square") != std::string::npos);

  auto ckpt = dn::load_checkpoint((out / "checkpoint.txt").string());
  CHECK(ckpt.layer_sizes == std::vector<int>{2, 8, 1});
}

TEST_CASE("repeated runs produce byte-identical artifacts") {
  TempDir tmp("dn_test_det");
  auto mk = [&](const std::string& sub) {
    auto cfg = dn::parse_config_text(std::string(kSmallRun) + "output_dir = " +
                                     (tmp.path / sub).string() + "\n");
    REQUIRE(dn::run_experiment(cfg) == 0);
    return read_file(tmp.path / sub / "history.csv");
  };
  const std::string h1 = mk("a");
  const std::string h2 = mk("b");
  CHECK(h1 == h2);
  CHECK(read_file(tmp.path / "a" / "solution.csv") == read_file(tmp.path / "b" / "solution.csv"));
  CHECK(read_file(tmp.path / "a" / "metrics.csv") == read_file(tmp.path / "b" / "metrics.csv"));
}

TEST_CASE("compare runs emits a joint table") {
  TempDir tmp("dn_test_cmp");
  auto run = [&](const std::string& sub, const char* extra) {
    auto cfg = dn::parse_config_text(std::string(kSmallRun) + extra + "output_dir = " +
                                     (tmp.path / sub).string() + "\n");
    REQUIRE(dn::run_experiment(cfg) == 0);
  };
  run("dn", "");
  run("dr", "mode = deep_ritz\nactivation = tanh\nboundary_batch_size = 32\n");
  CHECK(dn::compare_runs((tmp.path / "dn").string(), (tmp.path / "dr").string()) == 0);
  CHECK(fs::exists(tmp.path / "dn" / "comparison.csv"));
  const std::string cmp = read_file(tmp.path / "dn" / "comparison.csv");
  CHECK(cmp.find("deep_nurbs") != std::string::npos);
  CHECK(cmp.find("deep_ritz") != std::string::npos);
}

TEST_CASE("validate run on builtin and inline geometry") {
  TempDir tmp("dn_test_val");
  auto cfg = dn::parse_config_text("problem = quarter_annulus\n");
  CHECK(dn::validate_run(cfg) == 0);

  // Inline geometry: unit square as a bilinear patch.
  dn::ControlNet net;
  net.kvs = {dn::make_open_knot_vector(1, 2), dn::make_open_knot_vector(1, 2)};
  net.points = {0, 0, 0, 1, 1, 0, 1, 1};
  net.weights = {1, 1, 1, 1};
  const std::string gpath = (tmp.path / "square.txt").string();
  dn::save_control_net(net, gpath);
  auto icfg = dn::parse_config_text("geometry_file = " + gpath +
                                    "\nsource_constant = 2.5\n"
                                    "inline_dirichlet_edges = xi1_min xi2_max\n");
  auto spec = icfg.make_problem();
  CHECK(spec.source(0.1, 0.2) == 2.5);
  CHECK(spec.dirichlet_edges.size() == 2);
  CHECK(dn::validate_run(icfg) == 0);
}

TEST_CASE("cli binary end to end") {
  const char* cli_env = std::getenv("DEEPNURBS_CLI");
  const std::string cli = cli_env ? cli_env : "./deepnurbs";
  if (!fs::exists(cli)) {
    MESSAGE("cli binary not found, skipping: " << cli);
    return;
  }
  TempDir tmp("dn_test_clibin");
  const fs::path cfg_path = tmp.path / "run.cfg";
  {
    std::ofstream out(cfg_path);
    out << kSmallRun << "output_dir = " << (tmp.path / "out").string() << "\n";
  }
  auto sh = [&](const std::string& cmd) { return std::system(cmd.c_str()); };
  CHECK(sh(cli + " run " + cfg_path.string() + " > /dev/null") == 0);
  CHECK(fs::exists(tmp.path / "out" / "metrics.csv"));
  CHECK(sh(cli + " validate " + cfg_path.string() + " > /dev/null") == 0);
  CHECK(sh(cli + " run " + (tmp.path / "none.cfg").string() +
           " > /dev/null 2>&1") != 0);
}
