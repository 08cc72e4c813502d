#include "deepnurbs/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "deepnurbs/errors.hpp"

namespace dn {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& value, int line) {
  size_t pos = 0;
  double d = 0;
  try {
    d = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ": not a number: '" + value + "'");
  }
  if (pos != value.size())
    throw ParseError("line " + std::to_string(line) + ": trailing junk in number: '" + value + "'");
  return d;
}

long parse_int(const std::string& value, int line) {
  const double d = parse_double(value, line);
  const long i = std::lround(d);
  if (d != static_cast<double>(i))
    throw ParseError("line " + std::to_string(line) + ": expected integer: '" + value + "'");
  return i;
}

bool parse_bool(const std::string& value, int line) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ParseError("line " + std::to_string(line) + ": expected boolean: '" + value + "'");
}

Edge parse_edge(const std::string& token, int line) {
  if (token == "xi1_min") return Edge::Xi1Min;
  if (token == "xi1_max") return Edge::Xi1Max;
  if (token == "xi2_min") return Edge::Xi2Min;
  if (token == "xi2_max") return Edge::Xi2Max;
  throw ParseError("line " + std::to_string(line) + ": unknown edge: '" + token + "'");
}

const char* edge_name(Edge e) {
  switch (e) {
    case Edge::Xi1Min: return "xi1_min";
    case Edge::Xi1Max: return "xi1_max";
    case Edge::Xi2Min: return "xi2_min";
    default: return "xi2_max";
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(line) + ": expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (value.empty())
      throw ParseError("line " + std::to_string(line) + ": empty value for key '" + key + "'");

    if (key == "problem") {
      cfg.problem = value;
    } else if (key == "geometry_file") {
      cfg.geometry_file = value;
    } else if (key == "source_constant") {
      cfg.source_constant = parse_double(value, line);
    } else if (key == "inline_dirichlet_edges") {
      std::istringstream es(value);
      std::string tok;
      cfg.inline_dirichlet_edges.clear();
      while (es >> tok) cfg.inline_dirichlet_edges.push_back(parse_edge(tok, line));
    } else if (key == "mode") {
      if (value == "deep_nurbs") cfg.solver.mode = Mode::DeepNurbs;
      else if (value == "deep_ritz") cfg.solver.mode = Mode::DeepRitz;
      else throw ParseError("line " + std::to_string(line) + ": unknown mode '" + value + "'");
    } else if (key == "activation") {
      if (value == "relu3") cfg.solver.activation = Activation::Relu3;
      else if (value == "tanh") cfg.solver.activation = Activation::Tanh;
      else throw ParseError("line " + std::to_string(line) + ": unknown activation '" + value + "'");
    } else if (key == "init") {
      if (value == "fan_in") cfg.solver.init.kind = InitScheme::Kind::FanInUniform;
      else if (value == "pretrained_identity")
        cfg.solver.init.kind = InitScheme::Kind::PretrainedIdentity;
      else throw ParseError("line " + std::to_string(line) + ": unknown init '" + value + "'");
    } else if (key == "hidden_layers") {
      cfg.solver.hidden_layers = static_cast<int>(parse_int(value, line));
    } else if (key == "neurons") {
      cfg.solver.neurons = static_cast<int>(parse_int(value, line));
    } else if (key == "learning_rate") {
      cfg.solver.adam.learning_rate = parse_double(value, line);
    } else if (key == "beta1") {
      cfg.solver.adam.beta1 = parse_double(value, line);
    } else if (key == "beta2") {
      cfg.solver.adam.beta2 = parse_double(value, line);
    } else if (key == "epsilon") {
      cfg.solver.adam.epsilon = parse_double(value, line);
    } else if (key == "batch_size") {
      cfg.solver.batch_size = static_cast<int>(parse_int(value, line));
    } else if (key == "epochs") {
      cfg.solver.epochs = static_cast<int>(parse_int(value, line));
    } else if (key == "seed") {
      cfg.solver.seed = static_cast<std::uint64_t>(parse_int(value, line));
      cfg.solver.init.seed = cfg.solver.seed;
    } else if (key == "eval_interval") {
      cfg.solver.eval_interval = static_cast<int>(parse_int(value, line));
    } else if (key == "lambda") {
      cfg.solver.lambda = parse_double(value, line);
    } else if (key == "boundary_batch_size") {
      cfg.solver.boundary_batch_size = static_cast<int>(parse_int(value, line));
    } else if (key == "pretrain_steps") {
      cfg.solver.init.pretrain_steps = static_cast<int>(parse_int(value, line));
    } else if (key == "grid_resolution") {
      cfg.solver.grid_resolution = static_cast<int>(parse_int(value, line));
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "dump_samples") {
      cfg.dump_samples = parse_bool(value, line);
    } else {
      throw ValidationError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  if (cfg.problem.empty() && cfg.geometry_file.empty())
    throw ValidationError("config: either 'problem' or 'geometry_file' is required");
  if (!cfg.problem.empty() && !cfg.geometry_file.empty())
    throw ValidationError("config: 'problem' and 'geometry_file' are mutually exclusive");
  cfg.solver.validate();
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_echo(const RunConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  if (!cfg.problem.empty()) out << "problem = " << cfg.problem << "\n";
  if (!cfg.geometry_file.empty()) {
    out << "geometry_file = " << cfg.geometry_file << "\n";
    out << "source_constant = " << cfg.source_constant << "\n";
    if (!cfg.inline_dirichlet_edges.empty()) {
      out << "inline_dirichlet_edges =";
      for (Edge e : cfg.inline_dirichlet_edges) out << " " << edge_name(e);
      out << "\n";
    }
  }
  out << "mode = " << (cfg.solver.mode == Mode::DeepNurbs ? "deep_nurbs" : "deep_ritz") << "\n";
  out << "hidden_layers = " << cfg.solver.hidden_layers << "\n";
  out << "neurons = " << cfg.solver.neurons << "\n";
  out << "activation = "
      << (cfg.solver.activation == Activation::Relu3 ? "relu3" : "tanh") << "\n";
  out << "init = "
      << (cfg.solver.init.kind == InitScheme::Kind::FanInUniform ? "fan_in"
                                                                  : "pretrained_identity")
      << "\n";
  out << "pretrain_steps = " << cfg.solver.init.pretrain_steps << "\n";
  out << "learning_rate = " << cfg.solver.adam.learning_rate << "\n";
  out << "beta1 = " << cfg.solver.adam.beta1 << "\n";
  out << "beta2 = " << cfg.solver.adam.beta2 << "\n";
  out << "epsilon = " << cfg.solver.adam.epsilon << "\n";
  out << "batch_size = " << cfg.solver.batch_size << "\n";
  out << "epochs = " << cfg.solver.epochs << "\n";
  out << "seed = " << cfg.solver.seed << "\n";
  out << "eval_interval = " << cfg.solver.eval_interval << "\n";
  out << "lambda = " << cfg.solver.lambda << "\n";
  out << "boundary_batch_size = " << cfg.solver.boundary_batch_size << "\n";
  out << "grid_resolution = " << cfg.solver.grid_resolution << "\n";
  out << "output_dir = " << cfg.output_dir << "\n";
  out << "dump_samples = " << (cfg.dump_samples ? "true" : "false") << "\n";
  return out.str();
}

ProblemSpec RunConfig::make_problem() const {
  if (!problem.empty()) return problem_by_name(problem);
  ProblemSpec spec;
  spec.name = "inline:" + geometry_file;
  spec.geometry = std::make_shared<ControlNet>(load_control_net(geometry_file));
  spec.dirichlet_edges = inline_dirichlet_edges.empty()
                             ? std::vector<Edge>{Edge::Xi1Min, Edge::Xi1Max, Edge::Xi2Min,
                                                 Edge::Xi2Max}
                             : inline_dirichlet_edges;
  spec.phi = build_admissible_scalar(spec.geometry, spec.dirichlet_edges,
                                     InteriorFill::Const(1.0));
  const double c = source_constant;
  spec.source = [c](double, double) { return c; };
  spec.reference_kind = ReferenceKind::None;
  return spec;
}

void save_control_net(const ControlNet& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_control_net: cannot open " + path);
  out.precision(17);
  out << "dimension " << net.dim() << "\n";
  if (net.physical_dim() != net.dim())
    out << "point_dimension " << net.physical_dim() << "\n";
  for (int d = 0; d < net.dim(); ++d) {
    out << "degree" << (d + 1) << " " << net.kvs[static_cast<size_t>(d)].degree << "\n";
    out << "knots" << (d + 1);
    for (double k : net.kvs[static_cast<size_t>(d)].knots) out << " " << k;
    out << "\n";
  }
  out << "points\n";
  for (int g = 0; g < net.grid_size(); ++g) {
    for (int a = 0; a < net.physical_dim(); ++a)
      out << (a ? " " : "")
          << net.points[static_cast<size_t>(g * net.physical_dim() + a)];
    out << "\n";
  }
  out << "weights\n";
  for (double w : net.weights) out << w << "\n";
}

ControlNet load_control_net(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("load_control_net: cannot open " + path);
  std::string tok;
  if (!(in >> tok) || tok != "dimension") throw ParseError(path + ": expected 'dimension'");
  int dim = 0;
  if (!(in >> dim) || dim < 1 || dim > 3) throw ParseError(path + ": bad dimension");
  ControlNet net;
  net.kvs.resize(static_cast<size_t>(dim));
  for (int d = 0; d < dim; ++d) {
    const std::string want_deg = "degree" + std::to_string(d + 1);
    if (!(in >> tok)) throw ParseError(path + ": expected '" + want_deg + "'");
    if (d == 0 && tok == "point_dimension") {
      if (!(in >> net.point_dim)) throw ParseError(path + ": bad point_dimension");
      if (!(in >> tok)) throw ParseError(path + ": expected '" + want_deg + "'");
    }
    if (tok != want_deg) throw ParseError(path + ": expected '" + want_deg + "'");
    if (!(in >> net.kvs[static_cast<size_t>(d)].degree))
      throw ParseError(path + ": bad degree");
    const std::string want_knots = "knots" + std::to_string(d + 1);
    if (!(in >> tok) || tok != want_knots)
      throw ParseError(path + ": expected '" + want_knots + "'");
    // Knots run until the next keyword; read doubles greedily.
    double v;
    while (in >> v) net.kvs[static_cast<size_t>(d)].knots.push_back(v);
    in.clear();
  }
  if (!(in >> tok) || tok != "points") throw ParseError(path + ": expected 'points'");
  {
    double v;
    while (in >> v) net.points.push_back(v);
    in.clear();
  }
  if (!(in >> tok) || tok != "weights") throw ParseError(path + ": expected 'weights'");
  {
    double v;
    while (in >> v) net.weights.push_back(v);
  }
  validate_control_net(net);
  return net;
}

}  // namespace dn
