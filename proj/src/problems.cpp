#include "deepnurbs/problems.hpp"

#include <cmath>
#include <string>

#include "deepnurbs/errors.hpp"
#include "deepnurbs/sampler.hpp"

namespace dn {

namespace {

constexpr double kPi = 3.14159265358979323846;

ControlNet tensor_net(KnotVector kv1, KnotVector kv2) {
  ControlNet net;
  net.kvs = {std::move(kv1), std::move(kv2)};
  net.points.assign(static_cast<size_t>(net.grid_size()) * 2, 0.0);
  net.weights.assign(static_cast<size_t>(net.grid_size()), 1.0);
  return net;
}

void set_point(ControlNet& net, int i, int j, double x, double y, double w = 1.0) {
  const auto g = static_cast<size_t>(net.flat(i, j));
  net.points[g * 2] = x;
  net.points[g * 2 + 1] = y;
  net.weights[g] = w;
}

std::vector<Edge> all_edges() {
  return {Edge::Xi1Min, Edge::Xi1Max, Edge::Xi2Min, Edge::Xi2Max};
}

double greville(const KnotVector& kv, int i) {
  double s = 0.0;
  for (int j = 1; j <= kv.degree; ++j) s += kv.knots[static_cast<size_t>(i + j)];
  return s / kv.degree;
}

// Replaces the interior coefficients with a scaled tensor bubble: per
// Dirichlet direction a parabola over the Greville abscissae (one-sided where
// only one edge is clamped). Shaping phi like a boundary-distance product
// keeps the network's correction factor near constant, which conditions the
// optimization far better than a flat fill. Directions without Dirichlet
// edges stay constant, so seam columns remain equal.
void bubble_coefficients(AdmissibleScalarField& phi, double scale) {
  const ControlNet& net = *phi.geometry;
  bool d1min = false, d1max = false, d2min = false, d2max = false;
  for (Edge e : phi.dirichlet_edges) {
    d1min |= e == Edge::Xi1Min;
    d1max |= e == Edge::Xi1Max;
    d2min |= e == Edge::Xi2Min;
    d2max |= e == Edge::Xi2Max;
  }
  auto factor = [](double g, bool lo, bool hi) {
    if (lo && hi) return 4.0 * g * (1.0 - g);
    if (lo) return g;
    if (hi) return 1.0 - g;
    return 1.0;
  };
  for (int i = 0; i < net.kvs[0].num_basis(); ++i)
    for (int j = 0; j < net.kvs[1].num_basis(); ++j) {
      const double f1 = factor(greville(net.kvs[0], i), d1min, d1max);
      const double f2 = factor(greville(net.kvs[1], j), d2min, d2max);
      phi.coefficients[static_cast<size_t>(net.flat(i, j))] = scale * f1 * f2;
    }
}

constexpr double kBubbleScale = 8.0;

}  // namespace

Vec3 edge_point(Edge e, double t) {
  switch (e) {
    case Edge::Xi1Min: return {0.0, t, 0.0};
    case Edge::Xi1Max: return {1.0, t, 0.0};
    case Edge::Xi2Min: return {t, 0.0, 0.0};
    default: return {t, 1.0, 0.0};
  }
}

ManufacturedPair manufactured_pair(const ScalarField2& u_star, const ScalarField2& laplacian,
                                   const std::function<Vec3(const Vec3&)>& sample_point,
                                   int checks) {
  Rng rng(0x5eedULL);
  const double h = 1e-4;
  for (int c = 0; c < checks; ++c) {
    const Vec3 xi{0.1 + 0.8 * rng.uniform01(), 0.1 + 0.8 * rng.uniform01(), 0.0};
    const Vec3 x = sample_point(xi);
    const double lap_num = (u_star(x[0] + h, x[1]) + u_star(x[0] - h, x[1]) +
                            u_star(x[0], x[1] + h) + u_star(x[0], x[1] - h) -
                            4.0 * u_star(x[0], x[1])) /
                           (h * h);
    const double lap_cf = laplacian(x[0], x[1]);
    if (std::abs(lap_num - lap_cf) > 1e-4 * std::max(1.0, std::abs(lap_cf)))
      throw ConsistencyCheckFailed(
          "manufactured_pair: closed-form Laplacian disagrees with second differences at (" +
          std::to_string(x[0]) + ", " + std::to_string(x[1]) + ")");
  }
  ManufacturedPair pair;
  pair.u_star = u_star;
  pair.f = [laplacian](double x, double y) { return -laplacian(x, y); };
  return pair;
}

ProblemSpec unit_square_problem() {
  // Identity map via Greville control points of a biquadratic patch; the
  // extra interior basis functions give phi a nonempty interior block.
  const KnotVector kv = make_open_knot_vector(2, 5);
  auto greville = [&](int i) {
    return 0.5 * (kv.knots[static_cast<size_t>(i + 1)] + kv.knots[static_cast<size_t>(i + 2)]);
  };
  ControlNet net = tensor_net(kv, kv);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) set_point(net, i, j, greville(i), greville(j));
  validate_control_net(net);

  ProblemSpec spec;
  spec.name = "unit_square";
  spec.geometry = std::make_shared<ControlNet>(std::move(net));
  spec.dirichlet_edges = all_edges();
  spec.phi = build_admissible_scalar(spec.geometry, spec.dirichlet_edges,
                                     InteriorFill::Const(1.0));
  bubble_coefficients(spec.phi, kBubbleScale);

  const ScalarField2 u_star = [](double x, double y) {
    return std::sin(kPi * x) * std::sin(kPi * y);
  };
  const ScalarField2 lap = [](double x, double y) {
    return -2.0 * kPi * kPi * std::sin(kPi * x) * std::sin(kPi * y);
  };
  const auto pair = manufactured_pair(u_star, lap, [&](const Vec3& xi) { return xi; });
  spec.source = pair.f;
  spec.exact = pair.u_star;
  spec.reference_kind = ReferenceKind::Manufactured;
  return spec;
}

ProblemSpec slit_square_problem() {
  // Fold the patch around the slit: xi1 runs from the collapsed tip at the
  // origin to the outer square, xi2 sweeps both slit faces and the
  // perimeter. Only the innermost radius is clustered: a mild tip bias keeps
  // |det J| (and hence the MC sample weights) nearly uniform away from the
  // tip, which matters more for optimizer conditioning than heavy clustering.
  const std::vector<double> radii = {0.0, 0.02, 0.25, 0.45, 0.65, 0.85, 1.0};
  const double perim[9][2] = {{1, 0}, {1, 1},  {0, 1},  {-1, 1}, {-1, 0},
                              {-1, -1}, {0, -1}, {1, -1}, {1, 0}};
  ControlNet net = tensor_net(make_open_knot_vector(2, static_cast<int>(radii.size())),
                              make_open_knot_vector(1, 9));
  for (size_t i = 0; i < radii.size(); ++i)
    for (int j = 0; j < 9; ++j)
      set_point(net, static_cast<int>(i), j, radii[i] * perim[j][0], radii[i] * perim[j][1]);
  validate_control_net(net);

  ProblemSpec spec;
  spec.name = "slit_square";
  spec.geometry = std::make_shared<ControlNet>(std::move(net));
  spec.dirichlet_edges = all_edges();  // tip, outer square, both slit faces
  spec.phi = build_admissible_scalar(spec.geometry, spec.dirichlet_edges,
                                     InteriorFill::Const(1.0));
  // Scale 1 here: the collapsed-edge parameterization already concentrates
  // phi variation at the tip, and a large bubble amplitude flattens the
  // energy landscape on this geometry.
  bubble_coefficients(spec.phi, 1.0);
  spec.source = [](double, double) { return 1.0; };
  spec.reference_kind = ReferenceKind::FdOracle;
  spec.fd = std::make_shared<FdSolution>(fd_poisson_oracle(1.0 / 128.0));
  const auto fd = spec.fd;
  spec.exact = [fd](double x, double y) { return fd->interpolate(x, y); };
  return spec;
}

ProblemSpec annulus_problem() {
  const double r1 = 0.2, r2 = 2.0;
  const double w_mid = std::sqrt(2.0) / 2.0;
  // Exact quarter circle: single rational quadratic segment, middle weight
  // sqrt(2)/2; radial direction is a plain quadratic B-spline in r.
  const double arc[3][2] = {{1, 0}, {1, 1}, {0, 1}};
  const double arc_w[3] = {1.0, w_mid, 1.0};
  const int nr = 6;
  ControlNet net = tensor_net(make_open_knot_vector(2, nr), make_open_knot_vector(2, 3));
  for (int i = 0; i < nr; ++i) {
    const double r = r1 + (r2 - r1) * static_cast<double>(i) / (nr - 1);
    for (int j = 0; j < 3; ++j)
      set_point(net, i, j, r * arc[j][0], r * arc[j][1], arc_w[j]);
  }
  validate_control_net(net);

  ProblemSpec spec;
  spec.name = "quarter_annulus";
  spec.geometry = std::make_shared<ControlNet>(std::move(net));
  spec.dirichlet_edges = all_edges();
  spec.phi = build_admissible_scalar(spec.geometry, spec.dirichlet_edges,
                                     InteriorFill::Const(1.0));
  bubble_coefficients(spec.phi, kBubbleScale);

  const double norm = 1.0 / ((r2 - r1) * (r2 - r1) / 4.0);
  const ScalarField2 u_star = [=](double x, double y) {
    const double r = std::hypot(x, y);
    const double t = std::atan2(y, x);
    return norm * (r - r1) * (r2 - r) * std::sin(2.0 * t);
  };
  // Polar Laplacian of g(r) sin(2t): (g'' + g'/r - 4 g / r^2) sin(2t).
  const ScalarField2 lap = [=](double x, double y) {
    const double r = std::hypot(x, y);
    const double t = std::atan2(y, x);
    const double g = (r - r1) * (r2 - r);
    const double gp = (r1 + r2) - 2.0 * r;
    const double gpp = -2.0;
    return norm * (gpp + gp / r - 4.0 * g / (r * r)) * std::sin(2.0 * t);
  };
  const auto geometry = spec.geometry;
  const auto pair = manufactured_pair(
      u_star, lap, [geometry](const Vec3& xi) { return eval_geometry(*geometry, xi); });
  spec.source = pair.f;
  spec.exact = pair.u_star;
  spec.reference_kind = ReferenceKind::Manufactured;
  return spec;
}

ProblemSpec square_with_hole_problem() {
  const double c = std::sqrt(2.0) / 2.0;
  const double s2 = std::sqrt(2.0);
  // Full circle as four 90-degree rational quadratic segments; the outer
  // ring carries collinear control points so the same angular basis traces
  // the square sides exactly.
  KnotVector kv_ang;
  kv_ang.degree = 2;
  kv_ang.knots = {0, 0, 0, 0.25, 0.25, 0.5, 0.5, 0.75, 0.75, 1, 1, 1};
  const double circle[9][2] = {{c, -c}, {s2, 0},  {c, c},  {0, s2},  {-c, c},
                               {-s2, 0}, {-c, -c}, {0, -s2}, {c, -c}};
  const double square[9][2] = {{4, -4}, {4, 0},  {4, 4},  {0, 4},  {-4, 4},
                               {-4, 0}, {-4, -4}, {0, -4}, {4, -4}};
  const double w_ang[9] = {1, c, 1, c, 1, c, 1, c, 1};
  const std::vector<double> blend = {0.0, 0.12, 0.3, 0.55, 0.8, 1.0};

  ControlNet net = tensor_net(make_open_knot_vector(2, static_cast<int>(blend.size())), kv_ang);
  for (size_t i = 0; i < blend.size(); ++i)
    for (int j = 0; j < 9; ++j) {
      const double t = blend[i];
      set_point(net, static_cast<int>(i), j, (1 - t) * circle[j][0] + t * square[j][0],
                (1 - t) * circle[j][1] + t * square[j][1], w_ang[j]);
    }
  validate_control_net(net);

  ProblemSpec spec;
  spec.name = "square_with_hole";
  spec.geometry = std::make_shared<ControlNet>(std::move(net));
  // The xi2 seam lies inside the domain; only hole and outer ring are
  // Dirichlet. The constant interior fill keeps phi single-valued across
  // the seam.
  spec.dirichlet_edges = {Edge::Xi1Min, Edge::Xi1Max};
  spec.phi = build_admissible_scalar(spec.geometry, spec.dirichlet_edges,
                                     InteriorFill::Const(1.0));
  // Scale 1: a tall bubble flattens the energy landscape on this large
  // domain; at unit scale a modest training budget reaches the
  // representation floor of the composite.
  bubble_coefficients(spec.phi, 1.0);

  // u* = k (x^2+y^2-1)(16-x^2)(16-y^2); k normalizes the max to ~1.
  double peak = 0.0;
  for (int i = 0; i <= 400; ++i)
    for (int j = 0; j <= 400; ++j) {
      const double x = -4.0 + 8.0 * i / 400.0;
      const double y = -4.0 + 8.0 * j / 400.0;
      if (x * x + y * y < 1.0) continue;
      peak = std::max(peak, (x * x + y * y - 1) * (16 - x * x) * (16 - y * y));
    }
  const double k = 1.0 / peak;
  const ScalarField2 u_star = [=](double x, double y) {
    return k * (x * x + y * y - 1) * (16 - x * x) * (16 - y * y);
  };
  const ScalarField2 lap = [=](double x, double y) {
    const double a = x * x + y * y - 1;
    const double b = 16 - x * x;
    const double cc = 16 - y * y;
    return k * (2 * cc * (b - a) - 8 * x * x * cc + 2 * b * (cc - a) - 8 * y * y * b);
  };
  const auto geometry = spec.geometry;
  const auto pair = manufactured_pair(
      u_star, lap, [geometry](const Vec3& xi) { return eval_geometry(*geometry, xi); });
  spec.source = pair.f;
  spec.exact = pair.u_star;
  spec.reference_kind = ReferenceKind::Manufactured;
  return spec;
}

ProblemSpec problem_by_name(const std::string& name) {
  if (name == "unit_square") return unit_square_problem();
  if (name == "slit_square") return slit_square_problem();
  if (name == "quarter_annulus") return annulus_problem();
  if (name == "square_with_hole") return square_with_hole_problem();
  throw ValidationError("unknown problem name: " + name);
}

}  // namespace dn
