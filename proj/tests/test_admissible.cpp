#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>

#include "deepnurbs/admissible.hpp"
#include "deepnurbs/errors.hpp"
#include "deepnurbs/knots.hpp"

using dn::AdmissibleScalarField;
using dn::ControlNet;
using dn::Edge;
using dn::Vec3;

namespace {

std::shared_ptr<ControlNet> square_net(int degree, int nb) {
  auto net = std::make_shared<ControlNet>();
  net->kvs = {dn::make_open_knot_vector(degree, nb),
              dn::make_open_knot_vector(degree, nb)};
  net->points.resize(static_cast<size_t>(nb * nb * 2));
  net->weights.assign(static_cast<size_t>(nb * nb), 1.0);
  const auto& kv = net->kvs[0];
  std::vector<double> g(static_cast<size_t>(nb));
  for (int i = 0; i < nb; ++i) {
    double s = 0.0;
    for (int j = 1; j <= degree; ++j) s += kv.knots[static_cast<size_t>(i + j)];
    g[static_cast<size_t>(i)] = s / degree;
  }
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) {
      const int f = net->flat(i, j);
      net->points[static_cast<size_t>(f * 2)] = g[static_cast<size_t>(i)];
      net->points[static_cast<size_t>(f * 2 + 1)] = g[static_cast<size_t>(j)];
    }
  return net;
}

const std::vector<Edge> kAllEdges{Edge::Xi1Min, Edge::Xi1Max, Edge::Xi2Min,
                                  Edge::Xi2Max};

}  // namespace

TEST_CASE("constant coefficients away from the boundary reproduce one in the interior limit") {
  // With all coefficients one and unit weights, phi is the partition of
  // unity, identically one everywhere.
  auto geo = square_net(2, 5);
  AdmissibleScalarField field{geo,
                              std::vector<double>(static_cast<size_t>(geo->grid_size()), 1.0),
                              {}};
  for (double a : {0.0, 0.3, 1.0})
    for (double b : {0.1, 0.5, 1.0})
      CHECK(dn::eval_phi(field, {a, b, 0.0}) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("boundary values are bitwise zero on Dirichlet edges") {
  auto geo = square_net(2, 6);
  auto field = dn::build_admissible_scalar(geo, kAllEdges, dn::InteriorFill::Random(99));
  for (int i = 0; i <= 32; ++i) {
    const double t = i / 32.0;
    CHECK(dn::eval_phi(field, {0.0, t, 0.0}) == 0.0);
    CHECK(dn::eval_phi(field, {1.0, t, 0.0}) == 0.0);
    CHECK(dn::eval_phi(field, {t, 0.0, 0.0}) == 0.0);
    CHECK(dn::eval_phi(field, {t, 1.0, 0.0}) == 0.0);
  }
  CHECK(dn::eval_phi(field, {0.5, 0.5, 0.0}) > 0.0);
}

TEST_CASE("subset of Dirichlet edges leaves the others free") {
  auto geo = square_net(2, 5);
  auto field = dn::build_admissible_scalar(geo, {Edge::Xi1Min, Edge::Xi2Max},
                                           dn::InteriorFill::Const(1.0));
  CHECK(dn::eval_phi(field, {0.0, 0.4, 0.0}) == 0.0);
  CHECK(dn::eval_phi(field, {0.7, 1.0, 0.0}) == 0.0);
  CHECK(dn::eval_phi(field, {1.0, 0.4, 0.0}) > 0.0);
  CHECK(dn::eval_phi(field, {0.6, 0.0, 0.0}) > 0.0);
}

TEST_CASE("builder rejects an all-zero coefficient grid") {
  auto geo = square_net(1, 2);
  // Degree 1, 2x2 grid: zeroing all four edges empties the grid.
  CHECK_THROWS_AS(dn::build_admissible_scalar(geo, kAllEdges, dn::InteriorFill::Const(1.0)),
                  dn::ValidationError);
}

TEST_CASE("random interior fill is deterministic and strictly positive") {
  auto geo = square_net(2, 6);
  auto f1 = dn::build_admissible_scalar(geo, kAllEdges, dn::InteriorFill::Random(7));
  auto f2 = dn::build_admissible_scalar(geo, kAllEdges, dn::InteriorFill::Random(7));
  auto f3 = dn::build_admissible_scalar(geo, kAllEdges, dn::InteriorFill::Random(8));
  CHECK(f1.coefficients == f2.coefficients);
  CHECK(f1.coefficients != f3.coefficients);
  bool interior_positive = true;
  for (int i = 1; i < 5; ++i)
    for (int j = 1; j < 5; ++j) {
      const double c = f1.coefficients[static_cast<size_t>(geo->flat(i, j))];
      if (!(c > 0.0 && c <= 1.0)) interior_positive = false;
    }
  CHECK(interior_positive);
}

TEST_CASE("validation report") {
  auto geo = square_net(2, 5);
  auto good = dn::build_admissible_scalar(geo, kAllEdges, dn::InteriorFill::Const(1.0));
  auto rep = dn::validate_admissibility(good, 50);
  CHECK(rep.pass);
  CHECK(rep.max_boundary_abs < 1e-12);

  AdmissibleScalarField bad = good;
  bad.coefficients[static_cast<size_t>(geo->flat(0, 2))] = 0.5;
  rep = dn::validate_admissibility(bad, 50);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_boundary_abs > 1e-3);
}

TEST_CASE("gradient matches finite differences in physical space") {
  auto geo = square_net(2, 5);
  // Identity geometry: physical and parametric coordinates coincide, so the
  // physical gradient can be checked by parametric finite differences.
  auto field = dn::build_admissible_scalar(geo, kAllEdges, dn::InteriorFill::Random(3));
  const double h = 1e-6;
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> in(0.05, 0.95);
  for (int t = 0; t < 30; ++t) {
    const double a = in(eng), b = in(eng);
    const Vec3 g = dn::grad_phi_physical(field, {a, b, 0.0});
    const double fx = (dn::eval_phi(field, {a + h, b, 0.0}) -
                       dn::eval_phi(field, {a - h, b, 0.0})) / (2 * h);
    const double fy = (dn::eval_phi(field, {a, b + h, 0.0}) -
                       dn::eval_phi(field, {a, b - h, 0.0})) / (2 * h);
    CHECK(g[0] == doctest::Approx(fx).epsilon(1e-6).scale(1.0));
    CHECK(g[1] == doctest::Approx(fy).epsilon(1e-6).scale(1.0));
    const auto ps = dn::eval_phi_with_grad(field, {a, b, 0.0});
    CHECK(ps.value == dn::eval_phi(field, {a, b, 0.0}));
    CHECK(ps.grad[0] == doctest::Approx(g[0]).epsilon(1e-13));
    CHECK(ps.grad[1] == doctest::Approx(g[1]).epsilon(1e-13));
  }
}

TEST_CASE("gradient under an affine stretch rescales correctly") {
  auto geo = square_net(2, 5);
  auto stretched = std::make_shared<ControlNet>(*geo);
  for (size_t i = 0; i < stretched->points.size(); i += 2) stretched->points[i] *= 2.0;
  auto f0 = dn::build_admissible_scalar(geo, kAllEdges, dn::InteriorFill::Random(11));
  auto f1 = f0;
  f1.geometry = stretched;
  const Vec3 g0 = dn::grad_phi_physical(f0, {0.3, 0.6, 0.0});
  const Vec3 g1 = dn::grad_phi_physical(f1, {0.3, 0.6, 0.0});
  CHECK(g1[0] == doctest::Approx(g0[0] / 2.0).epsilon(1e-13));
  CHECK(g1[1] == doctest::Approx(g0[1]).epsilon(1e-13));
}

TEST_CASE("singular jacobian raises") {
  auto geo = std::make_shared<ControlNet>();
  geo->kvs = {dn::make_open_knot_vector(1, 2), dn::make_open_knot_vector(1, 2)};
  geo->points = {0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0};
  geo->weights = {1.0, 1.0, 1.0, 1.0};
  auto field = dn::build_admissible_scalar(geo, {Edge::Xi2Min}, dn::InteriorFill::Const(1.0));
  CHECK_THROWS_AS(dn::grad_phi_physical(field, {0.0, 0.5, 0.0}), dn::SingularJacobian);
  CHECK_NOTHROW(dn::grad_phi_physical(field, {0.9, 0.5, 0.0}));
}

TEST_CASE("vector field reproduces linear boundary data") {
  auto geo = square_net(1, 3);
  dn::AdmissibleVectorField zeta;
  zeta.geometry = geo;
  zeta.coefficients.resize(static_cast<size_t>(geo->grid_size() * 2));
  // zeta = (x2, -x1) via the identity control structure.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int f = geo->flat(i, j);
      zeta.coefficients[static_cast<size_t>(f * 2)] = j / 2.0;
      zeta.coefficients[static_cast<size_t>(f * 2 + 1)] = -i / 2.0;
    }
  const Vec3 v = dn::eval_zeta(zeta, {0.25, 0.75, 0.0});
  CHECK(v[0] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(v[1] == doctest::Approx(-0.25).epsilon(1e-14));
}

TEST_CASE("rational weights: phi reproduces a constant on a weighted net") {
  auto geo = square_net(2, 5);
  std::mt19937_64 eng(21);
  std::uniform_real_distribution<double> wdist(0.5, 2.0);
  auto weighted = std::make_shared<ControlNet>(*geo);
  for (auto& w : weighted->weights) w = wdist(eng);
  AdmissibleScalarField field{weighted,
                              std::vector<double>(static_cast<size_t>(geo->grid_size()), 3.25),
                              {}};
  for (double a : {0.1, 0.5, 0.9})
    for (double b : {0.2, 0.6, 1.0})
      CHECK(dn::eval_phi(field, {a, b, 0.0}) == doctest::Approx(3.25).epsilon(1e-13));
}
