#include <doctest.h>

#include <cmath>
#include <random>

#include "gauss_oracle.hpp"
#include "unirate/catalog.hpp"
#include "unirate/error.hpp"
#include "unirate/gaussian.hpp"

using namespace unirate;
using Eigen::MatrixXd;

using namespace gauss_oracle;

TEST_CASE("property: phi recursion equals the chain subset sum") {
  int blocks = 0;
  CHECK(phi_gap(2026, 60, &blocks) <= 1e-12);
  CHECK(blocks > 300);
}

TEST_CASE("property: joint covariance equals direct propagation") {
  CHECK(covariance_gap(77, 60) <= 1e-9);
}

TEST_CASE("point-to-point packing bound is half log of one plus snr") {
  const CatalogInstance inst = build("gaussian-point-to-point");
  const GaussianModel m(inst.agn, inst.gaussian);
  const InequalitySystem sys = gaussian_system(m);
  REQUIRE(sys.rows.size() == 2);
  int packing = 0;
  for (const auto& r : sys.rows)
    if (r.origin.kind == "packing") {
      ++packing;
      CHECK(std::abs(r.rhs.constant - 0.5 * std::log2(3.5)) <= 1e-9);
    }
  CHECK(packing == 1);
  const ObjectiveCheck oc = m.check_objective(inst.objective);
  CHECK(oc.pass);
  REQUIRE(oc.values.size() == 1);
  CHECK(oc.values[0] == doctest::Approx(2.5));
}

TEST_CASE("gaussian mac packing rows") {
  // Y3 = X1 + X2 + N(0,1), powers 1 and 3
  Instance in;
  in.agn.r = {0, 0, 1};
  in.agn.t = {1, 1, 0};
  in.agn.h[{3, 1}] = MatrixXd::Identity(1, 1);
  in.agn.h[{3, 2}] = MatrixXd::Identity(1, 1);
  in.agn.noise = {MatrixXd(0, 0), MatrixXd(0, 0), MatrixXd::Identity(1, 1)};
  CodingParams& w = in.params.skeleton;
  w.mu = 2;
  w.rate_names = {"r1", "r2"};
  w.codebooks = {{{}, {1}, {}}, {{}, {2}, {}}};
  w.nodes.resize(3);
  w.nodes[0].compress = {1};
  w.nodes[1].compress = {2};
  w.nodes[2].decode = {1, 2};
  in.params.dims = {1, 1};
  in.params.nodes.resize(3);
  const double p1 = 1, p2 = 3;
  in.params.nodes[0].lambda_u = MatrixXd::Constant(1, 1, p1);
  in.params.nodes[0].f = MatrixXd::Identity(1, 1);
  in.params.nodes[1].lambda_u = MatrixXd::Constant(1, 1, p2);
  in.params.nodes[1].f = MatrixXd::Identity(1, 1);
  const GaussianModel m(in.agn, in.params);
  const InequalitySystem sys = gaussian_system(m);
  std::map<std::map<std::string, Rational>, double> pack;
  for (const auto& r : sys.rows)
    if (r.origin.kind == "packing") pack[r.lhs] = r.rhs.constant;
  REQUIRE(pack.size() == 3);
  CHECK(std::abs(pack[{{"r1", 1}}] - 0.5 * std::log2(1 + p1)) <= 1e-9);
  CHECK(std::abs(pack[{{"r2", 1}}] - 0.5 * std::log2(1 + p2)) <= 1e-9);
  CHECK(std::abs(pack[{{"r1", 1}, {"r2", 1}}] - 0.5 * std::log2(1 + p1 + p2)) <= 1e-9);
}

TEST_CASE("logdet and shape errors") {
  CHECK(logdet2(MatrixXd(0, 0)) == 0.0);
  MatrixXd d = MatrixXd::Zero(2, 2);
  d(0, 0) = 2;
  d(1, 1) = 8;
  CHECK(logdet2(d) == doctest::Approx(4.0));
  MatrixXd s = MatrixXd::Ones(2, 2);
  try {
    logdet2(s);
    FAIL("singular matrix accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularCovariance);
  }
  std::mt19937_64 rng(5);
  Instance in = random_instance(rng);
  in.params.nodes[0].lambda_u = MatrixXd::Identity(7, 7);
  CHECK_THROWS_AS(GaussianModel(in.agn, in.params), Error);
}
