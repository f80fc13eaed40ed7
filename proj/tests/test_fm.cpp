#include <doctest.h>

#include "properties.hpp"
#include "unirate/fm.hpp"

using namespace unirate;

namespace {

LinearInequality row(std::map<std::string, Rational> lhs, Sense s, AffineRateExpr rhs, bool strict = true) {
  LinearInequality r;
  r.lhs = std::move(lhs);
  r.sense = s;
  r.rhs = std::move(rhs);
  r.strict = strict;
  return r;
}

AffineRateExpr sym(const std::string& n, double c = 0.0) {
  AffineRateExpr e = AffineRateExpr::symbol(n);
  e.constant = c;
  return e;
}

}  // namespace

TEST_CASE("single pair combination") {
  InequalitySystem s;
  s.variables = {"r"};
  s.rows.push_back(row({{"r", 1}}, Sense::Greater, sym("R")));
  s.rows.push_back(row({{"r", 1}}, Sense::Less, AffineRateExpr(0.7)));
  RateRegion reg = fourier_motzkin(s, {"r"});
  REQUIRE(reg.rows.size() == 1);
  CHECK(reg.rows[0].str() == "R < 0.7000");
  CHECK(reg.variables == std::vector<std::string>{"R"});
}

TEST_CASE("mac system projects to three rows") {
  InequalitySystem s;
  s.variables = {"r1", "r2"};
  s.rows.push_back(row({{"r1", 1}}, Sense::Greater, sym("R1")));
  s.rows.push_back(row({{"r2", 1}}, Sense::Greater, sym("R2")));
  s.rows.push_back(row({{"r1", 1}}, Sense::Less, AffineRateExpr(1.0)));
  s.rows.push_back(row({{"r2", 1}}, Sense::Less, AffineRateExpr(1.0)));
  s.rows.push_back(row({{"r1", 1}, {"r2", 1}}, Sense::Less, AffineRateExpr(1.5)));
  RateRegion reg = fourier_motzkin(s, {"r1", "r2"});
  REQUIRE(reg.rows.size() == 3);
  CHECK(reg.rows[0].str() == "R1 < 1.0000");
  CHECK(reg.rows[1].str() == "R1 + R2 < 1.5000");
  CHECK(reg.rows[2].str() == "R2 < 1.0000");
}

TEST_CASE("infeasible system is flagged") {
  InequalitySystem s;
  s.variables = {"r"};
  s.rows.push_back(row({{"r", 1}}, Sense::Greater, AffineRateExpr(2.0)));
  s.rows.push_back(row({{"r", 1}}, Sense::Less, AffineRateExpr(1.0)));
  RateRegion reg = fourier_motzkin(s, {"r"});
  CHECK(reg.infeasible);
  REQUIRE(reg.rows.size() == 1);
  CHECK(reg.rows[0].lhs.empty());
  CHECK(reg.rows[0].rhs.constant < 0);
}

TEST_CASE("touching bounds survive in closure") {
  InequalitySystem s;
  s.variables = {"r"};
  s.rows.push_back(row({{"r", 1}}, Sense::Greater, AffineRateExpr(1.0)));
  s.rows.push_back(row({{"r", 1}}, Sense::Less, AffineRateExpr(1.0 - 1e-12)));
  CHECK_FALSE(fourier_motzkin(s, {"r"}).infeasible);
}

TEST_CASE("strictness propagates") {
  InequalitySystem s;
  s.variables = {"r"};
  s.rows.push_back(row({{"r", 1}}, Sense::Greater, sym("R"), false));
  s.rows.push_back(row({{"r", 1}}, Sense::Less, AffineRateExpr(1.0), false));
  RateRegion weak = fourier_motzkin(s, {"r"});
  REQUIRE(weak.rows.size() == 1);
  CHECK_FALSE(weak.rows[0].strict);
  s.rows[0].strict = true;
  RateRegion strict = fourier_motzkin(s, {"r"});
  CHECK(strict.rows[0].strict);
}

TEST_CASE("duplicates keep the tighter constant") {
  InequalitySystem s;
  s.variables = {};
  s.rows.push_back(row({{"R", 2}}, Sense::Less, AffineRateExpr(4.0)));
  s.rows.push_back(row({{"R", 1}}, Sense::Less, AffineRateExpr(1.5)));
  RateRegion reg = to_region(fourier_motzkin_stages(s, {}).projected);
  REQUIRE(reg.rows.size() == 1);
  CHECK(reg.rows[0].str() == "R < 1.5000");
}

TEST_CASE("to_region scales to coprime integers and flips all-negative rows") {
  InequalitySystem s;
  s.rows.push_back(row({{"a", Rational(1, 2)}, {"b", Rational(1, 3)}}, Sense::Less, AffineRateExpr(1.0)));
  s.rows.push_back(row({{"a", -1}}, Sense::Less, sym("b", -1.0)));
  RateRegion reg = to_region(s);
  REQUIRE(reg.rows.size() == 2);
  CHECK(reg.rows[0].str() == "3 a + 2 b < 6.0000");
  CHECK(reg.rows[1].str() == "a + b > 1.0000");
}

TEST_CASE("prune_numeric") {
  RateRegion r;
  r.rows.push_back(row({{"R", 1}}, Sense::Less, AffineRateExpr(1.0)));
  r.rows.push_back(row({{"R", 1}}, Sense::Less, AffineRateExpr(2.0)));
  RateRegion p = prune_numeric(r, {});
  REQUIRE(p.rows.size() == 1);
  CHECK(p.rows[0].str() == "R < 1.0000");

  RateRegion inc;
  inc.rows.push_back(row({{"R1", 1}}, Sense::Less, AffineRateExpr(1.0)));
  inc.rows.push_back(row({{"R2", 1}}, Sense::Less, AffineRateExpr(1.0)));
  inc.rows.push_back(row({{"R1", 1}, {"R2", 1}}, Sense::Less, AffineRateExpr(1.5)));
  CHECK(prune_numeric(inc, {}).rows.size() == 3);

  // R1 < 1 makes R1 + R2 < 0.5 imply it only with R >= 0
  RateRegion nn;
  nn.rows.push_back(row({{"R1", 1}}, Sense::Less, AffineRateExpr(1.0)));
  nn.rows.push_back(row({{"R1", 1}, {"R2", 1}}, Sense::Less, AffineRateExpr(0.5)));
  CHECK(prune_numeric(nn, {}, true).rows.size() == 1);
  CHECK(prune_numeric(nn, {}, false).rows.size() == 2);

  RateRegion bounded;
  bounded.rows.push_back(row({{"R", 1}}, Sense::Less, sym("C")));
  bounded.rows.push_back(row({{"R", 1}}, Sense::Less, AffineRateExpr(3.0)));
  RateRegion b = prune_numeric(bounded, {{"C", 2.0}});
  REQUIRE(b.rows.size() == 1);
  CHECK(b.rows[0].rhs.constant == doctest::Approx(2.0));
}

TEST_CASE("projection agrees with an LP oracle and lifts back") {
  const props::FmStats st = props::fm_property(120, 200, 20261015);
  CHECK(st.systems == 120);
  CHECK(st.disagreements == 0);
  CHECK(st.lift_failures == 0);
  CHECK(st.decisive >= 120 * 200);
  CHECK(st.feasible_points > 1000);
}
