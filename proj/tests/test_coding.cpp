#include <doctest.h>

#include <algorithm>

#include "properties.hpp"
#include "unirate/catalog.hpp"
#include "unirate/coding.hpp"

using namespace unirate;

namespace {

bool has_prefix(const std::vector<std::string>& issues, const std::string& prefix) {
  return std::any_of(issues.begin(), issues.end(), [&](const std::string& s) { return s.rfind(prefix, 0) == 0; });
}

}  // namespace

TEST_CASE("index set helpers") {
  CHECK(index_union({1, 4}, {2, 4, 7}) == IndexSet{1, 2, 4, 7});
  CHECK(index_minus({1, 2, 4, 7}, {2, 7}) == IndexSet{1, 4});
  CHECK(index_intersect({1, 2, 4}, {2, 3, 4}) == IndexSet{2, 4});
  CHECK(index_subset({2, 4}, {1, 2, 4}));
  CHECK(!index_subset({3}, {1, 2, 4}));
  CHECK(index_below({1, 3, 5, 8}, 5) == IndexSet{1, 3});
  CHECK(index_below({1, 3}, 1).empty());
}

TEST_CASE("omega prime recognition") {
  CHECK(is_omega_prime(build("mac-binary-adder").omega));
  CHECK(is_omega_prime(build("wiretap-system").omega));
  CHECK(!is_omega_prime(build("nnc-unfold").omega));
  CodingParams w = build("mac-binary-adder").omega;
  w.codebooks[1].gamma = {1, 2};
  CHECK(!is_omega_prime(w));
}

TEST_CASE("validate_params prefixes each violation with its constraint") {
  const CatalogInstance mac = build("mac-binary-adder");
  const Admn& net = mac.network;
  CHECK(validate_params(mac.omega, net).empty());
  auto with = [&](auto edit) {
    CodingParams w = mac.omega;
    edit(w);
    return validate_params(w, net);
  };
  CHECK(has_prefix(with([](CodingParams& w) { w.mu = 0; }), "range:"));
  CHECK(has_prefix(with([](CodingParams& w) { w.codebooks[0].gamma = {3}; }), "range:"));
  CHECK(has_prefix(with([](CodingParams& w) { w.nodes[2].decode = {2, 1}; }), "range:"));
  CHECK(has_prefix(with([](CodingParams& w) { w.nodes.pop_back(); }), "shape:"));
  CHECK(has_prefix(with([](CodingParams& w) { w.nodes[0].decode = {2}; }), "membership:"));
  CHECK(has_prefix(with([](CodingParams& w) { w.nodes[1].compress = {1, 2}; }), "membership:"));
  CHECK(has_prefix(with([](CodingParams& w) { w.nodes[2].nonunique = {1}; }), "membership:"));
  CHECK(has_prefix(with([](CodingParams& w) { w.codebooks[1].gamma = {1, 2}; }), "A-1:"));
  CHECK(has_prefix(with([](CodingParams& w) { w.codebooks[0].superpose = {2}; }), "A-2:"));
  CHECK(has_prefix(with([](CodingParams& w) { w.codebooks[1].superpose = {1}; }), "A-2:"));
  CHECK(has_prefix(with([](CodingParams& w) {
                     w.codebooks[1].superpose = {1};
                     w.codebooks[1].gamma = {1, 2};
                     w.nodes[2].decode = {2};
                   }),
                   "A-3:"));
  CHECK(has_prefix(with([](CodingParams& w) { w.codebooks[0].factors.push_back("nowhere"); }), "factor:"));
  CHECK(has_prefix(with([](CodingParams& w) { w.aux.push_back(Factor::concrete("X1", 2)); }), "factor:"));
  CHECK(has_prefix(with([](CodingParams& w) { w.nodes[1].kernels[0].outputs = {"V1"}; }), "kernel:"));
  CHECK(has_prefix(with([](CodingParams& w) { w.nodes[0].kernels[0].table = {0.5, 0.6}; }), "kernel:"));
  CHECK(has_prefix(with([](CodingParams& w) { w.nodes[0].maps.clear(); }), "shape:"));
  CHECK(has_prefix(with([](CodingParams& w) { w.nodes[0].maps.push_back(w.nodes[0].maps[0]); }), "shape:"));
}

TEST_CASE("induced joint of the adder") {
  const CatalogInstance mac = build("mac-binary-adder");
  const Induced ind = induce(mac.omega, mac.network);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int y = 0; y < 3; ++y)
        CHECK(ind.joint.probability({{"X1", a}, {"X2", b}, {"Y3", y}}) == doctest::Approx(y == a + b ? 0.25 : 0.0));
  // X1 is an exact copy of V1
  CHECK(ind.joint.probability({{"X1", 0}, {"V1", 1}}) == doctest::Approx(0.0));
  REQUIRE(ind.observation.size() == 3);
  CHECK(std::count(ind.observation[2].begin(), ind.observation[2].end(), "Y3") == 1);
  CHECK(ind.joint.entropy({"Y3"}).constant == doctest::Approx(1.5));
  CHECK(ind.joint.entropy({"M1"}).coeff("R1") == Rational(1));
}

TEST_CASE("target match detects kernel and equality drift") {
  const CatalogInstance mac = build("mac-binary-adder");
  CHECK(check_target_match(mac.omega, mac.network).matched());
  CodingParams w = mac.omega;
  w.nodes[0].kernels[0].table = {0.6, 0.4};
  const TargetMatch tm = check_target_match(w, mac.network);
  CHECK(!tm.matched());
  // p(0, 0, 0) moves from 0.25 to 0.3
  CHECK(tm.max_deviation >= 0.05 - 1e-12);
  w = mac.omega;
  w.nodes[2].maps[0].alias = "M2";
  CHECK(!check_target_match(w, mac.network).mismatches.empty());
}

TEST_CASE("catalog omegas are admissible and match their targets") {
  for (const auto& p : props::catalog_problems()) {
    INFO(p.label);
    CHECK(validate_params(p.omega, p.network).empty());
    const TargetMatch tm = check_target_match(p.omega, p.network);
    CHECK(tm.max_deviation <= 1e-9);
    CHECK(tm.mismatches.empty());
  }
}

TEST_CASE("property: every single set-membership mutation is valid or names its constraint") {
  int total = 0;
  for (const auto& p : props::catalog_problems()) {
    const props::FuzzStats st = props::omega_fuzz(p);
    INFO(p.label);
    for (const auto& s : st.unnamed) INFO(s);
    CHECK(st.unnamed.empty());
    CHECK(st.valid + st.rejected == st.mutations);
    CHECK(st.rejected > 0);
    total += st.mutations;
  }
  CHECK(total > 1000);
}
