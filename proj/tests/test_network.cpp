#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "unirate/catalog.hpp"
#include "unirate/error.hpp"
#include "unirate/network.hpp"

using namespace unirate;

namespace {

bool has_prefix(const std::vector<std::string>& issues, const std::string& prefix) {
  return std::any_of(issues.begin(), issues.end(), [&](const std::string& s) { return s.rfind(prefix, 0) == 0; });
}

Kernel table_kernel(VarSet parents, std::vector<int> psizes, FactorId out, int osize, std::vector<double> table) {
  Kernel k;
  k.parents = std::move(parents);
  k.parent_sizes = std::move(psizes);
  k.outputs = {std::move(out)};
  k.output_sizes = {osize};
  k.table = std::move(table);
  return k;
}

// the joint of the network kernels alone, node by node
FactoredJoint network_joint(const Admn& a) {
  FactoredJoint j;
  for (const auto& f : a.factors)
    if (f.is_symbolic()) j.add_symbolic(f);
  for (const auto& n : a.nodes)
    for (const auto& k : n.kernels) {
      std::vector<Factor> outs;
      for (const auto& o : k.outputs) outs.push_back(a.factor(o));
      j.apply_kernel(k, outs);
    }
  return j;
}

// S ~ (0.2, 0.3, 0.5) at node 1, T = noisy copy of S at node 2
Admn chain() {
  Admn a;
  a.factors = {Factor::concrete("S", 3), Factor::concrete("T", 3)};
  a.nodes.push_back({"source", {"S"}, {}, {table_kernel({}, {}, "S", 3, {0.2, 0.3, 0.5})}, 0});
  std::vector<double> t(9, 0.1);
  for (int s = 0; s < 3; ++s) t[s * 3 + s] = 0.8;
  a.nodes.push_back({"observer", {"T"}, {}, {table_kernel({"S"}, {3}, "T", 3, t)}, 0});
  a.target.vars = {};
  return a;
}

}  // namespace

TEST_CASE("catalog networks validate") {
  for (const auto& name : catalog_names()) {
    const CatalogInstance inst = build(name);
    const auto issues = validate(inst.network);
    INFO(name);
    CHECK(issues.empty());
  }
}

TEST_CASE("validate names the broken invariant") {
  const Admn base = build("mac-binary-adder").network;
  {
    Admn a = base;
    a.nodes[2].kernels[0].parents[0] = "Y3";
    CHECK(!validate(a).empty());
  }
  {
    Admn a = base;
    a.nodes[0].kernels.push_back(table_kernel({"X2"}, {2}, "M1", 2, {0.5, 0.5, 0.5, 0.5}));
    CHECK(has_prefix(validate(a), "kernel:"));
  }
  {
    Admn a = base;
    a.nodes[2].y.push_back("ghost");
    CHECK(has_prefix(validate(a), "registry:"));
  }
  {
    Admn a = base;
    a.nodes[1].x.push_back("X1");
    CHECK(has_prefix(validate(a), "ordering:"));
  }
  {
    Admn a = base;
    a.target.table.pop_back();
    CHECK(has_prefix(validate(a), "target:"));
  }
  {
    Admn a = base;
    a.factors.push_back(Factor::concrete("X1", 2));
    CHECK(has_prefix(validate(a), "registry:"));
  }
}

TEST_CASE("combined kernel of the adder is the sum") {
  const Admn a = build("mac-binary-adder").network;
  const Kernel k = combined_kernel(a, 3);
  REQUIRE(k.parents == VarSet{"X1", "X2"});
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      for (int y = 0; y < 3; ++y) CHECK(k.prob(x1 * 2 + x2, y) == doctest::Approx(y == x1 + x2 ? 1.0 : 0.0));
}

TEST_CASE("virtual node keeps the joint when it conditions on y_v") {
  const Admn a = chain();
  REQUIRE(validate(a).empty());
  // V = S mod 2 flipped w.p. 0.25
  std::vector<double> kv;
  for (int s = 0; s < 3; ++s)
    for (int v = 0; v < 2; ++v) kv.push_back(v == s % 2 ? 0.75 : 0.25);
  const Admn b = insert_virtual_node(a, 1, {Factor::concrete("V", 2)}, table_kernel({"S"}, {3}, "V", 2, kv));
  CHECK(validate(b).empty());
  REQUIRE(b.size() == 3);
  CHECK(b.node(1).y == VarSet{"V"});
  CHECK(b.node(2).y == VarSet{"S"});
  const FactoredJoint j = network_joint(b);
  const std::vector<double> ps = {0.2, 0.3, 0.5};
  for (int s = 0; s < 3; ++s)
    for (int v = 0; v < 2; ++v)
      for (int t = 0; t < 3; ++t) {
        const double want = ps[s] * kv[s * 2 + v] * (s == t ? 0.8 : 0.1);
        CHECK(j.probability({{"S", s}, {"V", v}, {"T", t}}) == doctest::Approx(want).epsilon(1e-12));
      }
}

TEST_CASE("virtual node without y_v dependence is a plain insertion") {
  const Admn a = chain();
  const Admn b = insert_virtual_node(a, 2, {Factor::concrete("V", 2)}, table_kernel({"S"}, {3}, "V", 2, {1, 0, 0, 1, 1, 0}));
  REQUIRE(b.size() == 3);
  CHECK(b.node(2).y == VarSet{"V"});
  CHECK(b.node(3).kernels == a.node(2).kernels);
  CHECK(validate(b).empty());
  CHECK_THROWS_AS(insert_virtual_node(a, 1, {Factor::concrete("V", 2)}, table_kernel({"T"}, {3}, "V", 2, {1, 0, 0, 1, 1, 0})),
                  Error);
  CHECK_THROWS_AS(insert_virtual_node(a, 3, {Factor::concrete("V", 2)}, table_kernel({}, {}, "V", 2, {0.5, 0.5})), Error);
}

TEST_CASE("common part components") {
  // a perfectly correlated pair: two components
  const CommonPart two = common_part({0.5, 0, 0, 0.5}, 2, 2);
  CHECK(two.components == 2);
  CHECK(two.a_map[0] != two.a_map[1]);
  CHECK(two.a_map[0] == two.b_map[0]);
  // one shared edge joins everything
  CHECK(common_part({0.25, 0.25, 0, 0.5}, 2, 2).components == 1);
  // block diagonal 2 + 1, with an unused value of B
  const CommonPart blk = common_part({0.2, 0.2, 0, 0, 0.1, 0.1, 0, 0, 0, 0, 0.4, 0}, 3, 4);
  CHECK(blk.components == 2);
  CHECK(blk.a_map[0] == blk.a_map[1]);
  CHECK(blk.a_map[2] != blk.a_map[0]);
  CHECK(blk.b_map[3] == -1);
}

TEST_CASE("split common part adds a common node first") {
  const CatalogInstance inst = correlated_sources_instance(true);
  const Admn& a = inst.network;
  REQUIRE(a.size() == 4);
  CHECK(a.node(1).name == "common");
  CHECK(a.node(1).y == VarSet{"Ycp"});
  CHECK(a.node(1).x == VarSet{"Xcp"});
  // V2 and V3 agree on their high bit: two components of equal mass
  CHECK(a.factor("Ycp").alphabet == 2);
  CHECK(a.factor("Xcp").alphabet == 2);
  CHECK(validate(a).empty());
  const FactoredJoint j = induced_joint(inst.omega, a);
  for (int v2 = 0; v2 < 4; ++v2) CHECK(j.probability({{"V2", v2}}) == doctest::Approx(0.25));
  // Ycp is a function of V2 and of V3
  for (int c = 0; c < 2; ++c)
    for (int v = 0; v < 4; ++v) {
      const double p2 = j.probability({{"Ycp", c}, {"V2", v}});
      const double p3 = j.probability({{"Ycp", c}, {"V3", v}});
      CHECK((p2 < 1e-12 || std::abs(p2 - 0.25) < 1e-12));
      CHECK((p3 < 1e-12 || std::abs(p3 - 0.25) < 1e-12));
    }
}

TEST_CASE("unfold shapes") {
  const Dmn dmn = build("relay-unfold").dmn;
  const Admn u = unfold(dmn, 2);
  CHECK(validate(u).empty());
  REQUIRE(u.size() == 9);
  for (int b = 1; b <= 3; ++b)
    for (int k = 1; k <= 3; ++k) {
      const AdmnNode& n = u.node(unfold_index(3, k, b));
      CHECK(n.name == unfold_node_name(k, b));
      CHECK(n.carry_from == (b == 1 ? 0 : unfold_index(3, k, b - 1)));
      // outputs of block b only see inputs of block b-1
      for (const auto& kern : n.kernels)
        for (const auto& p : kern.parents) CHECK(p.substr(p.find('.')) == "." + std::to_string(b - 1));
    }
  CHECK(u.factor("M").multiplier == Rational(2));
  CHECK(unfold(build("nnc-unfold").dmn, 3).size() == 12);
  CHECK_THROWS_AS(unfold(dmn, 0), Error);
  CHECK_THROWS_AS(unfold(dmn, 2, 5), Error);
}

TEST_CASE("unfolded channel matches the memoryless channel per block") {
  const Dmn dmn = build("relay-unfold").dmn;
  const Admn u = unfold(dmn, 1);
  // block-1 inputs fixed by point masses; their outputs, observed at block 2, follow the channel row
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2) {
      FactoredJoint j;
      j.add_symbolic(u.factor("M"));
      j.add_independent(u.factor(unfold_x(1, 1)), x1 ? std::vector<double>{0, 1} : std::vector<double>{1, 0});
      j.add_independent(u.factor(unfold_x(2, 1)), x2 ? std::vector<double>{0, 1} : std::vector<double>{1, 0});
      for (int k = 1; k <= 3; ++k)
        for (const auto& kern : u.node(unfold_index(3, k, 2)).kernels) {
          std::vector<Factor> outs;
          for (const auto& o : kern.outputs) outs.push_back(u.factor(o));
          j.apply_kernel(kern, outs);
        }
      for (int y2 = 0; y2 < 2; ++y2)
        for (int y3 = 0; y3 < 4; ++y3) {
          const double want = dmn.channel[((x1 * 2 + x2) * 2 + y2) * 4 + y3];
          CHECK(j.probability({{unfold_y(2, 1), y2}, {unfold_y(3, 1), y3}}) == doctest::Approx(want).epsilon(1e-12));
        }
    }
}
