#include <doctest.h>

#include <algorithm>

#include "unirate/catalog.hpp"
#include "unirate/duality.hpp"
#include "unirate/error.hpp"

using namespace unirate;

namespace {

int count_sense(const InequalitySystem& sys, Sense s) {
  int n = 0;
  for (const auto& r : sys.rows) n += r.sense == s;
  return n;
}

}  // namespace

TEST_CASE("dual type roles") {
  CHECK(!swaps_roles(DualType::Original));
  CHECK(swaps_roles(DualType::TypeI));
  CHECK(!swaps_roles(DualType::TypeII));
  CHECK(swaps_roles(DualType::TypeIII));
  CHECK(!reverses_order(DualType::TypeI));
  CHECK(reverses_order(DualType::TypeII));
  CHECK(reverses_order(DualType::TypeIII));
  CHECK(original_node(DualType::TypeI, 3, 1) == 1);
  CHECK(original_node(DualType::TypeII, 3, 1) == 3);
  CHECK(original_node(DualType::TypeIII, 4, 2) == 3);
}

TEST_CASE("dual skeletons of the mac omega") {
  const CodingParams w = build("mac-binary-adder").omega;
  const CodingParams one = dual_skeleton(w, DualType::TypeI);
  for (int k = 0; k < 3; ++k) {
    CHECK(one.nodes[k].decode == w.nodes[k].decode);
    CHECK(one.nodes[k].compress == w.nodes[k].compress);
    CHECK(one.nodes[k].kernels.empty());
    CHECK(one.nodes[k].maps.empty());
  }
  for (DualType t : {DualType::TypeII, DualType::TypeIII}) {
    const CodingParams d = dual_skeleton(w, t);
    // the receiver becomes the first node and covers both codebooks
    CHECK(d.nodes[0].compress == IndexSet{1, 2});
    CHECK(d.nodes[0].decode.empty());
    CHECK(d.nodes[1].decode == IndexSet{2});
    CHECK(d.nodes[2].decode == IndexSet{1});
    CHECK(d.codebooks.size() == w.codebooks.size());
  }
}

TEST_CASE("mac duality quadruple") {
  const CatalogInstance inst = build("mac-duality");
  const DualSystems ds = dual_systems(inst.dual);
  REQUIRE(ds.types.size() == 4);
  CHECK(ds.types[0] == DualType::Original);
  for (const auto& s : ds.systems) CHECK(s.rows.size() == 5);
  // two covering rows at the senders and three packing rows at the receiver; the reversed
  // duals cover both codebooks at one node (three rows) and decode one at each of the others
  CHECK(count_sense(ds.systems[0], Sense::Greater) == 2);
  CHECK(count_sense(ds.systems[1], Sense::Greater) == 2);
  CHECK(count_sense(ds.systems[2], Sense::Greater) == 3);
  CHECK(count_sense(ds.systems[3], Sense::Greater) == 3);
  for (std::size_t i = 0; i < 4; ++i)
    for (const auto& r : ds.systems[i].rows) {
      CHECK(r.origin.system == dual_type_name(ds.types[i]));
      // origins are reported in the original numbering: the three-row node is the receiver
      if (r.lhs.size() == 2) CHECK(r.origin.node == 3);
    }
  const auto checks = verify_swap_structure(inst.dual, ds);
  REQUIRE(checks.size() == 3);
  for (const auto& c : checks) {
    INFO(dual_type_name(c.type));
    CHECK(c.pass);
  }
  // each elimination leaves three rows with the sense of its problem
  const Sense want[] = {Sense::Less, Sense::Greater, Sense::Greater, Sense::Less};
  for (std::size_t i = 0; i < 4; ++i) {
    const CodingParams& w = i == 0 ? inst.dual.original.omega : inst.dual.duals[i - 1].omega;
    const RateRegion region = prune_numeric(fourier_motzkin(ds.systems[i], omega_rates(w)), {}, true);
    CHECK(region.rows.size() == 3);
    for (const auto& r : region.rows) CHECK(r.sense == want[i]);
  }
}

TEST_CASE("unswapped dual fails the swap check") {
  const CatalogInstance inst = build("mac-duality");
  const DualSystems ds = dual_systems(inst.dual);
  DualParams bad = inst.dual;
  // type II omega with the original's D/W sets instead of the reversed swap
  for (int k = 0; k < 3; ++k) {
    bad.duals[1].omega.nodes[k].decode = inst.dual.original.omega.nodes[k].decode;
    bad.duals[1].omega.nodes[k].compress = inst.dual.original.omega.nodes[k].compress;
  }
  const auto checks = verify_swap_structure(bad, ds);
  REQUIRE(checks.size() == 3);
  CHECK(checks[0].pass);
  CHECK(!checks[1].pass);
  CHECK(!checks[1].issues.empty());
  CHECK(checks[2].pass);
  // a type I system standing in for the type III one breaks the family comparison
  DualSystems swapped = ds;
  swapped.systems[3] = ds.systems[1];
  const auto again = verify_swap_structure(inst.dual, swapped);
  CHECK(!again[2].pass);
}

TEST_CASE("duals need B and A empty") {
  DualParams d = build("mac-duality").dual;
  DualParams b = d;
  b.original.omega.nodes[2].nonunique = {1};
  try {
    dual_systems(b);
    FAIL("nonempty B accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PreconditionViolated);
  }
  DualParams a = d;
  a.original.omega.codebooks[1].superpose = {1};
  CHECK_THROWS_AS(dual_systems(a), Error);
}

TEST_CASE("construct_dual rewires inputs and outputs") {
  const CatalogInstance inst = build("mac-duality");
  const Admn& orig = inst.dual.original.network;
  const Admn& three = inst.dual.duals[2].network;
  REQUIRE(three.size() == 3);
  // type III: node k plays original node 4 - k with X and Y traded
  for (int k = 1; k <= 3; ++k) {
    const AdmnNode& o = orig.node(4 - k);
    VarSet dy = three.node(k).y, ox = o.x;
    std::sort(dy.begin(), dy.end());
    std::sort(ox.begin(), ox.end());
    CHECK(dy == ox);
  }
  CHECK_THROWS_AS(construct_dual(orig, DualType::TypeI, {{}, {}}, Target{}), Error);
}
