#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "unirate/catalog.hpp"
#include "unirate/error.hpp"

using namespace unirate;
using oracle::h2;

namespace {

double bound_of(const std::string& entry, const std::string& symbol) {
  const CatalogInstance inst = build(entry);
  return rate_upper_bound(derive_region(inst.network, inst.omega, inst.mode).region, symbol);
}

const LinearInequality* single_row(const RateRegion& r) { return r.rows.size() == 1 ? &r.rows.front() : nullptr; }

}  // namespace

TEST_CASE("every catalog entry passes its own checks") {
  const auto names = catalog_names();
  CHECK(names.size() == 12);
  for (const auto& name : names) {
    const Verdict v = run(name);
    INFO(v.text());
    CHECK(v.pass);
    CHECK(v.name == name);
    CHECK(!v.checks.empty());
  }
}

TEST_CASE("catalog runs are deterministic") {
  for (const char* name : {"mac-binary-adder", "diamond-gdcaf", "interference-decoding", "mac-duality"})
    CHECK(run(name).text() == run(name).text());
  CHECK(build("nnc-unfold").omega == build("nnc-unfold").omega);
}

TEST_CASE("unknown entries are reported as such") {
  try {
    build("no-such-entry");
    FAIL("unknown entry accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownEntry);
  }
}

TEST_CASE("gelfand-pinsker bound") {
  // frozen oracle values, computed by hand: I(U;Y2) - I(U;S) = (1 - H(0.1)) - (1 - H(0.2))
  const double want = 0.2529325012980810;
  CHECK(want == doctest::Approx(h2(0.2) - h2(0.1)).epsilon(1e-14));
  // brute force on S, N ~ Bern(0.2), Z ~ Bern(0.1): U = S ^ N, Y2 = X1 ^ S ^ Z with X1 = N
  const oracle::Pmf p = oracle::Pmf::build({"S", "U", "Y2"}, {{0.5, 0.5}, {0.8, 0.2}, {0.9, 0.1}},
                                           [](const std::vector<int>& v) {
                                             return std::vector<int>{v[0], v[0] ^ v[1], v[1] ^ v[0] ^ v[2]};
                                           });
  CHECK(std::abs(p.I({"U"}, {"Y2"}) - p.I({"U"}, {"S"}) - want) <= 1e-12);
  const CatalogInstance inst = build("gelfand-pinsker-binary");
  const RateRegion region = derive_region(inst.network, inst.omega, inst.mode).region;
  const auto* row = single_row(region);
  REQUIRE(row);
  CHECK(row->sense == Sense::Less);
  CHECK(row->lhs == std::map<std::string, Rational>{{"R", 1}});
  CHECK(std::abs(row->rhs.constant - want) <= 1e-9);
}

TEST_CASE("wyner-ziv bound") {
  // U = S ^ Bern(0.1), T = S ^ Bern(0.25): I(U;S|T) = H(U|T) - H(U|S) = H(0.3) - H(0.1)
  const double want = 0.4122953056414115;
  CHECK(want == doctest::Approx(h2(0.3) - h2(0.1)).epsilon(1e-14));
  const oracle::Pmf p = oracle::Pmf::build({"S", "U", "T"}, {{0.5, 0.5}, {0.9, 0.1}, {0.75, 0.25}},
                                           [](const std::vector<int>& v) {
                                             return std::vector<int>{v[0], v[0] ^ v[1], v[0] ^ v[2]};
                                           });
  CHECK(std::abs(p.I({"U"}, {"S"}, {"T"}) - want) <= 1e-12);
  const CatalogInstance inst = build("wyner-ziv-binary");
  const RateRegion region = derive_region(inst.network, inst.omega, inst.mode).region;
  const auto* row = single_row(region);
  REQUIRE(row);
  CHECK(row->sense == Sense::Greater);
  CHECK(std::abs(row->rhs.constant - want) <= 1e-9);
}

TEST_CASE("wiretap region") {
  const double want = 1 - h2(0.15 * 0.9 + 0.85 * 0.1);
  const CatalogInstance inst = build("wiretap-system");
  const RateRegion region = derive_region(inst.network, inst.omega, inst.mode).region;
  const auto* row = single_row(region);
  REQUIRE(row);
  CHECK(row->lhs == std::map<std::string, Rational>{{"R", 1}, {"R1", 1}});
  CHECK(std::abs(row->rhs.constant - want) <= 1e-9);
}

TEST_CASE("interference decoding box") {
  // Z = X1 + X2 + X3 (three fair bits), V = the two interferers: H(Z) - H(V)
  const oracle::Pmf p = oracle::Pmf::build({"Z", "V"}, {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}},
                                           [](const std::vector<int>& v) {
                                             return std::vector<int>{v[0] + v[1] + v[2], v[1] + v[2]};
                                           });
  const double want = p.H({"Z"}) - p.H({"V"});
  CHECK(want == doctest::Approx(0.3112781244591328).epsilon(1e-12));
  for (const char* r : {"R1", "R2", "R3"}) CHECK(std::abs(bound_of("interference-decoding", r) - want) <= 1e-9);
}

TEST_CASE("correlated sources: scaled adder feasible, mod-4 adder not") {
  const CatalogInstance ok = correlated_sources_instance(true);
  CHECK(!derive_region(ok.network, ok.omega, ok.mode).region.infeasible);
  const CatalogInstance bad = correlated_sources_instance(false);
  CHECK(derive_region(bad.network, bad.omega, bad.mode).region.infeasible);
}

TEST_CASE("relay direct transmission") {
  CHECK(std::abs(bound_of("relay-unfold", "R") - (1 - h2(0.1))) <= 1e-9);
}

TEST_CASE("nnc bound grows with the block count toward the closed form") {
  // frozen: B = 2, 3, 4 on the unfolded relay channel, closed form on the single-block pmf
  const double frozen[] = {0.611529, 0.638371, 0.651792};
  double prev = 0;
  for (int b = 2; b <= 4; ++b) {
    const CatalogInstance inst = nnc_instance(b);
    const double bound = rate_upper_bound(derive_region(inst.network, inst.omega, inst.mode).region, "R");
    CHECK(std::abs(bound - frozen[b - 2]) <= 1e-6);
    CHECK(bound >= prev - 1e-12);
    prev = bound;
  }
  const double limit = nnc_closed_form();
  CHECK(std::abs(limit - 0.692054) <= 1e-6);
  CHECK(prev <= limit + 1e-9);
  CHECK(prev >= 0.9 * limit);
}
