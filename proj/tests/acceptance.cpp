// One PASS/FAIL line per acceptance criterion; exits nonzero when any line fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "gauss_oracle.hpp"
#include "oracle.hpp"
#include "properties.hpp"
#include "unirate/catalog.hpp"
#include "unirate/duality.hpp"
#include "unirate/gaussian.hpp"
#include "unirate/gdcaf.hpp"
#include "unirate/generate.hpp"

using namespace unirate;
using oracle::h2;

namespace {

struct Report {
  bool pass = true;
  std::ostringstream detail;

  void need(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string num(double x, int prec = 9) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, x);
  return buf;
}

const LinearInequality* find_row(const InequalitySystem& sys, const std::map<std::string, Rational>& lhs, Sense s) {
  for (const auto& r : sys.rows)
    if (r.lhs == lhs && r.sense == s) return &r;
  return nullptr;
}

int count_sense(const InequalitySystem& sys, Sense s) {
  int n = 0;
  for (const auto& r : sys.rows) n += r.sense == s;
  return n;
}

void diamond_rate(Report& r) {
  const auto t0 = std::chrono::steady_clock::now();
  const Verdict v = run("diamond-gdcaf");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const CatalogInstance inst = build("diamond-gdcaf");
  const GdcafResult g = gdcaf_rate(inst.network, inst.gdcaf);
  const double cut = cutset_upper_bound(inst.dmn, 4).value;
  const double log3 = std::log2(3.0);
  r.detail << "rate = " << num(g.rate) << ", cut-set = " << num(cut) << ", feasible = " << (g.feasible ? "true" : "false")
           << ", catalog run " << num(secs, 3) << " s";
  r.need(v.pass, "catalog verdict");
  r.need(std::abs(g.rate - log3) <= 1e-6, "rate");
  r.need(g.feasible, "feasibility");
  r.need(std::abs(cut - log3) <= 1e-9, "cut-set");
  r.need(secs < 1.0, "time");
}

void diamond_comparisons(Report& r) {
  const double eps = diamond_epsilon();
  const double pdf = 1 - eps + 1 - h2(eps);
  const double bec = channel_capacity({1 - eps, 0, eps, 0, 1 - eps, eps}, 2, 3);
  const double bsc = channel_capacity({1 - eps, eps, eps, 1 - eps}, 2, 2);
  const CatalogInstance inst = build("diamond-gdcaf");
  const auto grid = diamond_ddf_grid();
  double best = 0;
  for (const auto& s : grid) best = std::max(best, gdcaf_rate(inst.network, s).rate);
  r.detail << "partial-DF = " << num(pdf, 6) << ", BEC = " << num(bec, 6) << ", BSC = " << num(bsc, 6)
           << ", DDF max over " << grid.size() << " points = " << num(best, 6);
  r.need(std::abs(eps - (1 - h2(1.0 / 3))) <= 1e-12, "epsilon");
  r.need(std::abs(pdf - 1.5101) <= 5e-4, "partial-DF");
  r.need(std::abs(bec - 0.9183) <= 5e-4, "BEC");
  r.need(std::abs(bsc - 0.5918) <= 5e-4, "BSC");
  r.need(best <= 1.5101 + 1e-9, "DDF grid");
}

void mac_pipeline(Report& r) {
  const CatalogInstance mac = build("mac-binary-adder");
  const InequalitySystem sys = generate_system(mac.omega, mac.network, Mode::Corollary1);
  // eight-cell table of Y = X1 + X2 with uniform inputs
  const oracle::Pmf p = oracle::Pmf::build({"X1", "X2", "Y"}, {{0.5, 0.5}, {0.5, 0.5}},
                                           [](const std::vector<int>& v) {
                                             return std::vector<int>{v[0], v[1], v[0] + v[1]};
                                           });
  const double i1 = p.I({"X1"}, {"Y"}, {"X2"}), i2 = p.I({"X2"}, {"Y"}, {"X1"}), i12 = p.I({"X1", "X2"}, {"Y"});
  const auto* c1 = find_row(sys, {{"r1", 1}}, Sense::Greater);
  const auto* c2 = find_row(sys, {{"r2", 1}}, Sense::Greater);
  const auto* p1 = find_row(sys, {{"r1", 1}}, Sense::Less);
  const auto* p2 = find_row(sys, {{"r2", 1}}, Sense::Less);
  const auto* p12 = find_row(sys, {{"r1", 1}, {"r2", 1}}, Sense::Less);
  const bool shape = sys.rows.size() == 5 && c1 && c2 && p1 && p2 && p12 && c1->rhs == AffineRateExpr::symbol("R1") &&
                     c2->rhs == AffineRateExpr::symbol("R2");
  r.need(shape, "five-row fingerprint");
  if (shape) {
    r.need(std::abs(p1->rhs.constant - i1) <= 1e-9, "r1 packing");
    r.need(std::abs(p2->rhs.constant - i2) <= 1e-9, "r2 packing");
    r.need(std::abs(p12->rhs.constant - i12) <= 1e-9, "sum packing");
  }
  const RateRegion region = derive_region(mac.network, mac.omega, Mode::Corollary1).region;
  const auto* s = find_row(region, {{"R1", 1}, {"R2", 1}}, Sense::Less);
  const double b1 = rate_upper_bound(region, "R1"), b2 = rate_upper_bound(region, "R2");
  r.detail << sys.rows.size() << " system rows, region {R1 < " << num(b1, 6) << ", R2 < " << num(b2, 6)
           << ", R1 + R2 < " << (s ? num(s->rhs.constant, 6) : "?") << "}";
  r.need(region.rows.size() == 3, "three-row region");
  r.need(std::abs(b1 - 1) <= 1e-9 && std::abs(b2 - 1) <= 1e-9, "single-rate bounds");
  r.need(s && std::abs(s->rhs.constant - 1.5) <= 1e-9, "sum-rate bound");
}

void duality(Report& r) {
  const CatalogInstance inst = build("mac-duality");
  const DualSystems ds = dual_systems(inst.dual);
  r.need(ds.systems.size() == 4, "four systems");
  if (ds.systems.size() != 4) return;
  // covering rows: two at the senders of the non-reversed pair, three at the merged node otherwise
  const int greater[] = {2, 2, 3, 3};
  const Sense sense[] = {Sense::Less, Sense::Greater, Sense::Greater, Sense::Less};
  r.detail << "rows";
  for (std::size_t i = 0; i < 4; ++i) {
    r.detail << " " << ds.systems[i].rows.size();
    r.need(ds.systems[i].rows.size() == 5, std::string(dual_type_name(ds.types[i])) + " rows");
    r.need(count_sense(ds.systems[i], Sense::Greater) == greater[i], std::string(dual_type_name(ds.types[i])) + " senses");
  }
  const auto checks = verify_swap_structure(inst.dual, ds);
  int ok = 0;
  for (const auto& c : checks) ok += c.pass;
  r.detail << ", swap checks " << ok << "/" << checks.size() << ", region rows";
  r.need(checks.size() == 3 && ok == 3, "swap checks");
  for (std::size_t i = 0; i < 4; ++i) {
    const CodingParams& w = i == 0 ? inst.dual.original.omega : inst.dual.duals[i - 1].omega;
    const RateRegion region = prune_numeric(fourier_motzkin(ds.systems[i], omega_rates(w)), {}, true);
    r.detail << " " << region.rows.size();
    bool senses = true;
    for (const auto& row : region.rows) senses = senses && row.sense == sense[i];
    r.need(region.rows.size() == 3 && senses, std::string(dual_type_name(ds.types[i])) + " region");
  }
}

void gp_wz(Report& r) {
  const oracle::Pmf gp = oracle::Pmf::build({"S", "U", "Y2"}, {{0.5, 0.5}, {0.8, 0.2}, {0.9, 0.1}},
                                            [](const std::vector<int>& v) {
                                              return std::vector<int>{v[0], v[0] ^ v[1], v[1] ^ v[0] ^ v[2]};
                                            });
  const double gp_want = gp.I({"U"}, {"Y2"}) - gp.I({"U"}, {"S"});
  const oracle::Pmf wz = oracle::Pmf::build({"S", "U", "T"}, {{0.5, 0.5}, {0.9, 0.1}, {0.75, 0.25}},
                                            [](const std::vector<int>& v) {
                                              return std::vector<int>{v[0], v[0] ^ v[1], v[0] ^ v[2]};
                                            });
  // U -- S -- T, so I(U;S|T) is the Wyner-Ziv I(U;Y1|T) with Y1 = S
  const double wz_want = wz.I({"U"}, {"S"}, {"T"});
  auto one = [&](const char* entry, Sense sense, double want) {
    const CatalogInstance inst = build(entry);
    const RateRegion region = derive_region(inst.network, inst.omega, inst.mode).region;
    const bool shape = region.rows.size() == 1 && region.rows[0].sense == sense &&
                       region.rows[0].lhs == std::map<std::string, Rational>{{"R", 1}} &&
                       !region.rows[0].rhs.has_symbols();
    const double got = shape ? region.rows[0].rhs.constant : NAN;
    r.detail << entry << " " << (sense == Sense::Less ? "R < " : "R > ") << num(got) << " (oracle " << num(want)
             << ") ";
    r.need(shape, std::string(entry) + " shape");
    r.need(std::abs(got - want) <= 1e-9, std::string(entry) + " value");
  };
  one("gelfand-pinsker-binary", Sense::Less, gp_want);
  one("wyner-ziv-binary", Sense::Greater, wz_want);
}

void fm_correctness(Report& r) {
  const props::FmStats st = props::fm_property(120, 200, 20261015);
  r.detail << st.systems << " systems, " << st.decisive << " decisive points, " << st.disagreements
           << " disagreements, " << st.lift_failures << " lift failures";
  r.need(st.systems >= 100, "system count");
  r.need(st.decisive >= 100 * 200, "points per system");
  r.need(st.disagreements == 0 && st.lift_failures == 0, "agreement");
}

void omega_validity(Report& r) {
  int problems = 0, mutations = 0, rejected = 0, unnamed = 0;
  double worst = 0;
  for (const auto& p : props::catalog_problems()) {
    ++problems;
    const bool net_ok = validate(p.network).empty();
    const bool omega_ok = validate_params(p.omega, p.network).empty();
    r.need(net_ok && omega_ok, p.label + " validity");
    if (net_ok && omega_ok) {
      const TargetMatch tm = check_target_match(p.omega, p.network);
      worst = std::max(worst, tm.max_deviation);
      r.need(tm.matched(1e-9), p.label + " target match");
    }
    const props::FuzzStats fz = props::omega_fuzz(p);
    mutations += fz.mutations;
    rejected += fz.rejected;
    unnamed += static_cast<int>(fz.unnamed.size());
    for (const auto& s : fz.unnamed) r.need(false, s);
  }
  r.detail << problems << " omegas valid, worst target deviation " << num(worst, 12) << ", " << mutations
           << " mutations, " << rejected << " rejected, " << unnamed << " without a named constraint";
  r.need(unnamed == 0, "fuzz");
}

void gaussian(Report& r) {
  constexpr int kInstances = 60;
  int blocks = 0;
  const double phi = gauss_oracle::phi_gap(2026, kInstances, &blocks);
  const double cov = gauss_oracle::covariance_gap(77, kInstances);
  const CatalogInstance inst = build("gaussian-point-to-point");
  const GaussianModel m(inst.agn, inst.gaussian);
  const ObjectiveCheck oc = m.check_objective(inst.objective);
  const double power = oc.values.empty() ? NAN : oc.values[0];
  double packing = NAN;
  for (const auto& row : gaussian_system(m).rows)
    if (row.origin.kind == "packing") packing = row.rhs.constant;
  const double want = 0.5 * std::log2(1 + power);
  r.detail << kInstances << " random networks, phi gap " << phi << " over " << blocks << " blocks, covariance gap " << cov << ", packing "
           << num(packing) << " vs half log(1 + " << num(power, 3) << ") = " << num(want);
  r.need(phi <= 1e-12, "phi");
  r.need(cov <= 1e-9, "covariance");
  r.need(oc.pass, "power");
  r.need(std::abs(packing - want) <= 1e-9, "packing");
}

void corollary_vs_theorem(Report& r) {
  std::mt19937_64 rng(4242);
  int entries = 0, points = 0, hits = 0, violations = 0;
  for (const auto& p : props::catalog_problems()) {
    if (!is_omega_prime(p.omega)) continue;
    const props::ImplicationStats st = props::corollary_implies_theorem(p, 1000, rng);
    ++entries;
    points += st.points;
    hits += st.corollary_hits;
    violations += st.violations;
    r.need(st.points >= 1000, p.label + " points");
    r.need(st.corollary_hits > 0, p.label + " vacuous");
    r.need(st.violations == 0, p.label + " violation");
  }
  r.detail << entries << " prime omegas, " << points << " points, " << hits << " inside the corollary system, "
           << violations << " outside the theorem system";
}

void nnc_trend(Report& r) {
  double prev = 0, last = 0;
  r.detail << "bounds";
  for (int b = 2; b <= 4; ++b) {
    const CatalogInstance inst = nnc_instance(b);
    last = rate_upper_bound(derive_region(inst.network, inst.omega, inst.mode).region, "R");
    r.detail << " B=" << b << ": " << num(last, 6);
    r.need(last >= prev - 1e-12, "monotone at B=" + std::to_string(b));
    prev = last;
  }
  const double limit = nnc_closed_form();
  r.detail << ", closed form " << num(limit, 6) << ", gap " << num(100 * (limit - last) / limit, 2) << "%";
  r.need(std::abs(last - limit) <= 0.1 * limit, "proximity");
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Report&)>> criteria[] = {
      {"diamond gdcaf rate", diamond_rate},
      {"diamond comparisons", diamond_comparisons},
      {"mac pipeline", mac_pipeline},
      {"duality quadruple", duality},
      {"gelfand-pinsker and wyner-ziv", gp_wz},
      {"fourier-motzkin property", fm_correctness},
      {"omega validity and fuzz", omega_validity},
      {"gaussian model", gaussian},
      {"corollary implies theorem", corollary_vs_theorem},
      {"nnc trend", nnc_trend},
  };
  bool all = true;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    Report r;
    try {
      fn(r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail << " [threw: " << e.what() << "]";
    }
    all = all && r.pass;
    std::printf("criterion %d: %s  %s: %s\n", ++n, r.pass ? "PASS" : "FAIL", name, r.detail.str().c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
