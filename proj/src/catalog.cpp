#include "unirate/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "unirate/error.hpp"

namespace unirate {

namespace {

constexpr double kTol = 1e-9;

std::string fixed(double x, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, x);
  return buf;
}

double h2(double p) { return binary_entropy(p); }
double flip(int a, int b, double p) { return a == b ? 1.0 - p : p; }

// ---- kernel and map builders ----

Kernel source_kernel(const FactorId& out, std::vector<double> pmf) {
  Kernel k;
  k.outputs = {out};
  k.output_sizes = {static_cast<int>(pmf.size())};
  k.table = std::move(pmf);
  return k;
}

using CondFn = std::function<double(const std::vector<int>&, const std::vector<int>&)>;
using DetFn = std::function<std::vector<int>(const std::vector<int>&)>;

Kernel cond_kernel(VarSet parents, std::vector<int> psizes, VarSet outs, std::vector<int> osizes, const CondFn& f) {
  Kernel k;
  k.parents = std::move(parents);
  k.parent_sizes = std::move(psizes);
  k.outputs = std::move(outs);
  k.output_sizes = std::move(osizes);
  const std::int64_t rows = mixed_radix_size(k.parent_sizes), cols = mixed_radix_size(k.output_sizes);
  k.table.assign(rows * cols, 0.0);
  for (std::int64_t r = 0; r < rows; ++r) {
    const auto pv = mixed_radix_decode(r, k.parent_sizes);
    for (std::int64_t c = 0; c < cols; ++c) k.table[r * cols + c] = f(pv, mixed_radix_decode(c, k.output_sizes));
  }
  return k;
}

Kernel det_kernel(VarSet parents, std::vector<int> psizes, VarSet outs, std::vector<int> osizes, const DetFn& f) {
  Kernel k;
  k.parents = std::move(parents);
  k.parent_sizes = std::move(psizes);
  k.outputs = std::move(outs);
  k.output_sizes = std::move(osizes);
  const std::int64_t rows = mixed_radix_size(k.parent_sizes);
  for (std::int64_t r = 0; r < rows; ++r)
    k.function.push_back(mixed_radix_index(f(mixed_radix_decode(r, k.parent_sizes)), k.output_sizes));
  return k;
}

SymbolMap alias(const FactorId& out, const FactorId& src) {
  SymbolMap m;
  m.output = out;
  m.alias = src;
  return m;
}

SymbolMap lookup(const FactorId& out, VarSet in, const std::vector<int>& sizes,
                 const std::function<int(const std::vector<int>&)>& f) {
  SymbolMap m;
  m.output = out;
  m.inputs = std::move(in);
  const std::int64_t rows = mixed_radix_size(sizes);
  for (std::int64_t r = 0; r < rows; ++r) m.table.push_back(f(mixed_radix_decode(r, sizes)));
  return m;
}

// ---- brute-force oracle: explicit atoms from independent sources ----

struct Dense {
  std::vector<std::string> names;
  std::vector<int> sizes;
  std::vector<std::pair<std::vector<int>, double>> atoms;

  int pos(const std::string& n) const {
    const auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end()) throw Error(ErrorKind::UnknownFactor, "oracle has no " + n);
    return static_cast<int>(it - names.begin());
  }
  std::map<std::vector<int>, double> marginal(const VarSet& s) const {
    std::vector<int> idx;
    for (const auto& v : s) idx.push_back(pos(v));
    std::map<std::vector<int>, double> m;
    for (const auto& [vals, p] : atoms) {
      std::vector<int> key;
      for (int i : idx) key.push_back(vals[i]);
      m[key] += p;
    }
    return m;
  }
  double h(const VarSet& s) const {
    double e = 0;
    for (const auto& [k, p] : marginal(s))
      if (p > 0) e -= p * std::log2(p);
    return e;
  }
  double mi(const VarSet& a, const VarSet& b, const VarSet& c = {}) const {
    return h(set_union(a, c)) + h(set_union(b, c)) - h(set_union({a, b, c})) - h(c);
  }
  std::vector<double> table(const VarSet& order) const {
    std::vector<int> sz;
    for (const auto& v : order) sz.push_back(sizes[pos(v)]);
    std::vector<double> t(mixed_radix_size(sz), 0.0);
    for (const auto& [k, p] : marginal(order)) t[mixed_radix_index(k, sz)] += p;
    return t;
  }
};

Dense enumerate(std::vector<std::string> names, std::vector<int> sizes, const std::vector<std::vector<double>>& sources,
                const DetFn& f) {
  Dense d;
  d.names = std::move(names);
  d.sizes = std::move(sizes);
  std::vector<int> ss;
  for (const auto& s : sources) ss.push_back(static_cast<int>(s.size()));
  const std::int64_t n = mixed_radix_size(ss);
  for (std::int64_t i = 0; i < n; ++i) {
    const auto v = mixed_radix_decode(i, ss);
    double p = 1;
    for (std::size_t s = 0; s < v.size(); ++s) p *= sources[s][v[s]];
    if (p > 0) d.atoms.push_back({f(v), p});
  }
  return d;
}

Target target_from(const Dense& d, const VarSet& vars, std::vector<std::pair<FactorId, FactorId>> eq = {}) {
  Target t;
  t.vars = vars;
  t.table = d.table(vars);
  t.equalities = std::move(eq);
  return t;
}

// symbolic parts add by distinct source; concrete parts come from the atoms
using SymTable = std::map<FactorId, Factor>;

SymTable sym_table(const Admn& a, const CodingParams& w) {
  SymTable t;
  for (const auto& f : a.factors)
    if (f.is_symbolic()) t[f.id] = f;
  for (const auto& f : w.aux)
    if (f.is_symbolic()) t[f.id] = f;
  return t;
}

AffineRateExpr oracle_h(const Dense& d, const SymTable& sym, const VarSet& s) {
  VarSet conc;
  std::map<FactorId, const Factor*> sources;
  for (const auto& id : s) {
    const auto it = sym.find(id);
    if (it == sym.end())
      conc.push_back(id);
    else
      sources[it->second.source] = &it->second;
  }
  AffineRateExpr e(d.h(conc));
  for (const auto& [src, f] : sources) e.add_symbol(f->rate_symbol, f->multiplier);
  return e;
}

AffineRateExpr oracle_mi(const Dense& d, const SymTable& sym, const VarSet& a, const VarSet& b, const VarSet& c) {
  return oracle_h(d, sym, set_union(a, c)) + oracle_h(d, sym, set_union(b, c)) -
         oracle_h(d, sym, set_union({a, b, c})) - oracle_h(d, sym, c);
}

AffineRateExpr oracle_chain(const Dense& d, const SymTable& sym, const CodingParams& w, const IndexSet& set,
                            const IndexSet& others, const VarSet& y) {
  AffineRateExpr e;
  for (int j : set) {
    const VarSet b = set_union(w.factors_of(index_union(index_below(set, j), others)), y);
    e += oracle_mi(d, sym, w.codebook(j).factors, b, w.factors_of(w.codebook(j).superpose));
  }
  return e;
}

// Recomputes every row's rhs from its origin. `node_of` maps the origin node to the index
// used by `w` (identity except for reversed duals).
double rows_vs_oracle(const InequalitySystem& sys, const Dense& d, const SymTable& sym, const CodingParams& w, Mode mode,
                      const std::function<int(int)>& node_of, std::vector<std::string>& issues) {
  double worst = 0;
  for (const auto& row : sys.rows) {
    const int k = node_of(row.origin.node);
    const NodeCoding& nc = w.nodes.at(k - 1);
    AffineRateExpr want;
    if (row.origin.kind == "packing") {
      const IndexSet db = index_union(nc.decode, nc.nonunique);
      const IndexSet s = mode == Mode::Theorem1 ? bar_S(row.origin.subset, k, w) : row.origin.subset;
      want = oracle_chain(d, sym, w, s, index_minus(db, s), row.origin.observation);
    } else {
      const IndexSet t = mode == Mode::Theorem1 ? bar_T(row.origin.subset, k, w) : row.origin.subset;
      want = oracle_chain(d, sym, w, t, nc.decode, row.origin.observation);
    }
    if (want.coeffs != row.rhs.coeffs) {
      issues.push_back("rate terms differ on " + row.str(6) + " (oracle " + want.str(6) + ")");
      worst = std::numeric_limits<double>::infinity();
    } else {
      worst = std::max(worst, std::abs(want.constant - row.rhs.constant));
    }
  }
  return worst;
}

// ---- fingerprints ----

struct Want {
  std::map<std::string, Rational> lhs;
  Sense sense;
  std::map<std::string, Rational> sym;
  double c;
};

std::string want_str(const Want& w) {
  LinearInequality li;
  li.lhs = w.lhs;
  li.sense = w.sense;
  li.rhs.constant = w.c;
  li.rhs.coeffs = w.sym;
  return li.str(6);
}

std::vector<std::string> match_rows(const std::vector<LinearInequality>& got, const std::vector<Want>& want,
                                    double tol = kTol) {
  std::vector<std::string> out;
  std::vector<bool> used(got.size(), false);
  for (const auto& w : want) {
    bool found = false;
    for (std::size_t i = 0; i < got.size() && !found; ++i) {
      const auto& g = got[i];
      if (used[i] || g.lhs != w.lhs || g.sense != w.sense || g.rhs.coeffs != w.sym) continue;
      if (std::abs(g.rhs.constant - w.c) > tol) continue;
      used[i] = found = true;
    }
    if (!found) out.push_back("missing " + want_str(w));
  }
  for (std::size_t i = 0; i < got.size(); ++i)
    if (!used[i]) out.push_back("unexpected " + got[i].str(6));
  return out;
}

std::map<std::string, Rational> lin(std::initializer_list<std::pair<const std::string, Rational>> t) { return t; }

// ---- verdict helpers ----

void check(Verdict& v, const std::string& label, const std::string& value, bool ok, const std::string& detail = {}) {
  v.checks.push_back({label, value, ok});
  if (!ok) {
    v.pass = false;
    v.mismatches.push_back(label + (detail.empty() ? "" : ": " + detail));
  }
}

void check_issues(Verdict& v, const std::string& label, const std::vector<std::string>& issues) {
  check(v, label, issues.empty() ? "ok" : std::to_string(issues.size()) + " issues", issues.empty());
  for (const auto& s : issues) v.mismatches.push_back("  " + s);
}

void check_common(const CatalogInstance& inst, Verdict& v) {
  check_issues(v, "network", validate(inst.network));
  const auto issues = validate_params(inst.omega, inst.network);
  check_issues(v, "omega", issues);
  if (!issues.empty()) return;
  const TargetMatch tm = check_target_match(inst.omega, inst.network);
  check(v, "target deviation", fixed(tm.max_deviation, 12), tm.matched(kTol),
        tm.mismatches.empty() ? "" : tm.mismatches.front());
}

void check_oracle(Verdict& v, const InequalitySystem& sys, const Dense& d, const CatalogInstance& inst, Mode mode) {
  std::vector<std::string> issues;
  const double dev = rows_vs_oracle(sys, d, sym_table(inst.network, inst.omega), inst.omega, mode,
                                    [](int k) { return k; }, issues);
  check(v, "rows vs oracle", fixed(dev, 12), dev <= kTol && issues.empty());
  for (const auto& s : issues) v.mismatches.push_back("  " + s);
}

void check_fingerprint(Verdict& v, const std::string& label, const std::vector<LinearInequality>& rows,
                       const std::vector<Want>& want) {
  const auto issues = match_rows(rows, want);
  check(v, label, std::to_string(rows.size()) + " rows", issues.empty());
  for (const auto& s : issues) v.mismatches.push_back("  " + s);
}

// ---- gelfand-pinsker-binary ----

constexpr double kGpNoise = 0.1, kGpAux = 0.2;

Dense gp_dense() {
  return enumerate({"S", "U", "X1", "Y2"}, {2, 2, 2, 2}, {{0.5, 0.5}, {1 - kGpAux, kGpAux}, {1 - kGpNoise, kGpNoise}},
                   [](const std::vector<int>& v) {
                     const int s = v[0], n = v[1], z = v[2];
                     return std::vector<int>{s, s ^ n, n, n ^ s ^ z};
                   });
}

CatalogInstance gelfand_pinsker() {
  CatalogInstance c;
  c.name = "gelfand-pinsker-binary";
  c.summary = "channel with state known at the encoder; U = S xor Bern(0.2), X1 = U xor S";
  Admn& a = c.network;
  a.factors = {Factor::symbolic("M", "R"), Factor::concrete("S", 2), Factor::concrete("X1", 2),
               Factor::concrete("Y2", 2), Factor::symbolic("X2", "R", 1, "M")};
  a.nodes.push_back({"encoder", {"M", "S"}, {"X1"}, {source_kernel("S", {0.5, 0.5})}, 0});
  a.nodes.push_back({"decoder",
                     {"Y2"},
                     {"X2"},
                     {cond_kernel({"X1", "S"}, {2, 2}, {"Y2"}, {2},
                                  [](auto& p, auto& o) { return flip(p[0] ^ p[1], o[0], kGpNoise); })},
                     0});
  a.target = target_from(gp_dense(), {"S", "X1", "Y2"}, {{"X2", "M"}});
  CodingParams& w = c.omega;
  w.mu = 1;
  w.rate_names = {"r1"};
  w.aux = {Factor::concrete("U", 2)};
  w.codebooks = {{{"M", "U"}, {1}, {}}};
  NodeCoding n1, n2;
  n1.compress = {1};
  n1.kernels = {cond_kernel({"S"}, {2}, {"U"}, {2}, [](auto& p, auto& o) { return flip(p[0], o[0], kGpAux); })};
  n1.maps = {lookup("X1", {"U", "S"}, {2, 2}, [](auto& v) { return v[0] ^ v[1]; })};
  n2.decode = {1};
  n2.maps = {alias("X2", "M")};
  w.nodes = {n1, n2};
  c.rates = {"R"};
  return c;
}

void gp_check(const CatalogInstance& inst, Verdict& v) {
  check_common(inst, v);
  const Dense d = gp_dense();
  const auto rr = derive_region(inst.network, inst.omega, inst.mode);
  check_oracle(v, rr.system, d, inst, inst.mode);
  const double c = d.mi({"U"}, {"Y2"}) - d.mi({"U"}, {"S"});
  check_fingerprint(v, "region", rr.region.rows, {{lin({{"R", 1}}), Sense::Less, {}, c}});
  check(v, "R bound", fixed(rate_upper_bound(rr.region, "R")),
        std::abs(rate_upper_bound(rr.region, "R") - (h2(kGpAux) - h2(kGpNoise))) <= kTol);
}

// ---- wyner-ziv-binary ----

constexpr double kWzSide = 0.25, kWzAux = 0.1;

Dense wz_dense() {
  return enumerate({"S", "U", "T", "X2"}, {2, 2, 2, 2}, {{0.5, 0.5}, {1 - kWzAux, kWzAux}, {1 - kWzSide, kWzSide}},
                   [](const std::vector<int>& v) {
                     const int s = v[0];
                     return std::vector<int>{s, s ^ v[1], s ^ v[2], s ^ v[1]};
                   });
}

CatalogInstance wyner_ziv() {
  CatalogInstance c;
  c.name = "wyner-ziv-binary";
  c.summary = "lossy source coding with decoder side information T = S xor Bern(0.25)";
  Admn& a = c.network;
  a.factors = {Factor::concrete("S", 2), Factor::symbolic("X1", "R"), Factor::concrete("T", 2),
               Factor::concrete("X2", 2)};
  a.nodes.push_back({"encoder", {"S"}, {"X1"}, {source_kernel("S", {0.5, 0.5})}, 0});
  a.nodes.push_back({"decoder",
                     {"X1", "T"},
                     {"X2"},
                     {cond_kernel({"S"}, {2}, {"T"}, {2}, [](auto& p, auto& o) { return flip(p[0], o[0], kWzSide); })},
                     0});
  a.target = target_from(wz_dense(), {"S", "T", "X2"});
  CodingParams& w = c.omega;
  w.mu = 1;
  w.rate_names = {"r1"};
  w.aux = {Factor::concrete("U", 2), Factor::symbolic("X1u", "R", 1, "X1")};
  w.codebooks = {{{"U", "X1u"}, {1}, {}}};
  NodeCoding n1, n2;
  n1.compress = {1};
  n1.kernels = {cond_kernel({"S"}, {2}, {"U"}, {2}, [](auto& p, auto& o) { return flip(p[0], o[0], kWzAux); })};
  n1.maps = {alias("X1", "X1u")};
  n2.decode = {1};
  n2.maps = {alias("X2", "U")};
  w.nodes = {n1, n2};
  c.rates = {"R"};
  return c;
}

void wz_check(const CatalogInstance& inst, Verdict& v) {
  check_common(inst, v);
  const Dense d = wz_dense();
  const auto rr = derive_region(inst.network, inst.omega, inst.mode);
  check_oracle(v, rr.system, d, inst, inst.mode);
  const double c = d.mi({"U"}, {"S"}, {"T"});
  check_fingerprint(v, "region", rr.region.rows, {{lin({{"R", 1}}), Sense::Greater, {}, c}});
  // U - S - T with crossovers 0.1 and 0.25: I(U;S|T) = H(0.1 * 0.75 + 0.9 * 0.25) - H(0.1)
  check(v, "R > I(U;S|T)", fixed(c), std::abs(c - (h2(0.3) - h2(kWzAux))) <= kTol);
}

// ---- mac-binary-adder ----

Dense mac_dense() {
  return enumerate({"V1", "V2", "X1", "X2", "Y3"}, {2, 2, 2, 2, 3}, {{0.5, 0.5}, {0.5, 0.5}},
                   [](const std::vector<int>& v) { return std::vector<int>{v[0], v[1], v[0], v[1], v[0] + v[1]}; });
}

Admn mac_network() {
  Admn a;
  a.factors = {Factor::symbolic("M1", "R1"),        Factor::symbolic("M2", "R2"),
               Factor::concrete("X1", 2),           Factor::concrete("X2", 2),
               Factor::concrete("Y3", 3),           Factor::symbolic("X31", "R1", 1, "M1"),
               Factor::symbolic("X32", "R2", 1, "M2")};
  a.nodes.push_back({"sender 1", {"M1"}, {"X1"}, {}, 0});
  a.nodes.push_back({"sender 2", {"M2"}, {"X2"}, {}, 0});
  a.nodes.push_back({"receiver",
                     {"Y3"},
                     {"X31", "X32"},
                     {det_kernel({"X1", "X2"}, {2, 2}, {"Y3"}, {3}, [](auto& p) { return std::vector<int>{p[0] + p[1]}; })},
                     0});
  a.target = target_from(mac_dense(), {"X1", "X2", "Y3"}, {{"X31", "M1"}, {"X32", "M2"}});
  return a;
}

CodingParams mac_omega() {
  CodingParams w;
  w.mu = 2;
  w.rate_names = {"r1", "r2"};
  w.aux = {Factor::concrete("V1", 2), Factor::concrete("V2", 2)};
  w.codebooks = {{{"M1", "V1"}, {1}, {}}, {{"M2", "V2"}, {2}, {}}};
  NodeCoding n1, n2, n3;
  n1.compress = {1};
  n1.kernels = {source_kernel("V1", {0.5, 0.5})};
  n1.maps = {alias("X1", "V1")};
  n2.compress = {2};
  n2.kernels = {source_kernel("V2", {0.5, 0.5})};
  n2.maps = {alias("X2", "V2")};
  n3.decode = {1, 2};
  n3.maps = {alias("X31", "M1"), alias("X32", "M2")};
  w.nodes = {n1, n2, n3};
  return w;
}

CatalogInstance mac_adder() {
  CatalogInstance c;
  c.name = "mac-binary-adder";
  c.summary = "two-user multiple access channel Y3 = X1 + X2 with uniform inputs";
  c.network = mac_network();
  c.omega = mac_omega();
  c.rates = {"R1", "R2"};
  return c;
}

std::vector<Want> mac_rows(const Dense& d) {
  return {{lin({{"r1", 1}}), Sense::Greater, lin({{"R1", 1}}), 0.0},
          {lin({{"r2", 1}}), Sense::Greater, lin({{"R2", 1}}), 0.0},
          {lin({{"r1", 1}}), Sense::Less, {}, d.mi({"X1"}, {"Y3"}, {"X2"})},
          {lin({{"r2", 1}}), Sense::Less, {}, d.mi({"X2"}, {"Y3"}, {"X1"})},
          {lin({{"r1", 1}, {"r2", 1}}), Sense::Less, {}, d.mi({"X1", "X2"}, {"Y3"})}};
}

void mac_check(const CatalogInstance& inst, Verdict& v) {
  check_common(inst, v);
  const Dense d = mac_dense();
  const auto rr = derive_region(inst.network, inst.omega, inst.mode);
  check_fingerprint(v, "system", rr.system.rows, mac_rows(d));
  check_oracle(v, rr.system, d, inst, inst.mode);
  check_fingerprint(v, "region", rr.region.rows,
                    {{lin({{"R1", 1}}), Sense::Less, {}, 1.0},
                     {lin({{"R2", 1}}), Sense::Less, {}, 1.0},
                     {lin({{"R1", 1}, {"R2", 1}}), Sense::Less, {}, 1.5}});
}

// ---- wiretap-system ----

constexpr double kWtAux = 0.15, kWtMain = 0.1, kWtEve = 0.2;

Dense wiretap_dense() {
  return enumerate({"U", "X1a", "X1", "Y2", "Y3"}, {2, 2, 2, 2, 2},
                   {{0.5, 0.5}, {1 - kWtAux, kWtAux}, {1 - kWtMain, kWtMain}, {1 - kWtEve, kWtEve}},
                   [](const std::vector<int>& v) {
                     const int u = v[0], x = u ^ v[1], y2 = x ^ v[2];
                     return std::vector<int>{u, x, x, y2, y2 ^ v[3]};
                   });
}

CatalogInstance wiretap() {
  CatalogInstance c;
  c.name = "wiretap-system";
  c.summary = "degraded wiretap channel with public, confidential and dummy messages";
  Admn& a = c.network;
  a.factors = {Factor::symbolic("M", "R"),  Factor::symbolic("M1", "R1"), Factor::symbolic("M2", "R2"),
               Factor::concrete("X1", 2),   Factor::concrete("Y2", 2),    Factor::concrete("Y3", 2),
               Factor::symbolic("X2", "R", 1, "M")};
  a.nodes.push_back({"encoder", {"M", "M1", "M2"}, {"X1"}, {}, 0});
  a.nodes.push_back({"receiver",
                     {"Y2"},
                     {"X2"},
                     {cond_kernel({"X1"}, {2}, {"Y2"}, {2}, [](auto& p, auto& o) { return flip(p[0], o[0], kWtMain); })},
                     0});
  a.nodes.push_back({"eavesdropper",
                     {"Y3"},
                     {},
                     {cond_kernel({"Y2"}, {2}, {"Y3"}, {2}, [](auto& p, auto& o) { return flip(p[0], o[0], kWtEve); })},
                     0});
  a.target = target_from(wiretap_dense(), {"X1", "Y2", "Y3"}, {{"X2", "M"}});
  CodingParams& w = c.omega;
  w.mu = 2;
  w.rate_names = {"r1", "r2"};
  w.aux = {Factor::concrete("U", 2), Factor::concrete("X1a", 2)};
  w.codebooks = {{{"M", "M1", "U"}, {1}, {}}, {{"M2", "X1a"}, {1, 2}, {1}}};
  NodeCoding n1, n2, n3;
  n1.compress = {1, 2};
  n1.kernels = {cond_kernel({}, {}, {"U", "X1a"}, {2, 2},
                            [](auto&, auto& o) { return 0.5 * flip(o[0], o[1], kWtAux); })};
  n1.maps = {alias("X1", "X1a")};
  n2.decode = {1};
  n2.maps = {alias("X2", "M")};
  w.nodes = {n1, n2, n3};
  c.rates = {"R", "R1", "R2"};
  return c;
}

void wiretap_check(const CatalogInstance& inst, Verdict& v) {
  check_common(inst, v);
  const Dense d = wiretap_dense();
  const double iu = d.mi({"U"}, {"Y2"});
  const auto rr = derive_region(inst.network, inst.omega, inst.mode);
  check_fingerprint(v, "system", rr.system.rows,
                    {{lin({{"r1", 1}}), Sense::Greater, lin({{"R", 1}, {"R1", 1}}), 0.0},
                     {lin({{"r1", 1}, {"r2", 1}}), Sense::Greater, lin({{"R", 1}, {"R1", 1}, {"R2", 1}}), 0.0},
                     {lin({{"r1", 1}}), Sense::Less, {}, iu}});
  check_oracle(v, rr.system, d, inst, inst.mode);
  const InequalitySystem t1 = generate_system(inst.omega, inst.network, Mode::Theorem1);
  check(v, "theorem1 rows", std::to_string(t1.rows.size()), t1.rows.size() == 4);
  std::vector<std::string> issues;
  const double dev = rows_vs_oracle(t1, d, sym_table(inst.network, inst.omega), inst.omega, Mode::Theorem1,
                                    [](int k) { return k; }, issues);
  check(v, "theorem1 rows vs oracle", fixed(dev, 12), dev <= kTol && issues.empty());
  check_fingerprint(v, "region", rr.region.rows, {{lin({{"R", 1}, {"R1", 1}}), Sense::Less, {}, iu}});
}

// ---- han-kobayashi ----

constexpr double kHkAux = 0.25, kHkCross = 0.1;

Dense hk_dense() {
  return enumerate({"V1", "X1a", "V2", "X2a", "X1", "X2", "Y3", "Y4"}, {2, 2, 2, 2, 2, 2, 3, 3},
                   {{0.5, 0.5}, {1 - kHkAux, kHkAux}, {0.5, 0.5}, {1 - kHkAux, kHkAux}, {1 - kHkCross, kHkCross}},
                   [](const std::vector<int>& v) {
                     const int x1 = v[0] ^ v[1], x2 = v[2] ^ v[3];
                     return std::vector<int>{v[0], x1, v[2], x2, x1, x2, x1 + x2, x2 + (x1 ^ v[4])};
                   });
}

CatalogInstance han_kobayashi() {
  CatalogInstance c;
  c.name = "han-kobayashi";
  c.summary = "two-user interference channel with common/private message splitting";
  Admn& a = c.network;
  a.factors = {Factor::symbolic("M10", "R10"), Factor::symbolic("M11", "R11"),
               Factor::symbolic("M20", "R20"), Factor::symbolic("M22", "R22"),
               Factor::concrete("X1", 2),      Factor::concrete("X2", 2),
               Factor::concrete("Y3", 3),      Factor::concrete("Y4", 3),
               Factor::symbolic("X3a", "R10", 1, "M10"), Factor::symbolic("X3b", "R11", 1, "M11"),
               Factor::symbolic("X4a", "R20", 1, "M20"), Factor::symbolic("X4b", "R22", 1, "M22")};
  a.nodes.push_back({"sender 1", {"M10", "M11"}, {"X1"}, {}, 0});
  a.nodes.push_back({"sender 2", {"M20", "M22"}, {"X2"}, {}, 0});
  a.nodes.push_back({"receiver 1",
                     {"Y3"},
                     {"X3a", "X3b"},
                     {det_kernel({"X1", "X2"}, {2, 2}, {"Y3"}, {3}, [](auto& p) { return std::vector<int>{p[0] + p[1]}; })},
                     0});
  a.nodes.push_back({"receiver 2",
                     {"Y4"},
                     {"X4a", "X4b"},
                     {cond_kernel({"X1", "X2"}, {2, 2}, {"Y4"}, {3},
                                  [](auto& p, auto& o) {
                                    double s = 0;
                                    for (int z = 0; z < 2; ++z)
                                      if (p[1] + (p[0] ^ z) == o[0]) s += z ? kHkCross : 1 - kHkCross;
                                    return s;
                                  })},
                     0});
  a.target = target_from(hk_dense(), {"X1", "X2", "Y3", "Y4"},
                         {{"X3a", "M10"}, {"X3b", "M11"}, {"X4a", "M20"}, {"X4b", "M22"}});
  CodingParams& w = c.omega;
  w.mu = 4;
  w.rate_names = {"r1", "r2", "r3", "r4"};
  w.aux = {Factor::concrete("V1", 2), Factor::concrete("X1a", 2), Factor::concrete("V2", 2), Factor::concrete("X2a", 2)};
  w.codebooks = {{{"M10", "V1"}, {1}, {}}, {{"M11", "X1a"}, {1, 2}, {1}}, {{"M20", "V2"}, {3}, {}},
                 {{"M22", "X2a"}, {3, 4}, {3}}};
  auto superposed = [](const FactorId& cloud, const FactorId& sat) {
    return cond_kernel({}, {}, {cloud, sat}, {2, 2}, [](auto&, auto& o) { return 0.5 * flip(o[0], o[1], kHkAux); });
  };
  NodeCoding n1, n2, n3, n4;
  n1.compress = {1, 2};
  n1.kernels = {superposed("V1", "X1a")};
  n1.maps = {alias("X1", "X1a")};
  n2.compress = {3, 4};
  n2.kernels = {superposed("V2", "X2a")};
  n2.maps = {alias("X2", "X2a")};
  n3.decode = {1, 2};
  n3.nonunique = {3};
  n3.maps = {alias("X3a", "M10"), alias("X3b", "M11")};
  n4.decode = {3, 4};
  n4.nonunique = {1};
  n4.maps = {alias("X4a", "M20"), alias("X4b", "M22")};
  w.nodes = {n1, n2, n3, n4};
  c.rates = {"R10", "R11", "R20", "R22"};
  return c;
}

void hk_check(const CatalogInstance& inst, Verdict& v) {
  check_common(inst, v);
  const auto rr = derive_region(inst.network, inst.omega, inst.mode);
  check(v, "system rows", std::to_string(rr.system.rows.size()), rr.system.rows.size() == 12);
  check_oracle(v, rr.system, hk_dense(), inst, inst.mode);
  check(v, "region rows", std::to_string(rr.region.rows.size()), !rr.region.infeasible && !rr.region.rows.empty());
}

// ---- interference-decoding ----

Dense id_dense() {
  std::vector<std::string> names = {"X1a", "X2a", "X3a", "X1",  "X2",  "X3",  "X12", "X13", "X21",
                                    "X23", "X31", "X32", "V1",  "V2",  "V3",  "Z1",  "Z2",  "Z3"};
  std::vector<int> sizes = {2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 3, 3, 3, 4, 4, 4};
  return enumerate(names, sizes, {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}, [](const std::vector<int>& v) {
    const int x1 = v[0], x2 = v[1], x3 = v[2];
    const int v1 = x2 + x3, v2 = x1 + x3, v3 = x1 + x2;
    return std::vector<int>{x1, x2, x3, x1, x2, x3, x1, x1, x2, x2, x3, x3, v1, v2, v3, x1 + v1, x2 + v2, x3 + v3};
  });
}

CatalogInstance interference_decoding() {
  CatalogInstance c;
  c.name = "interference-decoding";
  c.summary = "three-user interference channel Zk = Xk + sum of the others, decoded through a virtual node";
  Admn base;
  for (int k = 1; k <= 3; ++k) {
    const std::string s = std::to_string(k);
    base.factors.push_back(Factor::symbolic("M" + s, "R" + s));
    base.factors.push_back(Factor::concrete("X" + s, 2));
  }
  for (int k = 1; k <= 3; ++k) {
    const std::string s = std::to_string(k);
    base.factors.push_back(Factor::concrete("Z" + s, 4));
    base.factors.push_back(Factor::symbolic("Mhat" + s, "R" + s, 1, "M" + s));
  }
  for (int k = 1; k <= 3; ++k) {
    const std::string s = std::to_string(k);
    base.nodes.push_back({"sender " + s, {"M" + s}, {"X" + s}, {}, 0});
  }
  for (int k = 1; k <= 3; ++k) {
    const std::string s = std::to_string(k);
    base.nodes.push_back({"receiver " + s,
                          {"Z" + s},
                          {"Mhat" + s},
                          {det_kernel({"X1", "X2", "X3"}, {2, 2, 2}, {"Z" + s}, {4},
                                      [](auto& p) { return std::vector<int>{p[0] + p[1] + p[2]}; })},
                          0});
  }
  const Dense d = id_dense();
  base.target = target_from(d, {"X1", "X2", "X3", "Z1", "Z2", "Z3"},
                            {{"Mhat1", "M1"}, {"Mhat2", "M2"}, {"Mhat3", "M3"}});
  const VarSet virt = {"X12", "X13", "X21", "X23", "X31", "X32", "V1", "V2", "V3"};
  std::vector<Factor> vf;
  std::vector<int> vs;
  for (const auto& id : virt) {
    vf.push_back(Factor::concrete(id, id[0] == 'V' ? 3 : 2));
    vs.push_back(vf.back().alphabet);
  }
  const Kernel g = det_kernel({"X1", "X2", "X3"}, {2, 2, 2}, virt, vs, [](auto& p) {
    return std::vector<int>{p[0], p[0], p[1], p[1], p[2], p[2], p[1] + p[2], p[0] + p[2], p[0] + p[1]};
  });
  c.network = insert_virtual_node(base, 4, vf, g);

  CodingParams& w = c.omega;
  w.mu = 12;
  for (int i = 1; i <= 12; ++i) w.rate_names.push_back("r" + std::to_string(i));
  for (int k = 1; k <= 3; ++k) {
    const std::string s = std::to_string(k);
    w.aux.push_back(Factor::concrete("X" + s + "a", 2));
    w.codebooks.push_back({{"M" + s, "X" + s + "a"}, {k}, {}});
  }
  for (std::size_t i = 0; i < virt.size(); ++i) w.codebooks.push_back({{virt[i]}, {static_cast<int>(i) + 4}, {}});
  w.nodes.resize(7);
  for (int k = 1; k <= 3; ++k) {
    const std::string s = std::to_string(k);
    w.nodes[k - 1].compress = {k};
    w.nodes[k - 1].kernels = {source_kernel("X" + s + "a", {0.5, 0.5})};
    w.nodes[k - 1].maps = {alias("X" + s, "X" + s + "a")};
    // receiver k decodes its own codebook and V_k nonuniquely
    w.nodes[k + 3].decode = {k};
    w.nodes[k + 3].nonunique = {k + 9};
    w.nodes[k + 3].maps = {alias("Mhat" + s, "M" + s)};
  }
  w.nodes[3].compress = {4, 5, 6, 7, 8, 9, 10, 11, 12};
  c.rates = {"R1", "R2", "R3"};
  return c;
}

void id_check(const CatalogInstance& inst, Verdict& v) {
  check_common(inst, v);
  const Dense d = id_dense();
  const auto rr = derive_region(inst.network, inst.omega, inst.mode);
  check_oracle(v, rr.system, d, inst, inst.mode);
  std::map<std::string, double> box;
  for (int k = 1; k <= 3; ++k) {
    const std::string s = std::to_string(k);
    box["R" + s] = d.h({"Z" + s}) - d.h({"V" + s});
  }
  std::vector<std::string> missing;
  for (const auto& [r, c] : box) {
    bool found = false;
    for (const auto& row : rr.region.rows)
      found = found || (row.lhs == lin({{r, 1}}) && row.sense == Sense::Less && std::abs(row.rhs.constant - c) <= kTol);
    if (!found) missing.push_back(r + " < " + fixed(c));
  }
  check(v, "box rows", fixed(box["R1"]), missing.empty() && !rr.region.infeasible);
  for (const auto& s : missing) v.mismatches.push_back("  missing " + s);
  // every remaining row holds on the whole box [0, c]^3
  std::vector<std::string> loose;
  for (const auto& row : rr.region.rows) {
    double lo = 0, hi = 0;
    for (const auto& [n, a] : row.lhs) {
      const double t = a.to_double() * box.at(n);
      (t > 0 ? hi : lo) += t;
    }
    const bool ok = row.sense == Sense::Less ? hi <= row.rhs.constant + kTol : lo >= row.rhs.constant - kTol;
    if (!ok) loose.push_back(row.str(6));
  }
  check(v, "implied by box", std::to_string(rr.region.rows.size()) + " rows", loose.empty());
  for (const auto& s : loose) v.mismatches.push_back("  cuts the box: " + s);
}

// ---- correlated-sources-mac ----

constexpr double kCesNoise = 0.1;

int ces_output(bool roomy, int x2, int x3) { return roomy ? x2 + 8 * x3 : (x2 + x3) % 4; }

Dense ces_dense(bool roomy) {
  return enumerate({"Ycp", "X1a", "V2", "V3", "X2a", "X3a", "Y", "Xcp", "X2", "X3"},
                   {2, 2, 4, 4, 8, 8, roomy ? 64 : 4, 2, 8, 8},
                   {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}, {1 - kCesNoise, kCesNoise}, {0.5, 0.5}, {0.5, 0.5}},
                   [roomy](const std::vector<int>& v) {
                     const int c = v[0], a = v[2], b = a ^ v[3];
                     const int v2 = 2 * c + a, v3 = 2 * c + b, x2 = 4 * v[4] + v2, x3 = 4 * v[5] + v3;
                     return std::vector<int>{c, v[1], v2, v3, x2, x3, ces_output(roomy, x2, x3), v[1], x2, x3};
                   });
}

// the four conditions for sending correlated sources over a MAC, with W the common part
bool ces_feasible(const Dense& d) {
  return d.h({"V2", "V3"}) - d.h({"V3"}) < d.mi({"X2a"}, {"Y"}, {"X3a", "V3", "Ycp"}) &&
         d.h({"V2", "V3"}) - d.h({"V2"}) < d.mi({"X3a"}, {"Y"}, {"X2a", "V2", "Ycp"}) &&
         d.h({"V2", "V3", "Ycp"}) - d.h({"Ycp"}) < d.mi({"X2a", "X3a"}, {"Y"}, {"Ycp"}) &&
         d.h({"V2", "V3"}) < d.mi({"X2a", "X3a"}, {"Y"});
}

}  // namespace

CatalogInstance correlated_sources_instance(bool scaled_adder) {
  CatalogInstance c;
  c.name = "correlated-sources-mac";
  c.summary = "lossless transmission of sources with a common part over a MAC";
  const int ny = scaled_adder ? 64 : 4;
  Admn base;
  base.factors = {Factor::concrete("V2", 4),  Factor::concrete("X2", 8),  Factor::concrete("V3", 4),
                  Factor::concrete("X3", 8),  Factor::concrete("Y", ny),  Factor::concrete("V2h", 4),
                  Factor::concrete("V3h", 4)};
  base.nodes.push_back({"source 2", {"V2"}, {"X2"}, {source_kernel("V2", {0.25, 0.25, 0.25, 0.25})}, 0});
  base.nodes.push_back({"source 3",
                        {"V3"},
                        {"X3"},
                        {cond_kernel({"V2"}, {4}, {"V3"}, {4},
                                     [](auto& p, auto& o) {
                                       if (p[0] / 2 != o[0] / 2) return 0.0;
                                       return flip(p[0] % 2, o[0] % 2, kCesNoise);
                                     })},
                        0});
  base.nodes.push_back({"receiver",
                        {"Y"},
                        {"V2h", "V3h"},
                        {det_kernel({"X2", "X3"}, {8, 8}, {"Y"}, {ny},
                                    [scaled_adder](auto& p) { return std::vector<int>{ces_output(scaled_adder, p[0], p[1])}; })},
                        0});
  const Dense d = ces_dense(scaled_adder);
  base.target = target_from(d, {"V2", "V3", "Y"}, {{"V2h", "V2"}, {"V3h", "V3"}});
  c.network = split_common_part(base, 1, 2, 2);

  CodingParams& w = c.omega;
  w.mu = 3;
  w.rate_names = {"r1", "r2", "r3"};
  w.aux = {Factor::concrete("X1a", 2), Factor::concrete("X2a", 8), Factor::concrete("X3a", 8)};
  w.codebooks = {{{"Ycp", "X1a"}, {1}, {}}, {{"V2", "X2a"}, {1, 2}, {1}}, {{"V3", "X3a"}, {1, 3}, {1}}};
  // X_k carries V_k plus one fresh uniform bit
  auto spread = [](const FactorId& v, const FactorId& x) {
    return cond_kernel({v}, {4}, {x}, {8}, [](auto& p, auto& o) { return o[0] % 4 == p[0] ? 0.5 : 0.0; });
  };
  NodeCoding n1, n2, n3, n4;
  n1.compress = {1};
  n1.kernels = {source_kernel("X1a", {0.5, 0.5})};
  n1.maps = {alias("Xcp", "X1a")};
  n2.decode = {1};
  n2.compress = {2};
  n2.kernels = {spread("V2", "X2a")};
  n2.maps = {alias("X2", "X2a")};
  n3.decode = {1};
  n3.compress = {3};
  n3.kernels = {spread("V3", "X3a")};
  n3.maps = {alias("X3", "X3a")};
  n4.decode = {1, 2, 3};
  n4.maps = {alias("V2h", "V2"), alias("V3h", "V3")};
  w.nodes = {n1, n2, n3, n4};
  return c;
}

namespace {

CatalogInstance correlated_sources() { return correlated_sources_instance(true); }

void ces_check(const CatalogInstance& inst, Verdict& v) {
  check_common(inst, v);
  for (bool roomy : {true, false}) {
    const CatalogInstance ci = roomy ? inst : correlated_sources_instance(false);
    const std::string tag = roomy ? "scaled adder" : "mod-4 adder";
    if (!roomy) check_common(ci, v);
    const Dense d = ces_dense(roomy);
    const auto rr = derive_region(ci.network, ci.omega, ci.mode);
    if (roomy) check_oracle(v, rr.system, d, ci, ci.mode);
    const bool want = ces_feasible(d);
    const bool got = !rr.region.infeasible;
    check(v, tag + " feasible", got ? "true" : "false", got == want,
          std::string("oracle says ") + (want ? "feasible" : "infeasible"));
  }
}

// ---- unfolded relay channel ----

constexpr double kRelayNoise = 0.1, kNncQuant = 0.05;

Dmn relay_dmn() {
  Dmn d;
  d.x_alphabets = {2, 2, 0};
  d.y_alphabets = {0, 2, 4};
  d.destinations = {3};
  // rows (x1, x2), columns (y2, y3); Y2 = X1 xor Z2, Y3 = 2 X2 + (X1 xor Z3)
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      for (int y2 = 0; y2 < 2; ++y2)
        for (int y3 = 0; y3 < 4; ++y3)
          d.channel.push_back(y3 / 2 != x2 ? 0.0 : flip(x1, y2, kRelayNoise) * flip(x1, y3 % 2, kRelayNoise));
  return d;
}

std::string bs(int b) { return std::to_string(b); }

CatalogInstance relay_unfold() {
  CatalogInstance c;
  c.name = "relay-unfold";
  c.summary = "relay channel unfolded over 2 blocks, direct transmission with a silent relay";
  c.kind = EntryKind::Unfold;
  c.dmn = relay_dmn();
  c.blocks = 2;
  c.network = unfold(c.dmn, c.blocks);
  const int n = 3, nb = c.blocks;
  CodingParams& w = c.omega;
  w.mu = 1;
  w.rate_names = {"r1"};
  Codebook u0{{"M"}, {1}, {}};
  NodeCoding src;
  src.compress = {1};
  for (int b = 1; b <= nb; ++b) {
    w.aux.push_back(Factor::concrete("A1." + bs(b), 2));
    u0.factors.push_back("A1." + bs(b));
    src.kernels.push_back(source_kernel("A1." + bs(b), {0.5, 0.5}));
  }
  w.codebooks = {u0};
  w.nodes.resize(n * (nb + 1));
  w.nodes[unfold_index(n, 1, 1) - 1] = src;
  for (int b = 1; b <= nb; ++b) {
    w.nodes[unfold_index(n, 1, b) - 1].maps.push_back(alias(unfold_x(1, b), "A1." + bs(b)));
    w.nodes[unfold_index(n, 2, b) - 1].maps.push_back(lookup(unfold_x(2, b), {}, {}, [](auto&) { return 0; }));
  }
  NodeCoding& dst = w.nodes[unfold_index(n, 3, nb + 1) - 1];
  dst.decode = {1};
  dst.maps = {alias("Mhat3", "M")};
  c.rates = {"R"};
  return c;
}

Dense relay_dense() {
  return enumerate({"X1", "X2", "Y3"}, {2, 2, 4}, {{0.5, 0.5}, {1 - kRelayNoise, kRelayNoise}},
                   [](const std::vector<int>& v) { return std::vector<int>{v[0], 0, v[0] ^ v[1]}; });
}

void relay_check(const CatalogInstance& inst, Verdict& v) {
  check(v, "nodes", std::to_string(inst.network.size()), inst.network.size() == 3 * (inst.blocks + 1));
  check_common(inst, v);
  const auto rr = derive_region(inst.network, inst.omega, inst.mode);
  const double c = relay_dense().mi({"X1"}, {"Y3"}, {"X2"});
  check_fingerprint(v, "region", rr.region.rows, {{lin({{"R", 1}}), Sense::Less, {}, c}});
}

// ---- noisy network coding over the unfolded relay channel ----

}  // namespace

CatalogInstance nnc_instance(int blocks) {
  if (blocks < 2) throw Error(ErrorKind::DomainError, "nnc needs at least 2 blocks");
  CatalogInstance c;
  c.name = "nnc-unfold";
  c.summary = "noisy network coding on the relay channel, unfolded over " + bs(blocks) + " blocks";
  c.kind = EntryKind::Unfold;
  c.mode = Mode::Theorem1;
  c.dmn = relay_dmn();
  c.blocks = blocks;
  c.network = unfold(c.dmn, blocks);
  const int n = 3, nb = blocks;
  CodingParams& w = c.omega;
  // l_0 for the message, l_{2,b} (b = 0..B-1) for the relay's block-b index
  w.mu = nb + 1;
  w.rate_names = {"r0"};
  for (int b = 0; b < nb; ++b) w.rate_names.push_back("r2." + bs(b));
  auto l2 = [](int b) { return b + 2; };
  w.nodes.resize(n * (nb + 1));

  Codebook u0{{"M"}, {1}, {}};
  NodeCoding& src = w.nodes[unfold_index(n, 1, 1) - 1];
  src.compress = {1};
  for (int b = 1; b <= nb; ++b) {
    w.aux.push_back(Factor::concrete("A1." + bs(b), 2));
    u0.factors.push_back("A1." + bs(b));
    src.kernels.push_back(source_kernel("A1." + bs(b), {0.5, 0.5}));
    w.nodes[unfold_index(n, 1, b) - 1].maps.push_back(alias(unfold_x(1, b), "A1." + bs(b)));
  }
  w.codebooks.push_back(u0);

  // relay: V2.b drives X2.b; Yhat2.b compresses Y2.b, superposed on V2.b
  std::vector<int> vidx(nb + 1, 0), qidx(nb + 1, 0);
  w.aux.push_back(Factor::concrete("V2.1", 2));
  w.codebooks.push_back({{"V2.1"}, {l2(0)}, {}});
  vidx[1] = w.nu();
  NodeCoding& r1 = w.nodes[unfold_index(n, 2, 1) - 1];
  r1.compress = {vidx[1]};
  r1.kernels = {source_kernel("V2.1", {0.5, 0.5})};
  r1.maps = {alias(unfold_x(2, 1), "V2.1")};
  IndexSet known = {vidx[1]};
  for (int b = 2; b <= nb; ++b) {
    const FactorId q = "Yhat2." + bs(b - 1), vb = "V2." + bs(b);
    w.aux.push_back(Factor::concrete(q, 2));
    w.codebooks.push_back({{q}, {l2(b - 2), l2(b - 1)}, {vidx[b - 1]}});
    qidx[b - 1] = w.nu();
    w.aux.push_back(Factor::concrete(vb, 2));
    w.codebooks.push_back({{vb}, {l2(b - 1)}, {}});
    vidx[b] = w.nu();
    NodeCoding& rb = w.nodes[unfold_index(n, 2, b) - 1];
    rb.decode = known;
    rb.compress = {qidx[b - 1], vidx[b]};
    rb.kernels = {cond_kernel({unfold_y(2, b - 1)}, {2}, {q}, {2},
                              [](auto& p, auto& o) { return flip(p[0], o[0], kNncQuant); }),
                  source_kernel(vb, {0.5, 0.5})};
    rb.maps = {alias(unfold_x(2, b), vb)};
    known = index_union(known, rb.compress);
  }
  NodeCoding& dst = w.nodes[unfold_index(n, 3, nb + 1) - 1];
  dst.decode = {1};
  dst.nonunique = known;
  dst.maps = {alias("Mhat3", "M")};
  c.rates = {"R"};
  return c;
}

namespace {

Dense nnc_dense(int blocks) {
  std::vector<std::string> names;
  std::vector<int> sizes;
  for (int b = 1; b <= blocks; ++b) {
    for (const auto& s : {"A1.", "V2.", "X1.", "X2.", "Y2.", "Yhat2."}) {
      names.push_back(s + bs(b));
      sizes.push_back(2);
    }
    names.push_back("Y3." + bs(b));
    sizes.push_back(4);
  }
  // per block: A1, V2, Z2, Z3, Q
  std::vector<std::vector<double>> src;
  for (int b = 1; b <= blocks; ++b) {
    src.push_back({0.5, 0.5});
    src.push_back({0.5, 0.5});
    src.push_back({1 - kRelayNoise, kRelayNoise});
    src.push_back({1 - kRelayNoise, kRelayNoise});
    src.push_back({1 - kNncQuant, kNncQuant});
  }
  return enumerate(names, sizes, src, [blocks](const std::vector<int>& v) {
    std::vector<int> out;
    for (int b = 0; b < blocks; ++b) {
      const int a = v[5 * b], x2 = v[5 * b + 1], y2 = a ^ v[5 * b + 2];
      out.insert(out.end(), {a, x2, a, x2, y2, y2 ^ v[5 * b + 4], 2 * x2 + (a ^ v[5 * b + 3])});
    }
    return out;
  });
}

CatalogInstance nnc_unfold() { return nnc_instance(3); }

void nnc_check(const CatalogInstance& inst, Verdict& v) {
  check(v, "nodes", std::to_string(inst.network.size()), inst.network.size() == 3 * (inst.blocks + 1));
  check_common(inst, v);
  const auto rr = derive_region(inst.network, inst.omega, inst.mode);
  check_oracle(v, rr.system, nnc_dense(inst.blocks), inst, inst.mode);
  const double bound = rate_upper_bound(rr.region, "R");
  const double limit = nnc_closed_form();
  check(v, "R bound", fixed(bound), std::isfinite(bound) && bound <= limit + kTol,
        "closed form " + fixed(limit));
}

// ---- mac-duality ----

constexpr double kBtSource = 0.1, kBtAux = 0.1, kMdFlip = 0.1, kBcCorr = 0.3, kBc2 = 0.1, kBc1 = 0.2;

Dense bt_dense() {
  return enumerate({"X1", "X2", "V1", "V2", "Y3"}, {2, 2, 2, 2, 3},
                   {{0.5, 0.5}, {1 - kBtSource, kBtSource}, {1 - kBtAux, kBtAux}, {1 - kBtAux, kBtAux}},
                   [](const std::vector<int>& v) {
                     const int x1 = v[0], x2 = x1 ^ v[1], v1 = x1 ^ v[2], v2 = x2 ^ v[3];
                     return std::vector<int>{x1, x2, v1, v2, v1 + v2};
                   });
}

// y3 ~ (1/4, 1/2, 1/4); (x1, x2) = (0,0), {(0,1),(1,0)}, (1,1), then x1 flipped w.p. 0.1
Dense md_dense() {
  return enumerate({"Y3", "X1u", "X2u", "X1", "X2"}, {3, 2, 2, 2, 2}, {{0.5, 0.5}, {0.5, 0.5}, {1 - kMdFlip, kMdFlip}},
                   [](const std::vector<int>& v) {
                     const int x1 = v[0], x2 = v[1], y3 = x1 + x2, f = x1 ^ v[2];
                     return std::vector<int>{y3, f, x2, f, x2};
                   });
}

Dense bc_dense() {
  return enumerate({"V1", "V2", "Y3", "X1", "X2"}, {2, 2, 3, 2, 2},
                   {{0.5, 0.5}, {1 - kBcCorr, kBcCorr}, {1 - kBc1, kBc1}, {1 - kBc2, kBc2}},
                   [](const std::vector<int>& v) {
                     const int v1 = v[0], v2 = v1 ^ v[1], y3 = v1 + v2;
                     return std::vector<int>{v1, v2, y3, (y3 == 2) ^ v[2], (y3 >= 1) ^ v[3]};
                   });
}

DualParams mac_dual_params() {
  DualParams dp;
  dp.original = {DualType::Original, mac_network(), mac_omega()};
  const Admn& orig = dp.original.network;

  // type I: correlated sources at the senders, descriptions M1, M2, reconstruction Y3
  {
    const Dense d = bt_dense();
    std::vector<std::vector<Kernel>> ks = {
        {source_kernel("X1", {0.5, 0.5})},
        {cond_kernel({"X1"}, {2}, {"X2"}, {2}, [](auto& p, auto& o) { return flip(p[0], o[0], kBtSource); })},
        {}};
    DualProblem p{DualType::TypeI, construct_dual(orig, DualType::TypeI, ks, target_from(d, {"X1", "X2", "Y3"})), {}};
    CodingParams w = dual_skeleton(dp.original.omega, DualType::TypeI);
    w.aux = {Factor::concrete("V1", 2), Factor::concrete("V2", 2), Factor::symbolic("M1u", "R1", 1, "M1"),
             Factor::symbolic("M2u", "R2", 1, "M2")};
    w.codebooks[0].factors = {"M1u", "V1"};
    w.codebooks[1].factors = {"M2u", "V2"};
    w.nodes[0].kernels = {cond_kernel({"X1"}, {2}, {"V1"}, {2}, [](auto& p, auto& o) { return flip(p[0], o[0], kBtAux); })};
    w.nodes[0].maps = {alias("M1", "M1u")};
    w.nodes[1].kernels = {cond_kernel({"X2"}, {2}, {"V2"}, {2}, [](auto& p, auto& o) { return flip(p[0], o[0], kBtAux); })};
    w.nodes[1].maps = {alias("M2", "M2u")};
    w.nodes[2].maps = {lookup("Y3", {"V1", "V2"}, {2, 2}, [](auto& x) { return x[0] + x[1]; })};
    p.omega = w;
    dp.duals.push_back(p);
  }
  // type II: one source Y3 described by two messages, each decoded at one receiver
  {
    const Dense d = md_dense();
    std::vector<std::vector<Kernel>> ks = {{source_kernel("Y3", {0.25, 0.5, 0.25})}, {}, {}};
    DualProblem p{DualType::TypeII, construct_dual(orig, DualType::TypeII, ks, target_from(d, {"Y3", "X1", "X2"})), {}};
    CodingParams w = dual_skeleton(dp.original.omega, DualType::TypeII);
    w.aux = {Factor::concrete("X1u", 2), Factor::concrete("X2u", 2), Factor::symbolic("X31u", "R1", 1, "M1"),
             Factor::symbolic("X32u", "R2", 1, "M2")};
    w.codebooks[0].factors = {"X31u", "X1u"};
    w.codebooks[1].factors = {"X32u", "X2u"};
    // x1 before the flip is y3 - x2
    w.nodes[0].kernels = {cond_kernel({"Y3"}, {3}, {"X1u", "X2u"}, {2, 2}, [](auto& p, auto& o) {
      const int x1 = p[0] - o[1];
      if (x1 < 0 || x1 > 1) return 0.0;
      return (p[0] == 1 ? 0.5 : 1.0) * flip(x1, o[0], kMdFlip);
    })};
    w.nodes[0].maps = {alias("X31", "X31u"), alias("X32", "X32u")};
    w.nodes[1].maps = {alias("X2", "X2u")};
    w.nodes[2].maps = {alias("X1", "X1u")};
    p.omega = w;
    dp.duals.push_back(p);
  }
  // type III: broadcast of M1, M2 through Y3 = V1 + V2
  {
    const Dense d = bc_dense();
    std::vector<std::vector<Kernel>> ks = {
        {},
        {cond_kernel({"Y3"}, {3}, {"X2"}, {2}, [](auto& p, auto& o) { return flip(p[0] >= 1, o[0], kBc2); })},
        {cond_kernel({"Y3"}, {3}, {"X1"}, {2}, [](auto& p, auto& o) { return flip(p[0] == 2, o[0], kBc1); })}};
    DualProblem p{DualType::TypeIII,
                  construct_dual(orig, DualType::TypeIII, ks,
                                 target_from(d, {"Y3", "X2", "X1"}, {{"M1", "X31"}, {"M2", "X32"}})),
                  {}};
    CodingParams w = dual_skeleton(dp.original.omega, DualType::TypeIII);
    w.aux = {Factor::concrete("V1", 2), Factor::concrete("V2", 2)};
    w.codebooks[0].factors = {"X31", "V1"};
    w.codebooks[1].factors = {"X32", "V2"};
    w.nodes[0].kernels = {cond_kernel({}, {}, {"V1", "V2"}, {2, 2},
                                      [](auto&, auto& o) { return 0.5 * flip(o[0], o[1], kBcCorr); })};
    w.nodes[0].maps = {lookup("Y3", {"V1", "V2"}, {2, 2}, [](auto& x) { return x[0] + x[1]; })};
    w.nodes[1].maps = {alias("M2", "X32")};
    w.nodes[2].maps = {alias("M1", "X31")};
    p.omega = w;
    dp.duals.push_back(p);
  }
  return dp;
}

CatalogInstance mac_duality() {
  CatalogInstance c;
  c.name = "mac-duality";
  c.summary = "MAC with its three duals: distributed lossy coding, two descriptions, broadcast";
  c.kind = EntryKind::Dual;
  c.dual = mac_dual_params();
  c.network = c.dual.original.network;
  c.omega = c.dual.original.omega;
  c.rates = {"R1", "R2"};
  return c;
}

std::vector<Want> dual_region_want(DualType t) {
  auto row = [](std::map<std::string, Rational> l, Sense s, double c) { return Want{std::move(l), s, {}, c}; };
  switch (t) {
    case DualType::Original: {
      const Dense d = mac_dense();
      return {row(lin({{"R1", 1}}), Sense::Less, d.mi({"X1"}, {"Y3"}, {"X2"})),
              row(lin({{"R2", 1}}), Sense::Less, d.mi({"X2"}, {"Y3"}, {"X1"})),
              row(lin({{"R1", 1}, {"R2", 1}}), Sense::Less, d.mi({"X1", "X2"}, {"Y3"}))};
    }
    case DualType::TypeI: {
      const Dense d = bt_dense();
      const double i12 = d.mi({"V1"}, {"V2"});
      return {row(lin({{"R1", 1}}), Sense::Greater, d.mi({"V1"}, {"X1"}) - i12),
              row(lin({{"R2", 1}}), Sense::Greater, d.mi({"V2"}, {"X2"}) - i12),
              row(lin({{"R1", 1}, {"R2", 1}}), Sense::Greater, d.mi({"V1"}, {"X1"}) + d.mi({"V2"}, {"X2"}) - i12)};
    }
    case DualType::TypeII: {
      const Dense d = md_dense();
      return {row(lin({{"R1", 1}}), Sense::Greater, d.mi({"X1"}, {"Y3"})),
              row(lin({{"R2", 1}}), Sense::Greater, d.mi({"X2"}, {"Y3"})),
              row(lin({{"R1", 1}, {"R2", 1}}), Sense::Greater, d.mi({"X1"}, {"Y3"}) + d.mi({"X2"}, {"X1", "Y3"}))};
    }
    case DualType::TypeIII: {
      const Dense d = bc_dense();
      return {row(lin({{"R1", 1}}), Sense::Less, d.mi({"V1"}, {"X1"})),
              row(lin({{"R2", 1}}), Sense::Less, d.mi({"V2"}, {"X2"})),
              row(lin({{"R1", 1}, {"R2", 1}}), Sense::Less,
                  d.mi({"V1"}, {"X1"}) + d.mi({"V2"}, {"X2"}) - d.mi({"V1"}, {"V2"}))};
    }
  }
  return {};
}

Dense dual_dense(DualType t) {
  switch (t) {
    case DualType::Original: return mac_dense();
    case DualType::TypeI: return bt_dense();
    case DualType::TypeII: return md_dense();
    case DualType::TypeIII: return bc_dense();
  }
  return {};
}

void dual_check(const CatalogInstance& inst, Verdict& v) {
  const DualParams& dp = inst.dual;
  std::vector<const DualProblem*> problems = {&dp.original};
  for (const auto& p : dp.duals) problems.push_back(&p);
  for (const DualProblem* p : problems) {
    const std::string tag = dual_type_name(p->type);
    check_issues(v, tag + " network", validate(p->network));
    const auto issues = validate_params(p->omega, p->network);
    check_issues(v, tag + " omega", issues);
    if (issues.empty()) {
      const TargetMatch tm = check_target_match(p->omega, p->network);
      check(v, tag + " target deviation", fixed(tm.max_deviation, 12), tm.matched(kTol));
    }
  }
  const DualSystems ds = dual_systems(dp);
  for (std::size_t i = 0; i < ds.systems.size(); ++i) {
    const DualProblem& p = *problems[i];
    const std::string tag = dual_type_name(ds.types[i]);
    const InequalitySystem& sys = ds.systems[i];
    check(v, tag + " rows", std::to_string(sys.rows.size()), sys.rows.size() == 5);
    std::vector<std::string> issues;
    const int n = p.network.size();
    const DualType t = p.type;
    const double dev = rows_vs_oracle(sys, dual_dense(t), sym_table(p.network, p.omega), p.omega, Mode::Corollary1,
                                      [&](int k) { return original_node(t, n, k); }, issues);
    check(v, tag + " rows vs oracle", fixed(dev, 12), dev <= kTol && issues.empty());
    for (const auto& s : issues) v.mismatches.push_back("  " + s);
    RateRegion region = prune_numeric(fourier_motzkin(sys, omega_rates(p.omega)), {}, true);
    check_fingerprint(v, tag + " region", region.rows, dual_region_want(t));
  }
  for (const auto& sc : verify_swap_structure(dp, ds)) {
    check(v, std::string(dual_type_name(sc.type)) + " swap structure", sc.pass ? "ok" : "broken", sc.pass);
    for (const auto& s : sc.issues) v.mismatches.push_back("  " + s);
  }
}

// ---- diamond-gdcaf ----

}  // namespace

double diamond_epsilon() { return 1.0 - h2(1.0 / 3.0); }

namespace {

Admn diamond_network() {
  const double eps = diamond_epsilon();
  Admn a;
  a.factors = {Factor::concrete("X1a", 2), Factor::concrete("X1b", 2), Factor::concrete("Y2", 3),
               Factor::concrete("X2a", 2), Factor::concrete("X2b", 2), Factor::concrete("Y3", 2),
               Factor::concrete("X3", 2),  Factor::concrete("Y4", 3)};
  a.nodes.push_back({"source", {}, {"X1a", "X1b"}, {}, 0});
  // erasure shows as the symbol 2
  a.nodes.push_back({"relay 2",
                     {"Y2"},
                     {"X2a", "X2b"},
                     {cond_kernel({"X1a"}, {2}, {"Y2"}, {3},
                                  [eps](auto& p, auto& o) { return o[0] == 2 ? eps : (o[0] == p[0] ? 1 - eps : 0.0); })},
                     0});
  a.nodes.push_back({"relay 3",
                     {"Y3"},
                     {"X3"},
                     {det_kernel({"X1b", "Y2"}, {2, 3}, {"Y3"}, {2},
                                 [](auto& p) { return std::vector<int>{p[0] ^ (p[1] == 2)}; })},
                     0});
  a.nodes.push_back({"destination",
                     {"Y4"},
                     {},
                     {det_kernel({"X2a", "X2b", "X3"}, {2, 2, 2}, {"Y4"}, {3},
                                 [](auto& p) { return std::vector<int>{p[0] + (p[1] ^ p[2])}; })},
                     0});
  return a;
}

Dmn diamond_dmn() {
  const double eps = diamond_epsilon();
  Dmn d;
  d.x_alphabets = {4, 4, 2, 0};
  d.y_alphabets = {0, 3, 2, 3};
  d.destinations = {4};
  for (int x1 = 0; x1 < 4; ++x1)
    for (int x2 = 0; x2 < 4; ++x2)
      for (int x3 = 0; x3 < 2; ++x3)
        for (int y2 = 0; y2 < 3; ++y2)
          for (int y3 = 0; y3 < 2; ++y3)
            for (int y4 = 0; y4 < 3; ++y4) {
              const int a = x1 / 2, b = x1 % 2;
              double p = y2 == 2 ? eps : (y2 == a ? 1 - eps : 0.0);
              if (y3 != (b ^ (y2 == 2))) p = 0;
              if (y4 != x2 / 2 + ((x2 % 2) ^ x3)) p = 0;
              d.channel.push_back(p);
            }
  return d;
}

GdcafScheme diamond_scheme() {
  GdcafScheme s;
  s.aux = {Factor::concrete("U2b", 2)};
  s.source_factors = {"X1a", "X1b", "U2b"};
  // X1a uniform, (X1b, U2b) uniform on {(0,0), (0,1), (1,1)}
  s.source_table.assign(8, 0.0);
  for (int a = 0; a < 2; ++a)
    for (const auto& [b, u] : std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 1}})
      s.source_table[a * 4 + b * 2 + u] = 0.5 / 3.0;
  s.u = {{"X1a", "U2b"}, {}};
  s.yhat = {{}, {}};
  s.maps = {alias("X2a", "U2b"), lookup("X2b", {"Y2"}, {3}, [](auto& v) { return v[0] == 2 ? 1 : 0; }),
            alias("X3", "Y3")};
  return s;
}

CatalogInstance diamond() {
  CatalogInstance c;
  c.name = "diamond-gdcaf";
  c.summary = "two-relay diamond network: BEC to relay 2, erasure-flipped copy to relay 3, adder at the destination";
  c.kind = EntryKind::Gdcaf;
  c.network = diamond_network();
  c.dmn = diamond_dmn();
  c.gdcaf = diamond_scheme();
  return c;
}

std::vector<double> bec(double e) { return {1 - e, 0, e, 0, 1 - e, e}; }
std::vector<double> bsc(double p) { return {1 - p, p, p, 1 - p}; }

void diamond_check(const CatalogInstance& inst, Verdict& v) {
  const double log3 = std::log2(3.0);
  const double eps = diamond_epsilon();
  const GdcafResult r = gdcaf_rate(inst.network, inst.gdcaf);
  check(v, "rate", fixed(r.rate), std::abs(r.rate - log3) <= 1e-6);
  check(v, "feasible", r.feasible ? "true" : "false", r.feasible);
  for (const auto& s : r.side_violations) v.mismatches.push_back("  side condition: " + s);
  const CutSetBound cs = cutset_upper_bound(inst.dmn, 4);
  check(v, "cut-set", fixed(cs.value, 9), std::abs(cs.value - log3) <= kTol);
  const double pdf = 1 - eps + 1 - h2(eps);
  check(v, "partial-df bound", fixed(pdf, 4), std::abs(pdf - 1.5101) <= 5e-4);
  const double cbec = channel_capacity(bec(eps), 2, 3), cbsc = channel_capacity(bsc(eps), 2, 2);
  check(v, "bec capacity", fixed(cbec, 4), std::abs(cbec - 0.9183) <= 5e-4 && std::abs(cbec - (1 - eps)) <= kTol);
  check(v, "bsc capacity", fixed(cbsc, 4), std::abs(cbsc - 0.5918) <= 5e-4 && std::abs(cbsc - (1 - h2(eps))) <= kTol);
  double ddf = 0;
  for (const auto& s : diamond_ddf_grid()) ddf = std::max(ddf, gdcaf_rate(inst.network, s).rate);
  check(v, "ddf grid max", fixed(ddf), ddf <= pdf + kTol);
  const double hyb = gdcaf_rate(inst.network, diamond_hybrid_scheme()).rate;
  check(v, "hybrid rate", fixed(hyb), hyb < log3 - kTol);
}

// ---- gaussian-point-to-point ----

constexpr double kPower = 2.5;

CatalogInstance gaussian_p2p() {
  CatalogInstance c;
  c.name = "gaussian-point-to-point";
  c.summary = "AWGN channel Y2 = X1 + N(0,1) under power " + fixed(kPower, 1);
  c.kind = EntryKind::Gaussian;
  Agn& g = c.agn;
  g.r = {0, 1};
  g.t = {1, 0};
  g.h[{2, 1}] = Eigen::MatrixXd::Identity(1, 1);
  g.noise = {Eigen::MatrixXd(0, 0), Eigen::MatrixXd::Identity(1, 1)};
  GaussianParams& p = c.gaussian;
  p.skeleton.mu = 1;
  p.skeleton.rate_names = {"r1"};
  p.skeleton.codebooks = {{{}, {1}, {}}};
  p.skeleton.nodes.resize(2);
  p.skeleton.nodes[0].compress = {1};
  p.skeleton.nodes[1].decode = {1};
  p.dims = {1};
  p.nodes.resize(2);
  p.nodes[0].lambda_u = Eigen::MatrixXd::Constant(1, 1, kPower);
  p.nodes[0].f = Eigen::MatrixXd::Identity(1, 1);
  QuadraticForm power;
  power.name = "E[X1^2]";
  power.q = Eigen::MatrixXd::Zero(2, 2);
  power.q(0, 0) = 1;
  power.target = kPower * (1 + 1e-3);
  c.objective = {power};
  // the coding network has two empty nodes; only the index sets matter here
  c.network.nodes.resize(2);
  c.network.nodes[0].name = "sender";
  c.network.nodes[1].name = "receiver";
  c.omega = p.skeleton;
  return c;
}

void gaussian_check(const CatalogInstance& inst, Verdict& v) {
  const GaussianModel m(inst.agn, inst.gaussian);
  const InequalitySystem sys = gaussian_system(m);
  double pack = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : sys.rows)
    if (r.origin.kind == "packing") pack = r.rhs.constant;
  check(v, "packing", fixed(pack), std::abs(pack - 0.5 * std::log2(1 + kPower)) <= kTol);
  check(v, "rows", std::to_string(sys.rows.size()), sys.rows.size() == 2);
  const ObjectiveCheck oc = m.check_objective(inst.objective);
  check(v, "power", oc.values.empty() ? "?" : fixed(oc.values.front()), oc.pass);
  const RateRegion region = fourier_motzkin(sys, omega_rates(inst.gaussian.skeleton));
  check(v, "feasible", region.infeasible ? "false" : "true", !region.infeasible && region.rows.empty());
}

// ---- registry ----

struct EntryDef {
  const char* name;
  CatalogInstance (*build)();
  void (*check)(const CatalogInstance&, Verdict&);
};

const std::vector<EntryDef>& registry() {
  static const std::vector<EntryDef> r = {
      {"gelfand-pinsker-binary", gelfand_pinsker, gp_check},
      {"wyner-ziv-binary", wyner_ziv, wz_check},
      {"mac-binary-adder", mac_adder, mac_check},
      {"wiretap-system", wiretap, wiretap_check},
      {"han-kobayashi", han_kobayashi, hk_check},
      {"interference-decoding", interference_decoding, id_check},
      {"correlated-sources-mac", correlated_sources, ces_check},
      {"relay-unfold", relay_unfold, relay_check},
      {"nnc-unfold", nnc_unfold, nnc_check},
      {"mac-duality", mac_duality, dual_check},
      {"diamond-gdcaf", diamond, diamond_check},
      {"gaussian-point-to-point", gaussian_p2p, gaussian_check},
  };
  return r;
}

const EntryDef* find_entry(const std::string& name) {
  for (const auto& e : registry())
    if (name == e.name) return &e;
  return nullptr;
}

}  // namespace

const char* entry_kind_name(EntryKind k) {
  switch (k) {
    case EntryKind::Region: return "region";
    case EntryKind::Unfold: return "unfold";
    case EntryKind::Gdcaf: return "gdcaf";
    case EntryKind::Dual: return "dual";
    case EntryKind::Gaussian: return "gaussian";
  }
  return "?";
}

std::string Verdict::text() const {
  std::string out;
  for (const auto& c : checks) out += c.label + " = " + c.value + (c.pass ? " PASS" : " FAIL") + "\n";
  for (const auto& m : mismatches) out += "  " + m + "\n";
  out += name + ": " + (pass ? "PASS" : "FAIL") + "\n";
  return out;
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& e : registry()) out.push_back(e.name);
  return out;
}

CatalogInstance build(const std::string& name) {
  const EntryDef* e = find_entry(name);
  if (!e) throw Error(ErrorKind::UnknownEntry, name);
  return e->build();
}

Verdict run(const std::string& name) { return run(build(name)); }

Verdict run(const CatalogInstance& inst) {
  Verdict v;
  v.name = inst.name;
  try {
    if (const EntryDef* e = find_entry(inst.name)) {
      e->check(inst, v);
    } else if (inst.kind == EntryKind::Region || inst.kind == EntryKind::Unfold) {
      check_common(inst, v);
    } else {
      check(v, "entry", inst.name, false, "no expectations registered");
    }
  } catch (const std::exception& ex) {
    check(v, "pipeline", "error", false, ex.what());
  }
  return v;
}

std::vector<std::string> omega_rates(const CodingParams& w) {
  std::vector<std::string> out;
  for (int i = 1; i <= w.mu; ++i) out.push_back(w.rate_name(i));
  return out;
}

RegionResult derive_region(const Admn& admn, const CodingParams& w, Mode mode, bool prune, const GenerateOptions& opts) {
  RegionResult r;
  r.system = generate_system(w, admn, mode, opts);
  r.region = fourier_motzkin(r.system, omega_rates(w));
  if (prune) r.region = prune_numeric(r.region, {}, true);
  return r;
}

double rate_upper_bound(const RateRegion& region, const std::string& symbol) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& row : region.rows) {
    if (row.sense != Sense::Less || row.rhs.has_symbols() || row.lhs.size() != 1) continue;
    const auto it = row.lhs.find(symbol);
    if (it == row.lhs.end() || it->second.sign() <= 0) continue;
    best = std::min(best, row.rhs.constant / it->second.to_double());
  }
  return best;
}

double nnc_closed_form() {
  // single-block pmf: X1, X2 uniform, Yhat2 = Y2 xor Bern(0.05)
  const Dense d = enumerate({"X1", "X2", "Y2", "Yhat2", "Y3"}, {2, 2, 2, 2, 4},
                            {{0.5, 0.5}, {0.5, 0.5}, {1 - kRelayNoise, kRelayNoise}, {1 - kRelayNoise, kRelayNoise},
                             {1 - kNncQuant, kNncQuant}},
                            [](const std::vector<int>& v) {
                              const int y2 = v[0] ^ v[2];
                              return std::vector<int>{v[0], v[1], y2, y2 ^ v[4], 2 * v[1] + (v[0] ^ v[3])};
                            });
  return std::min(d.mi({"X1"}, {"Yhat2", "Y3"}, {"X2"}),
                  d.mi({"X1", "X2"}, {"Y3"}) - d.mi({"Y2"}, {"Yhat2"}, {"X1", "X2", "Y3"}));
}

std::vector<GdcafScheme> diamond_ddf_grid() {
  // relays decode (part of) X1 and forward; the source picks the relay inputs jointly with X1
  std::vector<GdcafScheme> out;
  const VarSet vars = {"X1a", "X1b", "X2a", "X2b", "X3"};
  std::vector<std::vector<double>> tables;
  {
    // the hand-picked point closest to the diamond scheme
    std::vector<double> t(32, 0.0);
    for (int a = 0; a < 2; ++a)
      for (const auto& [b, u] : std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 1}})
        t[mixed_radix_index({a, b, u, 0, b}, {2, 2, 2, 2, 2})] = 0.5 / 3.0;
    tables.push_back(t);
    std::vector<double> unif(32, 1.0 / 32);
    tables.push_back(unif);
  }
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 24; ++i) {
    std::vector<double> t(32);
    double s = 0;
    for (auto& x : t) {
      x = std::pow(U(rng), 3.0);
      s += x;
    }
    for (auto& x : t) x /= s;
    tables.push_back(t);
  }
  const std::vector<std::pair<VarSet, VarSet>> decoded = {
      {{"X1a"}, {"X1b"}}, {{"X1a"}, {}}, {{}, {"X1b"}}, {{"X1a", "X1b"}, {}}, {{}, {"X1a", "X1b"}}, {{}, {}}};
  for (const auto& t : tables)
    for (const auto& [v2, v3] : decoded) {
      GdcafScheme s;
      s.source_factors = vars;
      s.source_table = t;
      s.u = {set_union(v2, {"X2a", "X2b"}), set_union(v3, {"X3"})};
      s.yhat = {{}, {}};
      out.push_back(std::move(s));
    }
  return out;
}

GdcafScheme diamond_hybrid_scheme() {
  // both relays forward their full (uncompressed) outputs and map them like the diamond scheme
  GdcafScheme s;
  s.aux = {Factor::concrete("Yh2", 3), Factor::concrete("Yh3", 2)};
  s.source_factors = {"X1a", "X1b"};
  s.source_table = {1.0 / 3, 1.0 / 3, 0.0, 1.0 / 3};
  s.u = {{}, {}};
  s.yhat = {{"Yh2"}, {"Yh3"}};
  auto copy = [](const FactorId& in, const FactorId& out, int n) {
    return det_kernel({in}, {n}, {out}, {n}, [](auto& p) { return std::vector<int>{p[0]}; });
  };
  s.compressors = {copy("Y2", "Yh2", 3), copy("Y3", "Yh3", 2)};
  s.maps = {lookup("X2a", {"Yh2"}, {3}, [](auto& v) { return v[0] == 2 ? 0 : v[0]; }),
            lookup("X2b", {"Yh2"}, {3}, [](auto& v) { return v[0] == 2 ? 1 : 0; }), alias("X3", "Yh3")};
  return s;
}

}  // namespace unirate
