#include "unirate/spec_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "unirate/error.hpp"

namespace unirate {

using nlohmann::json;

namespace {

// ---- writing ----

json factor_json(const Factor& f) {
  json j{{"id", f.id}};
  if (f.is_symbolic())
    j["symbolic"] = {{"symbol", f.rate_symbol}, {"multiplier", f.multiplier.str()}, {"source", f.source}};
  else
    j["alphabet"] = f.alphabet;
  return j;
}

json kernel_json(const Kernel& k) {
  json j{{"parents", k.parents}, {"parent_sizes", k.parent_sizes}, {"outputs", k.outputs}, {"output_sizes", k.output_sizes}};
  if (k.deterministic())
    j["function"] = k.function;
  else
    j["table"] = k.table;
  return j;
}

json kernels_json(const std::vector<Kernel>& ks) {
  json a = json::array();
  for (const auto& k : ks) a.push_back(kernel_json(k));
  return a;
}

json network_json(const Admn& a) {
  json factors = json::array(), nodes = json::array();
  for (const auto& f : a.factors) factors.push_back(factor_json(f));
  for (const auto& n : a.nodes) {
    json jn{{"name", n.name}, {"y", n.y}, {"x", n.x}, {"kernels", kernels_json(n.kernels)}};
    if (n.carry_from) jn["carry_from"] = n.carry_from;
    nodes.push_back(jn);
  }
  json eq = json::array();
  for (const auto& [l, r] : a.target.equalities) eq.push_back({l, r});
  return {{"factors", factors},
          {"nodes", nodes},
          {"target", {{"vars", a.target.vars}, {"table", a.target.table}, {"equalities", eq}}}};
}

json map_json(const SymbolMap& m) {
  if (!m.alias.empty()) return {{"output", m.output}, {"alias", m.alias}};
  return {{"output", m.output}, {"inputs", m.inputs}, {"table", m.table}};
}

json omega_json(const CodingParams& w) {
  json cbs = json::array(), aux = json::array(), nodes = json::array();
  for (const auto& c : w.codebooks) cbs.push_back({{"factors", c.factors}, {"gamma", c.gamma}, {"superpose", c.superpose}});
  for (const auto& f : w.aux) aux.push_back(factor_json(f));
  for (const auto& n : w.nodes) {
    json maps = json::array();
    for (const auto& m : n.maps) maps.push_back(map_json(m));
    nodes.push_back({{"decode", n.decode},
                     {"nonunique", n.nonunique},
                     {"compress", n.compress},
                     {"kernels", kernels_json(n.kernels)},
                     {"maps", maps}});
  }
  return {{"mu", w.mu}, {"rate_names", w.rate_names}, {"aux", aux}, {"codebooks", cbs}, {"nodes", nodes}};
}

json dmn_json(const Dmn& d) {
  return {{"x_alphabets", d.x_alphabets}, {"y_alphabets", d.y_alphabets}, {"channel", d.channel},
          {"source", d.source},           {"destinations", d.destinations}, {"rate_symbol", d.rate_symbol}};
}

json gdcaf_json(const GdcafScheme& s) {
  json aux = json::array(), maps = json::array();
  for (const auto& f : s.aux) aux.push_back(factor_json(f));
  for (const auto& m : s.maps) maps.push_back(map_json(m));
  return {{"aux", aux},     {"source_factors", s.source_factors}, {"source_table", s.source_table},
          {"u", s.u},       {"yhat", s.yhat},                     {"compressors", kernels_json(s.compressors)},
          {"maps", maps}};
}

const char* dual_tag(DualType t) {
  switch (t) {
    case DualType::Original: return "original";
    case DualType::TypeI: return "I";
    case DualType::TypeII: return "II";
    case DualType::TypeIII: return "III";
  }
  return "?";
}

json dual_json(const DualParams& d) {
  json duals = json::array();
  for (const auto& p : d.duals)
    duals.push_back({{"type", dual_tag(p.type)}, {"network", network_json(p.network)}, {"omega", omega_json(p.omega)}});
  return {{"original", {{"network", network_json(d.original.network)}, {"omega", omega_json(d.original.omega)}}},
          {"duals", duals}};
}

// rows of numbers; empty matrices keep their shape
json matrix_json(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return {{"rows", m.rows()}, {"cols", m.cols()}};
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    a.push_back(row);
  }
  return a;
}

json blocks_json(const std::map<std::pair<int, int>, Eigen::MatrixXd>& h) {
  json a = json::array();
  for (const auto& [kj, m] : h) a.push_back({{"k", kj.first}, {"j", kj.second}, {"matrix", matrix_json(m)}});
  return a;
}

json gaussian_json(const Agn& g, const GaussianParams& p, const std::vector<QuadraticForm>& obj) {
  json noise = json::array(), nodes = json::array(), forms = json::array();
  for (const auto& m : g.noise) noise.push_back(matrix_json(m));
  for (const auto& n : p.nodes)
    nodes.push_back({{"g", matrix_json(n.g)},
                     {"gp", matrix_json(n.gp)},
                     {"lambda_u", matrix_json(n.lambda_u)},
                     {"f", matrix_json(n.f)},
                     {"fp", matrix_json(n.fp)}});
  for (const auto& q : obj) forms.push_back({{"name", q.name}, {"q", matrix_json(q.q)}, {"target", q.target}});
  return {{"agn", {{"r", g.r}, {"t", g.t}, {"h", blocks_json(g.h)}, {"hp", blocks_json(g.hp)}, {"noise", noise}}},
          {"skeleton", omega_json(p.skeleton)},
          {"dims", p.dims},
          {"nodes", nodes},
          {"objective", forms}};
}

bool empty_network(const Admn& a) { return a == Admn{}; }
bool empty_gdcaf(const GdcafScheme& s) {
  return s.aux.empty() && s.source_factors.empty() && s.source_table.empty() && s.u.empty() && s.yhat.empty() &&
         s.compressors.empty() && s.maps.empty();
}
bool empty_dual(const DualParams& d) { return empty_network(d.original.network) && d.duals.empty(); }
bool empty_gaussian(const CatalogInstance& c) {
  return c.agn.r.empty() && c.agn.t.empty() && c.gaussian.dims.empty() && c.gaussian.nodes.empty() &&
         c.gaussian.skeleton == CodingParams{} && c.objective.empty();
}

// ---- reading ----

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::SchemaError, (path.empty() ? "/" : path) + ": " + msg);
}

std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const json& req(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(at(path, key), "missing");
  return *it;
}

const json* opt(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

std::int64_t as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::string as_str(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

Rational as_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) fail(path, "expected a rational string");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

// numbers, decimal or "a/b" strings, or {"rational": "a/b"}
double as_prob(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_object()) return as_rational(req(j, "rational", path), at(path, "rational")).to_double();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.find('/') != std::string::npos) return as_rational(j, path).to_double();
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    fail(path, "not a number: " + s);
  }
  fail(path, "expected a probability");
}

std::vector<double> prob_list(const json& j, const std::string& path) {
  std::vector<double> out;
  for (std::size_t i = 0; i < as_array(j, path).size(); ++i) out.push_back(as_prob(j[i], at(path, i)));
  return out;
}

std::vector<int> int_list(const json& j, const std::string& path) {
  std::vector<int> out;
  for (std::size_t i = 0; i < as_array(j, path).size(); ++i) out.push_back(static_cast<int>(as_int(j[i], at(path, i))));
  return out;
}

std::vector<std::int64_t> int64_list(const json& j, const std::string& path) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < as_array(j, path).size(); ++i) out.push_back(as_int(j[i], at(path, i)));
  return out;
}

VarSet str_list(const json& j, const std::string& path) {
  VarSet out;
  for (std::size_t i = 0; i < as_array(j, path).size(); ++i) out.push_back(as_str(j[i], at(path, i)));
  return out;
}

IndexSet index_list(const json& j, const std::string& path, int hi, const std::string& bound) {
  IndexSet out = int_list(j, path);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i] < 1 || out[i] > hi)
      fail(at(path, i), "index " + std::to_string(out[i]) + " outside [1, " + bound + " = " + std::to_string(hi) + "]");
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) fail(path, "repeated index");
  return out;
}

Factor read_factor(const json& j, const std::string& path) {
  const std::string id = as_str(req(j, "id", path), at(path, "id"));
  if (const json* s = opt(j, "symbolic", path)) {
    const std::string p = at(path, "symbolic");
    const json* src = opt(*s, "source", p);
    const json* mult = opt(*s, "multiplier", p);
    return Factor::symbolic(id, as_str(req(*s, "symbol", p), at(p, "symbol")),
                            mult ? as_rational(*mult, at(p, "multiplier")) : Rational(1),
                            src ? as_str(*src, at(p, "source")) : FactorId{});
  }
  const std::int64_t a = as_int(req(j, "alphabet", path), at(path, "alphabet"));
  if (a < 1 || a > 65535) fail(at(path, "alphabet"), "alphabet must be in [1, 65535]");
  return Factor::concrete(id, static_cast<int>(a));
}

// resolves ids against one or more registries
struct Scope {
  std::vector<const std::vector<Factor>*> lists;
  const Factor* find(const FactorId& id) const {
    for (const auto* l : lists)
      for (const auto& f : *l)
        if (f.id == id) return &f;
    return nullptr;
  }
  const Factor& need(const FactorId& id, const std::string& path) const {
    const Factor* f = find(id);
    if (!f) fail(path, "unknown factor " + id);
    return *f;
  }
  void need_all(const VarSet& ids, const std::string& path) const {
    for (std::size_t i = 0; i < ids.size(); ++i) need(ids[i], at(path, i));
  }
};

Kernel read_kernel(const json& j, const std::string& path, const Scope& scope, double tol) {
  Kernel k;
  if (const json* p = opt(j, "parents", path)) k.parents = str_list(*p, at(path, "parents"));
  if (const json* p = opt(j, "parent_sizes", path)) k.parent_sizes = int_list(*p, at(path, "parent_sizes"));
  k.outputs = str_list(req(j, "outputs", path), at(path, "outputs"));
  k.output_sizes = int_list(req(j, "output_sizes", path), at(path, "output_sizes"));
  if (k.parents.size() != k.parent_sizes.size()) fail(at(path, "parent_sizes"), "one size per parent");
  if (k.outputs.size() != k.output_sizes.size()) fail(at(path, "output_sizes"), "one size per output");
  for (std::size_t i = 0; i < k.parents.size(); ++i) {
    const Factor& f = scope.need(k.parents[i], at(at(path, "parents"), i));
    if (f.is_symbolic() || f.alphabet != k.parent_sizes[i])
      fail(at(at(path, "parent_sizes"), i), "does not match factor " + f.id);
  }
  for (std::size_t i = 0; i < k.outputs.size(); ++i) {
    const Factor& f = scope.need(k.outputs[i], at(at(path, "outputs"), i));
    if (f.is_symbolic() || f.alphabet != k.output_sizes[i])
      fail(at(at(path, "output_sizes"), i), "does not match factor " + f.id);
  }
  const std::int64_t rows = mixed_radix_size(k.parent_sizes), cols = mixed_radix_size(k.output_sizes);
  if (const json* f = opt(j, "function", path)) {
    k.function = int64_list(*f, at(path, "function"));
    if (static_cast<std::int64_t>(k.function.size()) != rows)
      fail(at(path, "function"), "expected " + std::to_string(rows) + " entries");
    for (std::size_t i = 0; i < k.function.size(); ++i)
      if (k.function[i] < 0 || k.function[i] >= cols) fail(at(at(path, "function"), i), "output index out of range");
    if (opt(j, "table", path)) fail(path, "give either table or function");
    return k;
  }
  k.table = prob_list(req(j, "table", path), at(path, "table"));
  if (static_cast<std::int64_t>(k.table.size()) != rows * cols)
    fail(at(path, "table"), "expected " + std::to_string(rows * cols) + " entries");
  for (std::int64_t r = 0; r < rows; ++r) {
    double s = 0;
    for (std::int64_t c = 0; c < cols; ++c) {
      const double p = k.table[r * cols + c];
      if (p < 0 || !std::isfinite(p)) fail(at(at(path, "table"), static_cast<std::size_t>(r * cols + c)), "negative entry");
      s += p;
    }
    if (std::abs(s - 1.0) > tol) fail(at(path, "table"), "row " + std::to_string(r) + " sums to " + std::to_string(s));
  }
  return k;
}

std::vector<Kernel> read_kernels(const json* j, const std::string& path, const Scope& scope, double tol) {
  std::vector<Kernel> out;
  if (!j) return out;
  for (std::size_t i = 0; i < as_array(*j, path).size(); ++i) out.push_back(read_kernel((*j)[i], at(path, i), scope, tol));
  return out;
}

Admn read_network(const json& j, const std::string& path, double tol) {
  Admn a;
  const std::string fp = at(path, "factors");
  const json& fs = as_array(req(j, "factors", path), fp);
  std::set<FactorId> seen;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    a.factors.push_back(read_factor(fs[i], at(fp, i)));
    if (!seen.insert(a.factors.back().id).second) fail(at(fp, i), "duplicate factor " + a.factors.back().id);
  }
  const Scope scope{{&a.factors}};
  const std::string np = at(path, "nodes");
  const json& ns = as_array(req(j, "nodes", path), np);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const std::string p = at(np, i);
    AdmnNode n;
    if (const json* v = opt(ns[i], "name", p)) n.name = as_str(*v, at(p, "name"));
    if (const json* v = opt(ns[i], "y", p)) n.y = str_list(*v, at(p, "y"));
    if (const json* v = opt(ns[i], "x", p)) n.x = str_list(*v, at(p, "x"));
    scope.need_all(n.y, at(p, "y"));
    scope.need_all(n.x, at(p, "x"));
    n.kernels = read_kernels(opt(ns[i], "kernels", p), at(p, "kernels"), scope, tol);
    if (const json* v = opt(ns[i], "carry_from", p)) {
      n.carry_from = static_cast<int>(as_int(*v, at(p, "carry_from")));
      if (n.carry_from < 0 || n.carry_from > static_cast<int>(i))
        fail(at(p, "carry_from"), "must name an earlier node");
    }
    a.nodes.push_back(std::move(n));
  }
  if (const json* t = opt(j, "target", path)) {
    const std::string tp = at(path, "target");
    if (const json* v = opt(*t, "vars", tp)) a.target.vars = str_list(*v, at(tp, "vars"));
    std::vector<int> sizes;
    for (std::size_t i = 0; i < a.target.vars.size(); ++i) {
      const Factor& f = scope.need(a.target.vars[i], at(at(tp, "vars"), i));
      if (f.is_symbolic()) fail(at(at(tp, "vars"), i), "target variables must be concrete");
      sizes.push_back(f.alphabet);
    }
    if (const json* v = opt(*t, "table", tp)) a.target.table = prob_list(*v, at(tp, "table"));
    if (static_cast<std::int64_t>(a.target.table.size()) != mixed_radix_size(sizes))
      fail(at(tp, "table"), "expected " + std::to_string(mixed_radix_size(sizes)) + " entries");
    if (const json* v = opt(*t, "equalities", tp)) {
      const std::string ep = at(tp, "equalities");
      for (std::size_t i = 0; i < as_array(*v, ep).size(); ++i) {
        const VarSet pair = str_list((*v)[i], at(ep, i));
        if (pair.size() != 2) fail(at(ep, i), "expected [x factor, factor]");
        scope.need_all(pair, at(ep, i));
        a.target.equalities.push_back({pair[0], pair[1]});
      }
    }
  }
  return a;
}

SymbolMap read_map(const json& j, const std::string& path, const Scope& scope) {
  SymbolMap m;
  m.output = as_str(req(j, "output", path), at(path, "output"));
  scope.need(m.output, at(path, "output"));
  if (const json* a = opt(j, "alias", path)) {
    m.alias = as_str(*a, at(path, "alias"));
    scope.need(m.alias, at(path, "alias"));
    return m;
  }
  if (const json* v = opt(j, "inputs", path)) m.inputs = str_list(*v, at(path, "inputs"));
  scope.need_all(m.inputs, at(path, "inputs"));
  m.table = int64_list(req(j, "table", path), at(path, "table"));
  return m;
}

CodingParams read_omega(const json& j, const std::string& path, const Admn* net, double tol) {
  CodingParams w;
  w.mu = static_cast<int>(as_int(req(j, "mu", path), at(path, "mu")));
  if (w.mu < 0) fail(at(path, "mu"), "must be >= 0");
  if (const json* v = opt(j, "rate_names", path)) w.rate_names = str_list(*v, at(path, "rate_names"));
  if (const json* v = opt(j, "aux", path)) {
    const std::string ap = at(path, "aux");
    for (std::size_t i = 0; i < as_array(*v, ap).size(); ++i) w.aux.push_back(read_factor((*v)[i], at(ap, i)));
  }
  Scope scope{{&w.aux}};
  if (net) scope.lists.push_back(&net->factors);
  const std::string cp = at(path, "codebooks");
  const json& cbs = as_array(req(j, "codebooks", path), cp);
  const int nu = static_cast<int>(cbs.size());
  for (std::size_t i = 0; i < cbs.size(); ++i) {
    const std::string p = at(cp, i);
    Codebook c;
    if (const json* v = opt(cbs[i], "factors", p)) c.factors = str_list(*v, at(p, "factors"));
    if (net) scope.need_all(c.factors, at(p, "factors"));
    c.gamma = index_list(req(cbs[i], "gamma", p), at(p, "gamma"), w.mu, "mu");
    if (const json* v = opt(cbs[i], "superpose", p)) c.superpose = index_list(*v, at(p, "superpose"), nu, "nu");
    w.codebooks.push_back(std::move(c));
  }
  const std::string np = at(path, "nodes");
  const json& ns = as_array(req(j, "nodes", path), np);
  if (net && static_cast<int>(ns.size()) != net->size())
    fail(np, "expected " + std::to_string(net->size()) + " entries, one per network node");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const std::string p = at(np, i);
    NodeCoding n;
    if (const json* v = opt(ns[i], "decode", p)) n.decode = index_list(*v, at(p, "decode"), nu, "nu");
    if (const json* v = opt(ns[i], "nonunique", p)) n.nonunique = index_list(*v, at(p, "nonunique"), nu, "nu");
    if (const json* v = opt(ns[i], "compress", p)) n.compress = index_list(*v, at(p, "compress"), nu, "nu");
    if (net) {
      n.kernels = read_kernels(opt(ns[i], "kernels", p), at(p, "kernels"), scope, tol);
      if (const json* v = opt(ns[i], "maps", p)) {
        const std::string mp = at(p, "maps");
        for (std::size_t m = 0; m < as_array(*v, mp).size(); ++m) n.maps.push_back(read_map((*v)[m], at(mp, m), scope));
      }
    }
    w.nodes.push_back(std::move(n));
  }
  return w;
}

Dmn read_dmn(const json& j, const std::string& path) {
  Dmn d;
  d.x_alphabets = int_list(req(j, "x_alphabets", path), at(path, "x_alphabets"));
  d.y_alphabets = int_list(req(j, "y_alphabets", path), at(path, "y_alphabets"));
  d.channel = prob_list(req(j, "channel", path), at(path, "channel"));
  if (const json* v = opt(j, "source", path)) d.source = static_cast<int>(as_int(*v, at(path, "source")));
  if (const json* v = opt(j, "destinations", path)) d.destinations = int_list(*v, at(path, "destinations"));
  if (const json* v = opt(j, "rate_symbol", path)) d.rate_symbol = as_str(*v, at(path, "rate_symbol"));
  if (d.x_alphabets.size() != d.y_alphabets.size()) fail(at(path, "y_alphabets"), "one alphabet per node");
  return d;
}

GdcafScheme read_gdcaf(const json& j, const std::string& path, const Admn& net, double tol) {
  GdcafScheme s;
  if (const json* v = opt(j, "aux", path)) {
    const std::string ap = at(path, "aux");
    for (std::size_t i = 0; i < as_array(*v, ap).size(); ++i) s.aux.push_back(read_factor((*v)[i], at(ap, i)));
  }
  const Scope scope{{&s.aux, &net.factors}};
  s.source_factors = str_list(req(j, "source_factors", path), at(path, "source_factors"));
  scope.need_all(s.source_factors, at(path, "source_factors"));
  s.source_table = prob_list(req(j, "source_table", path), at(path, "source_table"));
  auto lists = [&](const char* key) {
    std::vector<VarSet> out;
    if (const json* v = opt(j, key, path)) {
      const std::string p = at(path, key);
      for (std::size_t i = 0; i < as_array(*v, p).size(); ++i) {
        out.push_back(str_list((*v)[i], at(p, i)));
        scope.need_all(out.back(), at(p, i));
      }
    }
    return out;
  };
  s.u = lists("u");
  s.yhat = lists("yhat");
  s.compressors = read_kernels(opt(j, "compressors", path), at(path, "compressors"), scope, tol);
  if (const json* v = opt(j, "maps", path)) {
    const std::string mp = at(path, "maps");
    for (std::size_t m = 0; m < as_array(*v, mp).size(); ++m) s.maps.push_back(read_map((*v)[m], at(mp, m), scope));
  }
  return s;
}

DualType read_dual_type(const json& j, const std::string& path) {
  const std::string s = as_str(j, path);
  if (s == "I") return DualType::TypeI;
  if (s == "II") return DualType::TypeII;
  if (s == "III") return DualType::TypeIII;
  fail(path, "dual type must be I, II or III");
}

DualParams read_dual(const json& j, const std::string& path, double tol) {
  DualParams d;
  auto problem = [&](const json& pj, const std::string& p, DualType t) {
    DualProblem out;
    out.type = t;
    out.network = read_network(req(pj, "network", p), at(p, "network"), tol);
    out.omega = read_omega(req(pj, "omega", p), at(p, "omega"), &out.network, tol);
    return out;
  };
  d.original = problem(req(j, "original", path), at(path, "original"), DualType::Original);
  if (const json* v = opt(j, "duals", path)) {
    const std::string dp = at(path, "duals");
    for (std::size_t i = 0; i < as_array(*v, dp).size(); ++i) {
      const std::string p = at(dp, i);
      d.duals.push_back(problem((*v)[i], p, read_dual_type(req((*v)[i], "type", p), at(p, "type"))));
    }
  }
  return d;
}

Eigen::MatrixXd read_matrix(const json& j, const std::string& path) {
  if (j.is_object()) {
    const auto r = as_int(req(j, "rows", path), at(path, "rows")), c = as_int(req(j, "cols", path), at(path, "cols"));
    if (r < 0 || c < 0 || (r > 0 && c > 0)) fail(path, "object form is only for empty matrices");
    return Eigen::MatrixXd(r, c);
  }
  const json& a = as_array(j, path);
  if (a.empty()) return Eigen::MatrixXd(0, 0);
  const std::size_t cols = as_array(a[0], at(path, 0)).size();
  Eigen::MatrixXd m(a.size(), cols);
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (as_array(a[r], at(path, r)).size() != cols) fail(at(path, r), "ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!a[r][c].is_number()) fail(at(at(path, r), c), "expected a number");
      m(r, c) = a[r][c].get<double>();
    }
  }
  return m;
}

std::map<std::pair<int, int>, Eigen::MatrixXd> read_blocks(const json* j, const std::string& path) {
  std::map<std::pair<int, int>, Eigen::MatrixXd> out;
  if (!j) return out;
  for (std::size_t i = 0; i < as_array(*j, path).size(); ++i) {
    const std::string p = at(path, i);
    const int k = static_cast<int>(as_int(req((*j)[i], "k", p), at(p, "k")));
    const int jj = static_cast<int>(as_int(req((*j)[i], "j", p), at(p, "j")));
    if (jj < 1 || jj >= k) fail(p, "blocks need 1 <= j < k");
    out[{k, jj}] = read_matrix(req((*j)[i], "matrix", p), at(p, "matrix"));
  }
  return out;
}

void read_gaussian(const json& j, const std::string& path, CatalogInstance& c) {
  const std::string ap = at(path, "agn");
  const json& a = req(j, "agn", path);
  c.agn.r = int_list(req(a, "r", ap), at(ap, "r"));
  c.agn.t = int_list(req(a, "t", ap), at(ap, "t"));
  c.agn.h = read_blocks(opt(a, "h", ap), at(ap, "h"));
  c.agn.hp = read_blocks(opt(a, "hp", ap), at(ap, "hp"));
  const std::string np = at(ap, "noise");
  const json& noise = as_array(req(a, "noise", ap), np);
  for (std::size_t i = 0; i < noise.size(); ++i) c.agn.noise.push_back(read_matrix(noise[i], at(np, i)));
  c.gaussian.skeleton = read_omega(req(j, "skeleton", path), at(path, "skeleton"), nullptr, 0);
  c.gaussian.dims = int_list(req(j, "dims", path), at(path, "dims"));
  if (static_cast<int>(c.gaussian.dims.size()) != c.gaussian.skeleton.nu())
    fail(at(path, "dims"), "one dimension per codebook");
  const std::string gp = at(path, "nodes");
  const json& ns = as_array(req(j, "nodes", path), gp);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const std::string p = at(gp, i);
    GaussianNode n;
    auto mat = [&](const char* key) {
      const json* v = opt(ns[i], key, p);
      return v ? read_matrix(*v, at(p, key)) : Eigen::MatrixXd();
    };
    n.g = mat("g");
    n.gp = mat("gp");
    n.lambda_u = mat("lambda_u");
    n.f = mat("f");
    n.fp = mat("fp");
    c.gaussian.nodes.push_back(std::move(n));
  }
  if (const json* v = opt(j, "objective", path)) {
    const std::string op = at(path, "objective");
    for (std::size_t i = 0; i < as_array(*v, op).size(); ++i) {
      const std::string p = at(op, i);
      QuadraticForm q;
      if (const json* n = opt((*v)[i], "name", p)) q.name = as_str(*n, at(p, "name"));
      q.q = read_matrix(req((*v)[i], "q", p), at(p, "q"));
      q.target = as_prob(req((*v)[i], "target", p), at(p, "target"));
      c.objective.push_back(std::move(q));
    }
  }
}

EntryKind read_kind(const json& j, const std::string& path) {
  const std::string s = as_str(j, path);
  for (EntryKind k : {EntryKind::Region, EntryKind::Unfold, EntryKind::Gdcaf, EntryKind::Dual, EntryKind::Gaussian})
    if (s == entry_kind_name(k)) return k;
  fail(path, "unknown kind " + s);
}

Mode read_mode(const json& j, const std::string& path) {
  const std::string s = as_str(j, path);
  if (s == "theorem1") return Mode::Theorem1;
  if (s == "corollary1") return Mode::Corollary1;
  fail(path, "mode must be theorem1 or corollary1");
}

const char* mode_name(Mode m) { return m == Mode::Theorem1 ? "theorem1" : "corollary1"; }

bool same_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

bool same_blocks(const std::map<std::pair<int, int>, Eigen::MatrixXd>& a,
                 const std::map<std::pair<int, int>, Eigen::MatrixXd>& b) {
  if (a.size() != b.size()) return false;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib)
    if (ia->first != ib->first || !same_matrix(ia->second, ib->second)) return false;
  return true;
}

bool same_problem(const DualProblem& a, const DualProblem& b) {
  return a.type == b.type && a.network == b.network && a.omega == b.omega;
}

}  // namespace

bool same_instance(const CatalogInstance& a, const CatalogInstance& b) {
  if (a.name != b.name || a.summary != b.summary || a.kind != b.kind || !(a.network == b.network) ||
      !(a.omega == b.omega) || a.mode != b.mode || a.rates != b.rates || !(a.dmn == b.dmn) || a.blocks != b.blocks)
    return false;
  const GdcafScheme &g = a.gdcaf, &h = b.gdcaf;
  if (g.aux != h.aux || g.source_factors != h.source_factors || g.source_table != h.source_table || g.u != h.u ||
      g.yhat != h.yhat || g.compressors != h.compressors || g.maps != h.maps)
    return false;
  if (!same_problem(a.dual.original, b.dual.original) || a.dual.duals.size() != b.dual.duals.size()) return false;
  for (std::size_t i = 0; i < a.dual.duals.size(); ++i)
    if (!same_problem(a.dual.duals[i], b.dual.duals[i])) return false;
  if (a.agn.r != b.agn.r || a.agn.t != b.agn.t || !same_blocks(a.agn.h, b.agn.h) || !same_blocks(a.agn.hp, b.agn.hp) ||
      a.agn.noise.size() != b.agn.noise.size())
    return false;
  for (std::size_t i = 0; i < a.agn.noise.size(); ++i)
    if (!same_matrix(a.agn.noise[i], b.agn.noise[i])) return false;
  if (!(a.gaussian.skeleton == b.gaussian.skeleton) || a.gaussian.dims != b.gaussian.dims ||
      a.gaussian.nodes.size() != b.gaussian.nodes.size() || a.objective.size() != b.objective.size())
    return false;
  for (std::size_t i = 0; i < a.gaussian.nodes.size(); ++i) {
    const GaussianNode &x = a.gaussian.nodes[i], &y = b.gaussian.nodes[i];
    if (!same_matrix(x.g, y.g) || !same_matrix(x.gp, y.gp) || !same_matrix(x.lambda_u, y.lambda_u) ||
        !same_matrix(x.f, y.f) || !same_matrix(x.fp, y.fp))
      return false;
  }
  for (std::size_t i = 0; i < a.objective.size(); ++i)
    if (a.objective[i].name != b.objective[i].name || !same_matrix(a.objective[i].q, b.objective[i].q) ||
        a.objective[i].target != b.objective[i].target)
      return false;
  return true;
}

bool operator==(const SpecDocument& a, const SpecDocument& b) {
  return a.options == b.options && same_instance(a.instance, b.instance);
}

json to_json(const SpecDocument& doc) {
  const CatalogInstance& c = doc.instance;
  json j;
  j["kind"] = entry_kind_name(c.kind);
  j["name"] = c.name;
  j["summary"] = c.summary;
  if (!empty_network(c.network)) j["network"] = network_json(c.network);
  if (!(c.omega == CodingParams{})) j["omega"] = omega_json(c.omega);
  j["rates"] = c.rates;
  if (!(c.dmn == Dmn{})) j["dmn"] = dmn_json(c.dmn);
  if (c.blocks) j["blocks"] = c.blocks;
  if (!empty_gdcaf(c.gdcaf)) j["gdcaf"] = gdcaf_json(c.gdcaf);
  if (!empty_dual(c.dual)) j["dual"] = dual_json(c.dual);
  if (!empty_gaussian(c)) j["gaussian"] = gaussian_json(c.agn, c.gaussian, c.objective);
  j["options"] = {{"mode", mode_name(doc.options.mode)},
                  {"subset_cap", doc.options.subset_cap},
                  {"prune", doc.options.prune},
                  {"tolerance", doc.options.tolerance}};
  return j;
}

std::string serialize(const SpecDocument& doc) { return to_json(doc).dump(2) + "\n"; }

SpecDocument parse_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + e.what());
  }
  SpecDocument doc;
  SpecOptions& o = doc.options;
  if (const json* v = opt(j, "options", "")) {
    if (const json* x = opt(*v, "mode", "/options")) o.mode = read_mode(*x, "/options/mode");
    if (const json* x = opt(*v, "subset_cap", "/options")) o.subset_cap = as_int(*x, "/options/subset_cap");
    if (const json* x = opt(*v, "prune", "/options")) o.prune = as_bool(*x, "/options/prune");
    if (const json* x = opt(*v, "tolerance", "/options")) o.tolerance = as_prob(*x, "/options/tolerance");
    if (o.subset_cap < 1) fail("/options/subset_cap", "must be positive");
    if (!(o.tolerance > 0)) fail("/options/tolerance", "must be positive");
  }
  const double tol = o.tolerance;
  CatalogInstance& c = doc.instance;
  c.kind = read_kind(req(j, "kind", ""), "/kind");
  c.mode = o.mode;
  if (const json* v = opt(j, "name", "")) c.name = as_str(*v, "/name");
  if (const json* v = opt(j, "summary", "")) c.summary = as_str(*v, "/summary");
  if (const json* v = opt(j, "rates", "")) c.rates = str_list(*v, "/rates");
  if (const json* v = opt(j, "blocks", "")) c.blocks = static_cast<int>(as_int(*v, "/blocks"));
  if (const json* v = opt(j, "dmn", "")) c.dmn = read_dmn(*v, "/dmn");
  if (const json* v = opt(j, "network", "")) c.network = read_network(*v, "/network", tol);
  if (const json* v = opt(j, "omega", "")) c.omega = read_omega(*v, "/omega", &c.network, tol);
  if (const json* v = opt(j, "gdcaf", "")) c.gdcaf = read_gdcaf(*v, "/gdcaf", c.network, tol);
  if (const json* v = opt(j, "dual", "")) c.dual = read_dual(*v, "/dual", tol);
  if (const json* v = opt(j, "gaussian", "")) read_gaussian(*v, "/gaussian", c);

  switch (c.kind) {
    case EntryKind::Region:
      req(j, "network", "");
      req(j, "omega", "");
      break;
    case EntryKind::Unfold:
      req(j, "dmn", "");
      break;
    case EntryKind::Gdcaf:
      req(j, "network", "");
      req(j, "gdcaf", "");
      break;
    case EntryKind::Dual:
      req(j, "dual", "");
      break;
    case EntryKind::Gaussian:
      req(j, "gaussian", "");
      break;
  }
  return doc;
}

SpecDocument load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

SpecDocument export_entry(const std::string& name) {
  SpecDocument doc;
  doc.instance = build(name);
  doc.options.mode = doc.instance.mode;
  return doc;
}

json row_json(const LinearInequality& row) {
  json lhs = json::object(), coeffs = json::object();
  for (const auto& [n, c] : row.lhs) lhs[n] = c.str();
  for (const auto& [n, c] : row.rhs.coeffs) coeffs[n] = c.str();
  return {{"text", row.str(6)},
          {"lhs", lhs},
          {"sense", row.sense == Sense::Less ? "<" : ">"},
          {"strict", row.strict},
          {"rhs", {{"constant", row.rhs.constant}, {"coeffs", coeffs}}},
          {"origin",
           {{"system", row.origin.system},
            {"node", row.origin.node},
            {"kind", row.origin.kind},
            {"subset", row.origin.subset}}}};
}

json system_json(const InequalitySystem& sys) {
  json rows = json::array();
  for (const auto& r : sys.rows) rows.push_back(row_json(r));
  return {{"infeasible", sys.infeasible}, {"rows", rows}};
}

}  // namespace unirate
