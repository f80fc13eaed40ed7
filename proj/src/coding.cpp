#include "unirate/coding.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "unirate/error.hpp"
#include "unirate/simd.hpp"

namespace unirate {

namespace {

std::string show(const IndexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

bool is_set(const IndexSet& s) { return std::is_sorted(s.begin(), s.end()) && std::adjacent_find(s.begin(), s.end()) == s.end(); }

bool has(const VarSet& s, const FactorId& id) { return std::find(s.begin(), s.end(), id) != s.end(); }

const Factor* lookup(const CodingParams& w, const Admn& admn, const FactorId& id) {
  for (const auto& f : w.aux)
    if (f.id == id) return &f;
  for (const auto& f : admn.factors)
    if (f.id == id) return &f;
  return nullptr;
}

}  // namespace

const Codebook& CodingParams::codebook(int j) const {
  if (j < 1 || j > nu()) throw Error(ErrorKind::OutOfRange, "codebook " + std::to_string(j));
  return codebooks[j - 1];
}

std::string CodingParams::rate_name(int i) const {
  if (i >= 1 && i <= static_cast<int>(rate_names.size())) return rate_names[i - 1];
  return "r" + std::to_string(i);
}

IndexSet CodingParams::gamma_of(const IndexSet& s) const {
  IndexSet out;
  for (int j : s) out = index_union(out, codebook(j).gamma);
  return out;
}

VarSet CodingParams::factors_of(const IndexSet& s) const {
  VarSet out;
  for (int j : s) out = set_union(out, codebook(j).factors);
  return out;
}

IndexSet index_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet index_minus(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet index_intersect(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool index_subset(const IndexSet& a, const IndexSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

IndexSet index_below(const IndexSet& s, int i) {
  IndexSet out;
  for (int j : s)
    if (j < i) out.push_back(j);
  return out;
}

std::vector<std::string> validate_params(const CodingParams& w, const Admn& admn) {
  std::vector<std::string> issues;
  auto report = [&](const std::string& s) { issues.push_back(s); };
  const int nu = w.nu();
  if (w.mu < 1) report("range: mu = " + std::to_string(w.mu));
  if (nu < 1) report("range: nu = 0");
  if (static_cast<int>(w.nodes.size()) != admn.size()) {
    report("shape: " + std::to_string(w.nodes.size()) + " node entries for a " + std::to_string(admn.size()) +
           "-node network");
    return issues;
  }
  auto check_range = [&](const IndexSet& s, int hi, const std::string& what) {
    if (!is_set(s)) report("range: " + what + " = " + show(s) + " is not a sorted set");
    for (int i : s)
      if (i < 1 || i > hi) report("range: " + what + " contains " + std::to_string(i) + " outside [1:" + std::to_string(hi) + "]");
  };
  for (int j = 1; j <= nu; ++j) {
    check_range(w.codebooks[j - 1].gamma, w.mu, "Gamma_" + std::to_string(j));
    check_range(w.codebooks[j - 1].superpose, nu, "A_" + std::to_string(j));
  }
  for (int k = 1; k <= admn.size(); ++k) {
    const auto& n = w.nodes[k - 1];
    check_range(n.decode, nu, "D_" + std::to_string(k));
    check_range(n.nonunique, nu, "B_" + std::to_string(k));
    check_range(n.compress, nu, "W_" + std::to_string(k));
  }
  if (!issues.empty()) return issues;

  IndexSet covered;
  for (int k = 1; k <= admn.size(); ++k) {
    const auto& n = w.nodes[k - 1];
    const std::string ks = std::to_string(k);
    for (int j : n.compress)
      if (std::binary_search(covered.begin(), covered.end(), j))
        report("membership: W_" + ks + " contains " + std::to_string(j) + " already in W^" + std::to_string(k - 1));
    for (int j : n.decode)
      if (!std::binary_search(covered.begin(), covered.end(), j))
        report("membership: D_" + ks + " contains " + std::to_string(j) + " not in W^" + std::to_string(k - 1));
    for (int j : n.nonunique) {
      if (!std::binary_search(covered.begin(), covered.end(), j))
        report("membership: B_" + ks + " contains " + std::to_string(j) + " not in W^" + std::to_string(k - 1));
      if (std::binary_search(n.decode.begin(), n.decode.end(), j))
        report("membership: B_" + ks + " contains " + std::to_string(j) + " which is also in D_" + ks);
    }
    covered = index_union(covered, n.compress);
  }

  std::map<int, int> owner;
  for (int k = 1; k <= admn.size(); ++k) {
    const auto& n = w.nodes[k - 1];
    for (int i : index_minus(w.gamma_of(n.compress), w.gamma_of(n.decode))) {
      auto [it, fresh] = owner.emplace(i, k);
      if (!fresh)
        report("A-1: index " + std::to_string(i) + " is newly covered at nodes " + std::to_string(it->second) + " and " +
               std::to_string(k));
    }
  }
  for (int j = 1; j <= nu; ++j) {
    const auto& cb = w.codebooks[j - 1];
    for (int a : cb.superpose)
      if (a >= j) report("A-2: A_" + std::to_string(j) + " contains " + std::to_string(a) + " >= " + std::to_string(j));
    if (!index_subset(w.gamma_of(cb.superpose), cb.gamma))
      report("A-2: Gamma of A_" + std::to_string(j) + " is not inside Gamma_" + std::to_string(j));
  }
  for (int k = 1; k <= admn.size(); ++k) {
    const auto& n = w.nodes[k - 1];
    const std::string ks = std::to_string(k);
    auto check_a3 = [&](const IndexSet& s, const IndexSet& allowed, const std::string& what) {
      for (int j : s)
        if (!index_subset(w.codebook(j).superpose, allowed))
          report("A-3: A_" + std::to_string(j) + " of " + what + "_" + ks + " escapes " + show(allowed));
    };
    check_a3(n.compress, index_union(n.compress, n.decode), "W");
    check_a3(n.nonunique, index_union(n.decode, n.nonunique), "B");
    check_a3(n.decode, n.decode, "D");
  }

  std::set<FactorId> aux_ids;
  for (const auto& f : w.aux) {
    if (!aux_ids.insert(f.id).second || admn.has_factor(f.id)) report("factor: auxiliary " + f.id + " declared twice");
  }
  for (int j = 1; j <= nu; ++j)
    for (const auto& id : w.codebooks[j - 1].factors)
      if (!lookup(w, admn, id)) report("factor: U_" + std::to_string(j) + " component " + id + " is unknown");
  std::set<FactorId> generated;
  for (int k = 1; k <= admn.size(); ++k) {
    const auto& n = w.nodes[k - 1];
    const std::string ks = std::to_string(k);
    for (const auto& kern : n.kernels) {
      for (std::size_t i = 0; i < kern.outputs.size(); ++i) {
        const auto& o = kern.outputs[i];
        if (!aux_ids.count(o)) report("kernel: node " + ks + " generates " + o + " which is not auxiliary");
        if (!generated.insert(o).second) report("kernel: " + o + " generated twice");
      }
      try {
        if (kern.normalization_error() > 1e-9) report("kernel: node " + ks + " compression kernel not normalized");
      } catch (const Error& e) {
        report(std::string("kernel: node ") + ks + " " + e.what());
      }
    }
    std::set<FactorId> mapped;
    for (const auto& m : n.maps) {
      if (!has(admn.node(k).x, m.output)) report("shape: node " + ks + " maps " + m.output + " which is not its x factor");
      if (!mapped.insert(m.output).second) report("shape: node " + ks + " maps " + m.output + " twice");
    }
    for (const auto& x : admn.node(k).x)
      if (!mapped.count(x)) report("shape: node " + ks + " has no map for " + x);
  }
  return issues;
}

bool is_omega_prime(const CodingParams& w) {
  if (w.nu() != w.mu) return false;
  for (int j = 1; j <= w.nu(); ++j) {
    const auto& cb = w.codebooks[j - 1];
    if (cb.gamma != index_union({j}, cb.superpose)) return false;
  }
  return true;
}

Induced induce(const CodingParams& w, const Admn& admn) {
  if (static_cast<int>(w.nodes.size()) != admn.size())
    throw Error(ErrorKind::ShapeMismatch, "omega has " + std::to_string(w.nodes.size()) + " node entries");
  Induced out;
  FactoredJoint& j = out.joint;
  std::vector<VarSet> state(admn.size() + 1);
  auto factor = [&](const FactorId& id) -> const Factor& {
    const Factor* f = lookup(w, admn, id);
    if (!f) throw Error(ErrorKind::UnknownFactor, id);
    return *f;
  };
  auto outputs_of = [&](const Kernel& k) {
    std::vector<Factor> fs;
    for (const auto& o : k.outputs) fs.push_back(factor(o));
    return fs;
  };
  for (int k = 1; k <= admn.size(); ++k) {
    const auto& node = admn.node(k);
    const auto& nc = w.nodes[k - 1];
    const std::string ks = std::to_string(k);
    for (const auto& id : node.y)
      if (!j.has(id) && factor(id).is_symbolic()) j.add_symbolic(factor(id));
    for (const auto& kern : node.kernels) j.apply_kernel(kern, outputs_of(kern));
    for (const auto& id : node.y)
      if (!j.has(id)) throw Error(ErrorKind::ShapeMismatch, "y factor " + id + " of node " + ks + " never generated");
    VarSet obs = node.y;
    if (node.carry_from > 0) obs = set_union(obs, state.at(node.carry_from));
    std::sort(obs.begin(), obs.end());
    obs.erase(std::unique(obs.begin(), obs.end()), obs.end());
    out.observation.push_back(obs);

    for (int d : nc.decode)
      for (const auto& id : w.codebook(d).factors)
        if (!j.has(id)) throw Error(ErrorKind::ShapeMismatch, "node " + ks + " decodes U_" + std::to_string(d) + " before it exists");
    const VarSet avail = set_union(obs, w.factors_of(nc.decode));
    VarSet made;
    for (const auto& kern : nc.kernels) {
      for (const auto& p : kern.parents)
        if (!has(avail, p) && !has(made, p))
          throw Error(ErrorKind::ShapeMismatch, "compression kernel at node " + ks + " conditions on unavailable " + p);
      j.apply_kernel(kern, outputs_of(kern));
      made.insert(made.end(), kern.outputs.begin(), kern.outputs.end());
    }
    for (int c : nc.compress)
      for (const auto& id : w.codebook(c).factors) {
        if (has(avail, id) || has(made, id)) continue;
        const Factor& f = factor(id);
        if (f.is_symbolic() && !j.has(id) && !admn.has_factor(id)) {
          j.add_symbolic(f);
          made.push_back(id);
          continue;
        }
        throw Error(ErrorKind::ShapeMismatch, "U_" + std::to_string(c) + " component " + id + " unavailable at node " + ks);
      }
    const VarSet availx = set_union(avail, set_union(made, w.factors_of(nc.compress)));
    for (const auto& m : nc.maps) {
      const Factor& xf = factor(m.output);
      if (!m.alias.empty()) {
        if (!has(availx, m.alias)) throw Error(ErrorKind::ShapeMismatch, "map for " + m.output + " copies unavailable " + m.alias);
        const Factor& src = j.factor(m.alias);
        if (xf.is_symbolic()) {
          if (!src.is_symbolic()) throw Error(ErrorKind::ShapeMismatch, m.output + " is symbolic but copies " + m.alias);
          j.add_symbolic(Factor::symbolic(m.output, src.rate_symbol, src.multiplier, src.source));
        } else {
          if (src.is_symbolic() || src.alphabet != xf.alphabet)
            throw Error(ErrorKind::ShapeMismatch, "map for " + m.output + " copies incompatible " + m.alias);
          Kernel id;
          id.parents = {m.alias};
          id.parent_sizes = {src.alphabet};
          id.outputs = {m.output};
          id.output_sizes = {xf.alphabet};
          for (int v = 0; v < src.alphabet; ++v) id.function.push_back(v);
          j.apply_kernel(id, {xf});
        }
        continue;
      }
      if (xf.is_symbolic()) throw Error(ErrorKind::ShapeMismatch, "symbolic " + m.output + " needs an alias map");
      Kernel t;
      for (const auto& in : m.inputs) {
        if (!has(availx, in)) throw Error(ErrorKind::ShapeMismatch, "map for " + m.output + " reads unavailable " + in);
        t.parents.push_back(in);
        t.parent_sizes.push_back(j.factor(in).alphabet);
      }
      t.outputs = {m.output};
      t.output_sizes = {xf.alphabet};
      t.function = m.table;
      if (static_cast<std::int64_t>(t.function.size()) != t.rows())
        throw Error(ErrorKind::ShapeMismatch, "map table for " + m.output + " has wrong length");
      for (auto v : t.function)
        if (v < 0 || v >= xf.alphabet) throw Error(ErrorKind::ShapeMismatch, "map table for " + m.output + " out of range");
      j.apply_kernel(t, {xf});
    }
    for (const auto& x : node.x)
      if (!j.has(x)) throw Error(ErrorKind::ShapeMismatch, "node " + ks + " has no map for " + x);
    state[k] = set_union(availx, node.x);
  }
  return out;
}

FactoredJoint induced_joint(const CodingParams& w, const Admn& admn) { return induce(w, admn).joint; }

TargetMatch check_target_match(const CodingParams& w, const Admn& admn) {
  TargetMatch tm;
  const FactoredJoint j = induced_joint(w, admn);
  const auto& t = admn.target;
  const auto table = j.table(t.vars);
  if (table.size() != t.table.size()) throw Error(ErrorKind::ShapeMismatch, "target table size");
  tm.max_deviation = simd::max_abs_diff(table, t.table);
  for (const auto& [lhs, rhs] : t.equalities) {
    if (!j.has(lhs) || !j.has(rhs)) {
      tm.mismatches.push_back(lhs + " = " + rhs + ": factor missing from induced joint");
      continue;
    }
    const Factor& a = j.factor(lhs);
    const Factor& b = j.factor(rhs);
    if (a.is_symbolic() || b.is_symbolic()) {
      if (!a.same_source(b)) tm.mismatches.push_back(lhs + " = " + rhs + ": induced " + lhs + " carries " + a.source);
      continue;
    }
    double off = 0.0;
    for (const auto& [vals, p] : j.support({lhs, rhs}))
      if (vals[0] != vals[1]) off += p;
    tm.max_deviation = std::max(tm.max_deviation, off);
  }
  return tm;
}

}  // namespace unirate
