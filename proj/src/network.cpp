#include "unirate/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "unirate/error.hpp"

namespace unirate {

namespace {

constexpr double kTol = 1e-9;

bool contains(const VarSet& s, const FactorId& id) { return std::find(s.begin(), s.end(), id) != s.end(); }

// p(outputs | parents) of `k` read off a full assignment
double kernel_at(const Kernel& k, const std::map<FactorId, int>& v) {
  std::vector<int> pv, ov;
  for (const auto& p : k.parents) pv.push_back(v.at(p));
  for (const auto& o : k.outputs) ov.push_back(v.at(o));
  return k.prob(mixed_radix_index(pv, k.parent_sizes), mixed_radix_index(ov, k.output_sizes));
}

// enumerate all assignments of `ids` with alphabet `sizes`
template <class F>
void for_each_assignment(const VarSet& ids, const std::vector<int>& sizes, std::map<FactorId, int>& v, F&& f) {
  const std::int64_t n = mixed_radix_size(sizes);
  for (std::int64_t i = 0; i < n; ++i) {
    auto vals = mixed_radix_decode(i, sizes);
    for (std::size_t j = 0; j < ids.size(); ++j) v[ids[j]] = vals[j];
    f(i);
  }
}

std::vector<int> sizes_of(const Admn& a, const VarSet& ids) {
  std::vector<int> s;
  for (const auto& id : ids) s.push_back(a.factor(id).alphabet);
  return s;
}

std::string unique_id(const Admn& a, const std::string& base) {
  std::string id = base;
  for (int i = 2; a.has_factor(id); ++i) id = base + std::to_string(i);
  return id;
}

void shift_carries(std::vector<AdmnNode>& nodes, int from) {
  for (auto& n : nodes)
    if (n.carry_from >= from) ++n.carry_from;
}

}  // namespace

const AdmnNode& Admn::node(int k) const {
  if (k < 1 || k > size()) throw Error(ErrorKind::OutOfRange, "node " + std::to_string(k));
  return nodes[k - 1];
}

bool Admn::has_factor(const FactorId& id) const {
  return std::any_of(factors.begin(), factors.end(), [&](const Factor& f) { return f.id == id; });
}

const Factor& Admn::factor(const FactorId& id) const {
  for (const auto& f : factors)
    if (f.id == id) return f;
  throw Error(ErrorKind::UnknownFactor, id);
}

int Admn::introduced_at(const FactorId& id) const {
  for (int k = 1; k <= size(); ++k)
    if (contains(nodes[k - 1].y, id) || contains(nodes[k - 1].x, id)) return k;
  return 0;
}

VarSet Admn::fresh_y(int k) const {
  VarSet out;
  for (const auto& id : node(k).y)
    if (introduced_at(id) == k) out.push_back(id);
  return out;
}

VarSet Admn::observation(int k) const {
  const auto& n = node(k);
  VarSet obs = n.y;
  if (n.carry_from > 0 && n.carry_from < k) {
    obs = set_union(obs, observation(n.carry_from));
    obs = set_union(obs, node(n.carry_from).x);
  }
  return obs;
}

std::vector<std::string> validate(const Admn& admn) {
  std::vector<std::string> issues;
  auto report = [&](const std::string& s) { issues.push_back(s); };
  std::set<FactorId> ids;
  for (const auto& f : admn.factors) {
    if (!ids.insert(f.id).second) report("registry: duplicate factor " + f.id);
    if (!f.is_symbolic() && f.alphabet < 1) report("registry: factor " + f.id + " has empty alphabet");
  }
  std::set<FactorId> seen;  // introduced so far
  for (int k = 1; k <= admn.size(); ++k) {
    const auto& n = admn.nodes[k - 1];
    const std::string where = "node " + std::to_string(k);
    if (n.carry_from < 0 || n.carry_from >= k)
      report("ordering: " + where + " carries from node " + std::to_string(n.carry_from));
    std::set<FactorId> produced;
    for (const auto& kern : n.kernels) {
      for (std::size_t i = 0; i < kern.parents.size(); ++i) {
        const auto& p = kern.parents[i];
        if (!seen.count(p) && !produced.count(p))
          report("ordering: " + where + " kernel conditions on " + p + " which is not earlier");
        else if (!ids.count(p) || admn.factor(p).is_symbolic())
          report("kernel: " + where + " conditions on non-concrete " + p);
        else if (i < kern.parent_sizes.size() && admn.factor(p).alphabet != kern.parent_sizes[i])
          report("kernel: " + where + " parent " + p + " alphabet mismatch");
      }
      for (std::size_t i = 0; i < kern.outputs.size(); ++i) {
        const auto& o = kern.outputs[i];
        if (!contains(n.y, o) || seen.count(o)) report("kernel: " + where + " output " + o + " is not a fresh y factor");
        if (!produced.insert(o).second) report("kernel: " + where + " output " + o + " generated twice");
        if (ids.count(o) && (admn.factor(o).is_symbolic() ||
                             (i < kern.output_sizes.size() && admn.factor(o).alphabet != kern.output_sizes[i])))
          report("kernel: " + where + " output " + o + " alphabet mismatch");
      }
      if (kern.parents.size() != kern.parent_sizes.size() || kern.outputs.size() != kern.output_sizes.size()) {
        report("kernel: " + where + " size lists inconsistent");
        continue;
      }
      try {
        const double e = kern.normalization_error();
        if (e > kTol) {
          std::ostringstream os;
          os << "normalization: " << where << " kernel for " << (kern.outputs.empty() ? "?" : kern.outputs[0])
             << " off by " << e;
          report(os.str());
        }
      } catch (const Error& e) {
        report(std::string("kernel: ") + where + " " + e.what());
      }
    }
    for (const auto& id : n.y) {
      if (!ids.count(id)) {
        report("registry: " + where + " y factor " + id + " undeclared");
        continue;
      }
      if (seen.count(id)) continue;  // lossless link from an earlier node
      if (!admn.factor(id).is_symbolic() && !produced.count(id))
        report("kernel: " + where + " fresh y factor " + id + " has no kernel");
    }
    for (const auto& id : n.y) seen.insert(id);
    for (const auto& id : n.x) {
      if (!ids.count(id)) report("registry: " + where + " x factor " + id + " undeclared");
      if (seen.count(id)) report("ordering: " + where + " x factor " + id + " already introduced");
      seen.insert(id);
    }
  }
  for (const auto& f : admn.factors)
    if (!seen.count(f.id)) report("registry: factor " + f.id + " belongs to no node");

  const Target& t = admn.target;
  std::vector<int> tsizes;
  bool target_ok = true;
  for (const auto& id : t.vars) {
    if (!ids.count(id) || admn.factor(id).is_symbolic()) {
      report("target: " + id + " is not a concrete network factor");
      target_ok = false;
    } else {
      tsizes.push_back(admn.factor(id).alphabet);
    }
  }
  for (const auto& [lhs, rhs] : t.equalities) {
    if (!ids.count(lhs) || !ids.count(rhs)) {
      report("target: equality " + lhs + " = " + rhs + " names an unknown factor");
      continue;
    }
    const int k = admn.introduced_at(lhs);
    if (k == 0 || !contains(admn.nodes[k - 1].x, lhs)) report("target: equality lhs " + lhs + " is not an x factor");
    if (admn.factor(lhs).is_symbolic() != admn.factor(rhs).is_symbolic())
      report("target: equality " + lhs + " = " + rhs + " mixes symbolic and concrete");
  }
  if (target_ok) {
    if (static_cast<std::int64_t>(t.table.size()) != mixed_radix_size(tsizes)) {
      report("target: table size mismatch");
      target_ok = false;
    } else {
      double s = 0;
      for (double v : t.table) {
        if (v < 0 || !std::isfinite(v)) report("target: negative entry");
        s += v;
      }
      if (std::abs(s - 1.0) > kTol) {
        std::ostringstream os;
        os << "normalization: target sums to " << s;
        report(os.str());
        target_ok = false;
      }
    }
  }
  // kernels whose whole family lies inside p* must agree with p*'s conditional
  if (target_ok && issues.empty()) {
    auto joint = FactoredJoint::from_table(
        [&] {
          std::vector<Factor> fs;
          for (const auto& id : t.vars) fs.push_back(admn.factor(id));
          return fs;
        }(),
        t.table);
    for (int k = 1; k <= admn.size(); ++k)
      for (const auto& kern : admn.nodes[k - 1].kernels) {
        bool inside = true;
        for (const auto& p : kern.parents) inside = inside && contains(t.vars, p);
        for (const auto& o : kern.outputs) inside = inside && contains(t.vars, o);
        if (!inside) continue;
        VarSet fam = kern.parents;
        fam.insert(fam.end(), kern.outputs.begin(), kern.outputs.end());
        auto tab = joint.table(fam);
        const std::int64_t cols = kern.cols();
        double worst = 0;
        for (std::int64_t r = 0; r < kern.rows(); ++r) {
          double pr = 0;
          for (std::int64_t c = 0; c < cols; ++c) pr += tab[r * cols + c];
          if (pr <= 0) continue;
          for (std::int64_t c = 0; c < cols; ++c)
            worst = std::max(worst, std::abs(tab[r * cols + c] - pr * kern.prob(r, c)));
        }
        if (worst > kTol) {
          std::ostringstream os;
          os << "consistency: p* disagrees with node " << k << " kernel for " << kern.outputs[0] << " by " << worst;
          report(os.str());
        }
      }
  }
  return issues;
}

Kernel combined_kernel(const Admn& admn, int k) {
  const auto& n = admn.node(k);
  Kernel out;
  for (const auto& kern : n.kernels)
    for (std::size_t i = 0; i < kern.outputs.size(); ++i) {
      out.outputs.push_back(kern.outputs[i]);
      out.output_sizes.push_back(kern.output_sizes[i]);
    }
  for (const auto& kern : n.kernels)
    for (std::size_t i = 0; i < kern.parents.size(); ++i)
      if (!contains(out.outputs, kern.parents[i]) && !contains(out.parents, kern.parents[i])) {
        out.parents.push_back(kern.parents[i]);
        out.parent_sizes.push_back(kern.parent_sizes[i]);
      }
  if (n.kernels.size() == 1 && out.parents == n.kernels[0].parents) return n.kernels[0];
  const std::int64_t rows = out.rows(), cols = out.cols();
  out.table.assign(rows * cols, 0.0);
  std::map<FactorId, int> v;
  for_each_assignment(out.parents, out.parent_sizes, v, [&](std::int64_t r) {
    for_each_assignment(out.outputs, out.output_sizes, v, [&](std::int64_t c) {
      double p = 1.0;
      for (const auto& kern : n.kernels) p *= kernel_at(kern, v);
      out.table[r * cols + c] = p;
    });
  });
  return out;
}

Admn insert_virtual_node(const Admn& admn, int v, const std::vector<Factor>& y_factors, const Kernel& kernel) {
  if (v < 1 || v > admn.size()) throw Error(ErrorKind::OutOfRange, "virtual node position " + std::to_string(v));
  if (kernel.normalization_error() > kTol) throw Error(ErrorKind::BadKernel, "virtual node kernel rows not normalized");
  if (kernel.outputs.size() != y_factors.size()) throw Error(ErrorKind::ShapeMismatch, "kernel outputs vs y factors");
  for (std::size_t i = 0; i < y_factors.size(); ++i) {
    if (y_factors[i].id != kernel.outputs[i] || y_factors[i].is_symbolic() ||
        y_factors[i].alphabet != kernel.output_sizes[i])
      throw Error(ErrorKind::ShapeMismatch, "virtual node factor " + y_factors[i].id);
    if (admn.has_factor(y_factors[i].id)) throw Error(ErrorKind::ShapeMismatch, "factor " + y_factors[i].id + " exists");
  }
  const VarSet fresh = admn.fresh_y(v);
  bool uses_yv = false;
  for (std::size_t i = 0; i < kernel.parents.size(); ++i) {
    const auto& p = kernel.parents[i];
    const int at = admn.introduced_at(p);
    if (contains(fresh, p)) {
      uses_yv = true;
    } else if (at == 0 || at >= v) {
      throw Error(ErrorKind::ShapeMismatch, "virtual node kernel conditions on " + p + " which is not before node v");
    }
    if (admn.factor(p).is_symbolic() || admn.factor(p).alphabet != kernel.parent_sizes[i])
      throw Error(ErrorKind::ShapeMismatch, "virtual node kernel parent " + p);
  }

  Admn out = admn;
  out.factors.insert(out.factors.end(), y_factors.begin(), y_factors.end());
  AdmnNode virt;
  virt.name = "virtual";
  for (const auto& f : y_factors) virt.y.push_back(f.id);

  if (!uses_yv) {
    virt.kernels = {kernel};
  } else {
    // p(y|P) = sum_{y_v} p(y_v|P) p(y|P,y_v);  p(y_v|P,y) by Bayes
    const Kernel kv = combined_kernel(admn, v);
    Kernel ky;
    ky.parents = kv.parents;
    ky.parent_sizes = kv.parent_sizes;
    for (std::size_t i = 0; i < kernel.parents.size(); ++i)
      if (!contains(fresh, kernel.parents[i]) && !contains(ky.parents, kernel.parents[i])) {
        ky.parents.push_back(kernel.parents[i]);
        ky.parent_sizes.push_back(kernel.parent_sizes[i]);
      }
    ky.outputs = kernel.outputs;
    ky.output_sizes = kernel.output_sizes;
    Kernel kb;
    kb.parents = ky.parents;
    kb.parent_sizes = ky.parent_sizes;
    kb.parents.insert(kb.parents.end(), ky.outputs.begin(), ky.outputs.end());
    kb.parent_sizes.insert(kb.parent_sizes.end(), ky.output_sizes.begin(), ky.output_sizes.end());
    kb.outputs = kv.outputs;
    kb.output_sizes = kv.output_sizes;
    const std::int64_t prow = ky.rows(), ycols = ky.cols(), vcols = kv.cols();
    ky.table.assign(prow * ycols, 0.0);
    kb.table.assign(prow * ycols * vcols, 0.0);
    std::map<FactorId, int> val;
    for_each_assignment(ky.parents, ky.parent_sizes, val, [&](std::int64_t r) {
      for_each_assignment(ky.outputs, ky.output_sizes, val, [&](std::int64_t yc) {
        double den = 0.0;
        std::vector<double> prior(vcols);
        for_each_assignment(kv.outputs, kv.output_sizes, val, [&](std::int64_t vc) {
          prior[vc] = kernel_at(kv, val);
          double joint = prior[vc] * kernel_at(kernel, val);
          kb.table[(r * ycols + yc) * vcols + vc] = joint;
          den += joint;
        });
        ky.table[r * ycols + yc] = den;
        for (std::int64_t vc = 0; vc < vcols; ++vc) {
          double& cell = kb.table[(r * ycols + yc) * vcols + vc];
          cell = den > 0 ? cell / den : prior[vc];
        }
      });
    });
    virt.kernels = {ky};
    out.nodes[v - 1].kernels = {kb};
  }
  shift_carries(out.nodes, v);
  out.nodes.insert(out.nodes.begin() + (v - 1), virt);
  return out;
}

CommonPart common_part(const std::vector<double>& joint, int na, int nb) {
  if (na < 1 || nb < 1 || static_cast<std::int64_t>(joint.size()) != std::int64_t{na} * nb)
    throw Error(ErrorKind::ShapeMismatch, "common part table");
  // union-find over a-values [0,na) and b-values [na,na+nb)
  std::vector<int> parent(na + nb);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> in_a(na, false), in_b(nb, false);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b)
      if (joint[a * nb + b] > 0) {
        in_a[a] = in_b[b] = true;
        parent[find(a)] = find(na + b);
      }
  CommonPart cp;
  cp.a_map.assign(na, -1);
  cp.b_map.assign(nb, -1);
  std::map<int, int> label;
  for (int a = 0; a < na; ++a)
    if (in_a[a]) {
      auto [it, fresh] = label.emplace(find(a), cp.components);
      if (fresh) ++cp.components;
      cp.a_map[a] = it->second;
    }
  for (int b = 0; b < nb; ++b)
    if (in_b[b]) cp.b_map[b] = label.at(find(na + b));
  return cp;
}

Admn split_common_part(const Admn& admn, int v1, int v2, int carrier_alphabet) {
  if (v1 < 1 || v2 > admn.size() || v1 >= v2) throw Error(ErrorKind::OutOfRange, "common part node pair");
  if (carrier_alphabet < 1) throw Error(ErrorKind::DomainError, "carrier alphabet must be >= 1");
  const VarSet f1 = admn.fresh_y(v1), f2 = admn.fresh_y(v2);
  if (f1 != admn.node(v1).y || f2 != admn.node(v2).y || f1.empty() || f2.empty())
    throw Error(ErrorKind::PreconditionViolated, "Y_v1 and Y_v2 must consist of fresh factors");
  for (const auto& id : f1)
    if (admn.factor(id).is_symbolic()) throw Error(ErrorKind::PreconditionViolated, "Y_v1 must be concrete");
  for (const auto& id : f2)
    if (admn.factor(id).is_symbolic()) throw Error(ErrorKind::PreconditionViolated, "Y_v2 must be concrete");
  const Kernel k1 = combined_kernel(admn, v1);
  const Kernel k2 = combined_kernel(admn, v2);
  if (!k1.parents.empty()) throw Error(ErrorKind::PreconditionViolated, "p(y_v1 | past) must equal p(y_v1)");
  for (const auto& p : k2.parents)
    if (!contains(f1, p)) throw Error(ErrorKind::PreconditionViolated, "p(y_v2 | past) must depend on y_v1 only");

  const std::vector<int> s1 = sizes_of(admn, f1), s2 = sizes_of(admn, f2);
  const std::int64_t na = mixed_radix_size(s1), nb = mixed_radix_size(s2);
  std::vector<double> joint(na * nb, 0.0);
  std::map<FactorId, int> val;
  for_each_assignment(f1, s1, val, [&](std::int64_t a) {
    const double pa = kernel_at(k1, val);
    for_each_assignment(f2, s2, val, [&](std::int64_t b) { joint[a * nb + b] = pa * kernel_at(k2, val); });
  });
  const CommonPart cp = common_part(joint, static_cast<int>(na), static_cast<int>(nb));

  Admn out = admn;
  const FactorId ycp = unique_id(admn, "Ycp");
  const FactorId xcp = unique_id(admn, "Xcp");
  out.factors.push_back(Factor::concrete(ycp, std::max(1, cp.components)));
  out.factors.push_back(Factor::concrete(xcp, carrier_alphabet));

  AdmnNode virt;
  virt.name = "common";
  virt.y = {ycp};
  virt.x = {xcp};
  Kernel kc;
  kc.outputs = {ycp};
  kc.output_sizes = {std::max(1, cp.components)};
  kc.table.assign(kc.output_sizes[0], 0.0);
  std::vector<double> pa(na, 0.0);
  for (std::int64_t a = 0; a < na; ++a) {
    for (std::int64_t b = 0; b < nb; ++b) pa[a] += joint[a * nb + b];
    if (cp.a_map[a] >= 0) kc.table[cp.a_map[a]] += pa[a];
  }
  if (cp.components == 0) kc.table[0] = 1.0;
  virt.kernels = {kc};

  // Y_v1 drawn given the common part, so the virtual output stays a function of it
  Kernel ka;
  ka.parents = {ycp};
  ka.parent_sizes = kc.output_sizes;
  ka.outputs = f1;
  ka.output_sizes = s1;
  ka.table.assign(kc.output_sizes[0] * na, 0.0);
  for (int c = 0; c < kc.output_sizes[0]; ++c) {
    const double pc = kc.table[c];
    for (std::int64_t a = 0; a < na; ++a) {
      if (pc > 0)
        ka.table[c * na + a] = cp.a_map[a] == c ? pa[a] / pc : 0.0;
      else
        ka.table[c * na + a] = pa[a];
    }
  }
  out.nodes[v1 - 1].kernels = {ka};
  out.nodes[v1 - 1].y.push_back(xcp);
  out.nodes[v2 - 1].y.push_back(xcp);
  shift_carries(out.nodes, v1);
  out.nodes.insert(out.nodes.begin() + (v1 - 1), virt);
  return out;
}

std::string unfold_node_name(int k, int b) { return "(" + std::to_string(k) + "," + std::to_string(b) + ")"; }
FactorId unfold_x(int k, int b) { return "X" + std::to_string(k) + "." + std::to_string(b); }
FactorId unfold_y(int k, int b) { return "Y" + std::to_string(k) + "." + std::to_string(b); }
int unfold_index(int n_nodes, int k, int b) { return (b - 1) * n_nodes + k; }

Admn unfold(const Dmn& dmn, int blocks, int factor_cap) {
  const int n = static_cast<int>(dmn.x_alphabets.size());
  if (blocks < 1) throw Error(ErrorKind::DomainError, "blocks must be >= 1");
  if (n < 1 || static_cast<int>(dmn.y_alphabets.size()) != n) throw Error(ErrorKind::ShapeMismatch, "dmn alphabets");
  if (dmn.source < 1 || dmn.source > n) throw Error(ErrorKind::OutOfRange, "dmn source");
  for (int d : dmn.destinations)
    if (d < 1 || d > n || d == dmn.source) throw Error(ErrorKind::OutOfRange, "dmn destination");
  std::vector<int> xs, ys, xk, yk;
  for (int k = 0; k < n; ++k) {
    if (dmn.x_alphabets[k] > 0) {
      xs.push_back(dmn.x_alphabets[k]);
      xk.push_back(k + 1);
    }
    if (dmn.y_alphabets[k] > 0) {
      ys.push_back(dmn.y_alphabets[k]);
      yk.push_back(k + 1);
    }
  }
  const std::int64_t rows = mixed_radix_size(xs), cols = mixed_radix_size(ys);
  if (static_cast<std::int64_t>(dmn.channel.size()) != rows * cols) throw Error(ErrorKind::ShapeMismatch, "dmn channel");
  for (std::int64_t r = 0; r < rows; ++r) {
    double s = 0;
    for (std::int64_t c = 0; c < cols; ++c) s += dmn.channel[r * cols + c];
    if (std::abs(s - 1.0) > kTol) throw Error(ErrorKind::BadKernel, "dmn channel row " + std::to_string(r));
  }
  std::int64_t count = 1 + static_cast<std::int64_t>(blocks) * (xk.size() + yk.size()) + dmn.destinations.size();
  if (count > factor_cap) throw Error(ErrorKind::TooLarge, "unfolded network has " + std::to_string(count) + " factors");

  // p(y_k | y_<k, x) for every output position, shared by all blocks
  std::vector<std::vector<double>> cond(yk.size());
  for (std::size_t m = 0; m < yk.size(); ++m) {
    std::vector<int> prefix(ys.begin(), ys.begin() + m + 1);
    const std::int64_t pm = mixed_radix_size(prefix);
    const std::int64_t below = pm / ys[m];
    std::vector<double> marg(rows * pm, 0.0);
    for (std::int64_t r = 0; r < rows; ++r)
      for (std::int64_t c = 0; c < cols; ++c) {
        auto yv = mixed_radix_decode(c, ys);
        std::vector<int> pv(yv.begin(), yv.begin() + m + 1);
        marg[r * pm + mixed_radix_index(pv, prefix)] += dmn.channel[r * cols + c];
      }
    // parents ordered (x..., y_<k...), i.e. row r then prefix index without the last digit
    cond[m].assign(rows * pm, 0.0);
    for (std::int64_t r = 0; r < rows; ++r)
      for (std::int64_t q = 0; q < below; ++q) {
        double s = 0;
        for (int y = 0; y < ys[m]; ++y) s += marg[r * pm + q * ys[m] + y];
        for (int y = 0; y < ys[m]; ++y)
          cond[m][(r * below + q) * ys[m] + y] = s > 0 ? marg[r * pm + q * ys[m] + y] / s : 1.0 / ys[m];
      }
  }

  Admn out;
  const Rational mult(blocks);
  out.factors.push_back(Factor::symbolic("M", dmn.rate_symbol, mult, "M"));
  for (int b = 1; b <= blocks + 1; ++b)
    for (int k = 1; k <= n; ++k) {
      AdmnNode node;
      node.name = unfold_node_name(k, b);
      if (b == 1 && k == dmn.source) node.y.push_back("M");
      if (b > 1) {
        node.carry_from = unfold_index(n, k, b - 1);
        if (dmn.y_alphabets[k - 1] > 0) {
          const std::size_t m = std::find(yk.begin(), yk.end(), k) - yk.begin();
          Kernel kern;
          for (std::size_t i = 0; i < xk.size(); ++i) {
            kern.parents.push_back(unfold_x(xk[i], b - 1));
            kern.parent_sizes.push_back(xs[i]);
          }
          for (std::size_t i = 0; i < m; ++i) {
            kern.parents.push_back(unfold_y(yk[i], b - 1));
            kern.parent_sizes.push_back(ys[i]);
          }
          kern.outputs = {unfold_y(k, b - 1)};
          kern.output_sizes = {ys[m]};
          kern.table = cond[m];
          node.kernels = {kern};
          node.y.push_back(unfold_y(k, b - 1));
          out.factors.push_back(Factor::concrete(unfold_y(k, b - 1), ys[m]));
        }
      }
      if (b <= blocks && dmn.x_alphabets[k - 1] > 0) {
        node.x.push_back(unfold_x(k, b));
        out.factors.push_back(Factor::concrete(unfold_x(k, b), dmn.x_alphabets[k - 1]));
      }
      if (b == blocks + 1 &&
          std::find(dmn.destinations.begin(), dmn.destinations.end(), k) != dmn.destinations.end()) {
        const FactorId est = "Mhat" + std::to_string(k);
        node.x.push_back(est);
        out.factors.push_back(Factor::symbolic(est, dmn.rate_symbol, mult, "M"));
        out.target.equalities.push_back({est, "M"});
      }
      out.nodes.push_back(std::move(node));
    }
  return out;
}

}  // namespace unirate
