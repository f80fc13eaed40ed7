#include "unirate/duality.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "unirate/error.hpp"
#include "unirate/generate.hpp"

namespace unirate {

namespace {

VarSet sorted(VarSet v) {
  std::sort(v.begin(), v.end());
  return v;
}

using Family = std::multiset<std::tuple<int, std::string, IndexSet>>;

Family family_of(const InequalitySystem& sys, bool flip) {
  Family f;
  for (const auto& r : sys.rows) {
    std::string kind = r.origin.kind;
    if (flip) kind = kind == "packing" ? "covering" : "packing";
    f.insert({r.origin.node, kind, r.origin.subset});
  }
  return f;
}

}  // namespace

const char* dual_type_name(DualType t) {
  switch (t) {
    case DualType::Original: return "original";
    case DualType::TypeI: return "typeI";
    case DualType::TypeII: return "typeII";
    case DualType::TypeIII: return "typeIII";
  }
  return "?";
}

bool swaps_roles(DualType t) { return t == DualType::TypeI || t == DualType::TypeIII; }
bool reverses_order(DualType t) { return t == DualType::TypeII || t == DualType::TypeIII; }

int original_node(DualType t, int n, int k) { return reverses_order(t) ? n + 1 - k : k; }

Admn construct_dual(const Admn& admn, DualType type, const std::vector<std::vector<Kernel>>& kernels,
                    const Target& target) {
  const int n = admn.size();
  if (static_cast<int>(kernels.size()) != n)
    throw Error(ErrorKind::ShapeMismatch, "need kernels for " + std::to_string(n) + " dual nodes");
  Admn out;
  out.factors = admn.factors;
  out.target = target;
  for (int k = 1; k <= n; ++k) {
    const AdmnNode& src = admn.node(original_node(type, n, k));
    if (src.carry_from != 0) throw Error(ErrorKind::ShapeMismatch, "dual of a network with carried state");
    AdmnNode node;
    node.name = src.name;
    node.y = swaps_roles(type) ? src.x : src.y;
    node.x = swaps_roles(type) ? src.y : src.x;
    node.kernels = kernels[k - 1];
    for (const auto& kern : node.kernels)
      for (std::size_t i = 0; i < kern.outputs.size(); ++i) {
        const auto& o = kern.outputs[i];
        if (std::find(node.y.begin(), node.y.end(), o) == node.y.end())
          throw Error(ErrorKind::ShapeMismatch, "dual node " + std::to_string(k) + " kernel outputs " + o + " which it does not observe");
        if (!out.has_factor(o) || out.factor(o).alphabet != kern.output_sizes.at(i))
          throw Error(ErrorKind::ShapeMismatch, "dual kernel output " + o + " has the wrong alphabet");
      }
    out.nodes.push_back(std::move(node));
  }
  return out;
}

CodingParams dual_skeleton(const CodingParams& w, DualType type) {
  CodingParams out;
  out.mu = w.mu;
  out.rate_names = w.rate_names;
  for (const auto& cb : w.codebooks) out.codebooks.push_back(Codebook{{}, cb.gamma, cb.superpose});
  const int n = static_cast<int>(w.nodes.size());
  for (int k = 1; k <= n; ++k) {
    const NodeCoding& src = w.nodes[original_node(type, n, k) - 1];
    NodeCoding nc;
    nc.decode = reverses_order(type) ? src.compress : src.decode;
    nc.compress = reverses_order(type) ? src.decode : src.compress;
    out.nodes.push_back(std::move(nc));
  }
  return out;
}

DualSystems dual_systems(const DualParams& d) {
  const CodingParams& w = d.original.omega;
  for (const auto& nc : w.nodes)
    if (!nc.nonunique.empty()) throw Error(ErrorKind::PreconditionViolated, "dual problems need B_k empty");
  for (const auto& cb : w.codebooks)
    if (!cb.superpose.empty()) throw Error(ErrorKind::PreconditionViolated, "dual problems need A_j empty");
  DualSystems out;
  auto run = [&](const DualProblem& p) {
    GenerateOptions opts;
    opts.system_tag = dual_type_name(p.type);
    InequalitySystem sys = generate_system(p.omega, p.network, Mode::Corollary1, opts);
    const int n = p.network.size();
    for (auto& r : sys.rows) r.origin.node = original_node(p.type, n, r.origin.node);
    sort_canonical(sys.rows);
    out.types.push_back(p.type);
    out.systems.push_back(std::move(sys));
  };
  run(d.original);
  for (const auto& p : d.duals) run(p);
  return out;
}

std::vector<SwapCheck> verify_swap_structure(const DualParams& d, const DualSystems& systems) {
  std::vector<SwapCheck> out;
  if (systems.systems.empty()) return out;
  const Admn& orig = d.original.network;
  const int n = orig.size();
  const Family base = family_of(systems.systems.front(), false);
  for (std::size_t i = 0; i < d.duals.size(); ++i) {
    const DualProblem& p = d.duals[i];
    SwapCheck chk{p.type, true, {}};
    auto fail = [&](const std::string& s) {
      chk.pass = false;
      chk.issues.push_back(s);
    };
    if (p.network.size() != n) {
      fail("node count differs");
      out.push_back(chk);
      continue;
    }
    const CodingParams expect = dual_skeleton(d.original.omega, p.type);
    for (int k = 1; k <= n; ++k) {
      const int o = original_node(p.type, n, k);
      const NodeCoding& got = p.omega.nodes.at(k - 1);
      const NodeCoding& want = expect.nodes[k - 1];
      if (got.decode != want.decode || got.compress != want.compress)
        fail("dual node " + std::to_string(k) + " sets are not the " + (reverses_order(p.type) ? "W/D swap" : "copy") +
             " of original node " + std::to_string(o));
      const AdmnNode& on = orig.node(o);
      const AdmnNode& dn = p.network.node(k);
      const VarSet want_y = sorted(swaps_roles(p.type) ? on.x : on.y);
      const VarSet want_x = sorted(swaps_roles(p.type) ? on.y : on.x);
      if (sorted(dn.y) != want_y || sorted(dn.x) != want_x)
        fail("dual node " + std::to_string(k) + " does not carry the " + (swaps_roles(p.type) ? "X/Y swapped" : "same") +
             " alphabets of original node " + std::to_string(o));
    }
    const std::size_t idx = i + 1;
    if (idx >= systems.systems.size() || systems.types[idx] != p.type) {
      fail("system missing");
      out.push_back(chk);
      continue;
    }
    const InequalitySystem& sys = systems.systems[idx];
    if (family_of(sys, reverses_order(p.type)) != base)
      fail(std::string("subset families differ from the original") + (reverses_order(p.type) ? " after the W/D swap" : ""));
    for (const auto& r : sys.rows) {
      const AdmnNode& on = orig.node(r.origin.node);
      const VarSet want = sorted(swaps_roles(p.type) ? on.x : on.y);
      if (sorted(r.origin.observation) != want) {
        fail("row at node " + std::to_string(r.origin.node) + " conditions on the wrong observation");
        break;
      }
    }
    out.push_back(chk);
  }
  return out;
}

}  // namespace unirate
