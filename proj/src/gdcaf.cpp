#include "unirate/gdcaf.hpp"

#include <algorithm>
#include <cmath>

#include "unirate/error.hpp"

namespace unirate {

namespace {

constexpr double kSideTol = 1e-9;

std::string show(const IndexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

bool contains(const VarSet& s, const FactorId& id) { return std::find(s.begin(), s.end(), id) != s.end(); }

const Factor& find_factor(const Admn& net, const GdcafScheme& sc, const FactorId& id) {
  for (const auto& f : sc.aux)
    if (f.id == id) return f;
  if (net.has_factor(id)) return net.factor(id);
  throw Error(ErrorKind::UnknownFactor, id);
}

void check_structure(const Admn& net, const GdcafScheme& sc) {
  const int n = net.size();
  if (n < 3) throw Error(ErrorKind::StructureError, "needs a source, at least one relay and a destination");
  const int relays = n - 2;
  if (static_cast<int>(sc.u.size()) != relays || static_cast<int>(sc.yhat.size()) != relays)
    throw Error(ErrorKind::StructureError, "u and yhat need one entry per relay");
  const VarSet& y1 = net.node(1).y;
  for (int k = 2; k <= n; ++k)
    for (const auto& kern : net.node(k).kernels)
      for (const auto& p : kern.parents)
        if (contains(y1, p)) throw Error(ErrorKind::StructureError, "node " + std::to_string(k) + " channel depends on y_1");
  if (!net.node(1).kernels.empty()) throw Error(ErrorKind::StructureError, "source node has a channel");
  if (net.fresh_y(n).empty()) throw Error(ErrorKind::StructureError, "destination observes nothing");
  for (const auto& x : net.node(1).x)
    if (!find_factor(net, sc, x).is_symbolic() && !contains(sc.source_factors, x))
      throw Error(ErrorKind::StructureError, "source input " + x + " missing from the source table");
  for (const auto& us : sc.u)
    for (const auto& id : us)
      if (!contains(sc.source_factors, id)) throw Error(ErrorKind::StructureError, "U factor " + id + " missing from the source table");
}

}  // namespace

FactoredJoint gdcaf_joint(const Admn& net, const GdcafScheme& sc) {
  check_structure(net, sc);
  std::vector<Factor> src;
  for (const auto& id : sc.source_factors) src.push_back(find_factor(net, sc, id));
  FactoredJoint j = FactoredJoint::from_table(src, sc.source_table);
  auto outputs_of = [&](const Kernel& k) {
    std::vector<Factor> fs;
    for (const auto& o : k.outputs) fs.push_back(find_factor(net, sc, o));
    return fs;
  };
  const int n = net.size();
  for (int k = 2; k <= n; ++k) {
    for (const auto& kern : net.node(k).kernels) j.apply_kernel(kern, outputs_of(kern));
    if (k == n) break;
    for (const auto& kern : sc.compressors) {
      if (kern.outputs.empty() || !contains(sc.yhat[k - 2], kern.outputs.front())) continue;
      for (const auto& p : kern.parents)
        if (!contains(net.fresh_y(k), p) && !contains(sc.u[k - 2], p))
          throw Error(ErrorKind::StructureError, "compressor of node " + std::to_string(k) + " reads " + p);
      j.apply_kernel(kern, outputs_of(kern));
    }
    const VarSet local = set_union({net.fresh_y(k), sc.u[k - 2], sc.yhat[k - 2]});
    for (const auto& m : sc.maps) {
      if (!contains(net.node(k).x, m.output)) continue;
      if (j.has(m.output)) throw Error(ErrorKind::StructureError, m.output + " is already set by the source table");
      const Factor& xf = find_factor(net, sc, m.output);
      Kernel t;
      t.outputs = {m.output};
      t.output_sizes = {xf.alphabet};
      if (!m.alias.empty()) {
        if (!contains(local, m.alias)) throw Error(ErrorKind::StructureError, m.output + " copies non-local " + m.alias);
        t.parents = {m.alias};
        t.parent_sizes = {j.factor(m.alias).alphabet};
        for (int v = 0; v < t.parent_sizes[0]; ++v) t.function.push_back(v);
      } else {
        for (const auto& in : m.inputs) {
          if (!contains(local, in)) throw Error(ErrorKind::StructureError, m.output + " reads non-local " + in);
          t.parents.push_back(in);
          t.parent_sizes.push_back(j.factor(in).alphabet);
        }
        t.function = m.table;
      }
      j.apply_kernel(t, {xf});
    }
    for (const auto& x : net.node(k).x)
      if (!j.has(x)) throw Error(ErrorKind::StructureError, "relay input " + x + " has no map");
  }
  return j;
}

GdcafResult gdcaf_rate(const Admn& net, const GdcafScheme& sc) {
  const FactoredJoint j = gdcaf_joint(net, sc);
  const int n = net.size();
  const int relays = n - 2;
  VarSet x1;
  for (const auto& x : net.node(1).x)
    if (j.has(x) && !j.factor(x).is_symbolic()) x1.push_back(x);
  const VarSet yn = net.fresh_y(n);
  auto h = [&](const VarSet& s) { return j.entropy(s).constant; };
  auto mi = [&](const VarSet& a, const VarSet& b, const VarSet& c) { return j.cond_mutual_info(a, b, c).constant; };
  auto u_of = [&](const IndexSet& s) {
    VarSet out;
    for (int k : s) out = set_union(out, sc.u[k - 2]);
    return out;
  };
  auto yhat_of = [&](const IndexSet& s) {
    VarSet out;
    for (int k : s) out = set_union(out, sc.yhat[k - 2]);
    return out;
  };
  IndexSet all;
  for (int k = 2; k <= n - 1; ++k) all.push_back(k);
  const VarSet u_all = u_of(all);

  GdcafResult res;
  res.rate = std::numeric_limits<double>::infinity();
  const int full = 1 << relays;
  for (int tm = 0; tm < full; ++tm) {
    IndexSet t;
    for (int i = 0; i < relays; ++i)
      if (tm >> i & 1) t.push_back(all[i]);
    const IndexSet tc = index_minus(all, t);
    double compress_cost = 0.0;
    for (int jn : t)
      compress_cost += mi(sc.yhat[jn - 2], net.fresh_y(jn), set_union({u_all, yhat_of(index_below(t, jn)), x1}));
    // S ranges over subsets of T
    for (int sm = tm;; sm = (sm - 1) & tm) {
      IndexSet s;
      for (int i = 0; i < relays; ++i)
        if (sm >> i & 1) s.push_back(all[i]);
      const IndexSet sc_set = index_minus(all, s);
      double v = mi(set_union({x1, u_of(s), yhat_of(t)}), set_union(yhat_of(tc), yn), u_of(sc_set));
      v -= compress_cost;
      v += h(u_of(sc_set));
      for (int jn : sc_set) v -= h(set_union(sc.u[jn - 2], net.fresh_y(jn))) - h(net.fresh_y(jn));
      res.terms.push_back(GdcafTerm{s, t, v});
      if (v < res.rate) {
        res.rate = v;
        res.argmin = res.terms.back();
      }
      if (sm == 0) break;
    }
  }
  for (int m = 1; m < full; ++m) {
    IndexSet sp;
    for (int i = 0; i < relays; ++i)
      if (m >> i & 1) sp.push_back(all[i]);
    double lhs = 0.0, rhs = 0.0;
    for (int jn : sp) {
      lhs += mi(sc.u[jn - 2], u_of(index_below(sp, jn)), {});
      rhs += mi(sc.u[jn - 2], net.fresh_y(jn), {});
    }
    // closure of the strict condition
    if (lhs > rhs + kSideTol) res.side_violations.push_back("S' = " + show(sp));
  }
  res.feasible = res.side_violations.empty();
  return res;
}

double channel_capacity(const std::vector<double>& w, int inputs, int outputs, double tol) {
  if (static_cast<int>(w.size()) != inputs * outputs) throw Error(ErrorKind::ShapeMismatch, "channel matrix");
  if (inputs <= 1) return 0.0;
  std::vector<double> p(inputs, 1.0 / inputs), q(outputs), d(inputs);
  double lower = 0.0;
  for (int it = 0; it < 2000000; ++it) {
    std::fill(q.begin(), q.end(), 0.0);
    for (int x = 0; x < inputs; ++x)
      for (int y = 0; y < outputs; ++y) q[y] += p[x] * w[x * outputs + y];
    double upper = -1.0, z = 0.0;
    for (int x = 0; x < inputs; ++x) {
      double dx = 0.0;
      for (int y = 0; y < outputs; ++y) {
        const double v = w[x * outputs + y];
        if (v > 0) dx += v * std::log2(v / q[y]);
      }
      d[x] = dx;
      upper = std::max(upper, dx);
      z += p[x] * std::exp2(dx);
    }
    lower = std::log2(z);
    if (upper - lower < tol) return lower;
    for (int x = 0; x < inputs; ++x) p[x] *= std::exp2(d[x]) / z;
  }
  return lower;
}

CutSetBound cutset_upper_bound(const Dmn& dmn, int destination, double tol) {
  const int n = static_cast<int>(dmn.x_alphabets.size());
  if (destination < 1 || destination > n || destination == dmn.source)
    throw Error(ErrorKind::OutOfRange, "destination " + std::to_string(destination));
  std::vector<int> xs, ys, xk, yk;
  for (int k = 1; k <= n; ++k) {
    if (dmn.x_alphabets[k - 1] > 0) {
      xk.push_back(k);
      xs.push_back(dmn.x_alphabets[k - 1]);
    }
    if (dmn.y_alphabets[k - 1] > 0) {
      yk.push_back(k);
      ys.push_back(dmn.y_alphabets[k - 1]);
    }
  }
  const std::int64_t rows = mixed_radix_size(xs), cols = mixed_radix_size(ys);
  if (static_cast<std::int64_t>(dmn.channel.size()) != rows * cols) throw Error(ErrorKind::ShapeMismatch, "dmn channel");
  CutSetBound out;
  out.value = std::numeric_limits<double>::infinity();
  std::vector<int> others;
  for (int k = 1; k <= n; ++k)
    if (k != dmn.source && k != destination) others.push_back(k);
  for (int m = 0; m < (1 << others.size()); ++m) {
    std::vector<int> cut = {dmn.source};
    for (std::size_t i = 0; i < others.size(); ++i)
      if (m >> i & 1) cut.push_back(others[i]);
    std::sort(cut.begin(), cut.end());
    auto in_cut = [&](int k) { return std::find(cut.begin(), cut.end(), k) != cut.end(); };
    std::vector<int> in_pos, out_pos, in_sizes, out_sizes, obs_pos, obs_sizes;
    for (std::size_t i = 0; i < xk.size(); ++i) {
      (in_cut(xk[i]) ? in_pos : out_pos).push_back(static_cast<int>(i));
      (in_cut(xk[i]) ? in_sizes : out_sizes).push_back(xs[i]);
    }
    for (std::size_t i = 0; i < yk.size(); ++i)
      if (!in_cut(yk[i])) {
        obs_pos.push_back(static_cast<int>(i));
        obs_sizes.push_back(ys[i]);
      }
    const std::int64_t ni = mixed_radix_size(in_sizes), no = mixed_radix_size(out_sizes),
                       nobs = mixed_radix_size(obs_sizes);
    double best = 0.0;
    for (std::int64_t fixed = 0; fixed < no; ++fixed) {
      const auto fv = mixed_radix_decode(fixed, out_sizes);
      std::vector<double> w(ni * nobs, 0.0);
      for (std::int64_t a = 0; a < ni; ++a) {
        const auto av = mixed_radix_decode(a, in_sizes);
        std::vector<int> xv(xs.size());
        for (std::size_t i = 0; i < in_pos.size(); ++i) xv[in_pos[i]] = av[i];
        for (std::size_t i = 0; i < out_pos.size(); ++i) xv[out_pos[i]] = fv[i];
        const std::int64_t r = mixed_radix_index(xv, xs);
        for (std::int64_t c = 0; c < cols; ++c) {
          const auto yv = mixed_radix_decode(c, ys);
          std::vector<int> ov;
          for (int p : obs_pos) ov.push_back(yv[p]);
          w[a * nobs + mixed_radix_index(ov, obs_sizes)] += dmn.channel[r * cols + c];
        }
      }
      best = std::max(best, channel_capacity(w, static_cast<int>(ni), static_cast<int>(nobs), tol));
    }
    out.cuts.push_back(CutValue{cut, best});
    out.value = std::min(out.value, best);
  }
  return out;
}

}  // namespace unirate
