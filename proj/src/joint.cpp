#include "unirate/joint.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "unirate/error.hpp"
#include "unirate/simd.hpp"

namespace unirate {

Factor Factor::concrete(FactorId id, int alphabet) {
  if (alphabet < 1) throw Error(ErrorKind::DomainError, "alphabet of " + id + " must be >= 1");
  if (alphabet > 65535) throw Error(ErrorKind::TooLarge, "alphabet of " + id + " exceeds 65535");
  Factor f;
  f.id = std::move(id);
  f.alphabet = alphabet;
  return f;
}

Factor Factor::symbolic(FactorId id, std::string symbol, Rational multiplier, FactorId source) {
  Factor f;
  f.kind = FactorKind::Symbolic;
  f.alphabet = 0;
  f.rate_symbol = std::move(symbol);
  f.multiplier = multiplier;
  f.source = source.empty() ? id : std::move(source);
  f.id = std::move(id);
  return f;
}

std::int64_t mixed_radix_size(const std::vector<int>& sizes) {
  std::int64_t n = 1;
  for (int s : sizes) {
    if (s < 1) throw Error(ErrorKind::DomainError, "nonpositive alphabet size");
    if (n > (std::int64_t{1} << 40) / s) throw Error(ErrorKind::TooLarge, "table exceeds 2^40 cells");
    n *= s;
  }
  return n;
}

std::int64_t mixed_radix_index(const std::vector<int>& values, const std::vector<int>& sizes) {
  std::int64_t idx = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) idx = idx * sizes[i] + values[i];
  return idx;
}

std::vector<int> mixed_radix_decode(std::int64_t index, const std::vector<int>& sizes) {
  std::vector<int> v(sizes.size());
  for (std::size_t i = sizes.size(); i-- > 0;) {
    v[i] = static_cast<int>(index % sizes[i]);
    index /= sizes[i];
  }
  return v;
}

std::int64_t Kernel::rows() const { return mixed_radix_size(parent_sizes); }
std::int64_t Kernel::cols() const { return mixed_radix_size(output_sizes); }

double Kernel::prob(std::int64_t row, std::int64_t col) const {
  if (deterministic()) return function[row] == col ? 1.0 : 0.0;
  return table[row * cols() + col];
}

double Kernel::normalization_error() const {
  const std::int64_t r = rows();
  const std::int64_t c = cols();
  double worst = 0.0;
  if (deterministic()) {
    if (static_cast<std::int64_t>(function.size()) != r) return 1.0;
    for (auto v : function)
      if (v < 0 || v >= c) worst = 1.0;
    return worst;
  }
  if (static_cast<std::int64_t>(table.size()) != r * c) return 1.0;
  for (std::int64_t i = 0; i < r; ++i) {
    std::span<const double> row(table.data() + i * c, static_cast<std::size_t>(c));
    for (double v : row)
      if (v < 0.0 || !std::isfinite(v)) worst = std::max(worst, 1.0);
    worst = std::max(worst, std::abs(simd::sum(row) - 1.0));
  }
  return worst;
}

struct FactoredJoint::Cache {
  std::mutex mu;
  std::map<std::pair<int, std::vector<int>>, double> entropies;
};

FactoredJoint::FactoredJoint() : cache_(std::make_shared<Cache>()) {}

void FactoredJoint::invalidate() { cache_ = std::make_shared<Cache>(); }

FactoredJoint FactoredJoint::from_table(const std::vector<Factor>& factors, const std::vector<double>& table) {
  FactoredJoint j;
  std::vector<int> sizes;
  Component comp;
  for (const auto& f : factors) {
    if (f.is_symbolic()) throw Error(ErrorKind::ShapeMismatch, "symbolic factor " + f.id + " in a pmf table");
    if (j.index_.count(f.id)) throw Error(ErrorKind::ShapeMismatch, "duplicate factor " + f.id);
    j.index_[f.id] = static_cast<int>(j.concrete_.size());
    comp.vars.push_back(static_cast<int>(j.concrete_.size()));
    j.concrete_.push_back(f);
    j.comp_of_.push_back(0);
    sizes.push_back(f.alphabet);
  }
  const std::int64_t n = mixed_radix_size(sizes);
  if (static_cast<std::int64_t>(table.size()) != n)
    throw Error(ErrorKind::ShapeMismatch, "table has " + std::to_string(table.size()) + " cells, expected " +
                                              std::to_string(n));
  for (std::int64_t i = 0; i < n; ++i) {
    if (table[i] < 0.0 || !std::isfinite(table[i])) throw Error(ErrorKind::DomainError, "negative pmf entry");
    if (table[i] == 0.0) continue;
    auto v = mixed_radix_decode(i, sizes);
    for (int x : v) comp.cells.push_back(static_cast<std::uint16_t>(x));
    comp.probs.push_back(table[i]);
  }
  if (!factors.empty()) j.components_.push_back(std::move(comp));
  return j;
}

bool FactoredJoint::has(const FactorId& id) const { return index_.count(id) > 0; }

const Factor& FactoredJoint::factor(const FactorId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorKind::UnknownFactor, id);
  return it->second >= 0 ? concrete_[it->second] : symbolic_[-it->second - 1];
}

int FactoredJoint::concrete_index(const FactorId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorKind::UnknownFactor, id);
  if (it->second < 0) throw Error(ErrorKind::ShapeMismatch, "symbolic factor " + id + " used as concrete");
  return it->second;
}

VarSet FactoredJoint::all_ids() const {
  VarSet v;
  for (const auto& f : concrete_) v.push_back(f.id);
  for (const auto& f : symbolic_) v.push_back(f.id);
  return v;
}

void FactoredJoint::add_symbolic(const Factor& f) {
  if (!f.is_symbolic()) throw Error(ErrorKind::ShapeMismatch, f.id + " is not symbolic");
  if (index_.count(f.id)) throw Error(ErrorKind::ShapeMismatch, "duplicate factor " + f.id);
  for (const auto& g : symbolic_)
    if (g.source == f.source && (g.multiplier != f.multiplier || g.rate_symbol != f.rate_symbol))
      throw Error(ErrorKind::ShapeMismatch, "views of source " + f.source + " disagree on rate");
  index_[f.id] = -static_cast<int>(symbolic_.size()) - 1;
  symbolic_.push_back(f);
  invalidate();
}

void FactoredJoint::add_independent(const Factor& f, const std::vector<double>& pmf) {
  Kernel k;
  k.outputs = {f.id};
  k.output_sizes = {f.alphabet};
  k.table = pmf;
  apply_kernel(k, {f});
}

int FactoredJoint::merge_components(const std::vector<int>& comps_in) {
  std::vector<int> comps = comps_in;
  std::sort(comps.begin(), comps.end());
  comps.erase(std::unique(comps.begin(), comps.end()), comps.end());
  if (comps.size() == 1) return comps[0];
  Component merged;
  merged.cells.clear();
  merged.probs = {1.0};
  for (int c : comps) {
    const Component& src = components_[c];
    const std::size_t w_old = merged.vars.size();
    const std::size_t w_src = src.vars.size();
    Component next;
    next.vars = merged.vars;
    next.vars.insert(next.vars.end(), src.vars.begin(), src.vars.end());
    next.cells.reserve(merged.rows() * src.rows() * (w_old + w_src));
    for (std::size_t a = 0; a < merged.rows(); ++a)
      for (std::size_t b = 0; b < src.rows(); ++b) {
        next.cells.insert(next.cells.end(), merged.cells.begin() + a * w_old, merged.cells.begin() + (a + 1) * w_old);
        next.cells.insert(next.cells.end(), src.cells.begin() + b * w_src, src.cells.begin() + (b + 1) * w_src);
        next.probs.push_back(merged.probs[a] * src.probs[b]);
      }
    merged = std::move(next);
  }
  std::vector<Component> kept;
  for (int c = 0; c < static_cast<int>(components_.size()); ++c)
    if (!std::binary_search(comps.begin(), comps.end(), c)) kept.push_back(std::move(components_[c]));
  kept.push_back(std::move(merged));
  components_ = std::move(kept);
  for (int c = 0; c < static_cast<int>(components_.size()); ++c)
    for (int v : components_[c].vars) comp_of_[v] = c;
  return static_cast<int>(components_.size()) - 1;
}

void FactoredJoint::apply_kernel(const Kernel& k, const std::vector<Factor>& output_factors) {
  if (k.outputs.size() != output_factors.size() || k.outputs.size() != k.output_sizes.size() ||
      k.parents.size() != k.parent_sizes.size())
    throw Error(ErrorKind::ShapeMismatch, "kernel output/parent lists inconsistent");
  for (std::size_t i = 0; i < k.outputs.size(); ++i) {
    const Factor& f = output_factors[i];
    if (f.id != k.outputs[i] || f.is_symbolic() || f.alphabet != k.output_sizes[i])
      throw Error(ErrorKind::ShapeMismatch, "kernel output " + k.outputs[i] + " does not match its factor");
    if (index_.count(f.id)) throw Error(ErrorKind::ShapeMismatch, "factor " + f.id + " generated twice");
  }
  std::vector<int> parent_idx;
  for (std::size_t i = 0; i < k.parents.size(); ++i) {
    auto it = index_.find(k.parents[i]);
    if (it == index_.end()) throw Error(ErrorKind::ShapeMismatch, "kernel conditions on absent factor " + k.parents[i]);
    if (it->second < 0) throw Error(ErrorKind::ShapeMismatch, "kernel conditions on symbolic factor " + k.parents[i]);
    if (concrete_[it->second].alphabet != k.parent_sizes[i])
      throw Error(ErrorKind::ShapeMismatch, "kernel parent " + k.parents[i] + " alphabet mismatch");
    parent_idx.push_back(it->second);
  }
  const std::int64_t cols = k.cols();
  const std::int64_t rows = k.rows();
  if (k.deterministic() ? static_cast<std::int64_t>(k.function.size()) != rows
                        : static_cast<std::int64_t>(k.table.size()) != rows * cols)
    throw Error(ErrorKind::ShapeMismatch, "kernel table size mismatch");

  int c;
  if (parent_idx.empty()) {
    components_.push_back(Component{});
    c = static_cast<int>(components_.size()) - 1;
    components_[c].probs = {1.0};
  } else {
    std::vector<int> comps;
    for (int p : parent_idx) comps.push_back(comp_of_[p]);
    c = merge_components(comps);
  }
  Component& src = components_[c];
  std::vector<int> pos;
  for (int p : parent_idx)
    pos.push_back(static_cast<int>(std::find(src.vars.begin(), src.vars.end(), p) - src.vars.begin()));
  const std::size_t w = src.vars.size();
  const std::size_t wo = k.outputs.size();
  Component next;
  next.vars = src.vars;
  for (const auto& f : output_factors) {
    index_[f.id] = static_cast<int>(concrete_.size());
    next.vars.push_back(static_cast<int>(concrete_.size()));
    concrete_.push_back(f);
    comp_of_.push_back(c);
  }
  std::vector<int> pv(pos.size());
  for (std::size_t r = 0; r < src.rows(); ++r) {
    for (std::size_t i = 0; i < pos.size(); ++i) pv[i] = src.cells[r * w + pos[i]];
    const std::int64_t row = mixed_radix_index(pv, k.parent_sizes);
    auto emit = [&](std::int64_t col, double q) {
      next.cells.insert(next.cells.end(), src.cells.begin() + r * w, src.cells.begin() + (r + 1) * w);
      auto ov = mixed_radix_decode(col, k.output_sizes);
      for (std::size_t i = 0; i < wo; ++i) next.cells.push_back(static_cast<std::uint16_t>(ov[i]));
      next.probs.push_back(src.probs[r] * q);
    };
    if (k.deterministic()) {
      emit(k.function[row], 1.0);
    } else {
      for (std::int64_t col = 0; col < cols; ++col) {
        double q = k.table[row * cols + col];
        if (q > 0.0) emit(col, q);
      }
    }
  }
  components_[c] = std::move(next);
  invalidate();
}

double FactoredJoint::total_mass() const {
  double m = 1.0;
  for (const auto& c : components_) m *= simd::sum(c.probs);
  return m;
}

double FactoredJoint::probability(const std::map<FactorId, int>& assignment) const {
  double p = 1.0;
  for (const auto& comp : components_) {
    const std::size_t w = comp.vars.size();
    double pc = 0.0;
    for (std::size_t r = 0; r < comp.rows(); ++r) {
      bool match = true;
      for (std::size_t i = 0; i < w && match; ++i) {
        auto it = assignment.find(concrete_[comp.vars[i]].id);
        if (it != assignment.end() && it->second != comp.cells[r * w + i]) match = false;
      }
      if (match) pc += comp.probs[r];
    }
    p *= pc;
  }
  return p;
}

std::vector<std::pair<std::vector<int>, double>> FactoredJoint::support(const VarSet& order) const {
  std::vector<int> idx;
  for (const auto& id : order) idx.push_back(concrete_index(id));
  // project every involved component, then take the cartesian product
  std::vector<int> comps;
  for (int i : idx) comps.push_back(comp_of_[i]);
  std::sort(comps.begin(), comps.end());
  comps.erase(std::unique(comps.begin(), comps.end()), comps.end());
  std::vector<std::pair<std::vector<int>, double>> acc = {{std::vector<int>(order.size(), 0), 1.0}};
  for (int c : comps) {
    const Component& comp = components_[c];
    const std::size_t w = comp.vars.size();
    std::vector<std::pair<std::size_t, std::size_t>> sel;  // (slot in order, position in comp)
    for (std::size_t s = 0; s < idx.size(); ++s)
      if (comp_of_[idx[s]] == c)
        sel.push_back({s, static_cast<std::size_t>(std::find(comp.vars.begin(), comp.vars.end(), idx[s]) -
                                                   comp.vars.begin())});
    std::map<std::vector<int>, double> proj;
    std::vector<int> key(sel.size());
    for (std::size_t r = 0; r < comp.rows(); ++r) {
      for (std::size_t i = 0; i < sel.size(); ++i) key[i] = comp.cells[r * w + sel[i].second];
      proj[key] += comp.probs[r];
    }
    std::vector<std::pair<std::vector<int>, double>> next;
    for (const auto& [vals, p] : acc)
      for (const auto& [k, q] : proj) {
        auto v = vals;
        for (std::size_t i = 0; i < sel.size(); ++i) v[sel[i].first] = k[i];
        next.push_back({std::move(v), p * q});
      }
    acc = std::move(next);
  }
  std::sort(acc.begin(), acc.end());
  return acc;
}

std::vector<double> FactoredJoint::table(const VarSet& order) const {
  std::vector<int> sizes;
  for (const auto& id : order) sizes.push_back(concrete_[concrete_index(id)].alphabet);
  const std::int64_t n = mixed_radix_size(sizes);
  if (n > (std::int64_t{1} << 26)) throw Error(ErrorKind::TooLarge, "dense table too large");
  std::vector<double> t(static_cast<std::size_t>(n), 0.0);
  for (const auto& [vals, p] : support(order)) t[mixed_radix_index(vals, sizes)] += p;
  return t;
}

FactoredJoint FactoredJoint::marginalize(const VarSet& keep) const {
  std::vector<bool> keep_c(concrete_.size(), false);
  std::vector<bool> keep_s(symbolic_.size(), false);
  for (const auto& id : keep) {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorKind::UnknownFactor, id);
    if (it->second >= 0)
      keep_c[it->second] = true;
    else
      keep_s[-it->second - 1] = true;
  }
  FactoredJoint out;
  std::vector<int> remap(concrete_.size(), -1);
  for (std::size_t i = 0; i < concrete_.size(); ++i)
    if (keep_c[i]) {
      remap[i] = static_cast<int>(out.concrete_.size());
      out.index_[concrete_[i].id] = remap[i];
      out.concrete_.push_back(concrete_[i]);
      out.comp_of_.push_back(-1);
    }
  for (std::size_t i = 0; i < symbolic_.size(); ++i)
    if (keep_s[i]) {
      out.index_[symbolic_[i].id] = -static_cast<int>(out.symbolic_.size()) - 1;
      out.symbolic_.push_back(symbolic_[i]);
    }
  for (const auto& comp : components_) {
    std::vector<std::size_t> pos;
    Component nc;
    for (std::size_t i = 0; i < comp.vars.size(); ++i)
      if (keep_c[comp.vars[i]]) {
        pos.push_back(i);
        nc.vars.push_back(remap[comp.vars[i]]);
      }
    if (pos.empty()) continue;
    const std::size_t w = comp.vars.size();
    std::map<std::vector<std::uint16_t>, double> proj;
    std::vector<std::uint16_t> key(pos.size());
    for (std::size_t r = 0; r < comp.rows(); ++r) {
      for (std::size_t i = 0; i < pos.size(); ++i) key[i] = comp.cells[r * w + pos[i]];
      proj[key] += comp.probs[r];
    }
    for (const auto& [k, p] : proj) {
      nc.cells.insert(nc.cells.end(), k.begin(), k.end());
      nc.probs.push_back(p);
    }
    const int ci = static_cast<int>(out.components_.size());
    for (int v : nc.vars) out.comp_of_[v] = ci;
    out.components_.push_back(std::move(nc));
  }
  return out;
}

double FactoredJoint::component_entropy(int c, const std::vector<int>& positions) const {
  auto key = std::make_pair(c, positions);
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->entropies.find(key);
    if (it != cache_->entropies.end()) return it->second;
  }
  const Component& comp = components_[c];
  const std::size_t w = comp.vars.size();
  double h;
  if (positions.size() == w) {
    h = simd::entropy_bits(comp.probs);
  } else {
    std::vector<int> sizes;
    for (int p : positions) sizes.push_back(concrete_[comp.vars[p]].alphabet);
    std::int64_t cells = 1;
    bool dense = true;
    for (int s : sizes) {
      if (cells > (std::int64_t{1} << 22) / s) {
        dense = false;
        break;
      }
      cells *= s;
    }
    std::vector<double> agg;
    if (dense) {
      agg.assign(static_cast<std::size_t>(cells), 0.0);
      for (std::size_t r = 0; r < comp.rows(); ++r) {
        std::int64_t idx = 0;
        for (std::size_t i = 0; i < positions.size(); ++i) idx = idx * sizes[i] + comp.cells[r * w + positions[i]];
        agg[idx] += comp.probs[r];
      }
    } else {
      std::vector<std::pair<std::vector<std::uint16_t>, double>> rows;
      rows.reserve(comp.rows());
      for (std::size_t r = 0; r < comp.rows(); ++r) {
        std::vector<std::uint16_t> k(positions.size());
        for (std::size_t i = 0; i < positions.size(); ++i) k[i] = comp.cells[r * w + positions[i]];
        rows.push_back({std::move(k), comp.probs[r]});
      }
      std::sort(rows.begin(), rows.end());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == 0 || rows[i].first != rows[i - 1].first)
          agg.push_back(rows[i].second);
        else
          agg.back() += rows[i].second;
      }
    }
    h = simd::entropy_bits(agg);
  }
  std::lock_guard<std::mutex> lock(cache_->mu);
  cache_->entropies.emplace(std::move(key), h);
  return h;
}

AffineRateExpr FactoredJoint::entropy(const VarSet& s) const {
  std::map<int, std::vector<int>> by_comp;
  std::map<FactorId, const Factor*> sources;
  for (const auto& id : s) {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorKind::UnknownFactor, id);
    if (it->second >= 0) {
      int c = comp_of_[it->second];
      const auto& vars = components_[c].vars;
      by_comp[c].push_back(static_cast<int>(std::find(vars.begin(), vars.end(), it->second) - vars.begin()));
    } else {
      const Factor& f = symbolic_[-it->second - 1];
      sources[f.source] = &f;
    }
  }
  AffineRateExpr h;
  for (auto& [c, pos] : by_comp) {
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    h.constant += component_entropy(c, pos);
  }
  for (const auto& [src, f] : sources) h.add_symbol(f->rate_symbol, f->multiplier);
  return h;
}

AffineRateExpr FactoredJoint::cond_mutual_info(const VarSet& a, const VarSet& b, const VarSet& c) const {
  AffineRateExpr r = entropy(set_union(a, c));
  r += entropy(set_union(b, c));
  r -= entropy(set_union({a, b, c}));
  r -= entropy(c);
  return r;
}

VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet out = a;
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VarSet set_union(std::initializer_list<VarSet> sets) {
  VarSet out;
  for (const auto& s : sets) out.insert(out.end(), s.begin(), s.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

AffineRateExpr entropy(const FactoredJoint& joint, const VarSet& s) { return joint.entropy(s); }

AffineRateExpr cond_mutual_info(const FactoredJoint& joint, const VarSet& a, const VarSet& b, const VarSet& c) {
  return joint.cond_mutual_info(a, b, c);
}

FactoredJoint marginalize(const FactoredJoint& joint, const VarSet& keep) { return joint.marginalize(keep); }

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::DomainError, "binary_entropy argument outside [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

}  // namespace unirate
