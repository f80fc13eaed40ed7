#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "unirate/affine.hpp"
#include "unirate/rational.hpp"

namespace unirate {

using FactorId = std::string;
using VarSet = std::vector<FactorId>;

enum class FactorKind { Concrete, Symbolic };

struct Factor {
  FactorId id;
  FactorKind kind = FactorKind::Concrete;
  int alphabet = 1;         // Concrete
  std::string rate_symbol;  // Symbolic
  Rational multiplier{1};   // Symbolic: H = multiplier * rate_symbol
  FactorId source;          // Symbolic: shared by all views of one message / bit-pipe

  static Factor concrete(FactorId id, int alphabet);
  static Factor symbolic(FactorId id, std::string symbol, Rational multiplier = 1, FactorId source = {});
  bool is_symbolic() const { return kind == FactorKind::Symbolic; }
  // two symbolic factors are views of the same source
  bool same_source(const Factor& o) const { return is_symbolic() && o.is_symbolic() && source == o.source; }
  friend bool operator==(const Factor& a, const Factor& b) = default;
};

// Conditional table p(outputs | parents) over concrete factors. Rows enumerate parent
// assignments in mixed radix (first parent most significant), columns the outputs alike.
// A deterministic kernel stores one output column per row instead of a dense table.
struct Kernel {
  std::vector<FactorId> parents;
  std::vector<int> parent_sizes;
  std::vector<FactorId> outputs;
  std::vector<int> output_sizes;
  std::vector<double> table;
  std::vector<std::int64_t> function;

  std::int64_t rows() const;
  std::int64_t cols() const;
  bool deterministic() const { return !function.empty(); }
  double prob(std::int64_t row, std::int64_t col) const;
  // largest |row sum - 1|
  double normalization_error() const;
  friend bool operator==(const Kernel& a, const Kernel& b) = default;
};

std::int64_t mixed_radix_size(const std::vector<int>& sizes);
std::int64_t mixed_radix_index(const std::vector<int>& values, const std::vector<int>& sizes);
std::vector<int> mixed_radix_decode(std::int64_t index, const std::vector<int>& sizes);

// Joint pmf over concrete factors, held as a product of independent components with sparse
// support, plus symbolic-rate factors that are independent of everything by construction.
class FactoredJoint {
 public:
  struct Component {
    std::vector<int> vars;             // indices into concrete()
    std::vector<std::uint16_t> cells;  // rows x vars.size()
    std::vector<double> probs;
    std::size_t rows() const { return probs.size(); }
  };

  FactoredJoint();

  // dense table over `factors` in mixed radix order (first factor most significant)
  static FactoredJoint from_table(const std::vector<Factor>& factors, const std::vector<double>& table);

  const std::vector<Factor>& concrete() const { return concrete_; }
  const std::vector<Factor>& symbolic() const { return symbolic_; }
  const std::vector<Component>& components() const { return components_; }
  bool has(const FactorId& id) const;
  const Factor& factor(const FactorId& id) const;
  VarSet all_ids() const;

  // builders; only used while a joint is being assembled
  void add_symbolic(const Factor& f);
  void add_independent(const Factor& f, const std::vector<double>& pmf);
  void apply_kernel(const Kernel& k, const std::vector<Factor>& output_factors);

  double total_mass() const;
  double probability(const std::map<FactorId, int>& assignment) const;
  // dense marginal table over the given concrete factors
  std::vector<double> table(const VarSet& order) const;
  // support of the marginal over `order`: (values, probability) pairs, sorted by values
  std::vector<std::pair<std::vector<int>, double>> support(const VarSet& order) const;

  FactoredJoint marginalize(const VarSet& keep) const;
  AffineRateExpr entropy(const VarSet& s) const;
  AffineRateExpr cond_mutual_info(const VarSet& a, const VarSet& b, const VarSet& c = {}) const;

 private:
  struct Cache;
  int concrete_index(const FactorId& id) const;
  int merge_components(const std::vector<int>& comps);
  double component_entropy(int comp, const std::vector<int>& local_positions) const;
  void invalidate();

  std::vector<Factor> concrete_;
  std::vector<Factor> symbolic_;
  std::map<FactorId, int> index_;  // concrete: >= 0, symbolic: -(i+1)
  std::vector<int> comp_of_;       // per concrete factor
  std::vector<Component> components_;
  std::shared_ptr<Cache> cache_;
};

VarSet set_union(const VarSet& a, const VarSet& b);
VarSet set_union(std::initializer_list<VarSet> sets);

AffineRateExpr entropy(const FactoredJoint& joint, const VarSet& s);
AffineRateExpr cond_mutual_info(const FactoredJoint& joint, const VarSet& a, const VarSet& b,
                                const VarSet& c = {});
FactoredJoint marginalize(const FactoredJoint& joint, const VarSet& keep);
double binary_entropy(double p);

}  // namespace unirate
