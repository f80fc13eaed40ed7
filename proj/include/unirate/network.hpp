#pragma once

#include <string>
#include <utility>
#include <vector>

#include "unirate/joint.hpp"

namespace unirate {

// Node k of an acyclic network. `y` lists the components of Y_k: either fresh factors
// (concrete ones produced by `kernels`, symbolic ones standing for messages or bit-pipe
// outputs) or ids of factors introduced at earlier nodes (lossless links).
struct AdmnNode {
  std::string name;
  VarSet y;
  VarSet x;
  std::vector<Kernel> kernels;
  // 1-based index of an earlier node whose whole state (observation, decoded and covered
  // codewords, inputs) is embedded in this node's observation; 0 for none. Used by unfold.
  int carry_from = 0;
  friend bool operator==(const AdmnNode&, const AdmnNode&) = default;
};

// p* restricted to `vars` (concrete x/y factors); factors outside `vars` are unconstrained.
// `equalities` pin an x factor to another factor (X_2 = M and the like).
struct Target {
  VarSet vars;
  std::vector<double> table = {1.0};
  std::vector<std::pair<FactorId, FactorId>> equalities;
  friend bool operator==(const Target&, const Target&) = default;
};

struct Admn {
  std::vector<Factor> factors;  // every x/y factor
  std::vector<AdmnNode> nodes;
  Target target;

  int size() const { return static_cast<int>(nodes.size()); }
  const AdmnNode& node(int k) const;  // 1-based
  bool has_factor(const FactorId& id) const;
  const Factor& factor(const FactorId& id) const;
  // 1-based node at which `id` first appears, 0 if nowhere
  int introduced_at(const FactorId& id) const;
  // fresh y factors of node k (those introduced there, in order)
  VarSet fresh_y(int k) const;
  // observation of node k as seen without coding parameters: y plus carried x/y, recursively
  VarSet observation(int k) const;
  friend bool operator==(const Admn&, const Admn&) = default;
};

struct Dmn {
  // alphabet sizes per node; 0 means the node has no input (resp. output)
  std::vector<int> x_alphabets;
  std::vector<int> y_alphabets;
  // p(y present | x present), rows over inputs and columns over outputs in node order
  std::vector<double> channel;
  int source = 1;
  std::vector<int> destinations;
  std::string rate_symbol = "R";
  friend bool operator==(const Dmn&, const Dmn&) = default;
};

struct CommonPart {
  int components = 0;
  std::vector<int> a_map;  // value -> component, -1 for values outside the support
  std::vector<int> b_map;
};

// lists every violated invariant; empty means valid
std::vector<std::string> validate(const Admn& admn);

// product of a node's kernels as one kernel p(fresh y | external parents)
Kernel combined_kernel(const Admn& admn, int k);

Admn insert_virtual_node(const Admn& admn, int v, const std::vector<Factor>& y_factors, const Kernel& kernel);

// joint over (A,B) as a na x nb row-major table
CommonPart common_part(const std::vector<double>& joint, int na, int nb);

// carrier_alphabet sizes the virtual node's input X, delivered to nodes v1+1 and v2+1
Admn split_common_part(const Admn& admn, int v1, int v2, int carrier_alphabet);

Admn unfold(const Dmn& dmn, int blocks, int factor_cap = 4096);

// names used by unfold: node (k,b) and its factors
std::string unfold_node_name(int k, int b);
FactorId unfold_x(int k, int b);
FactorId unfold_y(int k, int b);
int unfold_index(int n_nodes, int k, int b);

}  // namespace unirate
