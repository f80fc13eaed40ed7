#pragma once

#include <map>
#include <string>
#include <vector>

#include "unirate/joint.hpp"
#include "unirate/network.hpp"

namespace unirate {

using IndexSet = std::vector<int>;  // 1-based, kept sorted

struct Codebook {
  VarSet factors;      // components of U_j
  IndexSet gamma;      // Gamma_j, subset of [1:mu]
  IndexSet superpose;  // A_j, subset of [1:nu]
  friend bool operator==(const Codebook&, const Codebook&) = default;
};

// Produces one x factor of a node, either as a lookup table over `inputs` or as a copy
// (`alias`) of an available factor. Symbolic x factors can only be aliases.
struct SymbolMap {
  FactorId output;
  VarSet inputs;
  std::vector<std::int64_t> table;
  FactorId alias;
  friend bool operator==(const SymbolMap&, const SymbolMap&) = default;
};

struct NodeCoding {
  IndexSet decode;     // D_k
  IndexSet nonunique;  // B_k
  IndexSet compress;   // W_k
  std::vector<Kernel> kernels;  // p(u_{W_k} | u_{D_k}, y_k), outputs are auxiliary factors
  std::vector<SymbolMap> maps;
  friend bool operator==(const NodeCoding&, const NodeCoding&) = default;
};

struct CodingParams {
  int mu = 1;
  std::vector<Codebook> codebooks;  // nu entries
  std::vector<Factor> aux;          // auxiliary factors introduced by the scheme
  std::vector<NodeCoding> nodes;    // one per network node
  std::vector<std::string> rate_names;  // optional names of r_1..r_mu

  int nu() const { return static_cast<int>(codebooks.size()); }
  const Codebook& codebook(int j) const;  // 1-based
  std::string rate_name(int i) const;
  // union of Gamma_j over j in s
  IndexSet gamma_of(const IndexSet& s) const;
  VarSet factors_of(const IndexSet& s) const;
  friend bool operator==(const CodingParams&, const CodingParams&) = default;
};

IndexSet index_union(const IndexSet& a, const IndexSet& b);
IndexSet index_minus(const IndexSet& a, const IndexSet& b);
IndexSet index_intersect(const IndexSet& a, const IndexSet& b);
bool index_subset(const IndexSet& a, const IndexSet& b);
// {j in s : j < i}
IndexSet index_below(const IndexSet& s, int i);

// Violations are prefixed with the constraint they break: range, membership, A-1, A-2,
// A-3, shape, factor or kernel. Empty means omega is admissible for the network.
std::vector<std::string> validate_params(const CodingParams& w, const Admn& admn);

bool is_omega_prime(const CodingParams& w);

struct Induced {
  FactoredJoint joint;
  std::vector<VarSet> observation;  // Y_k as seen by node k (own y plus carried state)
};

// sequential product of network kernels, compression kernels and symbol maps
Induced induce(const CodingParams& w, const Admn& admn);
FactoredJoint induced_joint(const CodingParams& w, const Admn& admn);

struct TargetMatch {
  double max_deviation = 0.0;
  std::vector<std::string> mismatches;  // unmet equalities
  bool matched(double tol = 1e-9) const { return max_deviation <= tol && mismatches.empty(); }
};

TargetMatch check_target_match(const CodingParams& w, const Admn& admn);

}  // namespace unirate
