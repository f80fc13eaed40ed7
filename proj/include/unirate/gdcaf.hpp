#pragma once

#include <vector>

#include "unirate/coding.hpp"
#include "unirate/network.hpp"

namespace unirate {

// Relay parameters for a single-source single-destination layered network. Relays are the
// nodes 2..N-1; u[k-2], yhat[k-2] list the factors of U_k and Yhat_k (empty lists allowed).
struct GdcafScheme {
  std::vector<Factor> aux;       // U/Yhat factors that are not network factors
  VarSet source_factors;         // X_1 factors plus every U factor, in table order
  std::vector<double> source_table;  // p(x_1, u_2, ..., u_{N-1})
  std::vector<VarSet> u;
  std::vector<VarSet> yhat;
  std::vector<Kernel> compressors;  // p(yhat_k | y_k, u_k)
  std::vector<SymbolMap> maps;      // relay x factors not already in the source table
};

struct GdcafTerm {
  IndexSet s, t;  // relay nodes
  double value = 0.0;
};

struct GdcafResult {
  double rate = 0.0;
  bool feasible = false;
  std::vector<GdcafTerm> terms;          // one per S subset T
  std::vector<std::string> side_violations;  // S' for which the side condition fails
  GdcafTerm argmin;
};

FactoredJoint gdcaf_joint(const Admn& net, const GdcafScheme& scheme);
GdcafResult gdcaf_rate(const Admn& net, const GdcafScheme& scheme);

// min over cuts S (source in S, destination not) of max_p I(X_S; Y_{S^c} | X_{S^c}).
// Each cut maximum is a Blahut-Arimoto capacity at the best fixed x_{S^c}; the result upper
// bounds the cut-set value.
struct CutValue {
  std::vector<int> cut;  // nodes on the source side
  double capacity = 0.0;
};
struct CutSetBound {
  double value = 0.0;
  std::vector<CutValue> cuts;
};
CutSetBound cutset_upper_bound(const Dmn& dmn, int destination, double tol = 1e-13);

// channel capacity of a row-stochastic matrix, Blahut-Arimoto with the standard upper/lower gap
double channel_capacity(const std::vector<double>& w, int inputs, int outputs, double tol = 1e-13);

}  // namespace unirate
