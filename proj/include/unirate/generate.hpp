#pragma once

#include <cstdint>

#include "unirate/coding.hpp"
#include "unirate/inequality.hpp"

namespace unirate {

enum class Mode { Theorem1, Corollary1 };

struct GenerateOptions {
  std::int64_t subset_cap = std::int64_t{1} << 20;  // per node
  bool check_preconditions = true;
  std::string system_tag;  // overrides the origin system name when set
};

// index-level sets of node k: Gamma_D, Gamma_B \ Gamma_D, Gamma_W \ Gamma_D
IndexSet bar_D(int k, const CodingParams& w);
IndexSet bar_B(int k, const CodingParams& w);
IndexSet bar_W(int k, const CodingParams& w);

// codebooks j in D_k u B_k with Gamma_j meeting s
IndexSet bar_S(const IndexSet& s, int k, const CodingParams& w);
// codebooks j in W_k with Gamma_j inside t u Gamma_{D_k}
IndexSet bar_T(const IndexSet& t, int k, const CodingParams& w);

// sum_{j in set} I(U_j; U_{set[j] u others}, Y | U_{A_j})
AffineRateExpr chain_information(const FactoredJoint& joint, const CodingParams& w, const IndexSet& set,
                                 const IndexSet& others, const VarSet& y);

InequalitySystem generate_system(const CodingParams& w, const Admn& admn, Mode mode, const GenerateOptions& opts = {});
// same, on a joint/observations already induced (lets callers reuse one induction)
InequalitySystem generate_system(const CodingParams& w, const Induced& induced, Mode mode,
                                 const GenerateOptions& opts = {});

struct RelaxedPair {
  LinearInequality packing;
  LinearInequality covering;
};

// s, t are index-level (as in the packing/covering bounds); s_prime is a codebook set inside
// bar_S(s) and t_prime a codebook set in W_k containing bar_T(t)
RelaxedPair lemma1_relaxed_bounds(const CodingParams& w, const Induced& induced, int k, const IndexSet& s,
                                  const IndexSet& s_prime, const IndexSet& t, const IndexSet& t_prime);

}  // namespace unirate
