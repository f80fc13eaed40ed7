#pragma once

#include <map>
#include <string>
#include <vector>

#include "unirate/affine.hpp"
#include "unirate/coding.hpp"

namespace unirate {

enum class Sense { Less, Greater };

struct Origin {
  std::string system;  // theorem1, corollary1, lemma1, original, typeI, ...
  int node = 0;
  std::string kind;    // packing or covering
  IndexSet subset;     // S_k or T_k at index level
  VarSet observation;  // factors playing Y_k
  friend bool operator==(const Origin&, const Origin&) = default;
};

// sum lhs[v] * v  (sense)  rhs
struct LinearInequality {
  std::map<std::string, Rational> lhs;
  Sense sense = Sense::Less;
  AffineRateExpr rhs;
  bool strict = true;
  Origin origin;

  std::string str(int precision = 4) const;
  friend bool operator==(const LinearInequality&, const LinearInequality&) = default;
};

struct InequalitySystem {
  std::vector<LinearInequality> rows;
  std::vector<std::string> variables;  // internal variables in play
  bool infeasible = false;             // set when elimination produced 0 < negative constant

  // closure membership: every row holds within tol at the given values
  bool satisfied(const std::map<std::string, double>& values, double tol = 1e-9) const;
  std::string str(int precision = 4) const;
  friend bool operator==(const InequalitySystem&, const InequalitySystem&) = default;
};

// inequalities over external rate symbols only, rhs constant
using RateRegion = InequalitySystem;

std::string format_linear(const std::map<std::string, Rational>& terms);
// evaluates lhs - rhs; row holds when this is < 0 (Less) or > 0 (Greater)
double slack(const LinearInequality& row, const std::map<std::string, double>& values);
// canonical ordering: node, kind, subset, lhs, text
void sort_canonical(std::vector<LinearInequality>& rows);

}  // namespace unirate
