#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "unirate/inequality.hpp"

namespace unirate {

// tolerance for constant-only rows left by elimination: 0 < c with c >= -kClosureTol holds in closure
inline constexpr double kClosureTol = 1e-9;

struct FmStage {
  std::string variable;
  InequalitySystem before;  // working form (all rows Sense::Less) just before eliminating `variable`
};

struct FmResult {
  InequalitySystem projected;  // working form over the surviving lhs variables
  std::vector<FmStage> stages;
};

// every row rewritten as lhs < rhs (or <=)
InequalitySystem working_form(const InequalitySystem& sys);

FmResult fourier_motzkin_stages(const InequalitySystem& sys, const std::vector<std::string>& eliminate);
RateRegion fourier_motzkin(const InequalitySystem& sys, const std::vector<std::string>& eliminate);

// moves rhs symbols to the lhs and scales rows to coprime integer coefficients;
// rows whose coefficients are all negative are shown with ">"
RateRegion to_region(const InequalitySystem& projected);

// Substitutes `bounds` into the region, then drops rows implied by a single other row.
// With nonnegative_symbols the implication may use R >= 0.
RateRegion prune_numeric(const RateRegion& region, const std::map<std::string, double>& bounds,
                         bool nonnegative_symbols = true);

// Extends a point satisfying `projected` to the eliminated variables, stage by stage,
// drawing each coordinate inside its feasible interval.
std::optional<std::map<std::string, double>> lift(const FmResult& fm, std::map<std::string, double> point,
                                                  std::mt19937_64& rng);

}  // namespace unirate
