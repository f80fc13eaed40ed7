#pragma once

#include <string>
#include <vector>

#include "unirate/coding.hpp"
#include "unirate/duality.hpp"
#include "unirate/fm.hpp"
#include "unirate/gaussian.hpp"
#include "unirate/gdcaf.hpp"
#include "unirate/generate.hpp"
#include "unirate/network.hpp"

namespace unirate {

enum class EntryKind { Region, Unfold, Gdcaf, Dual, Gaussian };

const char* entry_kind_name(EntryKind k);

struct CatalogInstance {
  std::string name;
  std::string summary;
  EntryKind kind = EntryKind::Region;

  // Region, Unfold, Dual (original problem), Gdcaf (network only)
  Admn network;
  CodingParams omega;
  Mode mode = Mode::Corollary1;
  std::vector<std::string> rates;  // external rate symbols kept by elimination

  // Unfold: network == unfold(dmn, blocks); Gdcaf: dmn drives the cut-set bound
  Dmn dmn;
  int blocks = 0;

  GdcafScheme gdcaf;
  DualParams dual;

  Agn agn;
  GaussianParams gaussian;
  std::vector<QuadraticForm> objective;
};

struct CheckLine {
  std::string label;
  std::string value;
  bool pass = true;
};

struct Verdict {
  std::string name;
  bool pass = true;
  std::vector<CheckLine> checks;
  std::vector<std::string> mismatches;  // labels of failed checks with detail
  // "label = value PASS" per check
  std::string text() const;
};

std::vector<std::string> catalog_names();
CatalogInstance build(const std::string& name);
Verdict run(const std::string& name);
Verdict run(const CatalogInstance& inst);

// generate -> eliminate the omega rates -> integer rows -> optional pairwise pruning
struct RegionResult {
  InequalitySystem system;
  RateRegion region;
};
RegionResult derive_region(const Admn& admn, const CodingParams& w, Mode mode, bool prune = true,
                           const GenerateOptions& opts = {});
std::vector<std::string> omega_rates(const CodingParams& w);

// Variants used by the acceptance checks
CatalogInstance nnc_instance(int blocks);
// min over the two cuts of the closed-form noisy network coding rate on the nnc pmf
double nnc_closed_form();
// smallest constant c among rows "R < c" of an eliminated region; +inf when none
double rate_upper_bound(const RateRegion& region, const std::string& symbol);

CatalogInstance correlated_sources_instance(bool scaled_adder);

double diamond_epsilon();
std::vector<GdcafScheme> diamond_ddf_grid();
GdcafScheme diamond_hybrid_scheme();

}  // namespace unirate
