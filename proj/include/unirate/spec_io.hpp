#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "unirate/catalog.hpp"

namespace unirate {

struct SpecOptions {
  Mode mode = Mode::Corollary1;
  std::int64_t subset_cap = std::int64_t{1} << 20;
  bool prune = true;
  double tolerance = 1e-9;
  friend bool operator==(const SpecOptions&, const SpecOptions&) = default;
};

// One problem on disk: the sections of a catalog instance plus run options.
struct SpecDocument {
  CatalogInstance instance;
  SpecOptions options;
};

bool operator==(const SpecDocument& a, const SpecDocument& b);
bool same_instance(const CatalogInstance& a, const CatalogInstance& b);

// ParseError for malformed JSON (with line), SchemaError naming the JSON path otherwise
SpecDocument parse_spec(const std::string& text);
SpecDocument load_spec(const std::string& path);

nlohmann::json to_json(const SpecDocument& doc);
std::string serialize(const SpecDocument& doc);

SpecDocument export_entry(const std::string& name);

nlohmann::json row_json(const LinearInequality& row);
nlohmann::json system_json(const InequalitySystem& sys);

}  // namespace unirate
