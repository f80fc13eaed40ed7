#include <doctest.h>

#include <string>

#include "unirate/catalog.hpp"
#include "unirate/error.hpp"
#include "unirate/spec_io.hpp"

using namespace unirate;
using nlohmann::json;

namespace {

ErrorKind kind_of(const std::string& text, std::string* what = nullptr) {
  try {
    parse_spec(text);
  } catch (const Error& e) {
    if (what) *what = e.what();
    return e.kind();
  }
  FAIL("spec accepted: " << text.substr(0, 80));
  return ErrorKind::Overflow;
}

}  // namespace

TEST_CASE("every catalog entry survives a round trip") {
  for (const auto& name : catalog_names()) {
    INFO(name);
    const SpecDocument doc = export_entry(name);
    const std::string text = serialize(doc);
    const SpecDocument back = parse_spec(text);
    CHECK(back == doc);
    CHECK(same_instance(back.instance, build(name)));
    // serialization is a fixed point
    CHECK(serialize(back) == text);
  }
}

TEST_CASE("round trip keeps run options") {
  SpecDocument doc = export_entry("wiretap-system");
  doc.options.mode = Mode::Theorem1;
  doc.options.subset_cap = 64;
  doc.options.prune = false;
  const SpecDocument back = parse_spec(serialize(doc));
  CHECK(back.options == doc.options);
}

TEST_CASE("malformed json is a parse error") {
  CHECK(kind_of("{\"omega\": ") == ErrorKind::ParseError);
  CHECK(kind_of("not json") == ErrorKind::ParseError);
}

TEST_CASE("schema errors name the json path") {
  json j = to_json(export_entry("mac-binary-adder"));
  SUBCASE("gamma index above mu") {
    j["omega"]["codebooks"][0]["gamma"] = {1, 5};
    std::string what;
    CHECK(kind_of(j.dump(), &what) == ErrorKind::SchemaError);
    CHECK(what.find("/omega/codebooks/0/gamma") != std::string::npos);
  }
  SUBCASE("wrong type") {
    j["omega"]["mu"] = "two";
    std::string what;
    CHECK(kind_of(j.dump(), &what) == ErrorKind::SchemaError);
    CHECK(what.find("/omega/mu") != std::string::npos);
  }
  SUBCASE("missing field") {
    j["omega"]["codebooks"][1].erase("gamma");
    std::string what;
    CHECK(kind_of(j.dump(), &what) == ErrorKind::SchemaError);
    CHECK(what.find("/omega/codebooks/1") != std::string::npos);
  }
  SUBCASE("top level must be an object") {
    CHECK(kind_of("[1, 2]") == ErrorKind::SchemaError);
  }
}

TEST_CASE("unknown catalog entry on export") {
  try {
    export_entry("nope");
    FAIL("unknown entry exported");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownEntry);
  }
}
