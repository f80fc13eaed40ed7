#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "unirate/catalog.hpp"
#include "unirate/error.hpp"
#include "unirate/spec_io.hpp"

using namespace unirate;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kInvalid = 1, kUsage = 2;
constexpr int kPrec = 6;

void print_rows(std::ostream& os, const InequalitySystem& sys) {
  if (sys.infeasible) os << "  infeasible\n";
  for (const auto& r : sys.rows) os << "  " << r.str(kPrec) << "\n";
}

std::string fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", kPrec, x);
  return buf;
}

void add_issues(std::vector<std::string>& out, const std::string& prefix, const std::vector<std::string>& issues) {
  for (const auto& s : issues) out.push_back(prefix + s);
}

void check_problem(std::vector<std::string>& out, const std::string& prefix, const Admn& net, const CodingParams& w) {
  const auto n = validate(net);
  add_issues(out, prefix + "network: ", n);
  const auto p = validate_params(w, net);
  add_issues(out, prefix, p);
  if (!n.empty() || !p.empty()) return;
  const TargetMatch tm = check_target_match(w, net);
  if (!tm.matched(1e-9))
    out.push_back(prefix + "target: induced marginal deviates by " + std::to_string(tm.max_deviation));
  add_issues(out, prefix + "target: ", tm.mismatches);
}

Admn network_of(const CatalogInstance& c) {
  if (c.kind == EntryKind::Unfold && c.network.nodes.empty()) return unfold(c.dmn, c.blocks > 0 ? c.blocks : 1);
  return c.network;
}

std::vector<std::string> validate_doc(const SpecDocument& doc) {
  const CatalogInstance& c = doc.instance;
  std::vector<std::string> out;
  switch (c.kind) {
    case EntryKind::Region:
    case EntryKind::Unfold:
      check_problem(out, "", network_of(c), c.omega);
      break;
    case EntryKind::Gdcaf:
      add_issues(out, "network: ", validate(c.network));
      if (out.empty()) gdcaf_joint(c.network, c.gdcaf);
      break;
    case EntryKind::Dual:
      check_problem(out, "original: ", c.dual.original.network, c.dual.original.omega);
      for (const auto& p : c.dual.duals)
        check_problem(out, std::string(dual_type_name(p.type)) + ": ", p.network, p.omega);
      break;
    case EntryKind::Gaussian:
      GaussianModel(c.agn, c.gaussian);
      break;
  }
  return out;
}

int cmd_validate(const std::string& path) {
  const SpecDocument doc = load_spec(path);
  const auto issues = validate_doc(doc);
  for (const auto& s : issues) std::cout << s << "\n";
  if (!issues.empty()) return kInvalid;
  std::cout << "valid\n";
  return kOk;
}

int cmd_region(const std::string& path, const std::optional<std::string>& mode_flag, bool no_prune, bool as_json) {
  const SpecDocument doc = load_spec(path);
  const CatalogInstance& c = doc.instance;
  if (c.kind != EntryKind::Region && c.kind != EntryKind::Unfold) {
    std::cerr << "region needs a region or unfold spec\n";
    return kUsage;
  }
  Mode mode = doc.options.mode;
  if (mode_flag) mode = *mode_flag == "theorem1" ? Mode::Theorem1 : Mode::Corollary1;
  const Admn net = network_of(c);
  std::vector<std::string> issues;
  check_problem(issues, "", net, c.omega);
  if (!issues.empty()) {
    for (const auto& s : issues) std::cerr << s << "\n";
    return kInvalid;
  }
  GenerateOptions opts;
  opts.subset_cap = doc.options.subset_cap;
  RegionResult rr = derive_region(net, c.omega, mode, doc.options.prune && !no_prune, opts);
  sort_canonical(rr.system.rows);
  const char* mname = mode == Mode::Theorem1 ? "theorem1" : "corollary1";
  if (as_json) {
    std::cout << json{{"mode", mname}, {"system", system_json(rr.system)}, {"region", system_json(rr.region)}}.dump(2)
              << "\n";
    return kOk;
  }
  std::cout << "system (" << mname << ", " << rr.system.rows.size() << " rows)\n";
  print_rows(std::cout, rr.system);
  std::cout << "region\n";
  print_rows(std::cout, rr.region);
  return kOk;
}

int cmd_gdcaf(const std::string& path, bool as_json) {
  const SpecDocument doc = load_spec(path);
  const CatalogInstance& c = doc.instance;
  if (c.kind != EntryKind::Gdcaf) {
    std::cerr << "gdcaf needs a gdcaf spec\n";
    return kUsage;
  }
  const auto issues = validate(c.network);
  if (!issues.empty()) {
    for (const auto& s : issues) std::cerr << "network: " << s << "\n";
    return kInvalid;
  }
  const GdcafResult r = gdcaf_rate(c.network, c.gdcaf);
  std::optional<CutSetBound> cs;
  if (!(c.dmn == Dmn{}))
    cs = cutset_upper_bound(c.dmn, c.dmn.destinations.empty() ? c.network.size() : c.dmn.destinations.front());
  if (as_json) {
    json j{{"rate", r.rate},
           {"feasible", r.feasible},
           {"argmin", {{"s", r.argmin.s}, {"t", r.argmin.t}}},
           {"side_violations", r.side_violations}};
    if (cs) j["cutset"] = cs->value;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "rate = " << fixed(r.rate) << "\n";
    std::cout << "feasible = " << (r.feasible ? "true" : "false") << "\n";
    std::cout << "argmin S = " << json(r.argmin.s).dump() << " T = " << json(r.argmin.t).dump() << "\n";
    for (const auto& s : r.side_violations) std::cout << "side condition fails: " << s << "\n";
    if (cs) std::cout << "cut-set = " << fixed(cs->value) << "\n";
  }
  return r.feasible ? kOk : kInvalid;
}

int cmd_dual(const std::string& path, const std::string& type, bool as_json) {
  const SpecDocument doc = load_spec(path);
  const CatalogInstance& c = doc.instance;
  if (c.kind != EntryKind::Dual) {
    std::cerr << "dual needs a dual spec\n";
    return kUsage;
  }
  const DualType want = type == "I" ? DualType::TypeI : type == "II" ? DualType::TypeII : DualType::TypeIII;
  DualParams d;
  d.original = c.dual.original;
  for (const auto& p : c.dual.duals)
    if (p.type == want) d.duals.push_back(p);
  if (d.duals.empty()) {
    std::cerr << "spec has no type " << type << " dual\n";
    return kInvalid;
  }
  std::vector<std::string> issues;
  check_problem(issues, "original: ", d.original.network, d.original.omega);
  check_problem(issues, std::string(dual_type_name(want)) + ": ", d.duals[0].network, d.duals[0].omega);
  if (!issues.empty()) {
    for (const auto& s : issues) std::cerr << s << "\n";
    return kInvalid;
  }
  const DualSystems ds = dual_systems(d);
  const SwapCheck sc = verify_swap_structure(d, ds).front();
  std::vector<RateRegion> regions;
  for (std::size_t i = 0; i < ds.systems.size(); ++i) {
    const CodingParams& w = i == 0 ? d.original.omega : d.duals[0].omega;
    regions.push_back(prune_numeric(fourier_motzkin(ds.systems[i], omega_rates(w)), {}, true));
  }
  if (as_json) {
    json j = json::array();
    for (std::size_t i = 0; i < ds.systems.size(); ++i)
      j.push_back({{"type", dual_type_name(ds.types[i])},
                   {"system", system_json(ds.systems[i])},
                   {"region", system_json(regions[i])}});
    std::cout << json{{"problems", j}, {"swap_check", sc.pass}, {"issues", sc.issues}}.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < ds.systems.size(); ++i) {
      std::cout << dual_type_name(ds.types[i]) << " system (" << ds.systems[i].rows.size() << " rows)\n";
      print_rows(std::cout, ds.systems[i]);
      std::cout << dual_type_name(ds.types[i]) << " region\n";
      print_rows(std::cout, regions[i]);
    }
    std::cout << "swap structure = " << (sc.pass ? "ok" : "broken") << "\n";
    for (const auto& s : sc.issues) std::cout << "  " << s << "\n";
  }
  return sc.pass ? kOk : kInvalid;
}

int cmd_gaussian(const std::string& path, bool as_json) {
  const SpecDocument doc = load_spec(path);
  const CatalogInstance& c = doc.instance;
  if (c.kind != EntryKind::Gaussian) {
    std::cerr << "gaussian needs a gaussian spec\n";
    return kUsage;
  }
  const GaussianModel m(c.agn, c.gaussian);
  GenerateOptions opts;
  opts.subset_cap = doc.options.subset_cap;
  InequalitySystem sys = gaussian_system(m, opts);
  sort_canonical(sys.rows);
  const RateRegion region = prune_numeric(fourier_motzkin(sys, omega_rates(c.gaussian.skeleton)), {}, true);
  const ObjectiveCheck oc = m.check_objective(c.objective);
  if (as_json) {
    json obj = json::array();
    for (std::size_t i = 0; i < oc.names.size(); ++i)
      obj.push_back({{"name", oc.names[i]}, {"value", oc.values[i]}, {"target", oc.targets[i]}});
    std::cout << json{{"system", system_json(sys)}, {"region", system_json(region)}, {"objective", obj},
                      {"objective_pass", oc.pass}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "system (" << sys.rows.size() << " rows)\n";
    print_rows(std::cout, sys);
    std::cout << "region\n";
    print_rows(std::cout, region);
    for (std::size_t i = 0; i < oc.names.size(); ++i)
      std::cout << oc.names[i] << " = " << fixed(oc.values[i]) << " (target " << fixed(oc.targets[i]) << ")\n";
    std::cout << "objective = " << (oc.pass ? "met" : "violated") << "\n";
  }
  return oc.pass ? kOk : kInvalid;
}

int cmd_unfold(const std::string& path, int blocks, bool as_json) {
  const SpecDocument doc = load_spec(path);
  if (doc.instance.dmn == Dmn{}) {
    std::cerr << "unfold needs a spec with a dmn section\n";
    return kUsage;
  }
  SpecDocument out;
  out.instance.kind = EntryKind::Unfold;
  out.instance.name = doc.instance.name;
  out.instance.dmn = doc.instance.dmn;
  out.instance.blocks = blocks;
  out.instance.network = unfold(doc.instance.dmn, blocks);
  out.instance.rates = {doc.instance.dmn.rate_symbol};
  if (as_json) {
    std::cout << serialize(out);
    return kOk;
  }
  const Admn& a = out.instance.network;
  std::cout << a.size() << " nodes, " << a.factors.size() << " factors\n";
  for (int k = 1; k <= a.size(); ++k) {
    const AdmnNode& n = a.node(k);
    std::cout << k << " " << n.name << " y = " << json(n.y).dump() << " x = " << json(n.x).dump();
    if (n.carry_from) std::cout << " carries " << a.node(n.carry_from).name;
    std::cout << "\n";
  }
  return kOk;
}

int cmd_catalog_list() {
  for (const auto& n : catalog_names()) {
    const CatalogInstance c = build(n);
    std::cout << n << "  [" << entry_kind_name(c.kind) << "]  " << c.summary << "\n";
  }
  return kOk;
}

int cmd_catalog_run(const std::string& name) {
  const Verdict v = run(name);
  std::cout << v.text();
  return v.pass ? kOk : kInvalid;
}

int cmd_catalog_export(const std::string& name) {
  std::cout << serialize(export_entry(name));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Achievable rate regions for acyclic discrete networks"};
  app.require_subcommand(1);

  std::string spec, type, entry;
  std::optional<std::string> mode;
  bool no_prune = false, as_json = false;
  int blocks = 1;

  auto* validate_cmd = app.add_subcommand("validate", "check a spec against every admissibility constraint");
  validate_cmd->add_option("spec", spec, "spec file")->required();

  auto* region_cmd = app.add_subcommand("region", "generate the inequality system and eliminate the internal rates");
  region_cmd->add_option("spec", spec, "spec file")->required();
  region_cmd->add_option("--mode", mode, "theorem1 or corollary1")->check(CLI::IsMember({"theorem1", "corollary1"}));
  region_cmd->add_flag("--no-prune", no_prune, "keep rows implied by a single other row");
  region_cmd->add_flag("--json", as_json, "machine-readable output");

  auto* gdcaf_cmd = app.add_subcommand("gdcaf", "GDCAF rate of a layered relay network");
  gdcaf_cmd->add_option("spec", spec, "spec file")->required();
  gdcaf_cmd->add_flag("--json", as_json, "machine-readable output");

  auto* dual_cmd = app.add_subcommand("dual", "systems of the original problem and one dual");
  dual_cmd->add_option("spec", spec, "spec file")->required();
  dual_cmd->add_option("--type", type, "I, II or III")->required()->check(CLI::IsMember({"I", "II", "III"}));
  dual_cmd->add_flag("--json", as_json, "machine-readable output");

  auto* gauss_cmd = app.add_subcommand("gaussian", "bounds of a Gaussian scheme on an additive Gaussian network");
  gauss_cmd->add_option("spec", spec, "spec file")->required();
  gauss_cmd->add_flag("--json", as_json, "machine-readable output");

  auto* unfold_cmd = app.add_subcommand("unfold", "unfold the dmn of a spec over B blocks");
  unfold_cmd->add_option("spec", spec, "spec file")->required();
  unfold_cmd->add_option("--blocks", blocks, "number of blocks")->required()->check(CLI::PositiveNumber);
  unfold_cmd->add_flag("--json", as_json, "print the unfolded network as a spec");

  auto* catalog_cmd = app.add_subcommand("catalog", "built-in problem instances");
  catalog_cmd->require_subcommand(1);
  auto* list_cmd = catalog_cmd->add_subcommand("list", "list entries");
  auto* run_cmd = catalog_cmd->add_subcommand("run", "run an entry against its expectations");
  run_cmd->add_option("name", entry, "entry name")->required();
  auto* export_cmd = catalog_cmd->add_subcommand("export", "print an entry as a spec");
  export_cmd->add_option("name", entry, "entry name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(spec);
    if (*region_cmd) return cmd_region(spec, mode, no_prune, as_json);
    if (*gdcaf_cmd) return cmd_gdcaf(spec, as_json);
    if (*dual_cmd) return cmd_dual(spec, type, as_json);
    if (*gauss_cmd) return cmd_gaussian(spec, as_json);
    if (*unfold_cmd) return cmd_unfold(spec, blocks, as_json);
    if (*list_cmd) return cmd_catalog_list();
    if (*run_cmd) return cmd_catalog_run(entry);
    if (*export_cmd) return cmd_catalog_export(entry);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::UnknownEntry ? kUsage : kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kUsage;
}
