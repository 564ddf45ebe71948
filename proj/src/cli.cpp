#include "devkit/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "devkit/selftest.hpp"
#include "devkit/serialize.hpp"

namespace devkit {

namespace {

using nlohmann::json;

struct Caps {
  std::size_t solve = 1u << 14;
  std::size_t search = 1u << 16;
  std::size_t enumerate = 1u << 16;
};

// DEVKIT_CAPS="solve=N,search=N,enumerate=N"
Caps caps_from_env() {
  Caps c;
  const char* env = std::getenv("DEVKIT_CAPS");
  if (!env) return c;
  std::stringstream ss(env);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::SchemaError, "DEVKIT_CAPS entries look like key=value", {{"entry", item}});
    const std::string key = item.substr(0, eq);
    std::size_t v = 0;
    try {
      v = std::stoull(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(ErrorKind::SchemaError, "DEVKIT_CAPS value is not a number", {{"entry", item}});
    }
    if (key == "solve") c.solve = v;
    else if (key == "search") c.search = v;
    else if (key == "enumerate") c.enumerate = v;
    else throw Error(ErrorKind::SchemaError, "unknown DEVKIT_CAPS key", {{"key", key}});
  }
  return c;
}

struct Options {
  std::string input;
  std::uint64_t seed = 0;
  int budget = 12;
  std::string tier = "small";
  std::string certificate;
  std::string target;
  std::vector<std::string> subgens;
  bool strict = false;
  bool timing = false;
  bool tensor_check = false;
  bool bijection = false;
};

struct Outcome {
  bool verdict = true;
  json result;
  std::optional<json> certificate;
};

// A problem file is {"version", "payload", "options"}; a bare payload is
// accepted too. File options fill in flags that were not given.
json load_payload(Options& o, const CLI::App& sub) {
  if (o.input.empty()) throw Error(ErrorKind::SchemaError, "no input file given");
  std::ifstream in(o.input);
  if (!in) throw Error(ErrorKind::SchemaError, "cannot open input file", {{"path", o.input}});
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, std::string("input is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("payload")) return doc;
  io::require_keys(doc, {"version", "payload", "options"}, "problem file");
  if (doc.contains("version") && doc["version"] != 1)
    throw Error(ErrorKind::SchemaError, "unsupported problem file version", {{"version", doc["version"]}});
  if (doc.contains("options")) {
    const json& op = doc["options"];
    io::require_keys(op, {"seed", "budget", "tier", "subgens", "target_field", "strict"}, "options");
    try {
      if (op.contains("seed") && !sub.count("--seed")) o.seed = op["seed"].get<std::uint64_t>();
      if (op.contains("budget") && !sub.count("--budget")) o.budget = op["budget"].get<int>();
      if (op.contains("tier") && !sub.count("--tier")) o.tier = op["tier"].get<std::string>();
      if (op.contains("subgens") && !sub.count("--subgens")) o.subgens = op["subgens"].get<std::vector<std::string>>();
      if (op.contains("target_field") && !sub.count("--target-field")) o.target = op["target_field"].get<std::string>();
      if (op.contains("strict") && !sub.count("--strict")) o.strict = op["strict"].get<bool>();
    } catch (const json::exception& e) {
      throw Error(ErrorKind::SchemaError, std::string("bad option value: ") + e.what());
    }
  }
  return doc["payload"];
}

std::vector<std::string> subgens_or_all(const Options& o, const SModule& d) {
  return o.subgens.empty() ? d.monoid.labels() : o.subgens;
}

// "q=4", "4" -> GR(p^N, d) with p^d = q.
RingPtr target_ring(const std::string& spec, const RingPtr& coeffs) {
  std::string s = spec;
  if (s.rfind("q=", 0) == 0) s = s.substr(2);
  Int q = 0;
  try {
    q = std::stoll(s);
  } catch (const std::exception&) {
    throw Error(ErrorKind::SchemaError, "target field must look like q=4", {{"target", spec}});
  }
  int d = 0;
  Int acc = 1;
  while (acc < q) {
    acc *= coeffs->p();
    ++d;
  }
  if (acc != q || d == 0)
    throw Error(ErrorKind::SchemaError, "target field size is not a power of p", {{"q", q}, {"p", coeffs->p()}});
  if (coeffs->precision() == 1) return d == 1 ? coeffs : Ring::finite_field(coeffs->p(), d);
  return d == 1 ? coeffs : Ring::galois_ring(coeffs->p(), coeffs->precision(), d);
}

json etale_json(const EtaleVerdict& v) {
  json inv = json::object();
  for (const auto& [l, m] : v.inverses) inv[l] = io::to_json(m);
  json out{{"etale", v.etale}, {"inverses", inv}};
  if (!v.etale) {
    out["failing_generator"] = v.failing_generator;
    out["failure"] = v.failure;
    if (v.witness) out["witness"] = io::to_json(*v.witness);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands

Outcome cmd_check_etale(const json& p) {
  SModule d = io::smodule_from_json(p);
  EtaleVerdict v = check_etale(d);
  return {v.etale, etale_json(v), std::nullopt};
}

Outcome cmd_devissage(const json& p) {
  CanonicalModule m;
  json extra = json::object();
  if (p.contains("relations")) {
    SmithDecomposition sd = smith_decompose(io::presentation_from_json(p));
    m = sd.module;
    extra["projection"] = io::to_json(sd.proj);
    extra["lift"] = io::to_json(sd.lift);
  } else {
    m = io::module_from_json(p);
  }
  json r{{"module", io::to_json(m)},
         {"exponents", io::exponents_to_json(m.ring, m.exponents)},
         {"mu", mu_devissage(m)},
         {"tau", tau_devissage(m)},
         {"torsion_bound", torsion_bound(m)}};
  r.update(extra);
  return {true, r, std::nullopt};
}

Outcome cmd_pair(const json& p, bool hom) {
  io::require_keys(p, {"left", "right"}, "pair payload");
  const json& l = p.at("left");
  const json& r = p.at("right");
  if (l.contains("monoid")) {
    SModule a = io::smodule_from_json(l), b = io::smodule_from_json(r);
    SModule out = hom ? internal_hom(a, b) : tensor_smod(a, b);
    return {true, {{"module", io::to_json(out)}, {"etale", check_etale(out).etale}}, std::nullopt};
  }
  CanonicalModule a = io::module_from_json(l), b = io::module_from_json(r);
  CanonicalModule out = hom ? hom_modules(a, b) : tensor_modules(a, b);
  return {true, {{"module", io::to_json(out)}}, std::nullopt};
}

Outcome cmd_invariants(const json& p, const Options& o, const Caps& c) {
  SModule d = io::smodule_from_json(p);
  InvariantsResult inv = invariants(d, subgens_or_all(o, d), c.solve);
  ComparisonResult cmp = comparison(d, inv);
  json r = io::to_json(inv);
  r["comparison_iso"] = cmp.iso;
  r["comparison"] = io::to_json(cmp.map.matrix);
  return {cmp.iso, r, r};
}

Outcome cmd_descend(const json& p, const Options& o, const Caps& c) {
  SModule d = io::smodule_from_json(p);
  DescentResult res = devissage_descent(d, subgens_or_all(o, d), o.strict, true, c.solve);
  const bool iso = !res.certificate.levels.empty() && res.certificate.levels.back().comparison_iso;
  json r = io::to_json(res.inv);
  r["comparison_iso"] = iso;
  r["agrees_with_direct"] = res.certificate.agrees_with_direct;
  json cert = io::to_json(res.certificate);
  r["certificate"] = cert;
  return {iso && res.certificate.agrees_with_direct, r, cert};
}

json solution_json(const TowerSolution& s) {
  return {{"level", s.level},
          {"tower_ring", io::to_json(s.tower)},
          {"basis", io::to_json(s.inv.basis)},
          {"ranks_by_level", s.tried_ranks},
          {"certificate", io::to_json(s.certificate)}};
}

TowerBudget budget_from(const Options& o, const Caps& c) {
  if (o.budget < 1) throw Error(ErrorKind::InvalidArgument, "budget must be positive", {{"budget", o.budget}});
  return {o.budget, c.solve, c.search};
}

Outcome cmd_fontaine(const std::string& mode, const json& p, const Options& o, const Caps& c) {
  const TowerBudget b = budget_from(o, c);
  if (mode == "d2v") {
    FontaineResult f = module_to_rep(io::smodule_from_json(p), b);
    json sol = solution_json(f.solution);
    return {true, {{"representation", io::to_json(f.rep)}, {"solution", sol}}, sol};
  }
  if (mode == "v2d") {
    GaloisRep v = io::rep_from_json(p);
    RingPtr t = target_ring(o.target.empty() ? std::to_string(v.ring()->p()) : o.target, v.ring());
    FontaineResult f = rep_to_module(v, t, b);
    json sol = solution_json(f.solution);
    return {true, {{"module", io::to_json(f.module)}, {"solution", sol}}, sol};
  }
  RoundtripReport rr;
  if (p.contains("frob")) {
    GaloisRep v = io::rep_from_json(p);
    rr = roundtrip_rep(v, target_ring(o.target.empty() ? std::to_string(v.ring()->p()) : o.target, v.ring()), b);
  } else {
    rr = roundtrip_module(io::smodule_from_json(p), b);
  }
  json r{{"direction", rr.direction},
         {"iso", rr.ok},
         {"forward_level", rr.forward_level},
         {"backward_level", rr.backward_level},
         {"representation", io::to_json(rr.rep)},
         {"module", io::to_json(rr.module)}};
  if (rr.iso) r["iso_matrix"] = io::to_json(*rr.iso);
  return {rr.ok, r, r};
}

Outcome cmd_coinduce(const json& p, const Options& o, const Caps& c) {
  io::require_keys(p, {"module", "inclusion"}, "coinduce payload");
  SModule d = io::smodule_from_json(p.at("module"));
  SubmonoidData data = io::inclusion_from_json(p.at("inclusion"));
  if (o.tensor_check) {
    TensorCoinductionVerdict v = check_tensor_coinduction(d, data, o.seed);
    json maps = json::array();
    for (const auto& m : v.component_maps) maps.push_back(io::to_json(m));
    return {v.iso && v.equivariant,
            {{"iso", v.iso}, {"equivariant", v.equivariant}, {"component_maps", maps}, {"component_iso", v.component_iso}},
            std::nullopt};
  }
  CoinducedModule cm = coinduce_module(d, data);
  json r{{"coinduced", io::to_json(cm)}};
  bool verdict = true;
  if (o.bijection) {
    BijectionVerdict bv = invariants_bijection(d, data, c.enumerate);
    r["bijection"] = {{"bijective", bv.bijective}, {"coinduced_fixed", bv.coinduced_fixed}, {"fixed", bv.fixed}};
    verdict = bv.bijective;
  }
  return {verdict, r, std::nullopt};
}

Outcome cmd_descend_coinduced(const json& p, const Options& o) {
  Descended ds = descend_from_coinduced(io::coinduced_from_json(p), o.seed);
  json w = json::array();
  for (const auto& m : ds.witness) w.push_back(io::to_json(m));
  return {ds.witness_iso && ds.witness_equivariant,
          {{"module", io::to_json(ds.module)},
           {"witness", w},
           {"witness_iso", ds.witness_iso},
           {"witness_equivariant", ds.witness_equivariant}},
          std::nullopt};
}

json error_json(const Error& e) {
  return {{"error", {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}, {"detail", e.detail()}}}};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modules with semilinear monoid actions over finite coefficient rings", "devkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.footer(
      "Exit codes: 0 verdict true, 1 verdict false, 2 library error, 3 schema or usage error.\n"
      "DEVKIT_CAPS=solve=N,search=N,enumerate=N overrides the size guards.");
  Options o;

  auto common = [&](CLI::App* s) {
    s->add_option("--input,input", o.input, "Problem file (JSON)");
    s->add_option("--seed", o.seed, "Seed for randomized checks");
    s->add_flag("--timing", o.timing, "Add wall-clock timing to the report (not deterministic)");
  };
  auto* etale = app.add_subcommand("check-etale", "Is every linearization an isomorphism?");
  auto* dev = app.add_subcommand("devissage", "Canonical decomposition of a presented module");
  auto* tens = app.add_subcommand("tensor", "Tensor product of two modules");
  auto* hom = app.add_subcommand("hom", "Internal hom of two modules");
  auto* inv = app.add_subcommand("invariants", "Fixed points over the fixed subring, with the comparison map");
  auto* desc = app.add_subcommand("descend", "Level-by-level fixed-point solve with a certificate");
  auto* font = app.add_subcommand("fontaine", "phi-modules over finite fields and Galois representations");
  auto* coind = app.add_subcommand("coinduce", "Coinduction along a submonoid inclusion");
  auto* dcoind = app.add_subcommand("descend-coinduced", "Recover a module from its coinduction");
  auto* self = app.add_subcommand("selftest", "Run the property suites");
  for (auto* s : {etale, dev, tens, hom, inv, desc, coind, dcoind, self}) common(s);
  for (auto* s : {inv, desc}) {
    s->add_option("--subgens", o.subgens, "Generators to take fixed points under (default: all)")->delimiter(',');
    s->add_option("--emit-certificate", o.certificate, "Write the certificate JSON to FILE");
  }
  desc->add_flag("--strict", o.strict, "Fail on the first basis vector without a fixed lift");
  coind->add_flag("--tensor-check", o.tensor_check, "Treat the module as an ambient module and check tensor coinduction");
  coind->add_flag("--bijection", o.bijection, "Check evaluation at the identity on fixed points");
  self->add_option("--tier", o.tier, "empty, small or medium")->check(CLI::IsMember({"empty", "small", "medium"}));

  font->require_subcommand(1);
  std::string mode;
  for (const char* m : {"d2v", "v2d", "roundtrip"}) {
    auto* s = font->add_subcommand(m, std::string(m) == "d2v"   ? "phi-module to representation"
                                      : std::string(m) == "v2d" ? "representation to phi-module"
                                                                : "Round trip with an explicit isomorphism");
    common(s);
    s->add_option("--budget", o.budget, "Largest tower level m (rings GR(p^N, d*m))");
    s->add_option("--target-field", o.target, "Residue field of the phi-module side, e.g. q=4");
    s->add_option("--emit-certificate", o.certificate, "Write the tower certificate JSON to FILE");
    s->callback([&mode, m] { mode = m; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 3;
  }

  CLI::App* sub = app.get_subcommands().front();
  std::string command = sub->get_name();
  CLI::App* leaf = sub;
  if (sub == font) {
    leaf = font->get_subcommands().front();
    command += " " + leaf->get_name();
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    const Caps caps = caps_from_env();
    Outcome res;
    if (sub == self) {
      SelftestReport r = run_selftest(o.seed, o.tier);
      res = {r.ok(), r.to_json(), std::nullopt};
    } else {
      const json payload = load_payload(o, *leaf);
      if (sub == etale) res = cmd_check_etale(payload);
      else if (sub == dev) res = cmd_devissage(payload);
      else if (sub == tens) res = cmd_pair(payload, false);
      else if (sub == hom) res = cmd_pair(payload, true);
      else if (sub == inv) res = cmd_invariants(payload, o, caps);
      else if (sub == desc) res = cmd_descend(payload, o, caps);
      else if (sub == font) res = cmd_fontaine(mode, payload, o, caps);
      else if (sub == coind) res = cmd_coinduce(payload, o, caps);
      else res = cmd_descend_coinduced(payload, o);
    }
    json report{{"command", command}, {"verdict", res.verdict}, {"result", res.result},
                {"seed", o.seed}, {"version", kVersion}};
    if (o.timing)
      report["timing_ms"] =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (!o.certificate.empty()) {
      std::ofstream cf(o.certificate);
      if (!cf) throw Error(ErrorKind::SchemaError, "cannot write certificate file", {{"path", o.certificate}});
      cf << (res.certificate ? *res.certificate : json::object()).dump(2) << "\n";
    }
    out << report.dump(2) << "\n";
    return res.verdict ? 0 : 1;
  } catch (const Error& e) {
    err << error_json(e).dump(2) << "\n";
    return e.kind() == ErrorKind::SchemaError ? 3 : 2;
  } catch (const json::exception& e) {
    err << error_json(Error(ErrorKind::SchemaError, e.what())).dump(2) << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << json{{"error", {{"kind", "Internal"}, {"message", e.what()}}}}.dump(2) << "\n";
    return 2;
  }
}

}  // namespace devkit
