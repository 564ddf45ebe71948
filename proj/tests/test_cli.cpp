#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "devkit/cli.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
  json error() const { return json::parse(err); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "devkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = devkit::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(DEVKIT_TEST_DATA) + "/" + name; }

std::string write_temp(const std::string& name, const json& j) {
  auto p = std::filesystem::temp_directory_path() / ("devkit_test_" + name);
  std::ofstream(p) << j.dump();
  return p.string();
}

json z8_module(int a) {
  return {{"module", {{"ring", {{"variant", "prime_power"}, {"p", 2}, {"N", 3}}}, {"exponents", {"inf"}}}},
          {"monoid", {{"generators", {{{"label", "phi"}, {"endo", "identity"}}}}}},
          {"actions", {{"phi", {{a}}}}},
          {"convention", "A-phi"}};
}

}  // namespace

TEST_CASE("check-etale: verdicts and exit codes") {
  auto r = run({"check-etale", data("etale_f4.json")});
  CHECK(r.code == 0);
  CHECK(r.report()["verdict"] == true);
  CHECK(r.report()["result"]["inverses"]["phi"] == json{{{1, 1}}});
  CHECK(r.report()["seed"] == 0);

  auto f = run({"check-etale", "--input", write_temp("z8_two.json", z8_module(2))});
  CHECK(f.code == 1);
  CHECK(f.report()["verdict"] == false);
  CHECK(f.report()["result"]["failure"] == "cokernel");
}

TEST_CASE("devissage reports inf@N") {
  auto r = run({"devissage", data("presentation_z8.json")});
  CHECK(r.code == 0);
  CHECK(r.report()["result"]["exponents"] == json{"inf@3"});
}

TEST_CASE("schema and usage errors exit 3; library errors exit 2") {
  auto s = run({"check-etale", data("bad_schema.json")});
  CHECK(s.code == 3);
  CHECK(s.error()["error"]["kind"] == "SchemaError");
  CHECK(s.out.empty());

  CHECK(run({"no-such-command"}).code == 3);
  CHECK(run({"check-etale", "/nonexistent/file.json"}).code == 3);

  json wrapped{{"version", 2}, {"payload", z8_module(3)}};
  CHECK(run({"check-etale", write_temp("v2.json", wrapped)}).code == 3);

  // Internal hom needs an étale left factor.
  json pair{{"left", z8_module(2)}, {"right", z8_module(3)}};
  auto h = run({"hom", write_temp("hom.json", pair)});
  CHECK(h.code == 2);
  CHECK(h.error()["error"]["kind"] == "NotEtale");
}

TEST_CASE("fontaine subcommands") {
  auto rt = run({"fontaine", "roundtrip", data("rep_z4.json"), "--budget", "12"});
  CHECK(rt.code == 0);
  CHECK(rt.report()["result"]["iso"] == true);
  CHECK(rt.report()["command"] == "fontaine roundtrip");

  auto v2d = run({"fontaine", "v2d", data("nonsplit_z4.json"), "--target-field", "q=4"});
  CHECK(v2d.code == 0);
  CHECK(v2d.report()["result"]["module"]["module"]["exponents"] == json{"inf@2", 1});

  auto d2v = run({"fontaine", "d2v", data("etale_f4.json")});
  CHECK(d2v.code == 0);
  CHECK(d2v.report()["result"]["representation"]["frob"] == json{{{1}}});

  auto tight = run({"fontaine", "v2d", data("rep_z4.json"), "--budget", "1"});
  CHECK(tight.code == 2);
  CHECK(tight.error()["error"]["kind"] == "ExtensionBudgetExceeded");

  CHECK(run({"fontaine", "v2d", data("rep_z4.json"), "--target-field", "q=6"}).code == 3);
}

TEST_CASE("descend writes its certificate") {
  auto cert = (std::filesystem::temp_directory_path() / "devkit_test_cert.json").string();
  std::filesystem::remove(cert);
  auto r = run({"descend", data("descend_gr42.json"), "--subgens", "phi", "--strict", "--emit-certificate", cert});
  CHECK(r.code == 0);
  std::ifstream in(cert);
  REQUIRE(in.good());
  json c = json::parse(in);
  CHECK(c["levels"].size() == 2);
  CHECK(c["agrees_with_direct"] == true);
}

TEST_CASE("coinduce and descend-coinduced chain") {
  auto c = run({"coinduce", data("coinduce_f4.json"), "--bijection"});
  CHECK(c.code == 0);
  CHECK(c.report()["result"]["bijection"]["bijective"] == true);
  auto file = write_temp("coinduced.json", c.report()["result"]["coinduced"]);
  auto d = run({"descend-coinduced", file});
  CHECK(d.code == 0);
  CHECK(d.report()["result"]["witness_iso"] == true);
  CHECK(d.report()["result"]["module"]["actions"]["g1"] == json{{{0, 1}}});
}

TEST_CASE("caps from the environment") {
  ::setenv("DEVKIT_CAPS", "enumerate=0", 1);
  auto r = run({"coinduce", data("coinduce_f4.json"), "--bijection"});
  CHECK(r.code == 2);
  CHECK(r.error()["error"]["kind"] == "SizeGuard");
  ::setenv("DEVKIT_CAPS", "bogus", 1);
  CHECK(run({"check-etale", data("etale_f4.json")}).code == 3);
  ::unsetenv("DEVKIT_CAPS");
}

TEST_CASE("reports are deterministic; timing is opt-in") {
  auto a = run({"selftest", "--tier", "small", "--seed", "3"});
  auto b = run({"selftest", "--tier", "small", "--seed", "3"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK_FALSE(a.report().contains("timing_ms"));
  auto t = run({"check-etale", data("etale_f4.json"), "--timing"});
  CHECK(t.report().contains("timing_ms"));
  auto e = run({"selftest", "--tier", "empty"});
  CHECK(e.code == 0);
  CHECK(e.report()["result"]["cases"] == 0);
}
