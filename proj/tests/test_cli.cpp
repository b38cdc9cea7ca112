#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tribes/cli.hpp"

using namespace tribes;
using cli::Json;

namespace {

namespace fs = std::filesystem;

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / ("tribes_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

struct Result {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "tribes");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), {}};
}

const char* kExampleA = R"({"bounds": ["1", "1", "1", "1"], "mu": "0.25"})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("analyze") {
  Workspace ws;
  const Result a = run({"analyze", "--input", ws.write("a.json", kExampleA)});
  REQUIRE(a.code == 0);
  const Json doc = a.json();
  CHECK(doc["talagrand_sum"].get<double>() == 4.0);
  CHECK(std::abs(doc["alpha"].get<double>() - 2.613706) < 1e-5);
  CHECK(std::abs(doc["mu_max"].get<double>() - 0.2787094) < 1e-6);
  CHECK(doc["feasible"].get<bool>());

  const Result half = run({"analyze", "--input", ws.write("h.json", R"({"bounds": ["0.5"]})")});
  REQUIRE(half.code == 0);
  CHECK_FALSE(half.json()["feasible"].get<bool>());
  CHECK(half.json()["mu_max"].get<double>() == 0.0);

  CHECK(run({"analyze", "--input", ws.write("z.json", R"({"bounds": ["0"]})")}).code == 3);
  CHECK(run({"analyze", "--input", ws.path("missing.json")}).code == 3);
  CHECK(run({"analyze", "--input", ws.write("n.json", R"({"bounds": "1"})")}).code == 3);
  CHECK(run({"analyze", "--input", ws.write("num.json", R"({"bounds": [1, 0.5]})")}).code == 0);
}

TEST_CASE("construct exit codes and document") {
  Workspace ws;
  const Result a = run({"construct", "--input", ws.write("a.json", kExampleA), "--verify", "exact"});
  REQUIRE(a.code == 0);
  const Json doc = a.json();
  CHECK(doc["tribe_sizes"] == Json::array({2, 2}));
  CHECK(doc["m_star"] == 1);
  CHECK(doc["expectation"]["mantissa"] == "1");
  CHECK(doc["expectation"]["exponent"] == 2);
  CHECK(doc["expectation"]["approx"] == 0.25);
  CHECK(doc["verification"]["mode"] == "exhaustive");
  CHECK(doc["verification"]["passed"] == true);
  CHECK(doc["influences"][2]["strictly_below"] == true);
  std::vector<std::string> keys;
  for (const auto& [key, value] : doc.items()) keys.push_back(key);
  CHECK(keys == std::vector<std::string>{"n", "talagrand_sum", "alpha", "mu", "mu_max",
                                         "guaranteed", "m", "tribe_sizes", "residual", "m_star",
                                         "var_map", "expectation", "influences", "checks",
                                         "verification", "diagnostics"});

  const Result b = run({"construct", "--input",
                        ws.write("b.json", R"({"bounds": ["1","0.4","0.3","0.2","0.1"]})"),
                        "--mu", "0.1"});
  CHECK(b.code == 1);
  CHECK(b.json()["guaranteed"] == false);

  const Result c = run({"construct", "--input", ws.write("c.json", R"({"bounds": ["0.3"], "mu": "0.1"})")});
  CHECK(c.code == 2);
  CHECK(c.json()["error"]["kind"] == "construction-infeasible");
  const Result d = run({"construct", "--input", ws.write("d.json", R"({"bounds": ["1","1"], "mu": "0.5"})")});
  CHECK(d.code == 2);
  CHECK(d.json()["error"]["kind"] == "mu-not-achievable");

  // The flag beats the document.
  const Result flag = run({"construct", "--input", ws.path("a.json"), "--mu", "0.3"});
  CHECK(flag.json()["m_star"] == 2);

  CHECK(run({"construct", "--input", ws.write("e.json", R"({"bounds": ["1"]})")}).code == 3);
  CHECK(run({"construct", "--input", ws.path("a.json"), "--mu", "1"}).code == 3);
  CHECK(run({"construct", "--input", ws.path("a.json"), "--verify", "maybe"}).code == 3);
  CHECK(run({"bogus"}).code == 3);
  CHECK(run({}).code == 3);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("construct falls back to sampling past the cap") {
  Workspace ws;
  std::string bounds = R"({"bounds": [)";
  for (int i = 0; i < 30; ++i) bounds += std::string(i ? "," : "") + "\"1\"";
  bounds += R"(], "mu": "0.97"})";
  const Result r = run({"construct", "--input", ws.write("big.json", bounds), "--samples", "20000"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["verification"]["mode"] == "sampled");
  CHECK(r.json()["verification"]["samples"] == 20000);
}

TEST_CASE("verify round trip and tampering") {
  Workspace ws;
  const std::string report = ws.path("report.json");
  REQUIRE(run({"construct", "--input", ws.write("a.json", kExampleA), "--mu", "0.3",
               "--output", report}).code == 1);
  const Json original = Json::parse(slurp(report));

  const Result ok = run({"verify", "--input", report});
  REQUIRE(ok.code == 0);
  CHECK(ok.json()["verification"]["passed"] == true);

  const cli::ParsedReport parsed = cli::parse_report(original);
  const ConstructionReport fresh = construct(
      BoundSequence::from_decimal_strings(std::vector<std::string>(4, "1")),
      Rational::parse_decimal("0.3"));
  CHECK(parsed.report.function == fresh.function);
  CHECK(parsed.report.expectation == fresh.expectation);
  CHECK(parsed.report.influences == fresh.influences);
  CHECK(cli::consistency_issues(parsed).empty());

  const auto tampered = [&](auto&& edit) {
    Json doc = original;
    edit(doc);
    return run({"verify", "--input", ws.write("t.json", doc.dump())}).code;
  };
  CHECK(tampered([](Json& d) { d["expectation"]["mantissa"] = "1"; d["expectation"]["exponent"] = 1; }) == 4);
  CHECK(tampered([](Json& d) { d["influences"][1]["mantissa"] = "5"; }) == 4);
  CHECK(tampered([](Json& d) { d["influences"][1]["approx"] = 0.4; }) == 4);
  CHECK(tampered([](Json& d) { d["var_map"] = Json::array({2, 1, 3, 4}); }) == 4);
  CHECK(tampered([](Json& d) { d["checks"]["claim1"]["pass"] = false; }) == 4);
  CHECK(tampered([](Json& d) { d["influences"][0]["strictly_below"] = false; }) == 4);
  CHECK(tampered([](Json& d) { d["mu"] = "0.2"; }) == 4);

  CHECK(tampered([](Json& d) { d.erase("tribe_sizes"); }) == 3);
  CHECK(tampered([](Json& d) { d["influences"][0]["mantissa"] = "x1"; }) == 3);
  CHECK(tampered([](Json& d) { d["var_map"] = Json::array({1, 1, 3, 4}); }) == 3);
  CHECK(tampered([](Json& d) { d["m_star"] = 7; }) == 3);
  CHECK(run({"verify", "--input", ws.write("junk.json", "[1, 2")}).code == 3);
}

TEST_CASE("output is byte-identical across runs") {
  Workspace ws;
  const std::string input = ws.write("a.json", kExampleA);
  for (const char* mode : {"exact", "sample"}) {
    const Result first = run({"construct", "--input", input, "--verify", mode, "--seed", "9",
                              "--samples", "5000"});
    const Result second = run({"construct", "--input", input, "--verify", mode, "--seed", "9",
                               "--samples", "5000"});
    CHECK(first.out == second.out);
  }
  run({"construct", "--input", input, "--output", ws.path("r1.json")});
  run({"construct", "--input", input, "--output", ws.path("r2.json")});
  CHECK(slurp(ws.path("r1.json")) == slurp(ws.path("r2.json")));
  const Result v1 = run({"verify", "--input", ws.path("r1.json"), "--seed", "5"});
  const Result v2 = run({"verify", "--input", ws.path("r1.json"), "--seed", "5"});
  CHECK(v1.out == v2.out);
}

}  // TEST_SUITE
