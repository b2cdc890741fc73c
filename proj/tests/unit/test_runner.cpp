#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "tubemass/runner/report.hpp"
#include "tubemass/runner/run.hpp"
#include "tubemass/runner/scenario.hpp"

using namespace tubemass;
using namespace tubemass::runner;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = TUBEMASS_SCENARIO_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void collect_schema_keys(const Json& j, std::set<std::string>& keys) {
  if (j.is_object()) {
    if (auto it = j.find("properties"); it != j.end() && it->is_object())
      for (auto& [k, v] : it->items()) keys.insert(k);
    for (auto& [k, v] : j.items()) collect_schema_keys(v, keys);
  } else if (j.is_array()) {
    for (const auto& v : j) collect_schema_keys(v, keys);
  }
}

void collect_doc_keys(const Json& j, std::set<std::string>& keys) {
  if (j.is_object()) {
    for (auto& [k, v] : j.items()) {
      keys.insert(k);
      collect_doc_keys(v, keys);
    }
  } else if (j.is_array()) {
    for (const auto& v : j) collect_doc_keys(v, keys);
  }
}

std::vector<fs::path> bundled() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(kScenarios))
    if (e.path().extension() == ".json") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("git blob hash") {
  CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_scenario(R"({"schema_version": 1, "name": "x", "task": "convex", "n": 2})"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"schema_version": 1, "name": "x", "task": "convex", "n": 2, "seed": -1})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"schema_version": 2, "name": "x", "task": "convex", "n": 2, "seed": 1})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"schema_version": 1, "name": "x", "task": "nope", "n": 2, "seed": 1})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_scenario("{not json"), ConfigError);
  CHECK_THROWS_AS(
      parse_scenario(R"({"schema_version": 1, "name": "x", "task": "convex", "n": 2, "seed": 1, "bogus": 0})"),
      ConfigError);
  CHECK_THROWS_AS(parse_holo(Json::parse(R"([{"exponents": [1, 0, 0, 1], "coeff_re": 1}])"), 2, "$.f"), ConfigError);
}

TEST_CASE("polynomial terms use z then conj(z) exponents") {
  const auto f = parse_holo(Json::parse(R"([{"exponents": [2, 1, 0, 0], "coeff_re": 1.5, "coeff_im": -1}])"), 2, "$");
  CVector z(2);
  z << cd(0.5, 0.25), cd(-1.0, 2.0);
  CHECK(std::abs(f.value(z) - cd(1.5, -1.0) * z[0] * z[0] * z[1]) < 1e-14);
  const auto phi = parse_field(Json::parse(R"({"kind": "poly", "terms": [{"exponents": [1, 1], "coeff_re": 1}]})"), 1,
                               "$");
  Point w(1);
  w << cd(0.3, 0.4);
  CHECK(phi.value(w) == doctest::Approx(0.25));
}

TEST_CASE("every bundled scenario parses") {
  const auto files = bundled();
  CHECK(files.size() >= 17);
  for (const auto& p : files) {
    CAPTURE(p.string());
    const auto s = load_scenario(p);
    CHECK(s.name == p.stem().string());
    CHECK(s.config_hash.size() == 40);
  }
}

TEST_CASE("schema names every key the bundled scenarios use, and vice versa") {
  std::set<std::string> schema_keys, used;
  collect_schema_keys(schema(), schema_keys);
  for (const auto& p : bundled()) collect_doc_keys(Json::parse(slurp(p)), used);
  for (const auto& k : used) {
    CAPTURE(k);
    CHECK(schema_keys.count(k) == 1);
  }
  for (const auto& k : schema_keys) {
    CAPTURE(k);
    CHECK(used.count(k) == 1);
  }
}

TEST_CASE("CSV and SVG are deterministic") {
  Table t({"x", "y", "e"});
  t.add({0.1, 1.0 / 3.0, 0.01});
  t.add({1.0, 2.0, 0.02});
  CHECK(t.csv() == "x,y,e\n0.1,0.3333333333333333,0.01\n1,2,0.02\n");
  PlotSpec spec;
  spec.x = "x";
  spec.y = "y";
  spec.err = "e";
  spec.logx = true;
  CHECK(render_svg(t, spec) == render_svg(t, spec));
  CHECK(render_svg(t, spec).find("<svg") != std::string::npos);
  CHECK_THROWS_AS(t.add({1.0}), Error);
  CHECK_THROWS_AS(render_svg(Table({"x", "y"}), spec), Error);
}

TEST_CASE("running the forms scenario writes its outputs") {
  const fs::path out = fs::temp_directory_path() / "tubemass_runner_test";
  fs::remove_all(out);
  const auto rep = run_scenario(kScenarios / "forms_wedge.json", RunOptions{out, true});
  CHECK(rep.verdict == "pass");
  CHECK(fs::exists(out / "forms_wedge.csv"));
  CHECK(fs::exists(out / "forms_wedge.meta.json"));
  CHECK(fs::exists(out / "forms_wedge.report.json"));
  const auto report = Json::parse(slurp(out / "forms_wedge.report.json"));
  CHECK(report["verdict"] == "pass");
  CHECK(report["seed"] == 1234);
  const auto first = slurp(out / "forms_wedge.csv");
  run_scenario(kScenarios / "forms_wedge.json", RunOptions{out, false});
  CHECK(slurp(out / "forms_wedge.csv") == first);
  fs::remove_all(out);
}
