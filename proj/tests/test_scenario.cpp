#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "otelbaev/scenario.hpp"

using namespace otelbaev;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("otelbaev_test_scenario_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream is(p);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

json single_delta_scenario() {
  return json::parse(R"({
    "name": "sd",
    "measure": {"generator": "single_delta", "params": {"c": 1}},
    "tasks": [
      {"type": "eval_profile", "alpha": 2, "from": -1, "to": 1, "step": 0.25, "lambda": 1},
      {"type": "decompose"},
      {"type": "counting_table", "lambdas": [0.01, 0.05, 0.1, 0.2]},
      {"type": "eigenvalue_table", "n_max": 2},
      {"type": "lt_table", "gammas": [0.25, 0.5, 1]},
      {"type": "edges"}
    ]})");
}

}  // namespace

TEST_CASE("shortest round-trip formatting", "[scenario]") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-0.25) == "-0.25");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(format_double(kInf) == "inf");
  CHECK(format_double(-kInf) == "-inf");
  CHECK(format_double(-0.0) == "0");
  for (double v : {M_PI, 1.0 / 3.0, 6.02214076e23, 2.2250738585072014e-308})
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("single delta scenario passes and reports consistently", "[scenario]") {
  const auto dir = scratch("sd");
  const RunResult r = run_scenario_json(single_delta_scenario(), "sd.json", {dir.string(), 1, {}});
  INFO(r.message);
  REQUIRE(r.exit == exit_code::ok);
  CHECK(r.fail == 0);

  const auto counting = read_csv(dir / "03_counting_table.csv");
  REQUIRE(counting.size() == 5);
  CHECK(counting[0] == std::vector<std::string>{"lambda", "lower1", "lower2", "lower3_literal", "lower3_variant", "N_exact",
                                                "upper1", "upper2", "upper3", "upper_bracketing", "sandwich"});
  for (std::size_t i = 1; i < counting.size(); ++i) CHECK(counting[i][5] == "1");

  const auto sub = read_csv(dir / "01_eval_profile_sublevel.csv");
  REQUIRE(sub.size() == 2);
  CHECK(sub[1] == std::vector<std::string>{"-0.5", "0.5"});

  const auto dec = read_csv(dir / "02_decompose.csv");
  REQUIRE(dec.size() == 4);
  CHECK(dec[2] == std::vector<std::string>{"0", "0", "0.5", "0", "0", "1"});

  // Summary counts equal the row-level flags.
  const json summary = json::parse(slurp(dir / "summary.json"));
  int pass = 0, fail = 0;
  for (const auto& t : summary["tasks"])
    for (const auto& file : t["files"]) {
      const auto rows = read_csv(dir / file.get<std::string>());
      const auto& head = rows[0];
      const auto col = std::find(head.begin(), head.end(), "sandwich");
      if (col == head.end()) continue;
      const auto c = static_cast<std::size_t>(col - head.begin());
      for (std::size_t i = 1; i < rows.size(); ++i) (rows[i][c] == "pass" ? pass : fail)++;
    }
  CHECK(summary["pass"] == pass);
  CHECK(summary["fail"] == fail);
  CHECK(summary["scenario"] == "sd");
  CHECK(summary["versions"]["otelbaev"].is_string());
  CHECK(summary["tolerances"]["spectrum"] == 1e-12);
}

TEST_CASE("outputs are byte identical across runs and thread counts", "[scenario]") {
  const json s = single_delta_scenario();
  const auto a = scratch("det_a"), b = scratch("det_b");
  const auto ra = run_scenario_json(s, "sd.json", {a.string(), 1, {}});
  const auto rb = run_scenario_json(s, "sd.json", {b.string(), 4, {}});
  REQUIRE(ra.files == rb.files);
  for (const auto& f : ra.files) {
    INFO(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }
}

TEST_CASE("zero measure gives zero tables", "[scenario]") {
  const json s = json::parse(R"({
    "measure": {"atoms": [], "density": []},
    "tasks": [{"type": "counting_table", "lambdas": [0.1, 1]}, {"type": "lt_table", "gammas": [0.5]}, {"type": "edges"}]
  })");
  const auto dir = scratch("zero");
  const auto r = run_scenario_json(s, "zero.json", {dir.string(), 1, {}});
  REQUIRE(r.exit == exit_code::ok);
  for (const auto& row : read_csv(dir / "01_counting_table.csv"))
    if (row[0] != "lambda")
      for (std::size_t i = 1; i < 10; ++i) CHECK(row[i] == "0");
  const auto lt = read_csv(dir / "02_lt_table.csv");
  CHECK(lt[1][1] == "0");
}

TEST_CASE("input errors exit with 2 and name the location", "[scenario]") {
  const auto dir = scratch("bad");
  auto run = [&](const char* text) { return run_scenario_json(json::parse(text), "bad.json", {dir.string(), 1, {}}); };
  auto r = run(R"({"measure": {"atoms": []}, "tasks": []})");
  CHECK(r.exit == exit_code::bad_input);
  CHECK_THAT(r.message, Catch::Matchers::ContainsSubstring("tasks"));
  r = run(R"({"measure": {"atoms": [{"x": 0, "mass": -1}]}, "tasks": [{"type": "edges"}]})");
  CHECK(r.exit == exit_code::bad_input);
  CHECK_THAT(r.message, Catch::Matchers::ContainsSubstring("measure"));
  r = run(R"({"measure": {"atoms": []}, "tasks": [{"type": "counting_table", "lambdas": [0.1, -2]}]})");
  CHECK(r.exit == exit_code::bad_input);
  CHECK_THAT(r.message, Catch::Matchers::ContainsSubstring("tasks[0].lambdas[1]"));
  r = run(R"({"measure": {"atoms": []}, "tasks": [{"type": "frobnicate"}]})");
  CHECK(r.exit == exit_code::bad_input);
  r = run(R"({"measure": {"generator": "double_delta", "params": {}}, "tasks": [{"type": "edges"}]})");
  CHECK(r.exit == exit_code::bad_input);
  r = run(R"({"measure": {"atoms": []}, "tasks": [{"type": "compare", "generator": "lt_counterexample", "params": {"p": 0.5}, "K": [4]}]})");
  CHECK(r.exit == exit_code::bad_input);

  const auto missing = run_scenario("/nonexistent/scenario.json", {dir.string(), 1, {}});
  CHECK(missing.exit == exit_code::bad_input);

  const fs::path broken = dir.string() + "_broken.json";
  {
    std::ofstream os(broken);
    os << "{\"measure\": ";
  }
  const auto pe = run_scenario(broken.string(), {dir.string(), 1, {}});
  CHECK(pe.exit == exit_code::bad_input);
  CHECK_THAT(pe.message, Catch::Matchers::ContainsSubstring("byte"));
}

TEST_CASE("unwritable output directory exits with 2", "[scenario]") {
  const auto file = scratch("blocker");
  {
    std::ofstream os(file);
    os << "x";
  }
  const auto r = run_scenario_json(single_delta_scenario(), "sd.json", {(file / "sub").string(), 1, {}});
  CHECK(r.exit == exit_code::bad_input);
}

TEST_CASE("double delta sweep matches the closed forms", "[scenario]") {
  const json s = json::parse(R"({
    "measure": {"generator": "double_delta", "params": {"y": 1}},
    "tasks": [{"type": "double_delta_sweep", "ys": [0.1, 0.2, 0.3, 0.5, 1, 5], "gammas": [0.25, 0.5, 1]}]
  })");
  const auto dir = scratch("dd");
  const auto r = run_scenario_json(s, "dd.json", {dir.string(), 2, {}});
  CHECK(r.exit == exit_code::ok);
  CHECK(r.check_fail == 0);
  const auto rows = read_csv(dir / "01_double_delta_sweep.csv");
  REQUIRE(rows.size() == 19);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][5] == "pass");

  // An impossible tolerance turns the same rows into cross-check failures.
  json strict = s;
  strict["tolerances"] = {{"closed_form_rel", 1e-300}};
  const auto r3 = run_scenario_json(strict, "dd.json", {scratch("dd3").string(), 1, {}});
  CHECK(r3.exit == exit_code::numerical_failure);
}

TEST_CASE("command line tolerance override", "[scenario]") {
  const auto dir = scratch("tol");
  const auto r = run_scenario_json(single_delta_scenario(), "sd.json", {dir.string(), 1, 1e-8});
  CHECK(r.exit == exit_code::ok);
  CHECK(json::parse(slurp(dir / "summary.json"))["tolerances"]["spectrum"] == 1e-8);
  CHECK(run_scenario_json(single_delta_scenario(), "sd.json", {dir.string(), 1, -1.0}).exit == exit_code::bad_input);
}
