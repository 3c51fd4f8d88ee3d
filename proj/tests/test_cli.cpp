#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "peakcount/classify.hpp"
#include "peakcount/config.hpp"
#include "peakcount/errors.hpp"
#include "peakcount/report.hpp"
#include "test_helpers.hpp"

using namespace peakcount;

namespace {

const char* kExampleConfig = R"({
  "p": 2.0,
  "dim": 3,
  "profile": [
    {"exponents": [5, 0], "coeff": 1.0},
    {"exponents": [1, 4], "coeff": -1.0}
  ]
})";

std::string temp_path(const std::string& name) {
  return std::string("peakcount_test_") + name;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(PEAKCOUNT_CLI_PATH) + " " + args;
  return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("config parsing: the worked example") {
  RunConfig cfg = parse_config_text(kExampleConfig);
  CHECK(cfg.p == 2.0);
  CHECK(cfg.dim == 3);
  REQUIRE(cfg.profile.has_value());
  CHECK(cfg.profile->coeff({5, 0}) == 1.0);
  CHECK(cfg.profile->coeff({1, 4}) == -1.0);
  CHECK_FALSE(cfg.psi.has_value());
}

TEST_CASE("config parsing: validation failures name the problem") {
  CHECK_THROWS_AS(parse_config_text(R"({"dim": 3, "profile": []})"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"dim": 3})"), "p required", ValidationError);
  CHECK_THROWS_AS(
      parse_config_text(
          R"({"p": 2, "dim": 2, "profile": [{"exponents": [4], "coeff": 1}], "psi": {"powers": {"4": 1}}})"),
      ValidationError);
  CHECK_THROWS_AS(
      parse_config_text(R"({"p": 2, "dim": 3, "profile": [{"exponents": [5, 0], "coeff": 1}],
                            "tolerances": {"quad_tol": -1e-10}})"),
      ValidationError);
  CHECK_THROWS_AS(parse_config_text("{ not json"), ParseError);
}

TEST_CASE("psi configs parse into one-variable polynomials") {
  RunConfig cfg = parse_config_text(
      R"({"p": 3, "dim": 2, "psi": {"powers": {"4": 1.0, "6": -0.5}}})");
  REQUIRE(cfg.psi.has_value());
  CHECK(cfg.psi->coeff({4}) == 1.0);
  CHECK(cfg.psi->coeff({6}) == -0.5);
  CHECK(cfg.psi->num_vars() == 1);
}

TEST_CASE("profile round-trips through its config serialization") {
  SparsePoly q = testutil::example_profile_57();
  std::string json = profile_to_config_json(q);
  RunConfig cfg = parse_config_text(
      std::string(R"({"p": 2, "dim": 3, "profile": )") + json + "}");
  REQUIRE(cfg.profile.has_value());
  CHECK((*cfg.profile - q).is_zero());
}

TEST_CASE("reports are deterministic and carry the stable field order") {
  RunConfig cfg = parse_config_text(kExampleConfig);
  std::string a = report_json(classify_domain(cfg)).dump();
  std::string b = report_json(classify_domain(cfg)).dump();
  CHECK(a == b);

  auto j = nlohmann::json::parse(a);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  // nlohmann sorts keys; check presence, then check order on the raw text.
  for (const char* k : {"params", "profile", "moments", "field", "zeros", "conditions", "verdict"})
    CHECK(j.contains(k));
  std::size_t pos = 0;
  for (const char* k : {"\"params\"", "\"profile\"", "\"moments\"", "\"field\"",
                        "\"zeros\"", "\"conditions\"", "\"verdict\""}) {
    std::size_t next = a.find(k, pos);
    REQUIRE(next != std::string::npos);
    pos = next;
  }
  CHECK(j["verdict"]["predicted_count"].get<long>() == 2);
  CHECK(j["verdict"]["exact"].get<bool>() == true);
}

TEST_CASE("floating values serialize with 17 significant digits") {
  JsonValue v = JsonValue::object();
  v.set("x", JsonValue::number(1.0 / 3.0));
  std::string s = v.dump(0);
  CHECK(s.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("ground-state CSV has the required columns") {
  GroundState gs = solve_ground_state({3.0, 1});
  std::string csv = ground_state_csv(gs);
  CHECK(csv.rfind("r,U,dU,residual\n", 0) == 0);
  // one line per grid node plus header
  std::size_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == gs.grid_size() + 1);
}

TEST_CASE("cli end-to-end: classify the worked example") {
  std::string cfg_path = temp_path("example.json");
  std::string out_path = temp_path("report.json");
  write_text_file(cfg_path, kExampleConfig);
  int rc = run_cli("classify --config " + cfg_path + " --json " + out_path + " --quiet");
  REQUIRE(rc == 0);
  auto j = nlohmann::json::parse(read_file(out_path));
  CHECK(j["verdict"]["exact"].get<bool>());
  CHECK(j["verdict"]["predicted_count"].get<long>() == 2);
  CHECK(j["zeros"]["records"].size() == 2);
  std::remove(cfg_path.c_str());
  std::remove(out_path.c_str());
}

TEST_CASE("cli end-to-end: odd-monomial shortcut in the verdict") {
  std::string cfg_path = temp_path("odd.json");
  std::string out_path = temp_path("odd_report.json");
  write_text_file(cfg_path, R"({"p": 2, "dim": 3, "profile": [
    {"exponents": [3, 0], "coeff": 2.0}, {"exponents": [0, 4], "coeff": 1.0}]})");
  int rc = run_cli("classify --config " + cfg_path + " --json " + out_path + " --quiet");
  REQUIRE(rc == 0);
  auto j = nlohmann::json::parse(read_file(out_path));
  CHECK(j["verdict"]["predicted_count"].get<long>() == 0);
  CHECK(j["verdict"]["shortcut"].get<std::string>() == "proposition_odd_monomial");
  std::remove(cfg_path.c_str());
  std::remove(out_path.c_str());
}

TEST_CASE("cli end-to-end: ground-state CSV dump") {
  std::string csv_path = temp_path("gs.csv");
  int rc = run_cli("ground-state --p 3 --dim 1 --dump-csv " + csv_path + " --quiet");
  REQUIRE(rc == 0);
  std::string csv = read_file(csv_path);
  CHECK(csv.rfind("r,U,dU,residual\n", 0) == 0);
  std::remove(csv_path.c_str());
}

TEST_CASE("cli end-to-end: moments JSON schema") {
  std::string out_path = temp_path("moments.json");
  int rc = run_cli("moments --p 2 --dim 3 --max-order 6 --json " + out_path + " --quiet");
  REQUIRE(rc == 0);
  auto j = nlohmann::json::parse(read_file(out_path));
  CHECK(j["p"].get<double>() == 2.0);
  CHECK(j["dim"].get<int>() == 3);
  CHECK(j.contains("c"));
  CHECK(j.contains("identity_check"));
  CHECK(j.contains("quad_tol"));
  CHECK(j["c"].contains("0"));
  CHECK(j["c"].contains("6"));
  CHECK(j["c"]["2"].get<double>() > 0.0);
  std::remove(out_path.c_str());
}

TEST_CASE("cli end-to-end: stage-attributed failure exits nonzero") {
  std::string cfg_path = temp_path("bad.json");
  write_text_file(cfg_path, R"({"p": 9.0, "dim": 3, "profile": [
    {"exponents": [5, 0], "coeff": 1.0}]})");
  int rc = run_cli("classify --config " + cfg_path + " --quiet 2>/dev/null");
  CHECK(rc != 0);
  std::remove(cfg_path.c_str());
}

TEST_CASE("cli end-to-end: byte-identical reruns") {
  std::string cfg_path = temp_path("det.json");
  std::string out1 = temp_path("det1.json");
  std::string out2 = temp_path("det2.json");
  write_text_file(cfg_path, kExampleConfig);
  REQUIRE(run_cli("classify --config " + cfg_path + " --json " + out1 + " --quiet") == 0);
  REQUIRE(run_cli("classify --config " + cfg_path + " --json " + out2 + " --quiet") == 0);
  CHECK(read_file(out1) == read_file(out2));
  std::remove(cfg_path.c_str());
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}
