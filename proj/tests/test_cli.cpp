#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "runner.hpp"

using newmc::runner::ConfigError;
using newmc::runner::runTaskInMemory;
using nlohmann::json;

namespace {

json load(const std::string& name) {
  std::ifstream in(std::string(NEWMC_CONFIG_DIR) + "/" + name);
  REQUIRE(in.good());
  return json::parse(in);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(NEWMC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("verify-support has no violations") {
  const auto r = runTaskInMemory(load("verify_support_ps_3_6.json"));
  CHECK(r.ok);
  CHECK(r.csv.rfind("p,n,family,i,v_a,a_unit,v_m,m_unit,expected_zero,exact_zero,violation\n", 0) == 0);
  std::istringstream in(r.csv);
  std::string line;
  std::getline(in, line);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == "0");
  }
  CHECK(rows >= 200);
}

TEST_CASE("exponent task") {
  const auto r = runTaskInMemory(load("exponent.json"));
  CHECK(r.ok);
  CHECK(r.report.find("C₁-exponent = 5/12, depth exponent = 5/24") != std::string::npos);
  CHECK(r.report.find("eta[3] = [0, 1/8, 1/4, 3/8, 1/2]") != std::string::npos);
}

TEST_CASE("config errors carry field paths") {
  CHECK_THROWS_WITH_AS(runTaskInMemory(load("bad_ps_odd_n.json")), doctest::Contains("config.n"), ConfigError);
  json c = load("decay_sweep.json");
  c["sweep"][1]["family"] = "cuspidal";
  CHECK_THROWS_WITH_AS(runTaskInMemory(c), doctest::Contains("config.sweep[1].family"), ConfigError);
  CHECK_THROWS_AS(runTaskInMemory(json{{"task", "nope"}}), ConfigError);
  CHECK_THROWS_WITH_AS(runTaskInMemory(json{{"task", "decay"}, {"n", 6}}), doctest::Contains("config.p"), ConfigError);
  CHECK_THROWS_WITH_AS(runTaskInMemory(json{{"task", "exponent"}, {"eta1", "1/x"}, {"delta", 1}, {"eta2", 1}}),
                       doctest::Contains("config.eta1"), ConfigError);
  json cnt = load("counting_d6.json");
  cnt["lattices"] = json::array({json{{"plan", {{"3", 1}}}}});
  CHECK_THROWS_WITH_AS(runTaskInMemory(cnt), doctest::Contains("config.lattices[0]"), ConfigError);
}

TEST_CASE("sweeps") {
  json c = load("decay_sweep.json");
  c["sweep"] = json::array();
  const auto empty = runTaskInMemory(c);
  CHECK(empty.ok);
  CHECK(empty.csv == "p,n,family,i,points,max_ratio_normalized,bound\n");
  c = load("decay_sweep.json");
  c["samples"] = 30;
  const auto a = runTaskInMemory(c);
  c["threads"] = 3;
  const auto b = runTaskInMemory(c);
  CHECK(a.ok);
  CHECK(a.csv == b.csv);
  CHECK(count_lines(a.csv) == 1 + 1 + 2 + 1 + 2);
}

TEST_CASE("counting task") {
  const auto r = runTaskInMemory(load("counting_d6.json"));
  CHECK(r.ok);
  CHECK(count_lines(r.csv) == 1 + 3 * 20);
  CHECK(r.csv.find("cond9,81,20,1,2,") != std::string::npos);
}

TEST_CASE("binary: exit codes and determinism") {
  const std::string cfg = std::string(NEWMC_CONFIG_DIR);
  CHECK(run_cli("--config " + cfg + "/verify_support_ps_3_6.json --out cli_a") == 0);
  CHECK(run_cli("--config " + cfg + "/verify_support_ps_3_6.json --out cli_b --threads 2") == 0);
  CHECK(slurp("cli_a/verify-support.csv") == slurp("cli_b/verify-support.csv"));
  CHECK(!slurp("cli_a/verify-support.csv").empty());
  CHECK(run_cli("--config " + cfg + "/verify_support_ps_3_6.json --out cli_c --seed 7") == 0);
  CHECK(slurp("cli_a/verify-support.csv") != slurp("cli_c/verify-support.csv"));
  CHECK(run_cli("--config " + cfg + "/bad_ps_odd_n.json --out cli_d") == 2);
  CHECK(run_cli("--config /nonexistent.json") == 2);
  CHECK(run_cli("--bogus-flag") == 2);
  CHECK(run_cli("--config " + cfg + "/exponent.json --task exponent --out cli_e") == 0);
  CHECK(slurp("cli_e/report.txt").find("5/24") != std::string::npos);
  // an unattainable window forces an assertion failure
  json tight = load("counting_d6.json");
  tight["ratio_window"] = 1.0001;
  std::ofstream("tight.json") << tight.dump();
  CHECK(run_cli("--config tight.json --out cli_f") == 1);
}
