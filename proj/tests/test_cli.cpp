#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nbl/cli.hpp"
#include "nbl/errors.hpp"
#include "nbl/sieve.hpp"

namespace fs = std::filesystem;
using namespace nbl;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nbl_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig config_in(const fs::path& dir) {
  RunConfig c;
  c.cache_dir = dir;
  return c;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

std::string value_of(const std::string& text, const std::string& key) {
  for (const auto& l : lines(text)) {
    if (l.rfind(key + "=", 0) == 0) return l.substr(key.size() + 1);
  }
  return {};
}

int run(const std::string& args) {
  const std::string cmd = std::string(NBLAB_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("grid parsing and config validation") {
  CHECK(parse_grid("10,100,1000") == std::vector<std::uint64_t>{10, 100, 1000});
  CHECK(parse_grid("7") == std::vector<std::uint64_t>{7});
  for (const char* bad : {"", "1,,2", "a", "0", "-5", "3x", "1,2,"}) CHECK_THROWS_AS(parse_grid(bad), ArgumentError);
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.p = 0.9;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = RunConfig{};
  c.epsilon = 0.0;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = RunConfig{};
  c.kernel = "zeta";
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = RunConfig{};
  c.check = "nope";
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 0.0) == "inf");
}

TEST_CASE("sieve: cache miss then hit, corrupt cache regenerated with a warning") {
  const fs::path dir = scratch("sieve");
  RunConfig c = config_in(dir);
  c.limit = 1000;
  std::ostringstream out1, err1, out2, err2;
  CHECK(cmd_sieve(c, out1, err1) == kExitOk);
  CHECK(value_of(out1.str(), "cache") == "miss");
  CHECK(value_of(out1.str(), "M") == "2");
  CHECK(cmd_sieve(c, out2, err2) == kExitOk);
  CHECK(value_of(out2.str(), "cache") == "hit");

  {
    std::ofstream f(cache_path(dir, 1000), std::ios::binary | std::ios::trunc);
    f << "JUNKJUNKJUNK";
  }
  std::ostringstream out3, err3;
  CHECK(cmd_sieve(c, out3, err3) == kExitOk);
  CHECK(err3.str().find("warning") != std::string::npos);
  CHECK(value_of(out3.str(), "M") == "2");
  CHECK(value_of(out3.str(), "cache") == "miss");
}

TEST_CASE("sieve 1e6 prints M(1e6) = 212 and passes the prefix cross-check") {
  RunConfig c = config_in(scratch("sieve6"));
  c.limit = 1000000;
  std::ostringstream out, err;
  CHECK(cmd_sieve(c, out, err) == kExitOk);
  CHECK(value_of(out.str(), "M") == "212");
  CHECK(value_of(out.str(), "crosscheck") == "pass");
  CHECK(value_of(out.str(), "crosscheck_prefix") == "100000");
}

TEST_CASE("norm: schema, decreasing B_n in L_1, deterministic bytes") {
  RunConfig c = config_in(scratch("norm"));
  c.family = Family::Bn;
  c.p = 1.0;
  c.n_grid = {10, 100};
  c.deterministic = true;
  std::ostringstream out, err;
  CHECK(cmd_norm(c, out, err) == kExitOk);
  const auto rows = lines(out.str());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == kNormHeader);
  const auto r10 = fields(rows[1]), r100 = fields(rows[2]);
  REQUIRE(r10.size() == 9);
  CHECK(r10[0] == "bn");
  CHECK(r10[1] == "10");
  CHECK(r10[8] == "0.0");
  CHECK(std::stod(r100[3]) < std::stod(r10[3]));
  std::ostringstream again, err2;
  cmd_norm(c, again, err2);
  CHECK(again.str() == out.str());
}

TEST_CASE("norm of chi + S_1 matches the two-piece hand integration") {
  RunConfig c = config_in(scratch("norm1"));
  c.n_grid = {1};
  std::ostringstream out, err;
  CHECK(cmd_norm(c, out, err) == kExitOk);
  const auto r = fields(lines(out.str())[1]);
  CHECK(std::abs(std::stod(r[3]) - 1.762450019633109170836661) <= std::stod(r[4]));
}

TEST_CASE("norm of G_100 - lambda at p = 2 dominates the witness bound") {
  RunConfig c = config_in(scratch("gn"));
  c.family = Family::Gn;
  c.n_grid = {100};
  std::ostringstream norm_out, witness_out, err;
  CHECK(cmd_norm(c, norm_out, err) == kExitOk);
  CHECK(cmd_witness(c, witness_out, err) == kExitOk);
  const auto n = fields(lines(norm_out.str())[1]);
  const auto w = fields(lines(witness_out.str())[1]);
  CHECK(std::stod(n[3]) >= std::stod(w[6]));
  CHECK(w[7] == "true");
}

TEST_CASE("identity, mellin and u commands") {
  const fs::path dir = scratch("misc");
  RunConfig c = config_in(dir);
  {
    std::ostringstream out, err;
    CHECK(cmd_identity(c, out, err) == kExitOk);
    const auto rows = lines(out.str());
    CHECK(rows[0] == kWitnessHeader);
    CHECK(rows.size() == 1 + 3 + 20);
    CHECK(fields(rows[1])[0] == "floor_sum");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(fields(rows[i])[7] == "true");
  }
  {
    c.check = "floor-sum";
    std::ostringstream out, err;
    CHECK(cmd_identity(c, out, err) == kExitOk);
    CHECK(lines(out.str()).size() == 2);
    c.check = "all";
  }
  {
    std::ostringstream out, err;
    CHECK(cmd_mellin(c, out, err) == kExitOk);
    const auto r = fields(lines(out.str())[1]);
    CHECK(r[0] == "mellin_m");
    CHECK(r[7] == "true");
  }
  {
    c.family = Family::Fn;
    c.n_grid = {50};
    std::ostringstream out, err;
    CHECK(cmd_u(c, out, err) == kExitOk);
    const auto r = fields(lines(out.str())[1]);
    CHECK(r[0] == "u_head_fn");
    CHECK(r[6] == "-4.0");
    CHECK(r[7] == "true");
  }
}

TEST_CASE("--out writes the CSV and a plot script referencing columns by name") {
  const fs::path dir = scratch("out");
  RunConfig c = config_in(dir);
  c.family = Family::Bn;
  c.p = 1.0;
  c.n_grid = {10};
  c.out = dir / "sub" / "bn.csv";
  std::ostringstream out, err;
  CHECK(cmd_norm(c, out, err) == kExitOk);
  CHECK(out.str().empty());
  std::ifstream csv(c.out);
  std::string header;
  std::getline(csv, header);
  CHECK(header == kNormHeader);
  std::ifstream gp(dir / "sub" / "bn.csv.gp");
  std::stringstream script;
  script << gp.rdbuf();
  CHECK(script.str().find("column(\"n\")") != std::string::npos);
  CHECK(script.str().find("column(\"value\")") != std::string::npos);
  CHECK(plot_script("w.csv", true).find("column(\"lhs_low\")") != std::string::npos);
}

TEST_CASE("binary exit codes") {
  const fs::path dir = scratch("exit");
  const std::string env = "NB_CACHE_DIR=" + dir.string() + " ";
  CHECK(std::system((env + NBLAB_PATH + " sieve --limit 1000 >/dev/null 2>&1").c_str()) == 0);
  CHECK(run("identity --check floor-sum") == kExitOk);
  CHECK(run("u --family sn --n-grid 10,100") == kExitOk);
  CHECK(run("norm --family xx") == kExitConfig);
  CHECK(run("norm --p 0.5") == kExitConfig);
  CHECK(run("norm --n-grid 1,a") == kExitConfig);
  CHECK(run("bogus") == kExitConfig);
  CHECK(run("norm --family sn --epsilon 0.5 --n-grid 10") == kExitConfig);
  CHECK(run("sieve") == kExitConfig);
}
