// nblab: command-line driver for sieving, norms, witnesses and identity checks.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nbl/beurling.hpp"
#include "nbl/cli.hpp"
#include "nbl/errors.hpp"
#include "nbl/sieve.hpp"

namespace {

struct Flags {
  nbl::RunConfig config;
  std::string family = "sn";
  std::string grid;
  std::string out;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--family", f.family, "sn, vn, bn, fn, rn or gn")->default_str("sn");
  cmd->add_option("--p", f.config.p, "Exponent p >= 1")->default_str("2");
  cmd->add_option("--n-grid", f.grid, "Comma-separated n values")->default_str("10,31,100,316,1000,3162,10000");
  cmd->add_option("--epsilon", f.config.epsilon, "Cutoff near zero")->default_str("1e-6");
  cmd->add_option("--out", f.out, "CSV output file (a .gp plot script is written beside it)");
  cmd->add_option("--limit", f.config.limit, "Sieve limit N");
  cmd->add_flag("--deterministic", f.config.deterministic, "Write 0 in the seconds column");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moebius / Beurling approximation laboratory"};
  app.require_subcommand(1);
  Flags f;

  auto* sieve = app.add_subcommand("sieve", "Build or reuse the cached Moebius table and print M(N)");
  sieve->add_option("--limit", f.config.limit, "Sieve limit N")->required();

  auto* norm = app.add_subcommand("norm", "Lp distance of a family to its generator over an n-grid");
  auto* witness = app.add_subcommand("witness", "Divergence witnesses and convergence trends");
  auto* identity = app.add_subcommand("identity", "Exact arithmetic identities and the Moebius-log identity");
  auto* mellin = app.add_subcommand("mellin", "Truncated Mellin transforms against closed forms");
  auto* u = app.add_subcommand("u", "Head constants of the U-images of the families");
  for (auto* cmd : {norm, witness, identity, mellin, u}) add_common(cmd, f);
  identity->add_option("--check", f.config.check, "floor-sum, mggamma, gamma-piecewise, mobius-log or all");
  mellin->add_option("--kernel", f.config.kernel, "m, xg or hp");
  mellin->add_option("--s", f.config.s, "Real s");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? nbl::kExitOk : nbl::kExitConfig;
  }

  try {
    f.config.family = nbl::parse_family(f.family);
    if (!f.grid.empty()) f.config.n_grid = nbl::parse_grid(f.grid);
    f.config.out = f.out;
    f.config.cache_dir = nbl::cache_dir();
    if (*sieve) return nbl::cmd_sieve(f.config, std::cout, std::cerr);
    if (*norm) return nbl::cmd_norm(f.config, std::cout, std::cerr);
    if (*witness) return nbl::cmd_witness(f.config, std::cout, std::cerr);
    if (*identity) return nbl::cmd_identity(f.config, std::cout, std::cerr);
    if (*mellin) return nbl::cmd_mellin(f.config, std::cout, std::cerr);
    if (*u) return nbl::cmd_u(f.config, std::cout, std::cerr);
  } catch (const nbl::NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return nbl::kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return nbl::kExitConfig;
  }
  return nbl::kExitInternal;
}
