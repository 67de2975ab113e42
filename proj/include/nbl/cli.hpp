#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nbl/beurling.hpp"

namespace nbl {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitWitnessFailed = 2,
  kExitConfig = 3,
};

struct RunConfig {
  std::uint64_t limit = 0;  // sieve limit; 0 derives it from the command's needs
  Family family = Family::Sn;
  double p = 2.0;
  double epsilon = 1e-6;
  std::vector<std::uint64_t> n_grid{10, 31, 100, 316, 1000, 3162, 10000};
  std::filesystem::path out;  // empty: stdout
  std::filesystem::path cache_dir;
  bool deterministic = false;  // write 0 in the seconds column
  std::string kernel = "m";    // mellin: m, xg, hp
  double s = 2.0;              // mellin: real s
  std::string check = "all";   // identity: floor-sum, mggamma, gamma-piecewise, mobius-log, all

  void validate() const;  // throws ArgumentError
};

// "10,100,1000" -> {10, 100, 1000}
std::vector<std::uint64_t> parse_grid(const std::string& text);

std::string format_double(double v);

// Each command writes CSV (or, for sieve, key=value lines) to out and
// diagnostics to err, and returns an ExitCode. Configuration problems throw.
int cmd_sieve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_norm(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_witness(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_identity(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_mellin(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_u(const RunConfig& config, std::ostream& out, std::ostream& err);

inline const char* kNormHeader = "family,n,p,value,err,tail_low,tail_high,segments,seconds";
inline const char* kWitnessHeader = "anchor,family,n,p,lhs_low,lhs_high,rhs,satisfied,margin";

// gnuplot script over a CSV written by cmd_norm or cmd_witness; columns by name.
std::string plot_script(const std::filesystem::path& csv, bool witness_schema);

}  // namespace nbl
