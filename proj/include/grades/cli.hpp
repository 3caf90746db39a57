#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "grades/core.hpp"

namespace grades::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kConditionViolated = 3,
};

struct GenArgs {
  Index m = 0;
  Index n = 0;
  Index s = 0;
  std::uint64_t seed = 0;
  std::string ensemble = "gaussian";  // gaussian | identity (requires m == n)
  std::string amplitude = "pm1";      // pm1 | normal
  std::string out_path;
};

struct RipArgs {
  std::string instance_path;
  std::optional<Index> level;  // default 2s
  std::string mode = "exact";  // exact | sampled
  std::uint64_t trials = 2000;
  std::uint64_t seed = 0;
  std::uint64_t max_supports = 1'000'000;
  unsigned workers = 1;
  double reference_eps = 1e-10;
  std::string out_path;
};

struct SolveArgs {
  std::string instance_path;
  std::optional<std::string> bounds_path;
  std::optional<double> gamma;
  double eps = 1e-10;
  std::optional<std::uint64_t> max_iters;
  std::string trace_out;
  std::string out_path;
  bool strict = false;
};

struct BenchArgs {
  Index m = 0;
  Index n = 0;
  Index s = 0;
  std::uint64_t num_seeds = 1;
  std::uint64_t first_seed = 0;
  double eps = 1e-10;
  std::string mode = "auto";  // auto | exact | sampled
  std::string ensemble = "gaussian";
  std::string amplitude = "pm1";
  std::uint64_t trials = 2000;
  std::uint64_t max_supports = 1'000'000;
  unsigned workers = 1;
  bool timing = false;
  bool strict = false;
  std::string out_csv;
};

/// Recovery counts as exact when ||x - x*||_2 is at most this.
inline constexpr double kRecoveryTolerance = 1e-5;

int cmd_gen(const GenArgs& args, std::ostream& out, std::ostream& err);
int cmd_rip(const RipArgs& args, std::ostream& out, std::ostream& err);
int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err);

/// Parses argv (subcommand first) and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace grades::cli
