#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gyroproxy/cli/report.hpp"

namespace gyroproxy::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitInvalidConfig = 2,
  kExitIoFailure = 3,
  kExitInternal = 4,
};

/// Everything a subcommand may need. Fields not used by a subcommand keep their defaults.
struct RunConfig {
  std::string command;
  std::string case_name = "sh03b-desk";
  std::vector<std::string> kernels = {"field", "stream", "shear", "collision", "nonlinear"};
  std::vector<std::string> variants = {"original", "optimized"};
  std::size_t reps = 9;
  std::uint64_t seed = 7;
  std::size_t seeds = 3;
  std::string out;
  bool markdown = false;
  std::optional<int> threads;

  std::vector<std::uint64_t> sizes = {719, 720};
  std::size_t batch = 256;
  std::vector<std::uint64_t> n_logical;
  std::string rule = "3/2";
  std::string primes = "2,3,5,7";
  bool naive = false;

  std::string topology = "perlmutter_like";
  std::string topology_file;
  std::size_t ranks = 24;
  std::size_t nodes = 6;
  std::optional<std::size_t> n1;
  std::size_t spread_nodes = 1;

  std::string before;
  std::string after;
  std::string before_variant = "original";
  std::string after_variant = "optimized";
  std::string floors;

  /// Throws ParameterError (or IoError for unusable paths) before any work starts.
  void validate() const;
};

struct SpeedupRow {
  std::string case_name;
  std::string kernel;
  double before_median_s = 0.0;
  double after_median_s = 0.0;
  double ratio() const noexcept { return before_median_s / after_median_s; }
};

struct SpeedupTable {
  std::vector<SpeedupRow> rows;
  double overall_ratio() const noexcept;
};

/// Per-(case, kernel) ratio before/after from two bench tables, each filtered to one variant.
/// Throws CoverageError naming every row present in only one of them.
SpeedupTable summarize(const Table& before, const Table& after, const std::string& before_variant,
                       const std::string& after_variant);

/// Minimum before/after ratios keyed by (case, kernel), read from `case,kernel,min_ratio` CSV.
struct Floor {
  std::string case_name;
  std::string kernel;
  double min_ratio = 0.0;
};
std::vector<Floor> read_floors(const std::string& path);

Table bench_table(const RunConfig& config);
Table verify_table(const RunConfig& config, bool& all_passed);

/// Parse arguments, run the subcommand and return the process exit code.
int run(int argc, char** argv);

}  // namespace gyroproxy::cli
