#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "hhf/analysis.hpp"
#include "hhf/estimators.hpp"
#include "hhf/exact.hpp"

namespace hhf::cli {

// Process exit statuses. Stable; documented in the README.
enum class ExitCode : int {
  kSuccess = 0,
  kInternal = 1,
  kInvalidParams = 2,
  kIoError = 3,
  kDegenerateInput = 4,
  kExactNone = 5,
  kNeedsDistinctColumns = 6,
  kTooLarge = 7,
  kUnrecoverable = 8,
};

inline constexpr std::uint64_t kDefaultSeed = 1;

struct GenerateConfig {
  std::int64_t n = 1000;
  std::int64_t p = 2000;
  double theta = 0.4;
  std::uint64_t seed = kDefaultSeed;
  double min_abs_c = kDefaultMinAbsC;
  std::filesystem::path out = ".";
};

struct RecoverConfig {
  // Directory holding Y.csv (optionally U.csv / X.csv ground truth), or a
  // path to a Y csv file.
  std::filesystem::path in;
  std::filesystem::path out = ".";
  double zeta = kDefaultThreshold;
};

struct ExactConfig {
  std::filesystem::path in;
  std::filesystem::path out = ".";
  int n_max = kDefaultMaxExactDimension;
};

struct BoundsConfig {
  std::int64_t n = 1000;
  std::int64_t p = 1000;
  double theta = 0.4;
  double c = 1.0;
  double t = 0.05;
  std::optional<std::filesystem::path> out;
};

struct BenchmarkConfig {
  std::int64_t n = 1000;
  std::vector<double> thetas{0.1, 0.4};
  std::vector<std::int64_t> p_values{2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
  std::int64_t trials = 20;
  std::uint64_t seed = kDefaultSeed;
  double min_abs_c = kDefaultMinAbsC;
  double t = kDefaultSweepThreshold;
  unsigned threads = 0;
  std::filesystem::path out = ".";
};

// Writes U.csv, X.csv, Y.csv and meta.json.
void cmd_generate(const GenerateConfig& config);
// Writes result.json, U_hat.csv and X_hat.csv. Throws DegenerateInput /
// Unrecoverable without writing anything.
void cmd_recover(const RecoverConfig& config);
// Writes result.json (always, unless refused), plus U_hat.csv and X_hat.csv
// when found. Returns kSuccess, kExactNone or kNeedsDistinctColumns.
ExitCode cmd_exact(const ExactConfig& config);
// Prints bound values as JSON to `out` (and bounds.json when configured).
void cmd_bounds(const BoundsConfig& config, std::ostream& out);
// Writes figure1.csv.
void cmd_benchmark(const BenchmarkConfig& config);

// Parses argv, dispatches, and maps failures onto ExitCode with a one-line
// diagnostic on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hhf::cli
