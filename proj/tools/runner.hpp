#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace unidim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitHypothesis = 2;

struct RunOptions {
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool write_files = true;
};

struct TrialRow {
  std::int64_t trial;
  double r, value;
};

struct RunResult {
  int exit_code = kExitOk;
  nlohmann::ordered_json summary;
  std::vector<TrialRow> rows;
  std::vector<std::pair<std::string, std::string>> extra_files;  // name, contents
  std::string out_dir;
};

const std::vector<std::string>& estimator_names();

// Validates the whole config, runs the estimator, and writes trials.csv,
// summary.json and (unless disabled) plot.svg. Errors are returned as exit
// code 1 with an "error" record in the summary.
RunResult run_experiment(const Config& cfg, const RunOptions& opt);

std::string trials_csv(const std::vector<TrialRow>& rows);
std::string plot_svg(const std::vector<TrialRow>& rows, const std::string& title);

// Quick end-to-end checks; prints one PASS/FAIL line each. Returns the exit code.
int run_selftest(std::ostream& out, int jobs);

}  // namespace unidim::cli
