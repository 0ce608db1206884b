#pragma once

// Command-line driver: loads documents, dispatches a verb and writes a JSON report.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qdual::cli {

enum ExitStatus : int { kPass = 0, kValidationFailure = 1, kInputError = 2 };

struct JobConfig {
  std::string verb;
  std::string backend;              // builtin name or backend document; optional when inputs embed one
  std::vector<std::string> inputs;  // functor / graded / action / cocycle / module documents
  std::optional<double> tolerance;  // overrides the residual tolerance
  std::string report;               // empty: JSON report goes to stdout
  std::uint64_t seed = 0;
  bool cross_test = false;
};

const std::vector<std::string>& verbs();

/// Runs one job. The report is always written; a one-line summary per check
/// group goes to `summary`.
int run(const JobConfig& config, std::ostream& summary);

/// Parses argv with CLI11 and calls run.
int main(int argc, char** argv);

}  // namespace qdual::cli
