#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "report.hpp"

namespace chaplab {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kConfigError = 2 };

struct Options {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides initial.seed
  bool quiet = false;
};

struct Outcome {
  int exit_code = kPass;
  std::string summary;  // for standard output
  std::string error;    // for standard error
  std::optional<CheckReport> report;
};

Outcome run_scenario(const std::string& config_path, const Options& options);
Outcome run_compare(const std::string& config_path, const Options& options);

enum class Verb { run, compare };

// Several configs run concurrently; each writes only its own files, and a
// shared scenario name is rejected up front. Returns the worst exit code.
int run_batch(Verb verb, const std::vector<std::string>& paths,
              const Options& options, std::ostream& out, std::ostream& err);

std::string check_catalog();

}  // namespace chaplab
