#pragma once

#include <map>
#include <string>
#include <vector>

#include "model.hpp"

namespace chaplab {

struct CheckResult {
  std::string name;
  std::string kind;  // drift | trajectory | discrepancy | relation
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

CheckResult make_result(std::string name, std::string kind, double value,
                        double tolerance);

struct CheckReport {
  std::string scenario;
  std::string verb;                                         // run | compare
  std::vector<std::pair<std::string, std::string>> fields;  // model, mapping...
  std::vector<CheckResult> checks;

  bool overall_pass() const;
};

// Kept apart from the report so that the report body is reproducible.
struct RunMetadata {
  std::string config_path;
  std::string seed;
  std::string started;
  std::string finished;
  double elapsed_seconds = 0.0;
  std::vector<std::string> outputs;
};

std::string utc_timestamp();

std::string report_yaml(const CheckReport& report, const RunMetadata& meta);
std::string report_summary(const CheckReport& report);

// Header row t, tau, state columns, then one column per quantity.
void write_trajectory_csv(const std::string& path, const ModelInstance& model,
                          const chaplygin::Trajectory& traj,
                          const std::vector<std::string>& quantities);
void write_text(const std::string& path, const std::string& text);

}  // namespace chaplab
