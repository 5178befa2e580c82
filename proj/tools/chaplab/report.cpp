#include "report.hpp"

#include <yaml-cpp/yaml.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace chaplab {

CheckResult make_result(std::string name, std::string kind, double value,
                        double tolerance) {
  // NaN compares false, so a non-finite measurement always fails.
  const bool pass = std::isfinite(value) && value <= tolerance;
  return {std::move(name), std::move(kind), value, tolerance, pass};
}

bool CheckReport::overall_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::string report_yaml(const CheckReport& report, const RunMetadata& meta) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "report" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "scenario" << YAML::Value << report.scenario;
  out << YAML::Key << "verb" << YAML::Value << report.verb;
  for (const auto& [k, v] : report.fields) {
    out << YAML::Key << k << YAML::Value << v;
  }
  out << YAML::Key << "checks" << YAML::Value << YAML::BeginSeq;
  for (const auto& c : report.checks) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << c.name;
    out << YAML::Key << "kind" << YAML::Value << c.kind;
    out << YAML::Key << "value" << YAML::Value << c.value;
    out << YAML::Key << "tolerance" << YAML::Value << c.tolerance;
    out << YAML::Key << "pass" << YAML::Value << c.pass;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "overall_pass" << YAML::Value << report.overall_pass();
  out << YAML::EndMap;

  out << YAML::Key << "metadata" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "config" << YAML::Value << meta.config_path;
  out << YAML::Key << "seed" << YAML::Value << meta.seed;
  out << YAML::Key << "started" << YAML::Value << meta.started;
  out << YAML::Key << "finished" << YAML::Value << meta.finished;
  out << YAML::Key << "elapsed_seconds" << YAML::Value << meta.elapsed_seconds;
  out << YAML::Key << "outputs" << YAML::Value << YAML::Flow << meta.outputs;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string report_summary(const CheckReport& report) {
  std::ostringstream out;
  out << report.verb << ' ' << report.scenario << ": "
      << (report.overall_pass() ? "PASS" : "FAIL") << '\n';
  for (const auto& c : report.checks) {
    out << "  " << (c.pass ? "pass " : "FAIL ") << std::left << std::setw(28)
        << c.name << " value " << std::scientific << std::setprecision(3)
        << c.value << "  tol " << c.tolerance << '\n';
  }
  return out.str();
}

void write_trajectory_csv(const std::string& path, const ModelInstance& model,
                          const chaplygin::Trajectory& traj,
                          const std::vector<std::string>& quantities) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  std::vector<const Quantity*> qs;
  for (const auto& name : quantities) qs.push_back(model.quantity(name));

  out << "t,tau";
  for (const auto& c : model.columns) out << ',' << c;
  for (const auto& name : quantities) out << ',' << name;
  out << '\n';

  const Clocks clocks =
      model.clocks ? model.clocks(traj) : Clocks{traj.times, traj.times};
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << format_double(clocks.t[i]) << ',' << format_double(clocks.tau[i]);
    const Vec& y = traj.states[i];
    for (Index k = 0; k < y.size(); ++k) out << ',' << format_double(y(k));
    for (const Quantity* q : qs) out << ',' << format_double(q->f(y));
    out << '\n';
  }
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out) throw ConfigError("cannot write '" + path + "'");
}

}  // namespace chaplab
