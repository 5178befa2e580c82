#pragma once

#include <yaml-cpp/yaml.h>

#include <chaplygin/numerics.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chaplab {

using chaplygin::Index;
using chaplygin::Vec;

// Any problem with the configuration itself; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CheckSpec {
  std::string name;
  double tolerance = 0.0;
};

struct InitialState {
  std::map<std::string, Vec> vectors;  // gamma, p, p_tilde, k, w, x, v
  std::optional<std::uint64_t> seed;
  double p_scale = 1.0;
};

struct ScenarioConfig {
  std::string name;
  std::string model;
  Index n = 0;
  std::optional<Vec> a;
  std::optional<double> D;
  std::optional<double> s;
  std::optional<Vec> moments;
  InitialState initial;
  chaplygin::IntegratorConfig integrator;
  bool integrator_given = false;
  std::vector<CheckSpec> checks;
  std::string trajectory_file;  // relative to --out unless absolute
  std::string report_file;
};

enum class Mapping { reparametrize, identity, fedorov, gauss, foliation };

struct CompareConfig {
  std::string name;
  Mapping mapping = Mapping::identity;
  double tolerance = 0.0;
  chaplygin::Matching matching = chaplygin::Matching::time_map;
  bool literal_relation = true;  // fedorov only
  ScenarioConfig first;
  std::optional<ScenarioConfig> second;
  std::string report_file;
};

std::string model_list();
bool known_model(const std::string& model);
const char* mapping_name(Mapping m);
// (first, second) models a derived mapping works between; none for identity.
std::optional<std::pair<std::string, std::string>> expected_models(Mapping m);

// `fallback_name` is used when the file has no `name` key.
ScenarioConfig parse_scenario(const YAML::Node& node,
                              const std::string& fallback_name);
CompareConfig parse_compare(const YAML::Node& node,
                            const std::string& fallback_name);
YAML::Node load_file(const std::string& path);
std::string stem_of(const std::string& path);

}  // namespace chaplab
