#pragma once

#include <chaplygin/inertia.hpp>
#include <chaplygin/numerics.hpp>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scenario.hpp"

namespace chaplab {

// A scalar function of the state whose drift along the flow can be checked.
struct Quantity {
  std::string name;
  chaplygin::ScalarFunction f;
};

// A model-specific check reduced to one non-negative number per trajectory.
struct TrajectoryCheck {
  std::string name;
  std::function<double(const chaplygin::Trajectory&)> measure;
};

struct Clocks {
  std::vector<double> t;
  std::vector<double> tau;
};

struct ModelInstance {
  std::string model;
  Index n = 0;
  chaplygin::VectorField field;
  chaplygin::Projector projector;
  Vec y0;
  std::vector<std::string> columns;
  std::vector<Quantity> quantities;
  std::vector<TrajectoryCheck> trajectory_checks;
  std::function<Clocks(const chaplygin::Trajectory&)> clocks;
  std::map<std::string, std::string> parameters;

  // Typed parameters kept for the compare mappings.
  std::optional<chaplygin::ChaplyginParams> params;
  Vec a;
  double D = 0.0;
  double s = 0.0;
  Vec moments;

  const Quantity* quantity(const std::string& name) const;
  const TrajectoryCheck* trajectory_check(const std::string& name) const;
};

// Throws ConfigError for inadmissible parameters or initial data.
ModelInstance build_model(const ScenarioConfig& cfg,
                          std::optional<std::uint64_t> seed_override);

// Same model and parameters as `cfg`, started from an explicit state.
ModelInstance build_model_at(const ScenarioConfig& cfg, const Vec& y0);

std::string format_double(double x);

}  // namespace chaplab
