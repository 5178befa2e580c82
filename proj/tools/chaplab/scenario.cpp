#include "scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>

namespace chaplab {

namespace {

const std::vector<std::string>& models() {
  static const std::vector<std::string> list = {
      "chaplygin_cotangent", "chaplygin_full", "chaplygin_homogeneous",
      "classical3d",         "geodesic_tilde", "veselova_reduced",
      "veselova3d",          "ellipsoid"};
  return list;
}

std::string where(const std::string& context, const std::string& key) {
  return context.empty() ? key : context + "." + key;
}

void require_map(const YAML::Node& node, const std::string& context) {
  if (!node.IsMap()) {
    throw ConfigError((context.empty() ? std::string("config") : context) +
                      ": expected a mapping of keys");
  }
}

void strict_keys(const YAML::Node& node, const std::set<std::string>& allowed,
                 const std::string& context) {
  require_map(node, context);
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      std::ostringstream msg;
      msg << "unknown key '" << where(context, key) << "' (allowed:";
      for (const auto& k : allowed) msg << ' ' << k;
      msg << ')';
      throw ConfigError(msg.str());
    }
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& what) {
  if (!node.IsScalar()) throw ConfigError(what + ": expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(what + ": cannot parse '" + node.Scalar() + "'");
  }
}

Vec vector_of(const YAML::Node& node, const std::string& what) {
  if (!node.IsSequence() || node.size() == 0) {
    throw ConfigError(what + ": expected a non-empty list of numbers");
  }
  Vec v(static_cast<Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    v(static_cast<Index>(i)) =
        scalar<double>(node[i], what + "[" + std::to_string(i) + "]");
  }
  return v;
}

double positive(const YAML::Node& node, const std::string& what) {
  const double v = scalar<double>(node, what);
  if (!(v > 0.0)) throw ConfigError(what + " must be > 0");
  return v;
}

chaplygin::IntegratorConfig parse_integrator(const YAML::Node& node,
                                             const std::string& context) {
  strict_keys(node,
              {"method", "step", "tolerance", "t_end", "project", "stride",
               "min_step", "max_steps"},
              context);
  chaplygin::IntegratorConfig cfg;
  if (node["method"]) {
    const auto m = scalar<std::string>(node["method"], context + ".method");
    if (m == "rk4") {
      cfg.method = chaplygin::Method::rk4;
    } else if (m == "rkf45") {
      cfg.method = chaplygin::Method::rkf45;
    } else {
      throw ConfigError(context + ".method: expected rk4 or rkf45, got '" + m +
                        "'");
    }
  }
  if (node["step"]) cfg.step = positive(node["step"], context + ".step");
  if (node["tolerance"]) {
    cfg.tolerance = positive(node["tolerance"], context + ".tolerance");
  }
  if (node["t_end"]) cfg.t_end = positive(node["t_end"], context + ".t_end");
  if (node["project"]) {
    cfg.project = scalar<bool>(node["project"], context + ".project");
  }
  if (node["stride"]) {
    const auto s = scalar<long long>(node["stride"], context + ".stride");
    if (s < 1) throw ConfigError(context + ".stride must be >= 1");
    cfg.stride = static_cast<Index>(s);
  }
  if (node["min_step"]) {
    cfg.min_step = positive(node["min_step"], context + ".min_step");
  }
  if (node["max_steps"]) {
    const auto s = scalar<long long>(node["max_steps"], context + ".max_steps");
    if (s < 1) throw ConfigError(context + ".max_steps must be >= 1");
    cfg.max_steps = static_cast<Index>(s);
  }
  try {
    chaplygin::validate(cfg);
  } catch (const std::exception& e) {
    throw ConfigError(context + ": " + e.what());
  }
  return cfg;
}

std::vector<CheckSpec> parse_checks(const YAML::Node& node,
                                    const std::string& context) {
  if (!node.IsSequence()) {
    throw ConfigError(context + ": expected a list of {name, tolerance}");
  }
  std::vector<CheckSpec> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string ctx = context + "[" + std::to_string(i) + "]";
    strict_keys(node[i], {"name", "tolerance"}, ctx);
    if (!node[i]["name"] || !node[i]["tolerance"]) {
      throw ConfigError(ctx + ": both name and tolerance are required");
    }
    CheckSpec c;
    c.name = scalar<std::string>(node[i]["name"], ctx + ".name");
    c.tolerance = positive(node[i]["tolerance"], ctx + ".tolerance");
    if (!seen.insert(c.name).second) {
      throw ConfigError(ctx + ": duplicate check '" + c.name + "'");
    }
    out.push_back(std::move(c));
  }
  return out;
}

InitialState parse_initial(const YAML::Node& node, const std::string& context) {
  strict_keys(node,
              {"gamma", "p", "p_tilde", "k", "w", "x", "v", "seed", "p_scale"},
              context);
  InitialState init;
  for (const char* key : {"gamma", "p", "p_tilde", "k", "w", "x", "v"}) {
    if (node[key]) {
      init.vectors[key] = vector_of(node[key], where(context, key));
    }
  }
  if (node["seed"]) {
    init.seed = scalar<std::uint64_t>(node["seed"], context + ".seed");
  }
  if (node["p_scale"]) {
    init.p_scale = positive(node["p_scale"], context + ".p_scale");
  }
  return init;
}

ScenarioConfig parse_scenario_keys(const YAML::Node& node,
                                   const std::string& fallback_name,
                                   const std::set<std::string>& allowed,
                                   const std::string& context) {
  strict_keys(node, allowed, context);
  ScenarioConfig cfg;
  cfg.name =
      node["name"] ? scalar<std::string>(node["name"], "name") : fallback_name;
  if (!node["model"])
    throw ConfigError(where(context, "model") + " is required");
  cfg.model = scalar<std::string>(node["model"], where(context, "model"));
  if (!known_model(cfg.model)) {
    throw ConfigError("unknown model '" + cfg.model +
                      "' (known: " + model_list() + ")");
  }
  if (node["a"]) cfg.a = vector_of(node["a"], where(context, "a"));
  if (node["D"]) cfg.D = scalar<double>(node["D"], where(context, "D"));
  if (node["s"]) cfg.s = scalar<double>(node["s"], where(context, "s"));
  if (node["moments"]) {
    cfg.moments = vector_of(node["moments"], where(context, "moments"));
  }
  if (node["n"]) {
    const auto n = scalar<long long>(node["n"], where(context, "n"));
    if (n < 2) throw ConfigError(where(context, "n") + " must be >= 2");
    cfg.n = static_cast<Index>(n);
  }
  if (cfg.a) {
    if (cfg.n != 0 && cfg.n != cfg.a->size()) {
      throw ConfigError(where(context, "n") +
                        " disagrees with the length of a");
    }
    cfg.n = cfg.a->size();
  }
  if (node["initial"]) {
    cfg.initial = parse_initial(node["initial"], where(context, "initial"));
  }
  if (node["integrator"]) {
    cfg.integrator =
        parse_integrator(node["integrator"], where(context, "integrator"));
    cfg.integrator_given = true;
  }
  if (node["checks"]) {
    cfg.checks = parse_checks(node["checks"], where(context, "checks"));
  }
  if (node["output"]) {
    const std::string ctx = where(context, "output");
    strict_keys(node["output"], {"trajectory", "report"}, ctx);
    if (node["output"]["trajectory"]) {
      cfg.trajectory_file = scalar<std::string>(node["output"]["trajectory"],
                                                ctx + ".trajectory");
    }
    if (node["output"]["report"]) {
      cfg.report_file =
          scalar<std::string>(node["output"]["report"], ctx + ".report");
    }
  }
  return cfg;
}

const std::set<std::string> kScenarioKeys = {
    "name",    "model",   "n",          "a",      "D",     "s",
    "moments", "initial", "integrator", "checks", "output"};

}  // namespace

std::string model_list() {
  std::string out;
  for (const auto& m : models()) out += (out.empty() ? "" : ", ") + m;
  return out;
}

bool known_model(const std::string& model) {
  const auto& list = models();
  return std::find(list.begin(), list.end(), model) != list.end();
}

const char* mapping_name(Mapping m) {
  switch (m) {
    case Mapping::reparametrize:
      return "reparametrize";
    case Mapping::identity:
      return "identity";
    case Mapping::fedorov:
      return "fedorov";
    case Mapping::gauss:
      return "gauss";
    case Mapping::foliation:
      return "foliation";
  }
  return "?";
}

std::optional<std::pair<std::string, std::string>> expected_models(Mapping m) {
  switch (m) {
    case Mapping::reparametrize:
      return std::pair<std::string, std::string>{"chaplygin_cotangent",
                                                 "geodesic_tilde"};
    case Mapping::fedorov:
      return std::pair<std::string, std::string>{"veselova3d", "classical3d"};
    case Mapping::gauss:
      return std::pair<std::string, std::string>{"veselova_reduced",
                                                 "ellipsoid"};
    case Mapping::foliation:
      return std::pair<std::string, std::string>{"chaplygin_cotangent",
                                                 "veselova_reduced"};
    case Mapping::identity:
      break;
  }
  return std::nullopt;
}

ScenarioConfig parse_scenario(const YAML::Node& node,
                              const std::string& fallback_name) {
  return parse_scenario_keys(node, fallback_name, kScenarioKeys, "");
}

CompareConfig parse_compare(const YAML::Node& node,
                            const std::string& fallback_name) {
  strict_keys(node,
              {"name", "mapping", "tolerance", "matching", "relation", "first",
               "second", "output"},
              "");
  CompareConfig cfg;
  cfg.name =
      node["name"] ? scalar<std::string>(node["name"], "name") : fallback_name;
  if (!node["mapping"] || !node["tolerance"] || !node["first"]) {
    throw ConfigError("compare config requires mapping, tolerance and first");
  }
  const auto m = scalar<std::string>(node["mapping"], "mapping");
  if (m == "reparametrize") {
    cfg.mapping = Mapping::reparametrize;
  } else if (m == "identity") {
    cfg.mapping = Mapping::identity;
  } else if (m == "fedorov") {
    cfg.mapping = Mapping::fedorov;
  } else if (m == "gauss") {
    cfg.mapping = Mapping::gauss;
  } else if (m == "foliation") {
    cfg.mapping = Mapping::foliation;
  } else {
    throw ConfigError(
        "mapping: expected reparametrize, identity, fedorov, "
        "gauss or foliation, got '" +
        m + "'");
  }
  cfg.tolerance = positive(node["tolerance"], "tolerance");
  if (node["matching"]) {
    if (cfg.mapping != Mapping::identity) {
      throw ConfigError("matching is only configurable for mapping identity");
    }
    const auto s = scalar<std::string>(node["matching"], "matching");
    if (s == "time_map") {
      cfg.matching = chaplygin::Matching::time_map;
    } else if (s == "curve") {
      cfg.matching = chaplygin::Matching::curve;
    } else {
      throw ConfigError("matching: expected time_map or curve");
    }
  }
  if (node["relation"]) {
    if (cfg.mapping != Mapping::fedorov) {
      throw ConfigError("relation is only meaningful for mapping fedorov");
    }
    const auto s = scalar<std::string>(node["relation"], "relation");
    if (s == "literal") {
      cfg.literal_relation = true;
    } else if (s == "torus") {
      cfg.literal_relation = false;
    } else {
      throw ConfigError("relation: expected literal or torus");
    }
  }
  cfg.first = parse_scenario_keys(node["first"], cfg.name + ".first",
                                  kScenarioKeys, "first");
  const auto expected = expected_models(cfg.mapping);
  if (expected && cfg.first.model != expected->first) {
    throw ConfigError(std::string("mapping ") + mapping_name(cfg.mapping) +
                      " requires first.model " + expected->first);
  }
  if (node["second"]) {
    if (expected) {
      // Derived mappings build the second state and parameters themselves;
      // only the integrator and the check list may be given.
      YAML::Node second = YAML::Clone(node["second"]);
      require_map(second, "second");
      if (!second["model"]) second["model"] = expected->second;
      cfg.second = parse_scenario_keys(
          second, cfg.name + ".second",
          {"model", "integrator", "checks", "output"}, "second");
      if (cfg.second->model != expected->second) {
        throw ConfigError(std::string("mapping ") + mapping_name(cfg.mapping) +
                          " requires second.model " + expected->second);
      }
    } else {
      cfg.second = parse_scenario_keys(node["second"], cfg.name + ".second",
                                       kScenarioKeys, "second");
    }
  } else if (!expected) {
    throw ConfigError("mapping identity requires a second scenario");
  }
  if (node["output"]) {
    strict_keys(node["output"], {"report"}, "output");
    if (node["output"]["report"]) {
      cfg.report_file =
          scalar<std::string>(node["output"]["report"], "output.report");
    }
  }
  return cfg;
}

YAML::Node load_file(const std::string& path) {
  try {
    return YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError("cannot read config file '" + path + "'");
  } catch (const YAML::Exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

}  // namespace chaplab
