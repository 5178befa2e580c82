#include "runner.hpp"

#include <algorithm>
#include <chaplygin/chaplygin.hpp>
#include <chaplygin/hamiltonization.hpp>
#include <chaplygin/inertia.hpp>
#include <chaplygin/integrability.hpp>
#include <chaplygin/veselova.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <future>
#include <limits>
#include <map>
#include <sstream>

namespace chaplab {

using namespace chaplygin;
namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string available_checks(const ModelInstance& m) {
  std::string out;
  for (const auto& q : m.quantities) out += (out.empty() ? "" : " ") + q.name;
  for (const auto& c : m.trajectory_checks) out += " " + c.name;
  return out;
}

void validate_checks(const ModelInstance& m,
                     const std::vector<CheckSpec>& checks,
                     const std::string& context) {
  for (const auto& c : checks) {
    if (!m.quantity(c.name) && !m.trajectory_check(c.name)) {
      throw ConfigError(context + "check '" + c.name +
                        "' is not available for model " + m.model +
                        " (available: " + available_checks(m) + ")");
    }
  }
}

// max_t |f(y_t) - f(y_0)| / max(1, |f(y_0)|)
double relative_drift(const Trajectory& traj, const ScalarFunction& f) {
  const double f0 = f(traj.states.front());
  double worst = 0.0;
  for (const Vec& y : traj.states) {
    const double d = std::abs(f(y) - f0) / std::max(1.0, std::abs(f0));
    if (!(d <= worst)) worst = d;  // also propagates NaN
  }
  return worst;
}

std::vector<CheckResult> evaluate_checks(const ModelInstance& m,
                                         const Trajectory& traj,
                                         const std::vector<CheckSpec>& checks,
                                         const std::string& prefix) {
  std::vector<CheckResult> out;
  for (const auto& c : checks) {
    if (const Quantity* q = m.quantity(c.name)) {
      out.push_back(make_result(prefix + c.name, "drift",
                                relative_drift(traj, q->f), c.tolerance));
    } else {
      out.push_back(make_result(prefix + c.name, "trajectory",
                                m.trajectory_check(c.name)->measure(traj),
                                c.tolerance));
    }
  }
  return out;
}

std::vector<std::string> drift_columns(const ModelInstance& m,
                                       const std::vector<CheckSpec>& checks) {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (m.quantity(c.name)) out.push_back(c.name);
  }
  return out;
}

std::string output_path(const Options& options, const std::string& configured,
                        const std::string& fallback) {
  const fs::path p(configured.empty() ? fallback : configured);
  return p.is_absolute() ? p.string()
                         : (fs::path(options.out_dir) / p).string();
}

void prepare_out_dir(const Options& options) {
  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec || !fs::is_directory(options.out_dir)) {
    throw ConfigError("cannot create output directory '" + options.out_dir +
                      "'");
  }
}

Trajectory integrate_model(const ModelInstance& m,
                           const IntegratorConfig& cfg) {
  Trajectory traj = integrate(m.field, m.y0, cfg, m.projector);
  traj.metadata.model = m.model;
  traj.metadata.parameters = m.parameters;
  return traj;
}

struct Timer {
  std::string started = utc_timestamp();
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void finish(RunMetadata& meta) const {
    meta.started = started;
    meta.finished = utc_timestamp();
    meta.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  }
};

std::string seed_text(const Options& options, const ScenarioConfig& cfg) {
  if (options.seed) return std::to_string(*options.seed);
  if (cfg.initial.seed) return std::to_string(*cfg.initial.seed);
  return "none";
}

Outcome finish(const CheckReport& report, RunMetadata meta, const Timer& timer,
               const std::string& report_path) {
  meta.outputs.push_back(report_path);
  timer.finish(meta);
  write_text(report_path, report_yaml(report, meta));
  Outcome out;
  out.exit_code = report.overall_pass() ? kPass : kCheckFailed;
  out.summary = report_summary(report);
  out.report = report;
  return out;
}

template <class F>
Outcome guarded(const std::string& path, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    return {kConfigError, "", path + ": configuration error: " + e.what(), {}};
  } catch (const std::invalid_argument& e) {
    // Parameter and dimension errors raised by the library.
    return {kConfigError, "", path + ": configuration error: " + e.what(), {}};
  } catch (const std::exception& e) {
    return {kCheckFailed, "", path + ": run failed: " + e.what(), {}};
  }
}

// Compare helpers -----------------------------------------------------------

// Second scenario of a derived mapping: the model and parameters follow from
// the first, the integrator and checks may be overridden.
ScenarioConfig derived_second(const CompareConfig& cfg,
                              const std::string& model) {
  ScenarioConfig s = cfg.first;
  s.name = cfg.name + ".second";
  s.model = model;
  s.checks.clear();
  s.trajectory_file.clear();
  s.initial = {};
  if (cfg.second) {
    s.checks = cfg.second->checks;
    s.trajectory_file = cfg.second->trajectory_file;
    if (cfg.second->integrator_given) {
      s.integrator = cfg.second->integrator;
      s.integrator_given = true;
    } else {
      s.integrator_given = false;
    }
  } else {
    s.integrator_given = false;
  }
  return s;
}

struct Leg {
  ModelInstance model;
  Trajectory traj;
  ScenarioConfig cfg;
};

void emit_leg(const Leg& leg, const Options& options, const std::string& name,
              const char* which, RunMetadata& meta) {
  const std::string path = output_path(options, leg.cfg.trajectory_file,
                                       name + "." + which + ".csv");
  write_trajectory_csv(path, leg.model, leg.traj,
                       drift_columns(leg.model, leg.cfg.checks));
  meta.outputs.push_back(path);
}

Outcome compare_body(const std::string& path, const Options& options) {
  Timer timer;
  const CompareConfig cfg = parse_compare(load_file(path), stem_of(path));
  prepare_out_dir(options);

  CheckReport report;
  report.scenario = cfg.name;
  report.verb = "compare";
  report.fields.emplace_back("mapping", mapping_name(cfg.mapping));

  Leg first{build_model(cfg.first, options.seed), {}, cfg.first};
  validate_checks(first.model, cfg.first.checks, "first: ");
  report.fields.emplace_back("first_model", first.model.model);

  std::optional<Leg> second;
  RunMetadata meta;
  meta.config_path = path;
  meta.seed = seed_text(options, cfg.first);

  switch (cfg.mapping) {
    case Mapping::reparametrize: {
      first.traj = integrate_model(first.model, cfg.first.integrator);
      const Reparametrized rp = reparametrize(first.traj, *first.model.params);
      ScenarioConfig sc = derived_second(cfg, "geodesic_tilde");
      if (!sc.integrator_given) {
        // Same number of steps over the mapped clock interval.
        const double steps =
            std::round(cfg.first.integrator.t_end / cfg.first.integrator.step);
        sc.integrator.t_end = rp.clock.taus().back();
        sc.integrator.step = sc.integrator.t_end / steps;
      }
      const Vec y0 = first.model.y0;
      const TildePoint t0 =
          to_tilde({head_half(y0), tail_half(y0)}, *first.model.params);
      second = Leg{build_model_at(sc, join(t0.gamma, t0.p_tilde)), {}, sc};
      validate_checks(second->model, sc.checks, "second: ");
      second->traj = integrate_model(second->model, sc.integrator);
      const ComparisonReport cr =
          compare_trajectories(rp.trajectory, second->traj);
      report.checks.push_back(make_result("discrepancy", "discrepancy",
                                          cr.compared > 0 ? cr.sup : kInf,
                                          cfg.tolerance));
      break;
    }
    case Mapping::fedorov: {
      if (!cfg.first.D) {
        throw ConfigError("mapping fedorov requires first.D");
      }
      const Vec I = first.model.moments;
      const double D = *cfg.first.D;
      first.traj = integrate_model(first.model, cfg.first.integrator);
      ScenarioConfig sc = derived_second(cfg, "classical3d");
      sc.a.reset();
      const Vec y0 = first.model.y0;
      const Veselova3dState v0{y0.head(3), y0.tail(3)};
      sc.moments = fedorov_map_3d(I, D, v0.w, v0.gamma).chaplygin_moments;
      const Classical3dState c0 = fedorov_state(v0, I, D);
      second = Leg{build_model_at(sc, join(c0.k, c0.gamma)), {}, sc};
      validate_checks(second->model, sc.checks, "second: ");
      second->traj = integrate_model(second->model, sc.integrator);
      std::array<double, 4> worst{};
      for (const Vec& y : first.traj.states) {
        const FedorovReport fr = fedorov_check({y.head(3), y.tail(3)}, I, D);
        const auto& rel = cfg.literal_relation ? fr.literal : fr.torus;
        for (int i = 0; i < 4; ++i) worst[i] = std::max(worst[i], rel[i]);
      }
      report.fields.emplace_back("relation",
                                 cfg.literal_relation ? "literal" : "torus");
      for (int i = 0; i < 4; ++i) {
        report.checks.push_back(
            make_result("discrepancy.F" + std::to_string(i + 1), "relation",
                        worst[i], cfg.tolerance));
      }
      break;
    }
    case Mapping::gauss: {
      first.traj = integrate_model(first.model, cfg.first.integrator);
      ScenarioConfig sc = derived_second(cfg, "ellipsoid");
      sc.D.reset();
      const Vec a = *cfg.first.a;
      const Vec y0 = first.model.y0;
      second = Leg{
          build_model_at(sc, join(ellipsoid_point_from_normal(head_half(y0), a),
                                  tail_half(y0))),
          {},
          sc};
      validate_checks(second->model, sc.checks, "second: ");
      second->traj = integrate_model(second->model, sc.integrator);
      Trajectory image = second->traj;
      for (Vec& y : image.states) y = gauss_map(head_half(y), a);
      Trajectory target = first.traj;
      for (Vec& y : target.states) y = head_half(y);
      CompareOptions opts;
      opts.matching = Matching::curve;
      const ComparisonReport cr = compare_trajectories(image, target, opts);
      report.checks.push_back(make_result("discrepancy", "discrepancy",
                                          cr.compared > 0 ? cr.sup : kInf,
                                          cfg.tolerance));
      break;
    }
    case Mapping::foliation: {
      if (cfg.second && cfg.second->integrator_given) {
        throw ConfigError(
            "mapping foliation integrates both flows with first.integrator");
      }
      const Vec y0 = first.model.y0;
      FoliationReport fr =
          foliation_check({head_half(y0), tail_half(y0)}, *first.model.params,
                          cfg.first.integrator);
      first.traj = std::move(fr.chaplygin);
      ScenarioConfig sc = derived_second(cfg, "veselova_reduced");
      second = Leg{build_model_at(sc, y0), std::move(fr.veselova), sc};
      validate_checks(second->model, sc.checks, "second: ");
      for (const auto& q : fr.quantities) {
        const std::string name = q.name == "K" ? "K_tilde" : q.name;
        report.checks.push_back(make_result("chaplygin." + name, "drift",
                                            q.chaplygin_drift, cfg.tolerance));
        report.checks.push_back(make_result("veselova." + name, "drift",
                                            q.veselova_drift, cfg.tolerance));
      }
      break;
    }
    case Mapping::identity: {
      first.traj = integrate_model(first.model, cfg.first.integrator);
      const ScenarioConfig& sc = *cfg.second;
      second = Leg{build_model(sc, options.seed), {}, sc};
      validate_checks(second->model, sc.checks, "second: ");
      if (second->model.y0.size() != first.model.y0.size()) {
        throw ConfigError("mapping identity needs equal state dimensions");
      }
      second->traj = integrate_model(second->model, sc.integrator);
      CompareOptions opts;
      opts.matching = cfg.matching;
      const ComparisonReport cr =
          compare_trajectories(first.traj, second->traj, opts);
      report.checks.push_back(make_result("discrepancy", "discrepancy",
                                          cr.compared > 0 ? cr.sup : kInf,
                                          cfg.tolerance));
      break;
    }
  }
  report.fields.emplace_back("second_model", second->model.model);

  for (auto& c :
       evaluate_checks(first.model, first.traj, cfg.first.checks, "first.")) {
    report.checks.push_back(std::move(c));
  }
  for (auto& c : evaluate_checks(second->model, second->traj,
                                 second->cfg.checks, "second.")) {
    report.checks.push_back(std::move(c));
  }

  emit_leg(first, options, cfg.name, "first", meta);
  emit_leg(*second, options, cfg.name, "second", meta);
  return finish(
      report, std::move(meta), timer,
      output_path(options, cfg.report_file, cfg.name + ".report.yaml"));
}

std::string scenario_name(Verb verb, const std::string& path) {
  const YAML::Node node = load_file(path);
  if (node.IsMap() && node["name"] && node["name"].IsScalar()) {
    return node["name"].as<std::string>();
  }
  (void)verb;
  return stem_of(path);
}

}  // namespace

Outcome run_scenario(const std::string& path, const Options& options) {
  return guarded(path, [&]() {
    Timer timer;
    const ScenarioConfig cfg = parse_scenario(load_file(path), stem_of(path));
    const ModelInstance m = build_model(cfg, options.seed);
    validate_checks(m, cfg.checks, "");
    prepare_out_dir(options);

    const Trajectory traj = integrate_model(m, cfg.integrator);
    CheckReport report;
    report.scenario = cfg.name;
    report.verb = "run";
    report.fields.emplace_back("model", m.model);
    for (const auto& [k, v] : m.parameters) report.fields.emplace_back(k, v);
    report.fields.emplace_back("samples", std::to_string(traj.size()));
    report.checks = evaluate_checks(m, traj, cfg.checks, "");

    RunMetadata meta;
    meta.config_path = path;
    meta.seed = seed_text(options, cfg);
    const std::string csv =
        output_path(options, cfg.trajectory_file, cfg.name + ".csv");
    write_trajectory_csv(csv, m, traj, drift_columns(m, cfg.checks));
    meta.outputs.push_back(csv);
    return finish(
        report, std::move(meta), timer,
        output_path(options, cfg.report_file, cfg.name + ".report.yaml"));
  });
}

Outcome run_compare(const std::string& path, const Options& options) {
  return guarded(path, [&]() { return compare_body(path, options); });
}

int run_batch(Verb verb, const std::vector<std::string>& paths,
              const Options& options, std::ostream& out, std::ostream& err) {
  std::vector<Outcome> outcomes(paths.size());
  std::vector<bool> launch(paths.size(), true);
  std::map<std::string, std::size_t> owner;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    outcomes[i] = guarded(paths[i], [&]() {
      const std::string name = scenario_name(verb, paths[i]);
      const auto [it, fresh] = owner.emplace(name, i);
      if (!fresh) {
        throw ConfigError("scenario name '" + name + "' is also used by " +
                          paths[it->second] + "; outputs would collide");
      }
      return Outcome{};
    });
    launch[i] = outcomes[i].exit_code == kPass;
  }

  std::vector<std::future<Outcome>> futures(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (!launch[i]) continue;
    futures[i] = std::async(std::launch::async, [verb, &paths, &options, i]() {
      return verb == Verb::run ? run_scenario(paths[i], options)
                               : run_compare(paths[i], options);
    });
  }

  int worst = kPass;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (launch[i]) outcomes[i] = futures[i].get();
    const Outcome& o = outcomes[i];
    if (!options.quiet && !o.summary.empty()) out << o.summary;
    if (!o.error.empty()) err << o.error << '\n';
    worst = std::max(worst, o.exit_code);
  }
  return worst;
}

std::string check_catalog() {
  struct Row {
    const char* name;
    const char* models;
    const char* meaning;
  };
  static const Row rows[] = {
      {"H",
       "chaplygin_cotangent veselova_reduced(D) geodesic_tilde "
       "chaplygin_homogeneous",
       "drift of the reduced energy"},
      {"K", "cotangent models, geodesic_tilde",
       "drift of |gamma|^2|p|^2 - (gamma,p)^2"},
      {"phi1", "cotangent models, 3-D models, chaplygin_full",
       "drift of |gamma|^2"},
      {"phi2", "cotangent models", "drift of (gamma, p)"},
      {"psi1 psi2", "geodesic_tilde", "drift of |gamma|^2 and (gamma, p~)"},
      {"H_star H_veselova K_tilde",
       "chaplygin_cotangent veselova_reduced(D) geodesic_tilde",
       "drift of the tilde-chart Hamiltonians and momentum integral"},
      {"F_0 .. F_<n-2>", "as above, a strictly increasing",
       "drift of the Staeckel integrals"},
      {"f_ij", "as above",
       "drift of gamma_i p~_j - gamma_j p~_i (conserved when a_i = a_j)"},
      {"lagrange_ij", "as above, i < j < n",
       "drift of (gamma_i p_j - gamma_j p_i)^2 / (gamma, A^-1 gamma)"},
      {"energy momentum_norm", "chaplygin_full",
       "drift of the energy and of |gamma ^ k|"},
      {"F1 F2 F3 F4", "classical3d", "drift of the classical integrals"},
      {"f1 f2 f3 f4 constraint", "veselova3d",
       "drift of the Veselova integrals and (w, gamma)"},
      {"ellipsoid tangency speed2", "ellipsoid",
       "drift of (x,Ax), (v,Ax), |v|^2"},
      {"manifold", "cotangent models, geodesic_tilde",
       "max | |gamma|^2 - 1 | and |(gamma, p)| along the run"},
      {"liouville", "chaplygin_cotangent classical3d veselova3d",
       "max |div(mu X)| over the sampled states"},
      {"almost_symplectic", "chaplygin_cotangent",
       "max residual of i_X omega = dH over the sampled states"},
      {"omega_constant", "chaplygin_homogeneous", "max |omega(t) - omega(0)|"},
      {"great_circle", "chaplygin_homogeneous",
       "max distance of gamma(t) to the analytic great circle"},
      {"on_ellipsoid", "ellipsoid", "max |(x,Ax) - 1| and |(v,Ax)|"},
  };
  std::ostringstream out;
  out << "Checks for `run` (drift values are relative: max |Q - Q0| / max(1, "
         "|Q0|)):\n";
  for (const auto& r : rows) {
    out << "  " << r.name << "\n      models: " << r.models << "\n      "
        << r.meaning << '\n';
  }
  out << "\nCompare mappings (tolerance applies to the discrepancy checks):\n"
         "  reparametrize  chaplygin_cotangent -> geodesic_tilde, sup state "
         "distance on the tau clock\n"
         "  fedorov        veselova3d -> classical3d, |F_i - f_i| (relation: "
         "literal) or torus relations\n"
         "  gauss          veselova_reduced -> ellipsoid, curve distance of "
         "the Gauss image\n"
         "  foliation      chaplygin_cotangent and veselova_reduced, drift of "
         "shared integrals on both\n"
         "  identity       any two models with equal state size, time_map or "
         "curve distance\n";
  return out.str();
}

}  // namespace chaplab
