#include "model.hpp"

#include <algorithm>
#include <chaplygin/chaplygin.hpp>
#include <chaplygin/errors.hpp>
#include <chaplygin/hamiltonization.hpp>
#include <chaplygin/integrability.hpp>
#include <chaplygin/veselova.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

namespace chaplab {

using namespace chaplygin;

namespace {

std::string join_list(const Vec& v) {
  std::string out = "[";
  for (Index i = 0; i < v.size(); ++i) {
    out += (i ? ", " : "") + format_double(v(i));
  }
  return out + "]";
}

std::string pair_name(const char* prefix, Index i, Index j) {
  return std::string(prefix) + "_" + std::to_string(i + 1) +
         std::to_string(j + 1);
}

// Keys that a model does not use are rejected rather than ignored.
void allow_only(const ScenarioConfig& cfg, std::set<std::string> used) {
  const auto reject = [&](bool present, const char* key) {
    if (present && !used.count(key)) {
      throw ConfigError(std::string("key '") + key + "' is not used by model " +
                        cfg.model);
    }
  };
  reject(cfg.a.has_value(), "a");
  reject(cfg.D.has_value(), "D");
  reject(cfg.s.has_value(), "s");
  reject(cfg.moments.has_value(), "moments");
}

const Vec& need_a(const ScenarioConfig& cfg) {
  if (!cfg.a) throw ConfigError("model " + cfg.model + " requires a");
  return *cfg.a;
}

double need_D(const ScenarioConfig& cfg) {
  if (!cfg.D) throw ConfigError("model " + cfg.model + " requires D");
  return *cfg.D;
}

Vec need_moments(const ScenarioConfig& cfg) {
  if (!cfg.moments) {
    throw ConfigError("model " + cfg.model + " requires moments");
  }
  if (cfg.moments->size() != 3) {
    throw ConfigError("moments: expected 3 principal values");
  }
  for (Index i = 0; i < 3; ++i) {
    if (!((*cfg.moments)(i) > 0.0)) {
      throw ConfigError("moments: I_" + std::to_string(i + 1) +
                        " violates I_i > 0");
    }
  }
  return *cfg.moments;
}

CotangentPoint split(const Vec& y) { return {head_half(y), tail_half(y)}; }

double worst_over(const Trajectory& traj,
                  const std::function<double(const Vec&)>& f) {
  double worst = 0.0;
  for (const Vec& y : traj.states) worst = std::max(worst, f(y));
  return worst;
}

void add_cotangent_basics(ModelInstance& m) {
  m.quantities.push_back(
      {"phi1", [](const Vec& y) { return head_half(y).squaredNorm(); }});
  m.quantities.push_back(
      {"phi2", [](const Vec& y) { return head_half(y).dot(tail_half(y)); }});
  m.trajectory_checks.push_back({"manifold", [](const Trajectory& traj) {
                                   return worst_over(traj, [](const Vec& y) {
                                     const CotangentPoint pt = split(y);
                                     return std::max(
                                         std::abs(constraint_phi1_defect(pt)),
                                         std::abs(constraint_phi2(pt)));
                                   });
                                 }});
}

// Quantities defined through the tilde chart; `to_t` maps the state to
// (gamma, p~).
void add_tilde_quantities(ModelInstance& m, const ChaplyginParams& params,
                          std::function<TildePoint(const Vec&)> to_t) {
  const Vec a = params.a();
  const double D = params.D();
  m.quantities.push_back({"H_star", [=](const Vec& y) {
                            return hamiltonian_star(to_t(y), params);
                          }});
  m.quantities.push_back({"H_veselova", [=](const Vec& y) {
                            return veselova_hamiltonian(to_t(y), a, D);
                          }});
  m.quantities.push_back({"K_tilde", [=](const Vec& y) {
                            return momentum_K_tilde(to_t(y), a, D);
                          }});
  bool chart = true;
  try {
    require_chart_params(a);
  } catch (const ParameterError&) {
    chart = false;
  }
  if (chart) {
    for (Index k = 0; k + 1 < a.size(); ++k) {
      m.quantities.push_back({"F_" + std::to_string(k), [=](const Vec& y) {
                                return staeckel_integrals(to_t(y), a, D)(k);
                              }});
    }
  }
  for (Index i = 0; i < a.size(); ++i) {
    for (Index j = i + 1; j < a.size(); ++j) {
      // Deliberately unchecked: conservation needs a_i = a_j, and the
      // negative control relies on being able to ask for it anyway.
      m.quantities.push_back({pair_name("f", i, j), [=](const Vec& y) {
                                return linear_integral_unchecked(to_t(y), i, j);
                              }});
    }
  }
}

void add_lagrange_quantities(ModelInstance& m, const ChaplyginParams& params,
                             std::function<CotangentPoint(const Vec&)> to_c) {
  const Vec a = params.a();
  for (Index i = 0; i + 1 < a.size(); ++i) {
    for (Index j = i + 1; j + 1 < a.size(); ++j) {
      m.quantities.push_back({pair_name("lagrange", i, j), [=](const Vec& y) {
                                const CotangentPoint pt = to_c(y);
                                const double l = pt.gamma(i) * pt.p(j) -
                                                 pt.gamma(j) * pt.p(i);
                                return l * l / quadratic_q(pt.gamma, a);
                              }});
    }
  }
}

std::vector<std::string> names(const char* prefix, Index n) {
  std::vector<std::string> out;
  for (Index i = 0; i < n; ++i) {
    out.push_back(std::string(prefix) + "_" + std::to_string(i + 1));
  }
  return out;
}

std::vector<std::string> concat(std::vector<std::string> a,
                                const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Clocks same_clock(const Trajectory& traj) { return {traj.times, traj.times}; }

ChaplyginParams chaplygin_params(const ScenarioConfig& cfg) {
  try {
    return ChaplyginParams(need_a(cfg), need_D(cfg));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void setup_chaplygin_cotangent(ModelInstance& m, const ScenarioConfig& cfg) {
  allow_only(cfg, {"a", "D"});
  const ChaplyginParams params = chaplygin_params(cfg);
  m.params = params;
  m.field = cotangent_field(params);
  m.projector = project_cotangent;
  m.columns = concat(names("gamma", m.n), names("p", m.n));
  add_cotangent_basics(m);
  m.quantities.push_back({"H", [params](const Vec& y) {
                            return hamiltonian_closed(split(y), params);
                          }});
  m.quantities.push_back(
      {"K", [](const Vec& y) { return momentum_K(split(y)); }});
  add_tilde_quantities(
      m, params, [params](const Vec& y) { return to_tilde(split(y), params); });
  add_lagrange_quantities(m, params, split);
  const Index n = m.n;
  m.trajectory_checks.push_back(
      {"liouville", [params, n](const Trajectory& traj) {
         const Vec a = params.a();
         LiouvilleInputs in;
         in.field = cotangent_field(params);
         in.density = [a](const Vec& y) {
           return measure_density(head_half(y), a);
         };
         in.density_gradient = [a, n](const Vec& y) {
           return join(measure_density_gradient(head_half(y), a), Vec::Zero(n));
         };
         in.divergence = [params](const Vec& y) {
           return divergence_formula(split(y), params);
         };
         return liouville_check(in, traj.states).max_abs;
       }});
  m.trajectory_checks.push_back(
      {"almost_symplectic", [params](const Trajectory& traj) {
         return worst_over(traj, [&](const Vec& y) {
           try {
             return almost_symplectic_check(split(y), params);
           } catch (const DomainError&) {
             return std::numeric_limits<double>::infinity();
           }
         });
       }});
  m.clocks = [params](const Trajectory& traj) {
    return Clocks{traj.times, reparametrize(traj, params).clock.taus()};
  };
}

void setup_veselova_reduced(ModelInstance& m, const ScenarioConfig& cfg) {
  allow_only(cfg, {"a", "D"});
  const Vec a = need_a(cfg);
  if (!(a.array() > 0.0).all()) throw ConfigError("a: violates a_i > 0");
  m.field = veselova_field(a);
  m.projector = project_cotangent;
  m.columns = concat(names("gamma", m.n), names("p", m.n));
  add_cotangent_basics(m);
  m.quantities.push_back(
      {"K", [](const Vec& y) { return momentum_K(split(y)); }});
  if (cfg.D) {
    const ChaplyginParams params = chaplygin_params(cfg);
    m.params = params;
    m.quantities.push_back({"H", [params](const Vec& y) {
                              return hamiltonian_closed(split(y), params);
                            }});
    add_tilde_quantities(m, params, [params](const Vec& y) {
      return to_tilde(split(y), params);
    });
    add_lagrange_quantities(m, params, split);
  }
  m.clocks = same_clock;
}

void setup_geodesic_tilde(ModelInstance& m, const ScenarioConfig& cfg) {
  allow_only(cfg, {"a", "D"});
  const ChaplyginParams params = chaplygin_params(cfg);
  m.params = params;
  m.field = geodesic_field(params);
  m.projector = project_cotangent;
  m.columns = concat(names("gamma", m.n), names("p_tilde", m.n));
  m.quantities.push_back(
      {"psi1", [](const Vec& y) { return head_half(y).squaredNorm(); }});
  m.quantities.push_back(
      {"psi2", [](const Vec& y) { return head_half(y).dot(tail_half(y)); }});
  m.trajectory_checks.push_back({"manifold", [](const Trajectory& traj) {
                                   return worst_over(traj, [](const Vec& y) {
                                     const CotangentPoint pt = split(y);
                                     return std::max(
                                         std::abs(constraint_phi1_defect(pt)),
                                         std::abs(constraint_phi2(pt)));
                                   });
                                 }});
  const auto tilde = [](const Vec& y) {
    return TildePoint{head_half(y), tail_half(y)};
  };
  m.quantities.push_back({"H", [params, tilde](const Vec& y) {
                            return hamiltonian_closed(
                                from_tilde(tilde(y), params), params);
                          }});
  m.quantities.push_back({"K", [params, tilde](const Vec& y) {
                            return momentum_K(from_tilde(tilde(y), params));
                          }});
  add_tilde_quantities(m, params, tilde);
  add_lagrange_quantities(m, params, [params, tilde](const Vec& y) {
    return from_tilde(tilde(y), params);
  });
  // The integration variable is tau; t follows from dt = dtau / N.
  m.clocks = [params](const Trajectory& traj) {
    const Vec a = params.a();
    const double D = params.D();
    std::vector<double> f(traj.size()), df(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const Vec g = head_half(traj.states[i]);
      const double N = multiplier(g, a, D);
      f[i] = 1.0 / N;
      df[i] =
          -multiplier_gradient(g, a, D).dot(head_half(traj.rates[i])) / (N * N);
    }
    return Clocks{hermite_cumulative(traj.times, f, df), traj.times};
  };
}

void setup_homogeneous(ModelInstance& m, const ScenarioConfig& cfg) {
  allow_only(cfg, {"s", "D"});
  if (m.n == 0) throw ConfigError("model chaplygin_homogeneous requires n");
  if (!cfg.s || !(*cfg.s > 0.0)) {
    throw ConfigError("model chaplygin_homogeneous requires s > 0");
  }
  const double D = need_D(cfg);
  if (!(D > 0.0)) throw ConfigError("D: violates D > 0");
  const double s = *cfg.s;
  m.s = s;
  m.D = D;
  m.field = homogeneous_field(s, D);
  m.projector = project_cotangent;
  m.columns = concat(names("gamma", m.n), names("p", m.n));
  add_cotangent_basics(m);
  const DiagonalInertia I = DiagonalInertia::scalar(m.n, s);
  m.quantities.push_back({"H", [I, D](const Vec& y) {
                            return hamiltonian_reduced(split(y), I, D);
                          }});
  m.quantities.push_back(
      {"K", [](const Vec& y) { return momentum_K(split(y)); }});
  m.trajectory_checks.push_back(
      {"omega_constant", [I, D](const Trajectory& traj) {
         const SkewMatrix w0 =
             cotangent_omega(split(traj.states.front()), I, D);
         return worst_over(traj, [&](const Vec& y) {
           return (cotangent_omega(split(y), I, D) - w0).norm();
         });
       }});
  m.trajectory_checks.push_back(
      {"great_circle", [s, D](const Trajectory& traj) {
         const CotangentPoint p0 = split(traj.states.front());
         const double pn = p0.p.norm();
         if (!(pn > 0.0)) {
           return worst_over(traj, [&](const Vec& y) {
             return (head_half(y) - p0.gamma).norm();
           });
         }
         const double nu = pn / (s + D);
         double worst = 0.0;
         for (std::size_t i = 0; i < traj.size(); ++i) {
           const double t = traj.times[i];
           const Vec exact =
               std::cos(nu * t) * p0.gamma + std::sin(nu * t) * p0.p / pn;
           worst = std::max(worst, (head_half(traj.states[i]) - exact).norm());
         }
         return worst;
       }});
  m.clocks = same_clock;
}

void setup_full(ModelInstance& m, const ScenarioConfig& cfg) {
  allow_only(cfg, {"a", "D"});
  const ChaplyginParams params = chaplygin_params(cfg);
  m.params = params;
  const DiagonalInertia I = chaplygin_inertia(params);
  const double D = params.D();
  const Index n = m.n;
  m.field = full_reduced_field(I, D);
  m.projector = project_trailing_unit(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) m.columns.push_back(pair_name("k", i, j));
  }
  m.columns = concat(m.columns, names("gamma", n));
  m.quantities.push_back({"energy", [I, D, n](const Vec& y) {
                            return full_reduced_energy(unflatten_full(y, n), I,
                                                       D);
                          }});
  m.quantities.push_back({"momentum_norm", [n](const Vec& y) {
                            return momentum_map(unflatten_full(y, n)).norm();
                          }});
  m.quantities.push_back(
      {"phi1", [n](const Vec& y) { return y.tail(n).squaredNorm(); }});
  m.clocks = same_clock;
}

void setup_classical3d(ModelInstance& m, const ScenarioConfig& cfg) {
  allow_only(cfg, {"moments", "D"});
  const Vec I = need_moments(cfg);
  const double D = need_D(cfg);
  if (!(D > 0.0)) throw ConfigError("D: violates D > 0");
  m.moments = I;
  m.D = D;
  m.field = classical3d_field(I, D);
  m.projector = project_trailing_unit(3);
  m.columns = concat(names("k", 3), names("gamma", 3));
  for (int i = 0; i < 4; ++i) {
    m.quantities.push_back(
        {"F" + std::to_string(i + 1), [I, D, i](const Vec& y) {
           return classical3d_integrals({y.head(3), y.tail(3)}, I, D)[i];
         }});
  }
  m.quantities.push_back(
      {"phi1", [](const Vec& y) { return y.tail(3).squaredNorm(); }});
  m.trajectory_checks.push_back(
      {"liouville", [I, D](const Trajectory& traj) {
         LiouvilleInputs in;
         in.field = classical3d_field(I, D);
         in.density = [I, D](const Vec& y) {
           return classical3d_measure(y.tail(3), I, D);
         };
         return liouville_check(in, traj.states).max_abs;
       }});
  m.clocks = same_clock;
}

void setup_veselova3d(ModelInstance& m, const ScenarioConfig& cfg) {
  allow_only(cfg, {"moments", "D"});
  const Vec I = need_moments(cfg);
  m.moments = I;
  if (cfg.D) {
    if (!(*cfg.D > 0.0)) throw ConfigError("D: violates D > 0");
    m.D = *cfg.D;
  }
  m.field = veselova3d_field(I);
  m.projector = project_trailing_unit(3);
  m.columns = concat(names("w", 3), names("gamma", 3));
  for (int i = 0; i < 4; ++i) {
    m.quantities.push_back({"f" + std::to_string(i + 1), [I, i](const Vec& y) {
                              return veselova3d_integrals(
                                  {y.head(3), y.tail(3)}, I)[i];
                            }});
  }
  m.quantities.push_back(
      {"phi1", [](const Vec& y) { return y.tail(3).squaredNorm(); }});
  m.quantities.push_back(
      {"constraint", [](const Vec& y) { return y.head(3).dot(y.tail(3)); }});
  m.trajectory_checks.push_back(
      {"liouville", [I](const Trajectory& traj) {
         LiouvilleInputs in;
         in.field = veselova3d_field(I);
         in.density = [I](const Vec& y) {
           return veselova3d_measure(y.tail(3), I);
         };
         return liouville_check(in, traj.states).max_abs;
       }});
  m.clocks = same_clock;
}

void setup_ellipsoid(ModelInstance& m, const ScenarioConfig& cfg) {
  allow_only(cfg, {"a"});
  const Vec a = need_a(cfg);
  if (!(a.array() > 0.0).all()) throw ConfigError("a: violates a_i > 0");
  m.a = a;
  m.field = ellipsoid_field(a);
  m.columns = concat(names("x", m.n), names("v", m.n));
  m.quantities.push_back({"ellipsoid", [a](const Vec& y) {
                            const Vec x = head_half(y);
                            return x.dot(a.cwiseProduct(x));
                          }});
  m.quantities.push_back({"tangency", [a](const Vec& y) {
                            return tail_half(y).dot(
                                a.cwiseProduct(head_half(y)));
                          }});
  m.quantities.push_back(
      {"speed2", [](const Vec& y) { return tail_half(y).squaredNorm(); }});
  m.trajectory_checks.push_back({"on_ellipsoid", [a](const Trajectory& traj) {
                                   return worst_over(traj, [&](const Vec& y) {
                                     const Vec x = head_half(y);
                                     const Vec Ax = a.cwiseProduct(x);
                                     return std::max(
                                         std::abs(x.dot(Ax) - 1.0),
                                         std::abs(tail_half(y).dot(Ax)));
                                   });
                                 }});
  m.clocks = same_clock;
}

ModelInstance setup(const ScenarioConfig& cfg) {
  ModelInstance m;
  m.model = cfg.model;
  m.n = cfg.n;
  if (cfg.model == "classical3d" || cfg.model == "veselova3d") {
    if (m.n != 0 && m.n != 3) {
      throw ConfigError("model " + cfg.model + " requires n = 3");
    }
    m.n = 3;
  }
  if (cfg.a) m.a = *cfg.a;
  if (cfg.D) m.D = *cfg.D;

  if (cfg.model == "chaplygin_cotangent") {
    setup_chaplygin_cotangent(m, cfg);
  } else if (cfg.model == "veselova_reduced") {
    setup_veselova_reduced(m, cfg);
  } else if (cfg.model == "geodesic_tilde") {
    setup_geodesic_tilde(m, cfg);
  } else if (cfg.model == "chaplygin_homogeneous") {
    setup_homogeneous(m, cfg);
  } else if (cfg.model == "chaplygin_full") {
    setup_full(m, cfg);
  } else if (cfg.model == "classical3d") {
    setup_classical3d(m, cfg);
  } else if (cfg.model == "veselova3d") {
    setup_veselova3d(m, cfg);
  } else if (cfg.model == "ellipsoid") {
    setup_ellipsoid(m, cfg);
  } else {
    throw ConfigError("unknown model '" + cfg.model +
                      "' (known: " + model_list() + ")");
  }

  m.parameters["n"] = std::to_string(m.n);
  if (cfg.a) m.parameters["a"] = join_list(*cfg.a);
  if (cfg.D) m.parameters["D"] = format_double(*cfg.D);
  if (cfg.s) m.parameters["s"] = format_double(*cfg.s);
  if (cfg.moments) m.parameters["moments"] = join_list(*cfg.moments);
  return m;
}

// Initial data --------------------------------------------------------------

class InitialReader {
 public:
  InitialReader(const InitialState& init, Index n) : init_(init), n_(n) {}

  bool has(const std::string& key) const { return init_.vectors.count(key); }

  Vec take(const std::string& key, Index size) {
    const auto it = init_.vectors.find(key);
    if (it == init_.vectors.end()) {
      throw ConfigError("initial." + key + " is required");
    }
    if (it->second.size() != size) {
      throw ConfigError("initial." + key + ": expected " +
                        std::to_string(size) + " components, got " +
                        std::to_string(it->second.size()));
    }
    used_.insert(key);
    return it->second;
  }

  // Every supplied vector must have been consumed by the model.
  void finish(const std::string& model) const {
    for (const auto& kv : init_.vectors) {
      if (!used_.count(kv.first)) {
        throw ConfigError("initial." + kv.first + " is not used by model " +
                          model);
      }
    }
  }

  Index n() const { return n_; }

 private:
  const InitialState& init_;
  Index n_;
  std::set<std::string> used_;
};

CotangentPoint cotangent_initial(InitialReader& in, const InitialState& init,
                                 std::optional<std::uint64_t> seed) {
  const Index n = in.n();
  if (in.has("gamma") || in.has("p")) {
    CotangentPoint pt{in.take("gamma", n), in.take("p", n)};
    try {
      require_on_manifold(pt);
    } catch (const std::exception&) {
      throw ConfigError(
          "initial state violates |gamma| = 1 and (gamma, p) = 0 to 1e-10");
    }
    return pt;
  }
  if (!seed) {
    throw ConfigError("initial state needs explicit vectors or a seed");
  }
  Rng rng(*seed);
  CotangentPoint pt;
  random_cotangent(n, rng, pt.gamma, pt.p, init.p_scale);
  return pt;
}

Vec initial_state(const ModelInstance& m, const ScenarioConfig& cfg,
                  std::optional<std::uint64_t> seed) {
  const Index n = m.n;
  if (n < 2) throw ConfigError("dimension n is not set");
  InitialReader in(cfg.initial, n);
  Vec y0;
  const std::string& model = cfg.model;
  if (model == "chaplygin_cotangent" || model == "veselova_reduced" ||
      model == "chaplygin_homogeneous") {
    const CotangentPoint pt = cotangent_initial(in, cfg.initial, seed);
    y0 = join(pt.gamma, pt.p);
  } else if (model == "geodesic_tilde") {
    if (in.has("p_tilde")) {
      TildePoint tp{in.take("gamma", n), in.take("p_tilde", n)};
      try {
        require_on_manifold({tp.gamma, tp.p_tilde});
      } catch (const std::exception&) {
        throw ConfigError(
            "initial state violates |gamma| = 1 and (gamma, p_tilde) = 0");
      }
      y0 = join(tp.gamma, tp.p_tilde);
    } else {
      const TildePoint tp =
          to_tilde(cotangent_initial(in, cfg.initial, seed), *m.params);
      y0 = join(tp.gamma, tp.p_tilde);
    }
  } else if (model == "chaplygin_full") {
    if (in.has("k")) {
      ReducedFullState s{
          SkewMatrix::from_coefficients(n, in.take("k", skew_dim(n))),
          in.take("gamma", n)};
      if (std::abs(s.gamma.norm() - 1.0) > 1e-10) {
        throw ConfigError("initial.gamma violates |gamma| = 1");
      }
      y0 = flatten_full(s);
    } else if (in.has("gamma") || in.has("p")) {
      y0 = flatten_full(embed(cotangent_initial(in, cfg.initial, seed)));
    } else {
      if (!seed) {
        throw ConfigError("initial state needs explicit vectors or a seed");
      }
      Rng rng(*seed);
      const SkewMatrix k = random_skew(n, rng);
      y0 = flatten_full({k, random_unit(n, rng)});
    }
  } else if (model == "classical3d") {
    if (in.has("k")) {
      const Vec k = in.take("k", 3);
      const Vec g = in.take("gamma", 3);
      if (std::abs(g.norm() - 1.0) > 1e-10) {
        throw ConfigError("initial.gamma violates |gamma| = 1");
      }
      y0 = join(k, g);
    } else if (in.has("gamma") || in.has("p")) {
      const CotangentPoint pt = cotangent_initial(in, cfg.initial, seed);
      y0 = join(vee(embed(pt).k), pt.gamma);
    } else {
      if (!seed) {
        throw ConfigError("initial state needs explicit vectors or a seed");
      }
      Rng rng(*seed);
      const Vec k = random_unit(3, rng) * (2.0 * cfg.initial.p_scale);
      y0 = join(k, random_unit(3, rng));
    }
  } else if (model == "veselova3d") {
    if (in.has("w") || in.has("gamma")) {
      const Vec w = in.take("w", 3);
      const Vec g = in.take("gamma", 3);
      if (std::abs(g.norm() - 1.0) > 1e-10) {
        throw ConfigError("initial.gamma violates |gamma| = 1");
      }
      y0 = join(w, g);
    } else {
      if (!seed) {
        throw ConfigError("initial state needs explicit vectors or a seed");
      }
      Rng rng(*seed);
      Vec w = random_unit(3, rng) * (1.5 * cfg.initial.p_scale);
      const Vec g = random_unit(3, rng);
      w -= w.dot(g) * g;
      y0 = join(w, g);
    }
  } else if (model == "ellipsoid") {
    if (in.has("x") || in.has("v")) {
      const Vec x = in.take("x", n);
      const Vec v = in.take("v", n);
      try {
        require_on_ellipsoid(x, v, m.a);
      } catch (const std::exception&) {
        throw ConfigError(
            "initial state violates (x, A x) = 1 and (v, A x) = 0 to 1e-8");
      }
      y0 = join(x, v);
    } else {
      const CotangentPoint pt = cotangent_initial(in, cfg.initial, seed);
      y0 = join(ellipsoid_point_from_normal(pt.gamma, m.a), pt.p);
    }
  }
  in.finish(model);
  return y0;
}

}  // namespace

const Quantity* ModelInstance::quantity(const std::string& name) const {
  for (const auto& q : quantities) {
    if (q.name == name) return &q;
  }
  return nullptr;
}

const TrajectoryCheck* ModelInstance::trajectory_check(
    const std::string& name) const {
  for (const auto& c : trajectory_checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ModelInstance build_model(const ScenarioConfig& cfg,
                          std::optional<std::uint64_t> seed_override) {
  ModelInstance m = setup(cfg);
  const auto seed = seed_override ? seed_override : cfg.initial.seed;
  m.y0 = initial_state(m, cfg, seed);
  return m;
}

ModelInstance build_model_at(const ScenarioConfig& cfg, const Vec& y0) {
  ModelInstance m = setup(cfg);
  m.y0 = y0;
  return m;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace chaplab
