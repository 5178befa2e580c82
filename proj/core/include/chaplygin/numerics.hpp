#pragma once

// Integrators, sampled trajectories, finite-difference oracles, the Liouville
// verifier and trajectory comparison.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "chaplygin/inertia.hpp"

namespace chaplygin {

using VectorField = std::function<Vec(const Vec&)>;
using ScalarFunction = std::function<double(const Vec&)>;
// Maps a state to the nearest admissible state.
using Projector = std::function<Vec(const Vec&)>;

enum class Method { rk4, rkf45 };

struct IntegratorConfig {
  Method method = Method::rk4;
  double step = 1e-3;       // fixed step, or initial step for rkf45
  double tolerance = 1e-10;  // rkf45 local error, relative to 1 + |y|
  double t_end = 10.0;
  bool project = false;
  // Keep every `stride`-th step (the last step is always kept).
  Index stride = 1;
  // rkf45 guard against a step-rejection cascade.
  double min_step = 1e-12;
  Index max_steps = 50'000'000;
};

void validate(const IntegratorConfig& config);

struct TrajectoryMetadata {
  std::string model;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
};

struct Trajectory {
  std::vector<double> times;
  // Filled by reparametrisations; empty otherwise.
  std::vector<double> tau;
  std::vector<Vec> states;
  // Field value at each sample; enables cubic Hermite interpolation.
  std::vector<Vec> rates;
  TrajectoryMetadata metadata;
  // Largest |y_projected - y| over all steps.
  double max_projection_displacement = 0.0;
  Index steps_taken = 0;
  Index steps_rejected = 0;

  std::size_t size() const { return times.size(); }
  // Cubic Hermite interpolation of the state at time t (within range).
  Vec state_at(double t) const;
};

Trajectory integrate(const VectorField& field, const Vec& y0,
                     const IntegratorConfig& config,
                     const Projector& projector = {});

// One classical RK4 step.
Vec rk4_step(const VectorField& field, const Vec& y, double h);

// State layout (gamma, p) of length 2n: gamma normalised, p made
// orthogonal to gamma.
Vec project_cotangent(const Vec& y);
// Normalises the trailing n entries (layout (k, gamma)).
Projector project_trailing_unit(Index n);
// Normalises the leading n entries (layout (gamma, ...)).
Projector project_leading_unit(Index n);

// Flattening helpers for (gamma, p) states.
Vec join(const Vec& a, const Vec& b);
Vec head_half(const Vec& y);
Vec tail_half(const Vec& y);

// Central differences.
Vec fd_gradient(const ScalarFunction& f, const Vec& x, double step = 1e-5);
Mat fd_jacobian(const VectorField& f, const Vec& x, double step = 1e-5);
double fd_divergence(const VectorField& f, const Vec& x, double step = 1e-4);

struct LiouvilleReport {
  double max_abs = 0.0;
  std::size_t worst_index = 0;
  std::size_t points = 0;
};

// div(mu X) = (grad mu, X) + mu div X at every point. Missing divergence or
// density gradient fall back to central differences.
struct LiouvilleInputs {
  VectorField field;
  ScalarFunction density;
  std::function<Vec(const Vec&)> density_gradient;  // optional
  ScalarFunction divergence;                          // optional
};

LiouvilleReport liouville_check(const LiouvilleInputs& inputs,
                                const std::vector<Vec>& points);

enum class Matching { time_map, curve };

struct ComparisonReport {
  double sup = 0.0;
  double at_time = 0.0;
  std::size_t compared = 0;
};

struct CompareOptions {
  Matching matching = Matching::time_map;
  // Use A.tau instead of A.times as the clock matched against B.times.
  bool use_tau_of_a = false;
  // Observable applied to states before measuring distance; identity if
  // empty.
  std::function<Vec(const Vec&)> observable;
};

// time_map: sup over A samples (within B's range) of |A(t) - B(t)|, with B
// Hermite-interpolated. curve: max over A samples of the distance to the
// polyline through B's samples, stopping once A's arc length exceeds B's. Throws DomainError on empty overlap.
ComparisonReport compare_trajectories(const Trajectory& a, const Trajectory& b,
                                      const CompareOptions& options = {});

// Distance from x to the polyline through `curve`.
double polyline_distance(const Vec& x, const std::vector<Vec>& curve);

// Cumulative arc length of a sampled curve.
double arc_length(const std::vector<Vec>& curve);

// Fourth-order quadrature of f over a grid with derivative samples:
// h/2 (f0 + f1) + h^2/12 (f0' - f1'). Returns the running integral.
std::vector<double> hermite_cumulative(const std::vector<double>& x,
                                       const std::vector<double>& f,
                                       const std::vector<double>& df);

// Monotone piecewise-cubic interpolant on strictly increasing x. Slopes, if
// given, are used after Fritsch-Carlson limiting; otherwise estimated.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y,
                std::vector<double> slopes = {});
  double operator()(double x) const;
  double derivative(double x) const;
  double min_x() const { return x_.front(); }
  double max_x() const { return x_.back(); }

 private:
  std::size_t segment(double x) const;
  std::vector<double> x_, y_, m_;
};

// Deterministic random generation.
using Rng = std::mt19937_64;

Vec random_unit(Index n, Rng& rng);
// Normal gamma normalised; normal p with its gamma component removed, then
// scaled to |p| = p_scale when p_scale > 0.
void random_cotangent(Index n, Rng& rng, Vec& gamma, Vec& p,
                      double p_scale = 0.0);
// a_i uniform in [lo, hi], D uniform in (max a_i a_j, 3 max a_i a_j].
ChaplyginParams random_admissible_params(Index n, Rng& rng, double lo = 0.5,
                                         double hi = 3.0);
SkewMatrix random_skew(Index n, Rng& rng);

}  // namespace chaplygin
