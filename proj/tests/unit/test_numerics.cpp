#include <gtest/gtest.h>

#include <chaplygin/chaplygin.hpp>
#include <chaplygin/hamiltonization.hpp>
#include <chaplygin/numerics.hpp>

#include <cmath>

#include "test_util.hpp"

using namespace chaplygin;
using namespace chaplygin::testing;

namespace {

// y' = J y on R^2: rotation with exact solution.
VectorField harmonic() {
  return [](const Vec& y) { return vec({y(1), -y(0)}); };
}

double final_error(const VectorField& f, const Vec& y0, double h,
                   const Vec& exact, double t_end) {
  IntegratorConfig cfg;
  cfg.step = h;
  cfg.t_end = t_end;
  return (integrate(f, y0, cfg).states.back() - exact).norm();
}

// Observed order log2(e(h) / e(h/2)) against a fine reference.
double observed_order(const VectorField& f, const Vec& y0, double t_end,
                      double h) {
  IntegratorConfig ref;
  ref.step = h / 64.0;
  ref.t_end = t_end;
  const Vec exact = integrate(f, y0, ref).states.back();
  return std::log2(final_error(f, y0, h, exact, t_end) /
                   final_error(f, y0, h / 2.0, exact, t_end));
}

}  // namespace

TEST(Integrate, Rk4StepHalvingRatio) {
  const Vec y0 = vec({1.0, 0.0});
  const double T = 10.0;
  const Vec exact = vec({std::cos(T), -std::sin(T)});
  const double ratio = final_error(harmonic(), y0, 0.1, exact, T) /
                       final_error(harmonic(), y0, 0.05, exact, T);
  EXPECT_NEAR(ratio, 16.0, 1.6);
}

TEST(Integrate, Rk4OrderOnModelFields) {
  Rng rng(121);
  const ChaplyginParams params = random_admissible_params(3, rng);
  const CotangentPoint pt = random_point(3, rng, 2.0);
  const Vec y0 = join(pt.gamma, pt.p);
  const TildePoint t0 = to_tilde(pt, params);
  const std::vector<std::pair<VectorField, Vec>> cases{
      {cotangent_field(params), y0},
      {geodesic_field(params), join(t0.gamma, t0.p_tilde)},
      {full_reduced_field(chaplygin_inertia(params), params.D()),
       flatten_full(embed(pt))},
  };
  for (const auto& [f, y] : cases) {
    const double order = observed_order(f, y, 2.0, 0.1);
    EXPECT_GE(order, 3.8);
    EXPECT_LE(order, 4.2);
  }
}

TEST(Integrate, SamplingAndLastStep) {
  IntegratorConfig cfg;
  cfg.step = 0.3;
  cfg.t_end = 1.0;
  const Trajectory a = integrate(harmonic(), vec({1, 0}), cfg);
  ASSERT_EQ(a.size(), 5u);
  EXPECT_DOUBLE_EQ(a.times.back(), 1.0);
  EXPECT_NEAR(a.times[3] - a.times[2], 0.3, 1e-15);
  EXPECT_NEAR(a.times[4] - a.times[3], 0.1, 1e-15);
  cfg.step = 0.01;
  cfg.stride = 7;
  const Trajectory b = integrate(harmonic(), vec({1, 0}), cfg);
  EXPECT_EQ(b.size(), 1u + 100 / 7 + 1);
  EXPECT_DOUBLE_EQ(b.times.back(), 1.0);
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    EXPECT_LT(b.times[i], b.times[i + 1]);
    EXPECT_LT((b.rates[i] - harmonic()(b.states[i])).norm(), 1e-15);
  }
}

TEST(Integrate, ConfigValidation) {
  IntegratorConfig cfg;
  cfg.step = 0.0;
  EXPECT_THROW(integrate(harmonic(), vec({1, 0}), cfg), ParameterError);
  cfg = {};
  cfg.t_end = -1.0;
  EXPECT_THROW(integrate(harmonic(), vec({1, 0}), cfg), ParameterError);
  cfg = {};
  cfg.project = true;
  EXPECT_THROW(integrate(harmonic(), vec({1, 0}), cfg), ParameterError);
}

TEST(Integrate, DomainErrorPropagates) {
  const VectorField blow = [](const Vec& y) { return Vec(y.array().square()); };
  IntegratorConfig cfg;
  cfg.step = 0.1;
  cfg.t_end = 5.0;
  EXPECT_THROW(integrate(blow, vec({1.0}), cfg), DomainError);
}

TEST(Integrate, AdaptiveMeetsTolerance) {
  IntegratorConfig cfg;
  cfg.method = Method::rkf45;
  cfg.step = 0.1;
  cfg.tolerance = 1e-10;
  cfg.t_end = 10.0;
  const Trajectory traj = integrate(harmonic(), vec({1, 0}), cfg);
  EXPECT_DOUBLE_EQ(traj.times.back(), 10.0);
  EXPECT_LT((traj.states.back() - vec({std::cos(10.0), -std::sin(10.0)})).norm(),
            1e-8);
  EXPECT_GT(traj.steps_taken, 10);
}

TEST(Integrate, AdaptiveStepUnderflowIsReported) {
  const VectorField stiff = [](const Vec& y) { return Vec(y.array().square()); };
  IntegratorConfig cfg;
  cfg.method = Method::rkf45;
  cfg.t_end = 2.0;
  EXPECT_THROW(integrate(stiff, vec({1.0}), cfg), DomainError);
}

TEST(Integrate, Deterministic) {
  Rng rng(122);
  const ChaplyginParams params = random_admissible_params(4, rng);
  const CotangentPoint pt = random_point(4, rng);
  IntegratorConfig cfg;
  cfg.t_end = 2.0;
  for (Method m : {Method::rk4, Method::rkf45}) {
    cfg.method = m;
    const Trajectory a =
        integrate(cotangent_field(params), join(pt.gamma, pt.p), cfg);
    const Trajectory b =
        integrate(cotangent_field(params), join(pt.gamma, pt.p), cfg);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a.times[i], b.times[i]);
      EXPECT_TRUE((a.states[i].array() == b.states[i].array()).all());
    }
  }
  Rng r1(7), r2(7);
  EXPECT_EQ(random_unit(5, r1), random_unit(5, r2));
}

TEST(Projection, IdempotentOnFeasibleStates) {
  Rng rng(123);
  const CotangentPoint pt = random_point(5, rng);
  const Vec y = join(pt.gamma, pt.p);
  EXPECT_LE((project_cotangent(y) - y).cwiseAbs().maxCoeff(), 1e-15);
  const Vec z = project_cotangent(y * 1.1);
  EXPECT_NEAR(head_half(z).norm(), 1.0, 1e-15);
  EXPECT_NEAR(head_half(z).dot(tail_half(z)), 0.0, 1e-15);
  EXPECT_LE((project_cotangent(z) - z).cwiseAbs().maxCoeff(), 1e-15);
  const Vec w = join(vec({0.1, 0.2}), random_unit(3, rng));
  EXPECT_LE((project_trailing_unit(3)(w) - w).cwiseAbs().maxCoeff(), 1e-15);
  const Vec u = join(random_unit(3, rng), vec({0.1, 0.2, 0.3}));
  EXPECT_LE((project_leading_unit(3)(u) - u).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Projection, DoesNotMaskDynamics) {
  Rng rng(124);
  const ChaplyginParams params = random_admissible_params(4, rng);
  const CotangentPoint pt = random_point(4, rng);
  IntegratorConfig off;
  IntegratorConfig on = off;
  on.project = true;
  const Vec y0 = join(pt.gamma, pt.p);
  const Trajectory a = integrate(cotangent_field(params), y0, off);
  const Trajectory b = integrate(cotangent_field(params), y0, on, project_cotangent);
  const auto H = [&](const Vec& y) {
    return hamiltonian_closed({head_half(y), tail_half(y)}, params);
  };
  const double da = std::max(relative_drift(a, H), 1e-16);
  const double db = std::max(relative_drift(b, H), 1e-16);
  EXPECT_LE(std::abs(std::log10(da / db)), 1.0);
  EXPECT_GT(b.max_projection_displacement, 0.0);
  EXPECT_LT(b.max_projection_displacement, 1e-12);
}

TEST(Trajectory, HermiteInterpolation) {
  IntegratorConfig cfg;
  cfg.step = 0.01;
  cfg.t_end = 3.0;
  const Trajectory traj = integrate(harmonic(), vec({1, 0}), cfg);
  for (double t : {0.0, 0.005, 1.234, 2.9999, 3.0}) {
    EXPECT_LT((traj.state_at(t) - vec({std::cos(t), -std::sin(t)})).norm(),
              1e-9);
  }
  EXPECT_THROW(traj.state_at(3.5), DomainError);
}

TEST(FiniteDifferences, QuadraticFormGradient) {
  Rng rng(125);
  const Vec a = vec({1, 2, 3, 4});
  const Vec g = random_unit(4, rng);
  const Vec fd = fd_gradient([&](const Vec& x) { return quadratic_q(x, a); }, g);
  EXPECT_LT((fd - 2.0 * g.cwiseQuotient(a)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(FiniteDifferences, JacobianOfLinearMap) {
  Mat M(3, 3);
  M << 1, 2, 3, 4, 5, 6, 7, 8, 10;
  const VectorField f = [&](const Vec& x) { return Vec(M * x); };
  EXPECT_LT((fd_jacobian(f, vec({0.3, -0.2, 1.0})) - M).cwiseAbs().maxCoeff(),
            1e-9);
  EXPECT_NEAR(fd_divergence(f, vec({0.3, -0.2, 1.0})), 16.0, 1e-9);
}

TEST(FiniteDifferences, GeodesicFieldPreservesConstraintMeasure) {
  // The tau-flow is Hamiltonian for the Dirac bracket with constant
  // {psi1, psi2} on the constraint set, so it is divergence-free there.
  Rng rng(126);
  for (Index n = 3; n <= 5; ++n) {
    const ChaplyginParams params = random_admissible_params(n, rng);
    const TildePoint t = to_tilde(random_point(n, rng), params);
    EXPECT_NEAR(fd_divergence(geodesic_field(params), join(t.gamma, t.p_tilde)),
                0.0, 1e-6);
  }
}

TEST(Liouville, ConstantDensityDivergenceFreeField) {
  std::vector<Vec> pts{vec({1, 0}), vec({0.3, -2.0}), vec({5, 5})};
  LiouvilleInputs in;
  in.field = harmonic();
  in.density = [](const Vec&) { return 1.0; };
  const LiouvilleReport r = liouville_check(in, pts);
  EXPECT_EQ(r.max_abs, 0.0);
  EXPECT_EQ(r.points, 3u);
}

TEST(Liouville, DetectsMissingDensity) {
  Rng rng(127);
  const ChaplyginParams params(vec({0.8, 1.5, 2.6, 2.9}), 10.0);
  std::vector<Vec> pts;
  for (int i = 0; i < 20; ++i) {
    const CotangentPoint pt = random_point(4, rng);
    pts.push_back(join(pt.gamma, pt.p));
  }
  LiouvilleInputs in;
  in.field = cotangent_field(params);
  in.density = [](const Vec&) { return 1.0; };
  EXPECT_GT(liouville_check(in, pts).max_abs, 1e-3);
}

TEST(Compare, IdenticalAndShiftedTrajectories) {
  IntegratorConfig cfg;
  cfg.t_end = 2.0;
  const Trajectory a = integrate(harmonic(), vec({1, 0}), cfg);
  EXPECT_EQ(compare_trajectories(a, a).sup, 0.0);
  CompareOptions curve;
  curve.matching = Matching::curve;
  EXPECT_LT(compare_trajectories(a, a, curve).sup, 1e-15);
  Trajectory later = a;
  for (double& t : later.times) t += 10.0;
  EXPECT_THROW(compare_trajectories(a, later), DomainError);
  // Same circle, different speed: time-map differs, curve mode agrees.
  cfg.t_end = 1.0;
  const Trajectory fast = integrate(
      [](const Vec& y) { return vec({2 * y(1), -2 * y(0)}); }, vec({1, 0}), cfg);
  EXPECT_GT(compare_trajectories(fast, a).sup, 0.1);
  EXPECT_LT(compare_trajectories(fast, a, curve).sup, 1e-6);
}

TEST(Quadrature, HermiteCumulativeExactForCubics) {
  std::vector<double> x, f, df;
  for (int i = 0; i <= 10; ++i) {
    const double t = 0.37 * i;
    x.push_back(t);
    f.push_back(t * t * t - t);
    df.push_back(3 * t * t - 1);
  }
  const auto F = hermite_cumulative(x, f, df);
  const double T = x.back();
  EXPECT_NEAR(F.back(), T * T * T * T / 4 - T * T / 2, 1e-12);
}

TEST(Quadrature, MonotoneCubicInterpolant) {
  const std::vector<double> x{0, 1, 2, 3, 4};
  const std::vector<double> y{0, 0.1, 0.2, 3.0, 3.05};
  const MonotoneCubic m(x, y);
  double prev = -1.0;
  for (double t = 0.0; t <= 4.0; t += 0.01) {
    const double v = m(t);
    EXPECT_GE(v, prev - 1e-15);
    EXPECT_GE(m.derivative(t), -1e-15);
    prev = v;
  }
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_DOUBLE_EQ(m(x[i]), y[i]);
  EXPECT_THROW(MonotoneCubic({0, 0, 1}, {0, 1, 2}), DomainError);
}

TEST(Random, GeneratorsRespectConstraints) {
  Rng rng(128);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 3 + trial % 4;
    const ChaplyginParams params = random_admissible_params(n, rng);
    const Vec& a = params.a();
    for (Index i = 0; i + 1 < n; ++i) EXPECT_LE(a(i), a(i + 1));
    EXPECT_GT(params.D(), a(n - 1) * a(n - 2));
    CotangentPoint pt;
    random_cotangent(n, rng, pt.gamma, pt.p, 0.5);
    EXPECT_NO_THROW(require_on_manifold(pt, 1e-14));
    EXPECT_NEAR(pt.p.norm(), 0.5, 1e-14);
  }
}

TEST(Join, SplitsAndRejectsOddLengths) {
  const Vec y = join(vec({1, 2}), vec({3, 4}));
  EXPECT_EQ(head_half(y), vec({1, 2}));
  EXPECT_EQ(tail_half(y), vec({3, 4}));
  EXPECT_THROW(head_half(vec({1, 2, 3})), DimensionError);
}
