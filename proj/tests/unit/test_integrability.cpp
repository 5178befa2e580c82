#include <gtest/gtest.h>

#include <chaplygin/integrability.hpp>

#include <cmath>

#include "test_util.hpp"

using namespace chaplygin;
using namespace chaplygin::testing;

namespace {

// Image of a random physical state under p~ = N p.
TildePoint random_tilde(Index n, Rng& rng, const ChaplyginParams& params) {
  return to_tilde(random_point(n, rng), params);
}

// Integrals H*, K, F_0..F_{n-2} with analytic gradients.
std::vector<PhaseGradient> family_gradients(const TildePoint& t,
                                            const ChaplyginParams& params) {
  std::vector<PhaseGradient> out;
  out.push_back(hamiltonian_star_gradient(t, params));
  out.push_back(momentum_K_tilde_gradient(t, params.a(), params.D()));
  for (const PhaseGradient& g : staeckel_gradients(t, params.a(), params.D())) {
    out.push_back(g);
  }
  return out;
}

}  // namespace

TEST(Spheroconical, WorkedPoint) {
  const TildePoint t = cartesian_from_spheroconical(
      vec({1.5, 2.5}), Vec::Zero(2), vec({1, 2, 3}), Vec::Ones(3));
  EXPECT_NEAR(t.gamma(0) * t.gamma(0), 0.375, 1e-15);
  EXPECT_NEAR(t.gamma(1) * t.gamma(1), 0.25, 1e-15);
  EXPECT_NEAR(t.gamma(2) * t.gamma(2), 0.375, 1e-15);
  EXPECT_NEAR(t.gamma.squaredNorm(), 1.0, 1e-15);
  EXPECT_NEAR(quadratic_q(t.gamma, vec({1, 2, 3})), 0.625, 1e-15);
  EXPECT_NEAR(1.5 * 2.5 / 6.0, 0.625, 1e-16);
}

TEST(Spheroconical, BoundaryComponentVanishes) {
  const Vec a = vec({1, 2, 3});
  for (double eps : {1e-2, 1e-5, 1e-8}) {
    const TildePoint t = cartesian_from_spheroconical(
        vec({1.0 + eps, 2.5}), Vec::Zero(2), a, Vec::Ones(3));
    EXPECT_LT(std::abs(t.gamma(0)), 2.0 * std::sqrt(eps));
  }
}

TEST(Spheroconical, RoundTrip) {
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 3 + trial % 3;
    const ChaplyginParams params = random_admissible_params(n, rng);
    const TildePoint t = random_tilde(n, rng, params);
    const SpheroconicalPoint sp = spheroconical_from_cartesian(t, params.a());
    for (Index k = 0; k < n - 1; ++k) {
      EXPECT_GT(sp.lambda(k), params.a()(k));
      EXPECT_LT(sp.lambda(k), params.a()(k + 1));
    }
    Vec signs(n);
    for (Index i = 0; i < n; ++i) signs(i) = t.gamma(i) < 0 ? -1.0 : 1.0;
    const TildePoint back = cartesian_from_spheroconical(sp, params.a(), signs);
    EXPECT_LT((back.gamma - t.gamma).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((back.p_tilde - t.p_tilde).cwiseAbs().maxCoeff(), 1e-10);
    const TildePoint coarse =
        cartesian_from_spheroconical(sp.lambda, sp.mu, params.a(), signs);
    EXPECT_LT((coarse.gamma - t.gamma).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Spheroconical, RejectsBoundaryAndDegenerateSpectra) {
  EXPECT_THROW(spheroconical_from_cartesian({e(3, 0), e(3, 1)}, vec({1, 2, 3})),
               DomainError);
  EXPECT_THROW(require_chart_params(vec({1, 1 + 1e-8, 3})), ParameterError);
  EXPECT_THROW(require_chart_params(vec({2, 1, 3})), ParameterError);
}

TEST(Spheroconical, QuadraticFormIdentities) {
  Rng rng(102);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 3 + trial % 3;
    const ChaplyginParams params = random_admissible_params(n, rng);
    const ChartIdentityResiduals r =
        chart_identity_residuals(random_tilde(n, rng, params), params.a());
    EXPECT_LT(r.p_norm, 1e-10);
    EXPECT_LT(r.q, 1e-10);
    EXPECT_LT(r.a_form, 1e-10);
  }
}

TEST(Staeckel, ElementarySymmetric) {
  const Vec e3 = elementary_symmetric(vec({1, 2, 3}));
  EXPECT_LT((e3 - vec({1, 6, 11, 6})).norm(), 1e-15);
}

TEST(Staeckel, FirstMemberIsVeselovaHamiltonian) {
  Rng rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 3 + trial % 3;
    const ChaplyginParams params = random_admissible_params(n, rng);
    const TildePoint t = random_tilde(n, rng, params);
    const Vec F = staeckel_integrals(t, params.a(), params.D());
    ASSERT_EQ(F.size(), n - 1);
    const double Hv = veselova_hamiltonian(t, params.a(), params.D());
    EXPECT_NEAR(F(0), Hv, 1e-11 * std::max(1.0, std::abs(Hv)));
    const double D = params.D();
    EXPECT_NEAR(hamiltonian_star(t, params),
                momentum_K_tilde(t, params.a(), D) / (2 * D) - F(0) / (D * D),
                1e-11);
  }
}

TEST(Staeckel, GradientsMatchFiniteDifferences) {
  Rng rng(104);
  for (Index n = 3; n <= 5; ++n) {
    const ChaplyginParams params = random_admissible_params(n, rng);
    const TildePoint t = random_tilde(n, rng, params);
    const auto grads = staeckel_gradients(t, params.a(), params.D());
    for (Index m = 0; m < n - 1; ++m) {
      const PhaseGradient fd = fd_phase_gradient(
          [&](const Vec& g, const Vec& p) {
            return staeckel_integrals({g, p}, params.a(), params.D())(m);
          },
          t.gamma, t.p_tilde);
      const double scale = 1.0 + fd.d_gamma.norm() + fd.d_p.norm();
      EXPECT_LT((grads[m].d_gamma - fd.d_gamma).norm(), 1e-6 * scale);
      EXPECT_LT((grads[m].d_p - fd.d_p).norm(), 1e-6 * scale);
    }
  }
}

TEST(Staeckel, FamilyIsInInvolution) {
  Rng rng(105);
  for (Index n = 3; n <= 5; ++n) {
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const ChaplyginParams params = random_admissible_params(n, rng);
      const TildePoint t = random_tilde(n, rng, params);
      const auto g = family_gradients(t, params);
      for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i + 1; j < g.size(); ++j) {
          worst = std::max(worst, std::abs(dirac_bracket(g[i], g[j], t.gamma,
                                                         t.p_tilde)));
        }
      }
    }
    EXPECT_LT(worst, 1e-9) << "n = " << n;
  }
}

TEST(Staeckel, NotAllTriviallyDependent) {
  // The family has full rank n - 1 at generic points.
  Rng rng(106);
  const ChaplyginParams params = random_admissible_params(5, rng);
  const TildePoint t = random_tilde(5, rng, params);
  const auto g = staeckel_gradients(t, params.a(), params.D());
  Mat J(g.size(), 10);
  for (std::size_t i = 0; i < g.size(); ++i) {
    J.row(i) << g[i].d_gamma.transpose(), g[i].d_p.transpose();
  }
  EXPECT_EQ(Eigen::FullPivLU<Mat>(J).rank(), 4);
}

TEST(LinearIntegrals, ConservedForEqualAxes) {
  Rng rng(107);
  const ChaplyginParams params(vec({1, 1, 3, 3}), 12.0);
  const TildePoint t = random_tilde(4, rng, params);
  IntegratorConfig cfg;
  const Trajectory traj =
      integrate(geodesic_field(params), join(t.gamma, t.p_tilde), cfg);
  const std::vector<IndexPair> pairs{{0, 1}, {2, 3}};
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    EXPECT_LT(relative_drift(traj,
                             [&](const Vec& y) {
                               return linear_integrals(
                                   {head_half(y), tail_half(y)}, params.a(),
                                   pairs)(static_cast<Index>(k));
                             }),
              1e-10);
  }
  // Negative control: a_2 != a_3.
  EXPECT_GT(relative_drift(traj,
                           [](const Vec& y) {
                             return linear_integral_unchecked(
                                 {head_half(y), tail_half(y)}, 1, 2);
                           }),
            1e-3);
  EXPECT_THROW(linear_integrals(t, params.a(), {{1, 2}}), ParameterError);
}

TEST(LinearIntegrals, SignedArea) {
  const double th = 0.4;
  const TildePoint t{vec({std::cos(th), std::sin(th), 0}),
                     0.5 * vec({-std::sin(th), std::cos(th), 0})};
  EXPECT_NEAR(linear_integral_unchecked(t, 0, 1), 0.5, 1e-16);
}

TEST(Lagrange, IntegralsConservedAlongTimeFlow) {
  Rng rng(108);
  const ChaplyginParams params(vec({1, 1, 1, 2}), 10.0);
  const CotangentPoint pt = random_point(4, rng);
  IntegratorConfig cfg;
  const Trajectory traj =
      integrate(cotangent_field(params), join(pt.gamma, pt.p), cfg);
  const Index count = lagrange_integrals(pt, params).size();
  ASSERT_EQ(count, 3);
  for (Index k = 0; k < count; ++k) {
    EXPECT_LT(relative_drift(traj,
                             [&](const Vec& y) {
                               return lagrange_integrals(
                                   {head_half(y), tail_half(y)}, params)(k);
                             }),
              1e-8);
  }
}

TEST(Lagrange, NegativeControlGenericAxes) {
  Rng rng(109);
  const ChaplyginParams params(vec({1, 1.4, 1.9, 2.5}), 10.0);
  const CotangentPoint pt = random_point(4, rng);
  IntegratorConfig cfg;
  const Trajectory traj =
      integrate(cotangent_field(params), join(pt.gamma, pt.p), cfg);
  double worst = 0.0;
  for (Index k = 0; k < 3; ++k) {
    worst = std::max(worst, relative_drift(traj, [&](const Vec& y) {
                       return lagrange_integrals_unchecked(
                           {head_half(y), tail_half(y)}, params)(k);
                     }));
  }
  EXPECT_GT(worst, 1e-3);
  EXPECT_THROW(lagrange_integrals(pt, params), ParameterError);
}

TEST(Lagrange, RelationToTildeAngularMomentum) {
  Rng rng(110);
  const ChaplyginParams params(vec({1, 1, 1, 2}), 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const CotangentPoint pt = random_point(4, rng);
    const TildePoint t = to_tilde(pt, params);
    const Vec F = lagrange_integrals(pt, params);
    Index c = 0;
    for (Index i = 0; i < 3; ++i) {
      for (Index j = i + 1; j < 3; ++j, ++c) {
        const double f = linear_integral_unchecked(t, i, j);
        EXPECT_NEAR(F(c), 100.0 * f * f, 1e-12 * std::max(1.0, F(c)));
      }
    }
  }
  const Vec z = lagrange_integrals({e(4, 0), Vec::Zero(4)}, params);
  EXPECT_EQ(z.norm(), 0.0);
  CotangentPoint par{random_unit(4, rng), Vec()};
  par.p = 0.7 * par.gamma;
  EXPECT_LT(lagrange_integrals_unchecked(par, params).norm(), 1e-15);
}

TEST(Lagrange, LevelSetsAreTwoDimensional) {
  // H, K and the F_ij cut T*S^3 (dimension 6) down to a 2-dimensional set.
  Rng rng(111);
  const ChaplyginParams params(vec({1, 1, 1, 2}), 10.0);
  const CotangentPoint pt = random_point(4, rng);
  std::vector<ScalarFunction> fs;
  fs.push_back([&](const Vec& y) {
    return hamiltonian_closed({head_half(y), tail_half(y)}, params);
  });
  fs.push_back([](const Vec& y) { return momentum_K({head_half(y), tail_half(y)}); });
  for (Index k = 0; k < 3; ++k) {
    fs.push_back([&, k](const Vec& y) {
      return lagrange_integrals_unchecked({head_half(y), tail_half(y)}, params)(k);
    });
  }
  // Tangent space of T*S^3 at pt.
  Mat C(2, 8);
  C.row(0) << 2.0 * pt.gamma.transpose(), Vec::Zero(4).transpose();
  C.row(1) << pt.p.transpose(), pt.gamma.transpose();
  const Mat T = Eigen::FullPivLU<Mat>(C).kernel();
  Mat J(fs.size(), T.cols());
  const Vec y = join(pt.gamma, pt.p);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    J.row(i) = (fd_gradient(fs[i], y).transpose() * T);
  }
  Eigen::FullPivLU<Mat> lu(J);
  lu.setThreshold(1e-6);
  EXPECT_EQ(6 - lu.rank(), 2);
}

TEST(Foliation, SharedIntegralsOnBothFlows) {
  Rng rng(112);
  for (Index n = 3; n <= 4; ++n) {
    for (int seed = 0; seed < 3; ++seed) {
      const ChaplyginParams params = random_admissible_params(n, rng);
      const CotangentPoint pt = random_point(n, rng);
      IntegratorConfig cfg;
      const FoliationReport r = foliation_check(pt, params, cfg);
      EXPECT_EQ(r.quantities.size(), static_cast<std::size_t>(3 + n - 1));
      EXPECT_LT(r.worst, 1e-8);
    }
  }
}

TEST(Foliation, VeselovaFlowIsDiracFlowInTheSameClock) {
  // Under dtau = N dt and p~ = N p the Veselova flow is the Dirac-bracket flow
  // of its Hamiltonian, and the Chaplygin flow that of H*: both are
  // Hamiltonian flows of members of one commuting family in one clock.
  Rng rng(113);
  const ChaplyginParams params(vec({1, 2, 3}), 10.0);
  const CotangentPoint pt = random_point(3, rng);
  IntegratorConfig cfg;
  cfg.step = 1e-4;
  cfg.t_end = 2.0;
  const Trajectory ves =
      integrate(veselova_field(params.a()), join(pt.gamma, pt.p), cfg);
  const Reparametrized rp = reparametrize(ves, params);
  const TildePoint t0 = to_tilde(pt, params);
  IntegratorConfig tau_cfg;
  tau_cfg.t_end = rp.clock.taus().back();
  tau_cfg.step = tau_cfg.t_end / 20000.0;
  const Trajectory direct = integrate(veselova_tau_field(params.a(), params.D()),
                                      join(t0.gamma, t0.p_tilde), tau_cfg);
  EXPECT_LT(compare_trajectories(rp.trajectory, direct).sup, 1e-6);
}
