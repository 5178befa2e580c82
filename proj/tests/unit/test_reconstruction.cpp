#include <gtest/gtest.h>

#include <chaplygin/chaplygin.hpp>
#include <chaplygin/reconstruction.hpp>

#include "test_util.hpp"

using namespace chaplygin;
using namespace chaplygin::testing;

TEST(Reconstruct, ConstantOmegaMatchesExponential) {
  Rng rng(51);
  for (Index n = 3; n <= 5; ++n) {
    const SkewMatrix w = random_skew(n, rng);
    const RotationMatrix g0 = exp_map(random_skew(n, rng));
    std::vector<double> times;
    for (int i = 0; i <= 10000; ++i) times.push_back(i * 1e-3);
    const std::vector<SkewMatrix> omegas(times.size(), w);
    const auto poses = reconstruct(times, omegas, g0, Vec::Zero(n - 1));
    double worst = 0.0, defect = 0.0;
    for (std::size_t i = 0; i < poses.size(); i += 500) {
      const Mat exact = g0.matrix() * exp_map(times[i] * w).matrix();
      worst = std::max(worst,
                       (poses[i].g.matrix() - exact).cwiseAbs().maxCoeff());
      defect = std::max(defect, poses[i].g.orthogonality_defect());
    }
    EXPECT_LT(worst, 1e-8);
    EXPECT_LT(defect, 1e-8);
  }
}

TEST(Reconstruct, ConstantOmegaRollsAlongStraightLine) {
  Rng rng(52);
  const Index n = 4;
  const SkewMatrix w = random_skew(n, rng);
  const RotationMatrix g0 = exp_map(random_skew(n, rng));
  std::vector<double> times;
  for (int i = 0; i <= 2000; ++i) times.push_back(i * 5e-3);
  const auto poses =
      reconstruct(times, std::vector<SkewMatrix>(times.size(), w), g0,
                  Vec::Zero(n - 1), {0.7, true});
  // Ad_g omega is constant, so the contact velocity never turns.
  const Vec v0 = contact_velocity(g0, w, 0.7);
  double turn = 0.0;
  for (const FullPose& pose : poses) {
    turn = std::max(turn, (contact_velocity(pose.g, w, 0.7) - v0).norm());
  }
  EXPECT_LT(turn, 1e-6);
  const Vec chord = poses.back().r - poses.front().r;
  EXPECT_LT((chord - times.back() * v0).norm(), 1e-6);
}

TEST(Reconstruct, VerticalVelocityVanishes) {
  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 3 + trial % 3;
    const RotationMatrix g = exp_map(random_skew(n, rng));
    EXPECT_NEAR(vertical_velocity(g, random_skew(n, rng)), 0.0, 1e-12);
  }
}

TEST(Reconstruct, AttitudeTracksPoissonVector) {
  // gamma is the vertical seen from the body: gamma = g^T E_n.
  Rng rng(54);
  const Index n = 4;
  const ChaplyginParams params = random_admissible_params(n, rng);
  const DiagonalInertia I = chaplygin_inertia(params);
  const CotangentPoint pt = random_point(n, rng);
  IntegratorConfig cfg;
  const Trajectory traj =
      integrate(cotangent_field(params), join(pt.gamma, pt.p), cfg);

  // An initial attitude with g0^T E_n = gamma0.
  Mat basis = Mat::Identity(n, n);
  basis.col(0) = pt.gamma;
  Eigen::HouseholderQR<Mat> qr(basis);
  Mat q = qr.householderQ();
  if (q.col(0).dot(pt.gamma) < 0) q = -q;
  Mat g0m(n, n);
  for (Index i = 0; i < n - 1; ++i) g0m.row(i) = q.col(i + 1).transpose();
  g0m.row(n - 1) = q.col(0).transpose();
  if (g0m.determinant() < 0) g0m.row(0) *= -1.0;
  const RotationMatrix g0 = RotationMatrix::from_matrix(g0m);

  std::vector<SkewMatrix> omegas;
  for (const Vec& y : traj.states) {
    omegas.push_back(
        cotangent_omega(CotangentPoint{head_half(y), tail_half(y)}, I,
                        params.D()));
  }
  const auto poses = reconstruct(traj.times, omegas, g0, Vec::Zero(n - 1));
  double worst = 0.0, vertical = 0.0;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const Vec up = poses[i].g.matrix().transpose() * e(n, n - 1);
    worst = std::max(worst, (up - head_half(traj.states[i])).norm());
    vertical = std::max(vertical,
                        std::abs(vertical_velocity(poses[i].g, omegas[i])));
  }
  EXPECT_LT(worst, 1e-5);
  EXPECT_LT(vertical, 1e-12);
  EXPECT_LT(poses.back().g.orthogonality_defect(), 1e-8);
}

TEST(Reconstruct, RejectsMismatchedInputs) {
  const std::vector<double> t{0.0, 1.0};
  const std::vector<SkewMatrix> w{SkewMatrix(3)};
  EXPECT_THROW(reconstruct(t, w, RotationMatrix::identity(3), Vec::Zero(2)),
               DimensionError);
  EXPECT_THROW(reconstruct(t, {SkewMatrix(3), SkewMatrix(3)},
                           RotationMatrix::identity(3), Vec::Zero(3)),
               DimensionError);
}
