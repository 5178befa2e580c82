#pragma once

// Attitude and contact-point reconstruction from a sampled angular velocity:
// g_dot = g omega, r_dot_i = rho (g omega g^{-1} Gamma)_i for i < n, with
// Gamma = E_n the vertical unit vector.

#include <vector>

#include "chaplygin/son.hpp"

namespace chaplygin {

struct FullPose {
  RotationMatrix g;
  Vec r;  // contact-plane position, length n - 1
};

struct ReconstructOptions {
  double rho = 1.0;
  // Re-orthonormalise g after every step.
  bool project = true;
};

// Integrates over the sample times with g_{k+1} = g_k exp(h omega_mid) and a
// trapezoidal rule for r. `omegas[k]` is omega at `times[k]`.
std::vector<FullPose> reconstruct(const std::vector<double>& times,
                                  const std::vector<SkewMatrix>& omegas,
                                  const RotationMatrix& g0, const Vec& r0,
                                  const ReconstructOptions& options = {});

// Velocity of the contact point, rho (g omega g^T E_n)_i for i < n.
Vec contact_velocity(const RotationMatrix& g, const SkewMatrix& omega,
                     double rho);

// (g omega g^T E_n, E_n); identically zero.
double vertical_velocity(const RotationMatrix& g, const SkewMatrix& omega);

}  // namespace chaplygin
