#pragma once

// The rolling ball at each reduction level: (k, gamma) on so(n)* x S^{n-1},
// (gamma, p) on T*S^{n-1} (generic inertia and the closed form for the
// operator built from A and D), the classical 3-D vector equations, and the
// homogeneous ball.

#include <array>

#include "chaplygin/inertia.hpp"
#include "chaplygin/numerics.hpp"

namespace chaplygin {

// Tolerance on |gamma| = 1 and (gamma, p) = 0 for on-manifold operations.
inline constexpr double kManifoldTolerance = 1e-10;

struct ReducedFullState {
  SkewMatrix k;
  Vec gamma;
};

struct ReducedFullRates {
  SkewMatrix k_dot;
  Vec gamma_dot;
};

struct CotangentPoint {
  Vec gamma;
  Vec p;
};

struct CotangentRates {
  Vec gamma_dot;
  Vec p_dot;
};

// phi1 - 1 = (gamma, gamma) - 1 and phi2 = (gamma, p).
double constraint_phi1_defect(const CotangentPoint& pt);
double constraint_phi2(const CotangentPoint& pt);

// Throw DomainError when the point is off T*S^{n-1} (or off S^{n-1}).
void require_on_manifold(const CotangentPoint& pt,
                         double tol = kManifoldTolerance);
void require_unit(const Vec& gamma, double tol = kManifoldTolerance);

// Matrix of omega -> I omega + D pr_{h^gamma}(omega) in the coefficient basis.
Mat reduced_inertia_matrix(const Vec& gamma, const DiagonalInertia& inertia,
                           double D);

// Solves k = I omega + D pr_{h^gamma}(omega).
SkewMatrix omega_from_k(const SkewMatrix& k, const Vec& gamma,
                        const DiagonalInertia& inertia, double D);

// k_dot = [k, omega], gamma_dot = -omega gamma.
ReducedFullRates full_reduced_rhs(const ReducedFullState& state,
                                  const DiagonalInertia& inertia, double D);

// <k, omega>/2.
double full_reduced_energy(const ReducedFullState& state,
                           const DiagonalInertia& inertia, double D);

// Projection of k onto so(n-1)^gamma; vanishes iff k lies in h^gamma.
SkewMatrix momentum_map(const ReducedFullState& state);

// xi in gamma^perp with p = xi - D I^{-1}(gamma ^ xi) gamma, by a linear
// solve on an orthonormal basis of gamma^perp.
Vec xi_from_p(const CotangentPoint& pt, const DiagonalInertia& inertia,
              double D);
// (A p - (p, A gamma) gamma) / (D (gamma, A^{-1} gamma)).
Vec xi_from_p_closed(const CotangentPoint& pt, const ChaplyginParams& params);

// omega = I^{-1}(gamma ^ xi), gamma_dot = -omega gamma, p_dot = -omega p.
// Defined on the constraint manifold only.
CotangentRates cotangent_rhs(const CotangentPoint& pt,
                             const DiagonalInertia& inertia, double D);
SkewMatrix cotangent_omega(const CotangentPoint& pt,
                           const DiagonalInertia& inertia, double D);

// Extended field on R^{2n} minus {gamma = 0} for the operator built from
// (A, D).
CotangentRates cotangent_rhs_closed(const CotangentPoint& pt,
                                    const ChaplyginParams& params);

// <gamma ^ p, I^{-1}(gamma ^ xi)>/2.
double hamiltonian_reduced(const CotangentPoint& pt,
                           const DiagonalInertia& inertia, double D);
// (D q (p,p) - (p, A p)) / (2 D^2 q) with q = (gamma, A^{-1} gamma).
double hamiltonian_closed(const CotangentPoint& pt,
                          const ChaplyginParams& params);

// (gamma,gamma)(p,p) - (gamma,p)^2.
double momentum_K(const CotangentPoint& pt);

// (gamma, A^{-1} gamma).
double quadratic_q(const Vec& gamma, const Vec& a);

// (gamma, A^{-1} gamma)^{-(n-2)/2}.
double measure_density(const Vec& gamma, const Vec& a);
// Gradient of measure_density with respect to gamma.
Vec measure_density_gradient(const Vec& gamma, const Vec& a);

// Divergence of cotangent_rhs_closed as a closed expression.
double divergence_formula(const CotangentPoint& pt,
                          const ChaplyginParams& params);

// 1 / sqrt(det(I + D pr_{h^gamma})) on the coefficient basis.
double measure_density_full(const Vec& gamma, const DiagonalInertia& inertia,
                            double D);

// Classical vector form, n = 3. `moments` is diag I.
struct Classical3dState {
  Vec k;
  Vec gamma;
};

struct Classical3dRates {
  Vec k_dot;
  Vec gamma_dot;
};

// Solves k = I omega + D omega - D (omega, gamma) gamma.
Vec classical3d_omega(const Classical3dState& s, const Vec& moments, double D);
Classical3dRates classical3d_rhs(const Classical3dState& s, const Vec& moments,
                                 double D);
// (F1, F2, F3, F4) = ((k,gamma), (gamma,gamma), (k,omega)/2, (k,k)).
std::array<double, 4> classical3d_integrals(const Classical3dState& s,
                                            const Vec& moments, double D);
double classical3d_measure(const Vec& gamma, const Vec& moments, double D);

// I = s Id: gamma_dot = p/(s+D), p_dot = -(p,p) gamma/(s+D).
CotangentRates homogeneous_rhs(const CotangentPoint& pt, double s, double D);

// (gamma, p) -> (gamma ^ p, gamma).
ReducedFullState embed(const CotangentPoint& pt);
// Pushforward of a tangent vector: k_dot = gamma_dot ^ p + gamma ^ p_dot.
ReducedFullRates embed_rates(const CotangentPoint& pt,
                             const CotangentRates& rates);

// Flattened fields for the integrator. Cotangent states are (gamma, p);
// full states are (coefficients of k, gamma); classical states (k, gamma).
VectorField cotangent_field(const ChaplyginParams& params);
VectorField cotangent_generic_field(const DiagonalInertia& inertia, double D);
VectorField full_reduced_field(const DiagonalInertia& inertia, double D);
VectorField classical3d_field(const Vec& moments, double D);
VectorField homogeneous_field(double s, double D);

ReducedFullState unflatten_full(const Vec& y, Index n);
Vec flatten_full(const ReducedFullState& state);

}  // namespace chaplygin
