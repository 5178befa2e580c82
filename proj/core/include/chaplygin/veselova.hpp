#pragma once

// The reduced Veselova flow on T*S^{n-1}, the 3-D Veselova body, its
// correspondence with the Chaplygin ball, and the ellipsoid geodesic flow
// whose Gauss image traces the same curves.

#include <array>

#include "chaplygin/chaplygin.hpp"
#include "chaplygin/hamiltonization.hpp"

namespace chaplygin {

// gamma_dot = (-(p, A gamma) gamma + (gamma, gamma) A p) / q,
// p_dot = (-(p, A p) gamma + (p, gamma) A p) / q, q = (gamma, A^{-1} gamma).
// Both are -Phi_1 applied to gamma and p with
// Phi_1 = (gamma ^ A p) / q.
CotangentRates veselova_reduced_rhs(const CotangentPoint& pt, const Vec& a);
VectorField veselova_field(const Vec& a);

// (D^2 / 2)(A p~, p~).
double veselova_hamiltonian(const TildePoint& pt, const Vec& a, double D);
PhaseGradient veselova_hamiltonian_gradient(const TildePoint& pt, const Vec& a,
                                            double D);

// D^2 (A^{-1} gamma, gamma)(p~, p~).
double momentum_K_tilde(const TildePoint& pt, const Vec& a, double D);
PhaseGradient momentum_K_tilde_gradient(const TildePoint& pt, const Vec& a,
                                        double D);

// Dirac-bracket flow of the Veselova Hamiltonian in (gamma, p~); the reduced
// Veselova flow maps onto it under dtau = N dt, p~ = N p.
VectorField veselova_tau_field(const Vec& a, double D);

struct Veselova3dState {
  Vec w;
  Vec gamma;
};

struct Veselova3dRates {
  Vec w_dot;
  Vec gamma_dot;
};

// I w_dot = I w x w + lambda gamma, gamma_dot = gamma x w, with
// lambda = -(I w x w, I^{-1} gamma) / (I^{-1} gamma, gamma).
Veselova3dRates veselova3d_rhs(const Veselova3dState& s, const Vec& moments);
VectorField veselova3d_field(const Vec& moments);
// K = I w - (I0 w, gamma) gamma, I0 = I - Id.
Vec veselova3d_K(const Veselova3dState& s, const Vec& moments);
// (f1, f2, f3, f4).
std::array<double, 4> veselova3d_integrals(const Veselova3dState& s,
                                           const Vec& moments);
// sqrt((I^{-1} gamma, gamma)).
double veselova3d_measure(const Vec& gamma, const Vec& moments);

struct FedorovReport {
  // |F_i(k, gamma) - f_i(w, gamma)|, i = 1..4, through the (I, omega) map.
  std::array<double, 4> literal{};
  // Residuals of F1 = -f1, F2 = f2, F3 = (f4 - 2 f3 + c^2 (1 - f2)) / (2D),
  // F4 = f4 with c = (I0 w, gamma): the relations that carry tori to tori.
  std::array<double, 4> torus{};
  std::array<double, 4> chaplygin{};
  std::array<double, 4> veselova{};
};

FedorovReport fedorov_check(const Veselova3dState& s, const Vec& moments,
                            double D);
// Chaplygin state (k, gamma) that (tr1) assigns to a Veselova state.
Classical3dState fedorov_state(const Veselova3dState& s, const Vec& moments,
                               double D);

// Geodesics of (x, A x) = 1: x_dot = v,
// v_dot = -((v, A v) / |A x|^2) A x.
struct EllipsoidRates {
  Vec x_dot;
  Vec v_dot;
};

EllipsoidRates ellipsoid_geodesic_rhs(const Vec& x, const Vec& v,
                                      const Vec& a);
VectorField ellipsoid_field(const Vec& a);
// A x / |A x|.
Vec gauss_map(const Vec& x, const Vec& a);
// x on the ellipsoid whose normal is gamma: A^{-1}gamma / sqrt(q).
Vec ellipsoid_point_from_normal(const Vec& gamma, const Vec& a);
// Throws DomainError unless (x, Ax) = 1 and (v, Ax) = 0 to `tol`.
void require_on_ellipsoid(const Vec& x, const Vec& v, const Vec& a,
                          double tol = 1e-8);

}  // namespace chaplygin
