#pragma once

// Time reparametrisation dtau = N dt with N = 1/(D sqrt(gamma, A^{-1}gamma))
// and momentum rescaling p~ = N p, which turn the reduced ball into a geodesic
// flow on T*S^{n-1}; the Dirac bracket realising that flow; the almost
// symplectic form of the untransformed system.

#include <functional>

#include "chaplygin/chaplygin.hpp"
#include "chaplygin/numerics.hpp"

namespace chaplygin {

struct TildePoint {
  Vec gamma;
  Vec p_tilde;
};

// Gradient of a scalar on R^{2n} split into d/dgamma and d/dp.
struct PhaseGradient {
  Vec d_gamma;
  Vec d_p;
};

// A scalar field on R^{2n} with an optional analytic gradient. When the
// gradient is missing, central differences (step 1e-6) are used.
struct Observable {
  std::function<double(const Vec& gamma, const Vec& p)> value;
  std::function<PhaseGradient(const Vec& gamma, const Vec& p)> gradient;
};

double multiplier(const Vec& gamma, const Vec& a, double D);
// dN/dgamma = -N A^{-1} gamma / (gamma, A^{-1} gamma).
Vec multiplier_gradient(const Vec& gamma, const Vec& a, double D);

TildePoint to_tilde(const CotangentPoint& pt, const ChaplyginParams& params);
CotangentPoint from_tilde(const TildePoint& pt, const ChaplyginParams& params);

// (D (gamma, A^{-1} gamma)(p~, p~) - (p~, A p~)) / 2.
double hamiltonian_star(const TildePoint& pt, const ChaplyginParams& params);
PhaseGradient hamiltonian_star_gradient(const TildePoint& pt,
                                        const ChaplyginParams& params);

struct Multipliers {
  double lambda = 0.0;
  double mu = 0.0;
};

Multipliers lagrange_multipliers(const TildePoint& pt,
                                 const ChaplyginParams& params);
// lambda = {H, psi2}/{psi1, psi2}, mu = -{H, psi1}/{psi1, psi2}, through the
// canonical bracket.
Multipliers lagrange_multipliers_bracket(const TildePoint& pt,
                                         const ChaplyginParams& params);

struct TildeRates {
  Vec gamma_prime;
  Vec p_tilde_prime;
};

// The tau-flow as printed, valid on R^{2n} minus {gamma = 0}.
TildeRates geodesic_rhs(const TildePoint& pt, const ChaplyginParams& params);

// Canonical bracket sum dF/dgamma dG/dp - dF/dp dG/dgamma.
double canonical_bracket(const PhaseGradient& f, const PhaseGradient& g);

PhaseGradient psi1_gradient(const Vec& gamma, const Vec& p);
PhaseGradient psi2_gradient(const Vec& gamma, const Vec& p);

// {F,G}_d = {F,G} - ({F,psi1}{G,psi2} - {F,psi2}{G,psi1}) / {psi1,psi2}.
double dirac_bracket(const PhaseGradient& f, const PhaseGradient& g,
                     const Vec& gamma, const Vec& p);
double dirac_bracket(const Observable& f, const Observable& g,
                     const Vec& gamma, const Vec& p);

PhaseGradient gradient_of(const Observable& f, const Vec& gamma, const Vec& p);

// Hamiltonian vector field of a function with gradient dH under the Dirac
// bracket: gamma'_i = {gamma_i, H}_d, p'_i = {p_i, H}_d.
TildeRates dirac_flow(const PhaseGradient& dH, const Vec& gamma, const Vec& p);
PhaseGradient fd_phase_gradient(
    const std::function<double(const Vec&, const Vec&)>& f, const Vec& gamma,
    const Vec& p, double step = 1e-6);

// Matrix of the almost symplectic form
// w = sum dp_i ^ dgamma_i - sum_{i,j} p_i a_j^{-1} gamma_j / q dgamma_j ^ dgamma_i
// in coordinates (gamma, p), so that w(u, v) = u^T W v.
Mat almost_symplectic_matrix(const CotangentPoint& pt,
                             const ChaplyginParams& params);

// max over a basis v of T(T*S^{n-1}) of |w(v, X) - dH(v)| with X from the
// closed field and H the closed Hamiltonian.
double almost_symplectic_check(const CotangentPoint& pt,
                               const ChaplyginParams& params);

// Gradient of hamiltonian_closed.
PhaseGradient hamiltonian_closed_gradient(const CotangentPoint& pt,
                                          const ChaplyginParams& params);

// Sampled t <-> tau correspondence, tau(0) = 0.
class ClockMap {
 public:
  ClockMap() = default;
  // `n_values` are dtau/dt at `times`, `n_rates` their time derivatives.
  ClockMap(std::vector<double> times, const std::vector<double>& n_values,
           const std::vector<double>& n_rates);

  double tau(double t) const { return forward_(t); }
  double t(double tau) const { return inverse_(tau); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& taus() const { return taus_; }
  bool strictly_increasing() const;

 private:
  std::vector<double> times_, taus_;
  MonotoneCubic forward_, inverse_;
};

struct Reparametrized {
  ClockMap clock;
  // Times are tau, `tau` mirrors them; states (gamma, p~); rates d/dtau.
  Trajectory trajectory;
};

// Maps a t-trajectory of the closed field (states (gamma, p), rates
// d/dt) into the tau-clock and tilde momenta.
Reparametrized reparametrize(const Trajectory& traj_t,
                             const ChaplyginParams& params);

// Flattened (gamma, p~) field for the integrator.
VectorField geodesic_field(const ChaplyginParams& params);

}  // namespace chaplygin
