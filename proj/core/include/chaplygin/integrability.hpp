#pragma once

// Spheroconical chart on T*S^{n-1}, the Staeckel family of quadratic
// integrals of the tau-flow, linear integrals for equal a_i, Lagrange-case
// integrals of the t-flow, and the shared-foliation check.

#include <utility>
#include <vector>

#include "chaplygin/hamiltonization.hpp"
#include "chaplygin/numerics.hpp"
#include "chaplygin/veselova.hpp"

namespace chaplygin {

// Smallest admissible a_{i+1} - a_i for chart operations.
inline constexpr double kChartGap = 1e-6;

struct SpheroconicalPoint {
  Vec lambda;  // a_1 < lambda_1 < a_2 < ... < lambda_{n-1} < a_n
  Vec mu;
  // d(i, k) = a_i - lambda_k, computed from the nearer bracketing a to keep
  // relative accuracy close to coordinate hyperplanes.
  Mat offsets;
};

// Throws ParameterError unless a is strictly increasing with gaps >=
// kChartGap.
void require_chart_params(const Vec& a);

// Roots of sum gamma_i^2 / (a_i - lambda) = 0, one in each (a_k, a_{k+1}).
// Throws DomainError on a coordinate hyperplane (some gamma_i = 0).
SpheroconicalPoint spheroconical_from_cartesian(const TildePoint& pt,
                                                const Vec& a);

// gamma_i = sign_i sqrt(prod_k (a_i - lambda_k) / prod_{j != i}(a_i - a_j)),
// p~ = sum_k mu_k t_k / |t_k|^2 with t_k = d gamma / d lambda_k.
TildePoint cartesian_from_spheroconical(const Vec& lambda, const Vec& mu,
                                        const Vec& a, const Vec& signs);
// Same map from the stored offsets; keeps full relative accuracy next to
// coordinate hyperplanes.
TildePoint cartesian_from_spheroconical(const SpheroconicalPoint& sp,
                                        const Vec& a, const Vec& signs);

struct ChartIdentityResiduals {
  double p_norm = 0.0;   // (p~, p~)
  double q = 0.0;        // (gamma, A^{-1} gamma)
  double a_form = 0.0;   // (A p~, p~)
};

ChartIdentityResiduals chart_identity_residuals(const TildePoint& pt,
                                                const Vec& a);

// F_m = sum_k (-1)^m e_m(lambda \ lambda_k) U_k / prod_{s != k}(lambda_k -
// lambda_s), U_k = -2 D^2 P(lambda_k) lambda_k mu_k^2, m = 0..n-2.
Vec staeckel_integrals(const TildePoint& pt, const Vec& a, double D);
// Gradients in (gamma, p~) by the chain rule through the chart.
std::vector<PhaseGradient> staeckel_gradients(const TildePoint& pt,
                                              const Vec& a, double D);

// e_m of the given values, m = 0..size.
Vec elementary_symmetric(const Vec& values);

using IndexPair = std::pair<Index, Index>;

// f_ij = gamma_i p~_j - gamma_j p~_i; rejects pairs with a_i != a_j.
Vec linear_integrals(const TildePoint& pt, const Vec& a,
                     const std::vector<IndexPair>& pairs);
double linear_integral_unchecked(const TildePoint& pt, Index i, Index j);

// F_ij = (gamma_i p_j - gamma_j p_i)^2 / (gamma, A^{-1} gamma) over
// i < j < n-1 (zero-based). Rejects parameters with a_1..a_{n-1} not equal.
Vec lagrange_integrals(const CotangentPoint& pt, const ChaplyginParams& params);
Vec lagrange_integrals_unchecked(const CotangentPoint& pt,
                                 const ChaplyginParams& params);

struct FoliationQuantityDrift {
  std::string name;
  double chaplygin_drift = 0.0;
  double veselova_drift = 0.0;
};

struct FoliationReport {
  std::vector<FoliationQuantityDrift> quantities;
  double worst = 0.0;
  Trajectory chaplygin;
  Trajectory veselova;
};

// Integrates the Chaplygin t-flow and the Veselova flow from the same
// (gamma, p), evaluates H*, the Veselova Hamiltonian, K and F_0..F_{n-2}
// through p~ = N p along both, and reports max |Q(t) - Q(0)| / max(1,
// |Q(0)|) per quantity and flow.
FoliationReport foliation_check(const CotangentPoint& seed,
                                const ChaplyginParams& params,
                                const IntegratorConfig& config);

// Named tilde-variable integrals used by foliation and bracket checks:
// H*, Veselova H, K, F_0..F_{n-2}.
std::vector<std::pair<std::string, double>> tilde_integrals(
    const TildePoint& pt, const ChaplyginParams& params);

}  // namespace chaplygin
