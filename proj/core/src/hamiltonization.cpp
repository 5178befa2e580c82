#include "chaplygin/hamiltonization.hpp"

#include <cmath>

namespace chaplygin {

namespace {

void require_nonzero(const Vec& gamma, const char* what) {
  if (gamma.squaredNorm() == 0.0 || !gamma.allFinite()) {
    throw DomainError(std::string(what) + ": gamma = 0");
  }
}

}  // namespace

double multiplier(const Vec& gamma, const Vec& a, double D) {
  require_nonzero(gamma, "multiplier");
  return 1.0 / (D * std::sqrt(quadratic_q(gamma, a)));
}

Vec multiplier_gradient(const Vec& gamma, const Vec& a, double D) {
  const double q = quadratic_q(gamma, a);
  return -multiplier(gamma, a, D) / q * gamma.cwiseQuotient(a);
}

TildePoint to_tilde(const CotangentPoint& pt, const ChaplyginParams& params) {
  require_same_dim(params.dim(), pt.gamma.size(), "to_tilde");
  return {pt.gamma, multiplier(pt.gamma, params.a(), params.D()) * pt.p};
}

CotangentPoint from_tilde(const TildePoint& pt, const ChaplyginParams& params) {
  require_same_dim(params.dim(), pt.gamma.size(), "from_tilde");
  return {pt.gamma, pt.p_tilde / multiplier(pt.gamma, params.a(), params.D())};
}

double hamiltonian_star(const TildePoint& pt, const ChaplyginParams& params) {
  require_same_dim(params.dim(), pt.gamma.size(), "hamiltonian_star");
  const Vec& a = params.a();
  const Vec& pt_ = pt.p_tilde;
  const double q = quadratic_q(pt.gamma, a);
  return 0.5 * (params.D() * q * pt_.squaredNorm() -
                pt_.dot(a.cwiseProduct(pt_)));
}

PhaseGradient hamiltonian_star_gradient(const TildePoint& pt,
                                        const ChaplyginParams& params) {
  const Vec& a = params.a();
  const double D = params.D();
  const Vec& p = pt.p_tilde;
  const double q = quadratic_q(pt.gamma, a);
  return {D * p.squaredNorm() * pt.gamma.cwiseQuotient(a),
          D * q * p - a.cwiseProduct(p)};
}

Multipliers lagrange_multipliers(const TildePoint& pt,
                                 const ChaplyginParams& params) {
  require_nonzero(pt.gamma, "lagrange_multipliers");
  const Vec& a = params.a();
  const Vec& g = pt.gamma;
  const Vec& p = pt.p_tilde;
  const Vec Ap = a.cwiseProduct(p);
  const double gg = g.squaredNorm();
  const double q = quadratic_q(g, a);
  return {Ap.dot(p) / (2.0 * gg), (params.D() * q * p.dot(g) - Ap.dot(g)) / gg};
}

Multipliers lagrange_multipliers_bracket(const TildePoint& pt,
                                         const ChaplyginParams& params) {
  require_nonzero(pt.gamma, "lagrange_multipliers_bracket");
  const PhaseGradient dH = hamiltonian_star_gradient(pt, params);
  const PhaseGradient d1 = psi1_gradient(pt.gamma, pt.p_tilde);
  const PhaseGradient d2 = psi2_gradient(pt.gamma, pt.p_tilde);
  const double b12 = canonical_bracket(d1, d2);
  return {canonical_bracket(dH, d2) / b12, -canonical_bracket(dH, d1) / b12};
}

TildeRates geodesic_rhs(const TildePoint& pt, const ChaplyginParams& params) {
  require_same_dim(params.dim(), pt.gamma.size(), "geodesic_rhs");
  require_same_dim(params.dim(), pt.p_tilde.size(), "geodesic_rhs");
  require_nonzero(pt.gamma, "geodesic_rhs");
  const Vec& a = params.a();
  const double D = params.D();
  const Vec& g = pt.gamma;
  const Vec& p = pt.p_tilde;
  const Vec Ap = a.cwiseProduct(p);
  const Vec Ainv_g = g.cwiseQuotient(a);
  const double q = g.dot(Ainv_g);
  const double gg = g.squaredNorm();
  const double gAp = g.dot(Ap);
  const double Dqpg = D * q * p.dot(g);

  TildeRates r;
  r.gamma_prime = D * q * p - Ap + (gAp / gg) * g - (Dqpg / gg) * g;
  r.p_tilde_prime = -D * p.squaredNorm() * Ainv_g + (p.dot(Ap) / gg) * g -
                    (gAp / gg) * p + (Dqpg / gg) * p;
  return r;
}

double canonical_bracket(const PhaseGradient& f, const PhaseGradient& g) {
  return f.d_gamma.dot(g.d_p) - f.d_p.dot(g.d_gamma);
}

PhaseGradient psi1_gradient(const Vec& gamma, const Vec& p) {
  return {2.0 * gamma, Vec::Zero(p.size())};
}

PhaseGradient psi2_gradient(const Vec& gamma, const Vec& p) {
  return {p, gamma};
}

double dirac_bracket(const PhaseGradient& f, const PhaseGradient& g,
                     const Vec& gamma, const Vec& p) {
  const PhaseGradient d1 = psi1_gradient(gamma, p);
  const PhaseGradient d2 = psi2_gradient(gamma, p);
  const double b12 = canonical_bracket(d1, d2);
  if (!(std::abs(b12) > 0.0)) {
    throw DomainError("dirac_bracket: {psi1, psi2} = 0");
  }
  return canonical_bracket(f, g) -
         (canonical_bracket(f, d1) * canonical_bracket(g, d2) -
          canonical_bracket(f, d2) * canonical_bracket(g, d1)) /
             b12;
}

PhaseGradient fd_phase_gradient(
    const std::function<double(const Vec&, const Vec&)>& f, const Vec& gamma,
    const Vec& p, double step) {
  const Index n = gamma.size();
  const Vec g = fd_gradient(
      [&](const Vec& z) { return f(z.head(n), z.tail(n)); }, join(gamma, p),
      step);
  return {g.head(n), g.tail(n)};
}

PhaseGradient gradient_of(const Observable& f, const Vec& gamma, const Vec& p) {
  if (f.gradient) return f.gradient(gamma, p);
  if (!f.value) throw ParameterError("Observable: neither value nor gradient");
  return fd_phase_gradient(f.value, gamma, p);
}

double dirac_bracket(const Observable& f, const Observable& g,
                     const Vec& gamma, const Vec& p) {
  return dirac_bracket(gradient_of(f, gamma, p), gradient_of(g, gamma, p),
                       gamma, p);
}

TildeRates dirac_flow(const PhaseGradient& dH, const Vec& gamma,
                      const Vec& p) {
  const Index n = gamma.size();
  TildeRates r{Vec(n), Vec(n)};
  for (Index i = 0; i < n; ++i) {
    const PhaseGradient gi{Vec::Unit(n, i), Vec::Zero(n)};
    const PhaseGradient pi{Vec::Zero(n), Vec::Unit(n, i)};
    r.gamma_prime(i) = dirac_bracket(gi, dH, gamma, p);
    r.p_tilde_prime(i) = dirac_bracket(pi, dH, gamma, p);
  }
  return r;
}

Mat almost_symplectic_matrix(const CotangentPoint& pt,
                             const ChaplyginParams& params) {
  const Index n = params.dim();
  require_same_dim(n, pt.gamma.size(), "almost_symplectic_matrix");
  const Vec& g = pt.gamma;
  const Vec& p = pt.p;
  const Vec Ainv_g = g.cwiseQuotient(params.a());
  const double q = g.dot(Ainv_g);
  // gamma block occupies 0..n-1, p block n..2n-1.
  Mat W = Mat::Zero(2 * n, 2 * n);
  for (Index i = 0; i < n; ++i) {
    W(n + i, i) += 1.0;
    W(i, n + i) -= 1.0;
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double c = p(i) * Ainv_g(j) / q;
      W(j, i) -= c;
      W(i, j) += c;
    }
  }
  return W;
}

PhaseGradient hamiltonian_closed_gradient(const CotangentPoint& pt,
                                          const ChaplyginParams& params) {
  const Vec& a = params.a();
  const double D = params.D();
  const Vec& p = pt.p;
  const Vec Ainv_g = pt.gamma.cwiseQuotient(a);
  const double q = pt.gamma.dot(Ainv_g);
  const Vec Ap = a.cwiseProduct(p);
  return {p.dot(Ap) / (D * D * q * q) * Ainv_g, p / D - Ap / (D * D * q)};
}

double almost_symplectic_check(const CotangentPoint& pt,
                               const ChaplyginParams& params) {
  require_on_manifold(pt);
  const Index n = params.dim();
  Mat C(2, 2 * n);
  C.row(0) << 2.0 * pt.gamma.transpose(), Vec::Zero(n).transpose();
  C.row(1) << pt.p.transpose(), pt.gamma.transpose();
  const Mat kernel = Eigen::FullPivLU<Mat>(C).kernel();
  const Mat basis = Eigen::HouseholderQR<Mat>(kernel).householderQ() *
                    Mat::Identity(2 * n, kernel.cols());

  const Mat W = almost_symplectic_matrix(pt, params);
  const CotangentRates X = cotangent_rhs_closed(pt, params);
  const PhaseGradient dH = hamiltonian_closed_gradient(pt, params);
  const Vec x = join(X.gamma_dot, X.p_dot);
  const Vec dh = join(dH.d_gamma, dH.d_p);
  double worst = 0.0;
  for (Index c = 0; c < basis.cols(); ++c) {
    const Vec v = basis.col(c);
    worst = std::max(worst, std::abs(v.dot(W * x) - dh.dot(v)));
  }
  return worst;
}

ClockMap::ClockMap(std::vector<double> times,
                   const std::vector<double>& n_values,
                   const std::vector<double>& n_rates)
    : times_(std::move(times)) {
  taus_ = hermite_cumulative(times_, n_values, n_rates);
  std::vector<double> inv_slopes(n_values.size());
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (!(n_values[i] > 0.0)) {
      throw DomainError("ClockMap: dtau/dt must be positive");
    }
    inv_slopes[i] = 1.0 / n_values[i];
  }
  forward_ = MonotoneCubic(times_, taus_, n_values);
  inverse_ = MonotoneCubic(taus_, times_, inv_slopes);
}

bool ClockMap::strictly_increasing() const {
  for (std::size_t i = 0; i + 1 < taus_.size(); ++i) {
    if (!(taus_[i + 1] > taus_[i])) return false;
  }
  return true;
}

Reparametrized reparametrize(const Trajectory& traj_t,
                             const ChaplyginParams& params) {
  const std::size_t m = traj_t.size();
  if (m < 2 || traj_t.rates.size() != m) {
    throw DomainError("reparametrize: need >= 2 samples with rates");
  }
  const Vec& a = params.a();
  const double D = params.D();
  std::vector<double> n_values(m), n_rates(m);
  Trajectory out;
  out.metadata = traj_t.metadata;
  out.metadata.model = traj_t.metadata.model + "@tau";
  out.states.reserve(m);
  out.rates.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec gamma = head_half(traj_t.states[i]);
    const Vec p = tail_half(traj_t.states[i]);
    const Vec gamma_dot = head_half(traj_t.rates[i]);
    const Vec p_dot = tail_half(traj_t.rates[i]);
    const double N = multiplier(gamma, a, D);
    const double N_dot = multiplier_gradient(gamma, a, D).dot(gamma_dot);
    n_values[i] = N;
    n_rates[i] = N_dot;
    out.states.push_back(join(gamma, N * p));
    out.rates.push_back(join(gamma_dot / N, (N_dot * p + N * p_dot) / N));
  }
  ClockMap clock(traj_t.times, n_values, n_rates);
  out.times = clock.taus();
  out.tau = clock.taus();
  return {std::move(clock), std::move(out)};
}

VectorField geodesic_field(const ChaplyginParams& params) {
  return [params](const Vec& y) {
    const TildeRates r = geodesic_rhs({head_half(y), tail_half(y)}, params);
    return join(r.gamma_prime, r.p_tilde_prime);
  };
}

}  // namespace chaplygin
