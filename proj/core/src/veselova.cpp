#include "chaplygin/veselova.hpp"

#include <cmath>

namespace chaplygin {

namespace {

void require_nonzero(const Vec& gamma, const char* what) {
  if (gamma.squaredNorm() == 0.0 || !gamma.allFinite()) {
    throw DomainError(std::string(what) + ": gamma = 0");
  }
}

void require_moments(const Vec& moments) {
  if (moments.size() != 3) throw DimensionError("Veselova 3-D: needs n = 3");
  if (!(moments.array() > 1.0).all()) {
    throw ParameterError("Veselova 3-D: inertia eigenvalues must exceed 1");
  }
}

Eigen::Vector3d v3(const Vec& v) { return Eigen::Vector3d(v(0), v(1), v(2)); }

}  // namespace

CotangentRates veselova_reduced_rhs(const CotangentPoint& pt, const Vec& a) {
  require_same_dim(a.size(), pt.gamma.size(), "veselova_reduced_rhs");
  require_same_dim(a.size(), pt.p.size(), "veselova_reduced_rhs");
  require_nonzero(pt.gamma, "veselova_reduced_rhs");
  const Vec& g = pt.gamma;
  const Vec& p = pt.p;
  const Vec Ap = a.cwiseProduct(p);
  const double q = quadratic_q(g, a);
  return {(-p.dot(a.cwiseProduct(g)) * g + g.squaredNorm() * Ap) / q,
          (-p.dot(Ap) * g + p.dot(g) * Ap) / q};
}

VectorField veselova_field(const Vec& a) {
  return [a](const Vec& y) {
    const CotangentRates r =
        veselova_reduced_rhs({head_half(y), tail_half(y)}, a);
    return join(r.gamma_dot, r.p_dot);
  };
}

double veselova_hamiltonian(const TildePoint& pt, const Vec& a, double D) {
  require_same_dim(a.size(), pt.p_tilde.size(), "veselova_hamiltonian");
  return 0.5 * D * D * pt.p_tilde.dot(a.cwiseProduct(pt.p_tilde));
}

PhaseGradient veselova_hamiltonian_gradient(const TildePoint& pt, const Vec& a,
                                            double D) {
  return {Vec::Zero(a.size()), D * D * a.cwiseProduct(pt.p_tilde)};
}

double momentum_K_tilde(const TildePoint& pt, const Vec& a, double D) {
  return D * D * quadratic_q(pt.gamma, a) * pt.p_tilde.squaredNorm();
}

PhaseGradient momentum_K_tilde_gradient(const TildePoint& pt, const Vec& a,
                                        double D) {
  const double q = quadratic_q(pt.gamma, a);
  return {2.0 * D * D * pt.p_tilde.squaredNorm() * pt.gamma.cwiseQuotient(a),
          2.0 * D * D * q * pt.p_tilde};
}

Veselova3dRates veselova3d_rhs(const Veselova3dState& s, const Vec& moments) {
  require_moments(moments);
  const Eigen::Vector3d w = v3(s.w);
  const Eigen::Vector3d g = v3(s.gamma);
  const Eigen::Vector3d I = v3(moments);
  const Eigen::Vector3d c = I.cwiseProduct(w).cross(w);
  const Eigen::Vector3d Iinv_g = g.cwiseQuotient(I);
  const double denom = Iinv_g.dot(g);
  if (!(denom > 0.0)) throw DomainError("veselova3d_rhs: gamma = 0");
  const double lambda = -c.dot(Iinv_g) / denom;
  return {(c + lambda * g).cwiseQuotient(I), g.cross(w)};
}

VectorField veselova3d_field(const Vec& moments) {
  return [moments](const Vec& y) {
    const Veselova3dRates r =
        veselova3d_rhs({y.head(3), y.tail(3)}, moments);
    return join(r.w_dot, r.gamma_dot);
  };
}

VectorField veselova_tau_field(const Vec& a, double D) {
  return [a, D](const Vec& y) {
    const TildePoint pt{head_half(y), tail_half(y)};
    const TildeRates r =
        dirac_flow(veselova_hamiltonian_gradient(pt, a, D), pt.gamma, pt.p_tilde);
    return join(r.gamma_prime, r.p_tilde_prime);
  };
}

Vec veselova3d_K(const Veselova3dState& s, const Vec& moments) {
  const Vec Iw = moments.cwiseProduct(s.w);
  const Vec I0w = Iw - s.w;
  return Iw - I0w.dot(s.gamma) * s.gamma;
}

std::array<double, 4> veselova3d_integrals(const Veselova3dState& s,
                                           const Vec& moments) {
  require_moments(moments);
  const Vec K = veselova3d_K(s, moments);
  const double c = (moments.cwiseProduct(s.w) - s.w).dot(s.gamma);
  const double Kg = K.dot(s.gamma);
  return {Kg, s.gamma.squaredNorm(), 0.5 * K.dot(s.w) - 0.5 * Kg * c,
          K.squaredNorm()};
}

double veselova3d_measure(const Vec& gamma, const Vec& moments) {
  return std::sqrt(gamma.dot(gamma.cwiseQuotient(moments)));
}

Classical3dState fedorov_state(const Veselova3dState& s, const Vec& moments,
                               double D) {
  const FedorovImage img = fedorov_map_3d(moments, D, s.w, s.gamma);
  const Vec& w = img.omega;
  const Vec& g = img.gamma;
  Vec k = img.chaplygin_moments.cwiseProduct(w) + D * w - D * w.dot(g) * g;
  return {std::move(k), g};
}

FedorovReport fedorov_check(const Veselova3dState& s, const Vec& moments,
                            double D) {
  require_moments(moments);
  const FedorovImage img = fedorov_map_3d(moments, D, s.w, s.gamma);
  const Classical3dState cs = fedorov_state(s, moments, D);
  FedorovReport r;
  r.chaplygin = classical3d_integrals(cs, img.chaplygin_moments, D);
  r.veselova = veselova3d_integrals(s, moments);
  for (int i = 0; i < 4; ++i) {
    r.literal[i] = std::abs(r.chaplygin[i] - r.veselova[i]);
  }
  const auto& F = r.chaplygin;
  const auto& f = r.veselova;
  const double c = (moments.cwiseProduct(s.w) - s.w).dot(s.gamma);
  r.torus[0] = std::abs(F[0] + f[0]);
  r.torus[1] = std::abs(F[1] - f[1]);
  r.torus[2] = std::abs(F[2] - (f[3] - 2.0 * f[2] + c * c * (1.0 - f[1])) /
                                   (2.0 * D));
  r.torus[3] = std::abs(F[3] - f[3]);
  return r;
}

EllipsoidRates ellipsoid_geodesic_rhs(const Vec& x, const Vec& v,
                                      const Vec& a) {
  require_same_dim(a.size(), x.size(), "ellipsoid_geodesic_rhs");
  require_same_dim(a.size(), v.size(), "ellipsoid_geodesic_rhs");
  const Vec Ax = a.cwiseProduct(x);
  const double n2 = Ax.squaredNorm();
  if (!(n2 > 0.0)) throw DomainError("ellipsoid_geodesic_rhs: x = 0");
  return {v, -(v.dot(a.cwiseProduct(v)) / n2) * Ax};
}

VectorField ellipsoid_field(const Vec& a) {
  return [a](const Vec& y) {
    const EllipsoidRates r = ellipsoid_geodesic_rhs(head_half(y), tail_half(y), a);
    return join(r.x_dot, r.v_dot);
  };
}

Vec gauss_map(const Vec& x, const Vec& a) {
  require_same_dim(a.size(), x.size(), "gauss_map");
  const Vec Ax = a.cwiseProduct(x);
  if (!(Ax.norm() > 0.0)) throw DomainError("gauss_map: x = 0");
  return Ax.normalized();
}

Vec ellipsoid_point_from_normal(const Vec& gamma, const Vec& a) {
  require_nonzero(gamma, "ellipsoid_point_from_normal");
  return gamma.cwiseQuotient(a) / std::sqrt(quadratic_q(gamma, a));
}

void require_on_ellipsoid(const Vec& x, const Vec& v, const Vec& a,
                          double tol) {
  const Vec Ax = a.cwiseProduct(x);
  if (!(std::abs(x.dot(Ax) - 1.0) <= tol)) {
    throw DomainError("ellipsoid: (x, A x) != 1");
  }
  if (!(std::abs(v.dot(Ax)) <= tol * std::max(1.0, v.norm()))) {
    throw DomainError("ellipsoid: (v, A x) != 0");
  }
}

}  // namespace chaplygin
