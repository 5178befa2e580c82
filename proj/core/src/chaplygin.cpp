#include "chaplygin/chaplygin.hpp"

#include <cmath>

namespace chaplygin {

namespace {

void require_nonzero(const Vec& gamma, const char* what) {
  if (gamma.squaredNorm() == 0.0 || !gamma.allFinite()) {
    throw DomainError(std::string(what) + ": gamma = 0");
  }
}

void require_params_dim(const ChaplyginParams& params, const Vec& v,
                        const char* what) {
  require_same_dim(params.dim(), v.size(), what);
}

// Orthonormal basis of gamma^perp as the columns of an n x (n-1) matrix.
Mat perp_basis(const Vec& gamma) {
  const Index n = gamma.size();
  Eigen::HouseholderQR<Mat> qr(Mat(gamma.normalized()));
  const Mat q = qr.householderQ() * Mat::Identity(n, n);
  return q.rightCols(n - 1);
}

}  // namespace

double constraint_phi1_defect(const CotangentPoint& pt) {
  return pt.gamma.squaredNorm() - 1.0;
}

double constraint_phi2(const CotangentPoint& pt) {
  require_same_dim(pt.gamma.size(), pt.p.size(), "constraint_phi2");
  return pt.gamma.dot(pt.p);
}

void require_unit(const Vec& gamma, double tol) {
  if (!(std::abs(gamma.squaredNorm() - 1.0) <= tol)) {
    throw DomainError("gamma is not a unit vector");
  }
}

void require_on_manifold(const CotangentPoint& pt, double tol) {
  require_unit(pt.gamma, tol);
  const double scale = std::max(1.0, pt.p.norm());
  if (!(std::abs(constraint_phi2(pt)) <= tol * scale)) {
    throw DomainError("point violates (gamma, p) = 0");
  }
}

Mat reduced_inertia_matrix(const Vec& gamma, const DiagonalInertia& inertia,
                           double D) {
  const Index n = gamma.size();
  require_same_dim(n, inertia.dim(), "reduced_inertia_matrix");
  const Index m = skew_dim(n);
  Mat L = Mat::Zero(m, m);
  // Column (i,j): E_i^E_j gamma = gamma_j e_i - gamma_i e_j =: x, and
  // pr(E_i^E_j) = x ^ gamma has (k,l) coefficient x_k gamma_l - x_l gamma_k.
  for (Index c = 0; c < m; ++c) {
    const auto [i, j] = pair_at(n, c);
    Vec x = Vec::Zero(n);
    x(i) = gamma(j);
    x(j) = -gamma(i);
    for (Index r = 0; r < m; ++r) {
      const auto [k, l] = pair_at(n, r);
      L(r, c) = D * (x(k) * gamma(l) - x(l) * gamma(k));
    }
    L(c, c) += inertia.coeff(i, j);
  }
  return L;
}

SkewMatrix omega_from_k(const SkewMatrix& k, const Vec& gamma,
                        const DiagonalInertia& inertia, double D) {
  require_same_dim(k.dim(), gamma.size(), "omega_from_k");
  const Mat L = reduced_inertia_matrix(gamma, inertia, D);
  Eigen::LDLT<Mat> ldlt(L);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw DomainError("omega_from_k: reduced inertia is not positive definite");
  }
  return SkewMatrix::from_coefficients(k.dim(), ldlt.solve(k.coefficients()));
}

ReducedFullRates full_reduced_rhs(const ReducedFullState& state,
                                  const DiagonalInertia& inertia, double D) {
  require_unit(state.gamma);
  const SkewMatrix omega = omega_from_k(state.k, state.gamma, inertia, D);
  return {commutator(state.k, omega), -(omega * state.gamma)};
}

double full_reduced_energy(const ReducedFullState& state,
                           const DiagonalInertia& inertia, double D) {
  return 0.5 * inner(state.k, omega_from_k(state.k, state.gamma, inertia, D));
}

SkewMatrix momentum_map(const ReducedFullState& state) {
  return proj_complement(state.k, state.gamma);
}

Vec xi_from_p(const CotangentPoint& pt, const DiagonalInertia& inertia,
              double D) {
  require_on_manifold(pt);
  require_same_dim(pt.gamma.size(), inertia.dim(), "xi_from_p");
  const Index n = pt.gamma.size();
  const Mat basis = perp_basis(pt.gamma);
  Mat M(n - 1, n - 1);
  for (Index c = 0; c < n - 1; ++c) {
    const Vec xi = basis.col(c);
    const Vec image =
        xi - D * (inertia.apply_inverse(wedge(pt.gamma, xi)) * pt.gamma);
    M.col(c) = basis.transpose() * image;
  }
  Eigen::FullPivLU<Mat> lu(M);
  if (!lu.isInvertible()) {
    throw DomainError("xi_from_p: singular restricted system");
  }
  return basis * lu.solve(basis.transpose() * pt.p);
}

double quadratic_q(const Vec& gamma, const Vec& a) {
  require_same_dim(gamma.size(), a.size(), "quadratic_q");
  return gamma.dot(gamma.cwiseQuotient(a));
}

Vec xi_from_p_closed(const CotangentPoint& pt, const ChaplyginParams& params) {
  require_params_dim(params, pt.gamma, "xi_from_p_closed");
  const Vec& a = params.a();
  const double q = quadratic_q(pt.gamma, a);
  const Vec Ap = a.cwiseProduct(pt.p);
  return (Ap - pt.p.dot(a.cwiseProduct(pt.gamma)) * pt.gamma) /
         (params.D() * q);
}

SkewMatrix cotangent_omega(const CotangentPoint& pt,
                           const DiagonalInertia& inertia, double D) {
  const Vec xi = xi_from_p(pt, inertia, D);
  return inertia.apply_inverse(wedge(pt.gamma, xi));
}

CotangentRates cotangent_rhs(const CotangentPoint& pt,
                             const DiagonalInertia& inertia, double D) {
  const SkewMatrix omega = cotangent_omega(pt, inertia, D);
  return {-(omega * pt.gamma), -(omega * pt.p)};
}

CotangentRates cotangent_rhs_closed(const CotangentPoint& pt,
                                    const ChaplyginParams& params) {
  require_params_dim(params, pt.gamma, "cotangent_rhs_closed");
  require_params_dim(params, pt.p, "cotangent_rhs_closed");
  require_nonzero(pt.gamma, "cotangent_rhs_closed");
  const Vec& a = params.a();
  const double D = params.D();
  const Vec& g = pt.gamma;
  const Vec& p = pt.p;
  const Vec Ainv_g = g.cwiseQuotient(a);
  const Vec Ap = a.cwiseProduct(p);
  const double q = g.dot(Ainv_g);
  const double Dq = D * q;
  const double D2q = D * D * q;

  CotangentRates r;
  r.gamma_dot = p / D - (p.dot(g) / Dq) * Ainv_g + (g.dot(Ap) / D2q) * g -
                (g.dot(g) / D2q) * Ap;
  r.p_dot = (p.dot(Ainv_g) / Dq) * p - (p.dot(p) / Dq) * Ainv_g +
            (p.dot(Ap) / D2q) * g - (p.dot(g) / D2q) * Ap;
  return r;
}

double hamiltonian_reduced(const CotangentPoint& pt,
                           const DiagonalInertia& inertia, double D) {
  const SkewMatrix omega = cotangent_omega(pt, inertia, D);
  return 0.5 * inner(wedge(pt.gamma, pt.p), omega);
}

double hamiltonian_closed(const CotangentPoint& pt,
                          const ChaplyginParams& params) {
  require_params_dim(params, pt.gamma, "hamiltonian_closed");
  require_nonzero(pt.gamma, "hamiltonian_closed");
  const Vec& a = params.a();
  const double D = params.D();
  const double q = quadratic_q(pt.gamma, a);
  const double pAp = pt.p.dot(a.cwiseProduct(pt.p));
  return (D * q * pt.p.squaredNorm() - pAp) / (2.0 * D * D * q);
}

double momentum_K(const CotangentPoint& pt) {
  require_same_dim(pt.gamma.size(), pt.p.size(), "momentum_K");
  const double gp = pt.gamma.dot(pt.p);
  return pt.gamma.squaredNorm() * pt.p.squaredNorm() - gp * gp;
}

double measure_density(const Vec& gamma, const Vec& a) {
  require_nonzero(gamma, "measure_density");
  const double n = static_cast<double>(gamma.size());
  return std::pow(quadratic_q(gamma, a), -(n - 2.0) / 2.0);
}

Vec measure_density_gradient(const Vec& gamma, const Vec& a) {
  const double n = static_cast<double>(gamma.size());
  const double q = quadratic_q(gamma, a);
  return -(n - 2.0) * measure_density(gamma, a) / q * gamma.cwiseQuotient(a);
}

double divergence_formula(const CotangentPoint& pt,
                          const ChaplyginParams& params) {
  require_params_dim(params, pt.gamma, "divergence_formula");
  require_nonzero(pt.gamma, "divergence_formula");
  const Vec& a = params.a();
  const double D = params.D();
  const Vec& g = pt.gamma;
  const Vec& p = pt.p;
  const double n = static_cast<double>(g.size());
  const Vec Ainv_g = g.cwiseQuotient(a);
  const double q = g.dot(Ainv_g);
  const double trA = a.sum();
  const double trAinv = a.cwiseInverse().sum();
  const double Ainv2 = Ainv_g.squaredNorm();

  const double main = (n - 2.0) * (g.dot(p.cwiseQuotient(a)) / (D * q) +
                                   g.dot(a.cwiseProduct(p)) / (D * D * q));
  const double psi = (2.0 * Ainv2 / (D * q * q) +
                      2.0 * g.squaredNorm() / (D * D * q * q) -
                      trAinv / (D * q) - trA / (D * D * q)) *
                     g.dot(p);
  return main + psi;
}

double measure_density_full(const Vec& gamma, const DiagonalInertia& inertia,
                            double D) {
  require_unit(gamma);
  const double det = reduced_inertia_matrix(gamma, inertia, D).determinant();
  if (!(det > 0.0)) throw DomainError("measure_density_full: det <= 0");
  return 1.0 / std::sqrt(det);
}

namespace {

void require_3d(const Vec& v, const char* what) {
  if (v.size() != 3) throw DimensionError(std::string(what) + ": needs n = 3");
}

Eigen::Matrix3d classical_operator(const Vec& gamma, const Vec& moments,
                                   double D) {
  Eigen::Matrix3d K = moments.asDiagonal();
  K += D * (Eigen::Matrix3d::Identity() - gamma * gamma.transpose());
  return K;
}

Eigen::Vector3d v3(const Vec& v) { return Eigen::Vector3d(v(0), v(1), v(2)); }

}  // namespace

Vec classical3d_omega(const Classical3dState& s, const Vec& moments,
                      double D) {
  require_3d(s.k, "classical3d_omega");
  require_3d(s.gamma, "classical3d_omega");
  require_3d(moments, "classical3d_omega");
  Eigen::LDLT<Eigen::Matrix3d> ldlt(classical_operator(s.gamma, moments, D));
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw DomainError("classical3d_omega: singular operator");
  }
  return ldlt.solve(v3(s.k));
}

Classical3dRates classical3d_rhs(const Classical3dState& s, const Vec& moments,
                                 double D) {
  require_unit(s.gamma);
  const Eigen::Vector3d w = v3(classical3d_omega(s, moments, D));
  return {v3(s.k).cross(w), v3(s.gamma).cross(w)};
}

std::array<double, 4> classical3d_integrals(const Classical3dState& s,
                                            const Vec& moments, double D) {
  const Vec w = classical3d_omega(s, moments, D);
  return {s.k.dot(s.gamma), s.gamma.squaredNorm(), 0.5 * s.k.dot(w),
          s.k.squaredNorm()};
}

double classical3d_measure(const Vec& gamma, const Vec& moments, double D) {
  require_3d(gamma, "classical3d_measure");
  require_3d(moments, "classical3d_measure");
  require_unit(gamma);
  const Vec shifted = moments.array() + D;
  const double det = shifted.prod();
  const double rad =
      det * (1.0 - D * gamma.dot(gamma.cwiseQuotient(shifted)));
  if (!(rad > 0.0)) throw DomainError("classical3d_measure: radicand <= 0");
  return 1.0 / std::sqrt(rad);
}

CotangentRates homogeneous_rhs(const CotangentPoint& pt, double s, double D) {
  require_on_manifold(pt);
  const double sD = s + D;
  return {pt.p / sD, -(pt.p.squaredNorm() / sD) * pt.gamma};
}

ReducedFullState embed(const CotangentPoint& pt) {
  require_on_manifold(pt);
  return {wedge(pt.gamma, pt.p), pt.gamma};
}

ReducedFullRates embed_rates(const CotangentPoint& pt,
                             const CotangentRates& rates) {
  return {wedge(rates.gamma_dot, pt.p) + wedge(pt.gamma, rates.p_dot),
          rates.gamma_dot};
}

VectorField cotangent_field(const ChaplyginParams& params) {
  return [params](const Vec& y) {
    const CotangentRates r =
        cotangent_rhs_closed({head_half(y), tail_half(y)}, params);
    return join(r.gamma_dot, r.p_dot);
  };
}

VectorField cotangent_generic_field(const DiagonalInertia& inertia, double D) {
  return [inertia, D](const Vec& y) {
    // Stage points of an explicit scheme leave the manifold slightly; the
    // generic field is evaluated at their projection.
    const Vec z = project_cotangent(y);
    const CotangentRates r =
        cotangent_rhs({head_half(z), tail_half(z)}, inertia, D);
    return join(r.gamma_dot, r.p_dot);
  };
}

ReducedFullState unflatten_full(const Vec& y, Index n) {
  const Index m = skew_dim(n);
  require_same_dim(y.size(), m + n, "unflatten_full");
  return {SkewMatrix::from_coefficients(n, y.head(m)), y.tail(n)};
}

Vec flatten_full(const ReducedFullState& state) {
  return join(state.k.coefficients(), state.gamma);
}

VectorField full_reduced_field(const DiagonalInertia& inertia, double D) {
  return [inertia, D](const Vec& y) {
    const Index n = inertia.dim();
    ReducedFullState s = unflatten_full(y, n);
    s.gamma.normalize();
    const ReducedFullRates r = full_reduced_rhs(s, inertia, D);
    return join(r.k_dot.coefficients(), r.gamma_dot);
  };
}

VectorField classical3d_field(const Vec& moments, double D) {
  return [moments, D](const Vec& y) {
    Classical3dState s{y.head(3), y.tail(3)};
    s.gamma.normalize();
    const Classical3dRates r = classical3d_rhs(s, moments, D);
    return join(r.k_dot, r.gamma_dot);
  };
}

VectorField homogeneous_field(double s, double D) {
  return [s, D](const Vec& y) {
    const Vec z = project_cotangent(y);
    const CotangentRates r = homogeneous_rhs({head_half(z), tail_half(z)}, s, D);
    return join(r.gamma_dot, r.p_dot);
  };
}

}  // namespace chaplygin
