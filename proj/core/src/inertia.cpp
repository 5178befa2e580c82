#include "chaplygin/inertia.hpp"

#include <cmath>
#include <sstream>

namespace chaplygin {

DiagonalInertia DiagonalInertia::from_table(const Mat& table) {
  if (table.rows() != table.cols()) {
    throw DimensionError("DiagonalInertia: table is not square");
  }
  const Index n = table.rows();
  Mat c = Mat::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double v = table(i, j);
      if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << "DiagonalInertia: coefficient c_" << i + 1 << j + 1
            << " = " << v << " is not a positive finite number";
        throw ParameterError(msg.str());
      }
      c(i, j) = v;
      c(j, i) = v;
    }
  }
  return DiagonalInertia(std::move(c));
}

DiagonalInertia DiagonalInertia::scalar(Index n, double s) {
  return from_table(Mat::Constant(n, n, s));
}

SkewMatrix DiagonalInertia::apply(const SkewMatrix& m) const {
  require_same_dim(dim(), m.dim(), "DiagonalInertia::apply");
  return SkewMatrix::from_matrix(Mat(c_.cwiseProduct(m.matrix())));
}

SkewMatrix DiagonalInertia::apply_inverse(const SkewMatrix& m) const {
  require_same_dim(dim(), m.dim(), "DiagonalInertia::apply_inverse");
  const Index n = dim();
  Mat out = Mat::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j) out(i, j) = m(i, j) / c_(i, j);
    }
  }
  return SkewMatrix::from_matrix(out);
}

Vec DiagonalInertia::diagonal() const {
  const Index n = dim();
  Vec d(skew_dim(n));
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) d(k++) = c_(i, j);
  }
  return d;
}

ChaplyginParams::ChaplyginParams(Vec a, double D) : a_(std::move(a)), D_(D) {
  if (a_.size() < 2) throw DimensionError("ChaplyginParams: need n >= 2");
  if (!(D_ > 0.0) || !std::isfinite(D_)) {
    throw ParameterError("ChaplyginParams: D must be positive");
  }
  for (Index i = 0; i < a_.size(); ++i) {
    if (!(a_(i) > 0.0) || !std::isfinite(a_(i))) {
      std::ostringstream msg;
      msg << "ChaplyginParams: a_" << i + 1 << " = " << a_(i)
          << " violates a_i > 0";
      throw ParameterError(msg.str());
    }
  }
  for (Index i = 0; i < a_.size(); ++i) {
    for (Index j = i + 1; j < a_.size(); ++j) {
      if (!(a_(i) * a_(j) < D_)) {
        std::ostringstream msg;
        msg << "ChaplyginParams: a_" << i + 1 << " a_" << j + 1 << " = "
            << a_(i) * a_(j) << " violates 0 < a_i a_j < D = " << D_;
        throw ParameterError(msg.str());
      }
    }
  }
}

bool ChaplyginParams::is_homogeneous() const {
  return (a_.array() == a_(0)).all();
}

bool ChaplyginParams::is_lagrange_case() const {
  const Index n = dim();
  return (a_.head(n - 1).array() == a_(0)).all() && a_(n - 1) != a_(0);
}

bool ChaplyginParams::is_physical_rigid_body() const {
  return dim() <= 3 || is_homogeneous() || is_lagrange_case();
}

DiagonalInertia chaplygin_inertia(const ChaplyginParams& params) {
  const Index n = params.dim();
  const Vec& a = params.a();
  const double D = params.D();
  Mat c = Mat::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double aa = a(i) * a(j);
      c(i, j) = aa * D / (D - aa);
    }
  }
  return DiagonalInertia::from_table(c);
}

DiagonalInertia veselova_inertia(const Vec& a) {
  const Index n = a.size();
  for (Index i = 0; i < n; ++i) {
    if (!(a(i) > 0.0)) {
      throw ParameterError("veselova_inertia: a_i must be positive");
    }
  }
  Mat c = Mat::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) c(i, j) = 1.0 / (a(i) * a(j));
  }
  return DiagonalInertia::from_table(c);
}

Vec principal_moments_3d(const DiagonalInertia& inertia) {
  if (inertia.dim() != 3) {
    throw DimensionError("principal_moments_3d: requires n = 3");
  }
  return Vec{{inertia.coeff(1, 2), inertia.coeff(0, 2), inertia.coeff(0, 1)}};
}

ChaplyginParams inertia_from_principal_3d(const Vec& moments, double D) {
  if (moments.size() != 3) {
    throw DimensionError("inertia_from_principal_3d: requires 3 moments");
  }
  if (!(moments.array() > 0.0).all() || !(D > 0.0)) {
    throw ParameterError(
        "inertia_from_principal_3d: moments and D must be positive");
  }
  const double i1 = moments(0), i2 = moments(1), i3 = moments(2);
  const double num = std::sqrt(i1 * i2 * i3 * D);
  const double den = std::sqrt((i1 + D) * (i2 + D) * (i3 + D));
  Vec a(3);
  for (Index i = 0; i < 3; ++i) {
    a(i) = num * (moments(i) + D) / (moments(i) * den);
  }
  ChaplyginParams params(a, D);
  const Vec back = principal_moments_3d(chaplygin_inertia(params));
  if (((back - moments).cwiseAbs().array() >
       1e-9 * moments.cwiseAbs().array().max(1.0))
          .any()) {
    throw ParameterError(
        "inertia_from_principal_3d: moments are not reproduced by any "
        "admissible A");
  }
  return params;
}

LagrangeCase lagrange_params(Index n, double a1, double an, double D) {
  if (n < 3) throw DimensionError("lagrange_params: requires n >= 3");
  if (a1 == an) {
    throw ParameterError("lagrange_params: requires a_1 != a_n");
  }
  if (!(2.0 * an * D > a1 * an + a1 * D)) {
    throw ParameterError(
        "lagrange_params: violates 2 a_n D > a_1 a_n + a_1 D");
  }
  Vec a = Vec::Constant(n, a1);
  a(n - 1) = an;
  ChaplyginParams params(a, D);

  const double j1 = a1 * a1 * D / (2.0 * (D - a1 * a1));
  const double jn = a1 * an * D / (D - a1 * an) - j1;
  Vec J = Vec::Constant(n, j1);
  J(n - 1) = jn;

  // I omega = J omega + omega J means c_ij = J_i + J_j.
  const DiagonalInertia c = chaplygin_inertia(params);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double diff = c.coeff(i, j) - (J(i) + J(j));
      if (std::abs(diff) > 1e-10 * c.coeff(i, j)) {
        throw ParameterError("lagrange_params: c_ij != J_i + J_j");
      }
    }
  }
  return {std::move(params), std::move(J)};
}

namespace {

void require_veselova_moments(const Vec& m) {
  if (m.size() != 3) throw DimensionError("Fedorov map: requires n = 3");
  if (!(m.array() > 1.0).all()) {
    throw ParameterError(
        "Fedorov map: Veselova inertia eigenvalues must exceed 1");
  }
}

}  // namespace

FedorovImage fedorov_map_3d(const Vec& veselova_moments, double D,
                            const Vec& w, const Vec& gamma) {
  require_veselova_moments(veselova_moments);
  require_same_dim(w.size(), 3, "fedorov_map_3d");
  require_same_dim(gamma.size(), 3, "fedorov_map_3d");
  if (!(D > 0.0)) throw ParameterError("fedorov_map_3d: D must be positive");
  const Vec shifted = veselova_moments.array() - 1.0;
  FedorovImage out;
  out.chaplygin_moments = D * shifted.cwiseInverse();
  out.omega = -(shifted.cwiseProduct(w)) / D;
  out.gamma = gamma;
  return out;
}

Vec fedorov_veselova_moments(const Vec& chaplygin_moments, double D) {
  return (1.0 + D * chaplygin_moments.cwiseInverse().array()).matrix();
}

Vec fedorov_w_from_omega(const Vec& chaplygin_moments, const Vec& omega) {
  return -chaplygin_moments.cwiseProduct(omega);
}

}  // namespace chaplygin
