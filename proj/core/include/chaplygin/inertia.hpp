#pragma once

// Inertia operators on so(n) that are diagonal in the basis E_i ^ E_j,
// together with the parameter families they come from.

#include "chaplygin/son.hpp"

namespace chaplygin {

class DiagonalInertia {
 public:
  DiagonalInertia() = default;

  // `table` is n x n; only entries i < j are read. All must be > 0.
  static DiagonalInertia from_table(const Mat& table);
  static DiagonalInertia scalar(Index n, double s);

  Index dim() const { return c_.rows(); }
  // c_ij for i != j (symmetric).
  double coeff(Index i, Index j) const { return c_(i, j); }
  const Mat& table() const { return c_; }

  // M_ij -> c_ij M_ij in the E_i ^ E_j basis.
  SkewMatrix apply(const SkewMatrix& m) const;
  SkewMatrix apply_inverse(const SkewMatrix& m) const;

  // Diagonal of the operator in pair_index order.
  Vec diagonal() const;

 private:
  explicit DiagonalInertia(Mat c) : c_(std::move(c)) {}
  Mat c_;
};

// A = diag(a_1..a_n) and D = m rho^2 with 0 < a_i a_j < D for i != j.
class ChaplyginParams {
 public:
  ChaplyginParams() = default;
  // Throws ParameterError naming the violated inequality.
  ChaplyginParams(Vec a, double D);

  Index dim() const { return a_.size(); }
  const Vec& a() const { return a_; }
  double D() const { return D_; }

  bool is_homogeneous() const;
  // a_1 = ... = a_{n-1} != a_n.
  bool is_lagrange_case() const;
  // For n >= 4 the operator is not, in general, the inertia operator of a
  // physical rigid body; n = 3 and the Lagrange case are.
  bool is_physical_rigid_body() const;

 private:
  Vec a_;
  double D_ = 0.0;
};

// c_ij = a_i a_j D / (D - a_i a_j).
DiagonalInertia chaplygin_inertia(const ChaplyginParams& params);

// c_ij = 1 / (a_i a_j). Throws ParameterError on a_i <= 0.
DiagonalInertia veselova_inertia(const Vec& a);

// Principal moments (I_1, I_2, I_3) of an so(3) operator under the hat map:
// I_1 = c_23, I_2 = c_13, I_3 = c_12.
Vec principal_moments_3d(const DiagonalInertia& inertia);

// Inverse of chaplygin_inertia for n = 3: the A that reproduces the given
// principal moments. Throws ParameterError if the moments are not positive.
ChaplyginParams inertia_from_principal_3d(const Vec& moments, double D);

struct LagrangeCase {
  ChaplyginParams params;
  // Mass tensor J = diag(J_1, ..., J_1, J_n) with c_ij = J_i + J_j.
  Vec mass_tensor;
};

// a = (a1, ..., a1, an) in dimension n. Requires a1 != an and
// 2 an D > a1 an + a1 D.
LagrangeCase lagrange_params(Index n, double a1, double an, double D);

// 3-D correspondence between a Veselova body (inertia diag `veselova_moments`,
// all > 1, angular velocity w) and a Chaplygin ball:
// I = D (I_v - Id)^{-1}, omega = -(I_v - Id) w / D.
struct FedorovImage {
  Vec chaplygin_moments;
  Vec omega;
  Vec gamma;
};

FedorovImage fedorov_map_3d(const Vec& veselova_moments, double D,
                            const Vec& w, const Vec& gamma);
// I_v = Id + D I^{-1}, w = -I omega.
Vec fedorov_veselova_moments(const Vec& chaplygin_moments, double D);
Vec fedorov_w_from_omega(const Vec& chaplygin_moments, const Vec& omega);

}  // namespace chaplygin
