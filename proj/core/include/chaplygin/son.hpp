#pragma once

// Linear algebra on so(n): skew matrices, wedge products, the invariant
// scalar product <X,Y> = -tr(XY)/2, projections onto h^gamma = R^n ^ gamma
// and its orthogonal complement, and the adjoint action of SO(n).

#include <Eigen/Dense>

#include <cstddef>
#include <utility>

#include "chaplygin/errors.hpp"

namespace chaplygin {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

// Absolute entry tolerance used when validating antisymmetry/orthogonality.
inline constexpr double kStructureTolerance = 1e-10;

// dim so(n) = n(n-1)/2.
constexpr Index skew_dim(Index n) { return n * (n - 1) / 2; }

// Position of the pair (i, j), i < j, in the row-major enumeration of the
// basis E_1^E_2, E_1^E_3, ..., E_{n-1}^E_n (all indices zero-based).
Index pair_index(Index n, Index i, Index j);
std::pair<Index, Index> pair_at(Index n, Index k);

class SkewMatrix {
 public:
  SkewMatrix() = default;
  explicit SkewMatrix(Index n) : m_(Mat::Zero(n, n)) {}

  // Throws DomainError unless |m + m^T| <= tol (entrywise, scaled by
  // max(1, |m|_max)).
  static SkewMatrix from_matrix(const Mat& m,
                                double tol = kStructureTolerance);
  // Antisymmetric part (m - m^T)/2; never throws.
  static SkewMatrix skew_part(const Mat& m);
  // E_i ^ E_j.
  static SkewMatrix basis(Index n, Index i, Index j);
  static SkewMatrix from_coefficients(Index n, const Vec& coeffs);

  // M_ij = <M, E_i ^ E_j> for i < j, in pair_index order.
  Vec coefficients() const;

  Index dim() const { return m_.rows(); }
  const Mat& matrix() const { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }

  // sqrt(<M, M>).
  double norm() const;

  SkewMatrix& operator+=(const SkewMatrix& o);
  SkewMatrix& operator-=(const SkewMatrix& o);
  SkewMatrix& operator*=(double s) {
    m_ *= s;
    return *this;
  }

  friend SkewMatrix operator+(SkewMatrix a, const SkewMatrix& b) {
    return a += b;
  }
  friend SkewMatrix operator-(SkewMatrix a, const SkewMatrix& b) {
    return a -= b;
  }
  friend SkewMatrix operator-(SkewMatrix a) {
    a.m_ = -a.m_;
    return a;
  }
  friend SkewMatrix operator*(double s, SkewMatrix a) { return a *= s; }
  friend SkewMatrix operator*(SkewMatrix a, double s) { return a *= s; }

  // Matrix-vector action M x.
  Vec operator*(const Vec& x) const;

 private:
  explicit SkewMatrix(Mat m) : m_(std::move(m)) {}
  Mat m_;
};

class RotationMatrix {
 public:
  RotationMatrix() = default;

  static RotationMatrix identity(Index n);
  // Throws DomainError unless g^T g = I and det g = +1 to kStructureTolerance.
  static RotationMatrix from_matrix(const Mat& g,
                                    double tol = kStructureTolerance);
  // Nearest rotation in the Frobenius norm (polar factor); used by
  // integrator projection steps.
  static RotationMatrix nearest(const Mat& g);

  Index dim() const { return g_.rows(); }
  const Mat& matrix() const { return g_; }
  RotationMatrix inverse() const { return RotationMatrix(g_.transpose()); }

  // max |g^T g - I|.
  double orthogonality_defect() const;

  Vec operator*(const Vec& x) const { return g_ * x; }
  friend RotationMatrix operator*(const RotationMatrix& a,
                                  const RotationMatrix& b) {
    return RotationMatrix(a.g_ * b.g_);
  }

 private:
  explicit RotationMatrix(Mat g) : g_(std::move(g)) {}
  Mat g_;
};

// x ^ y = x y^T - y x^T.
SkewMatrix wedge(const Vec& x, const Vec& y);

// <M, N> = -tr(MN)/2.
double inner(const SkewMatrix& m, const SkewMatrix& n);

// [M, N] = MN - NM.
SkewMatrix commutator(const SkewMatrix& m, const SkewMatrix& n);

// Orthogonal projection onto h^gamma: (M gamma) ^ gamma. Requires |gamma| = 1.
SkewMatrix proj_h_gamma(const SkewMatrix& m, const Vec& gamma);

// Projection onto so(n-1)^gamma = (h^gamma)^perp: M - proj_h_gamma(M, gamma).
SkewMatrix proj_complement(const SkewMatrix& m, const Vec& gamma);

// Ad_g M = g M g^T.
SkewMatrix adjoint(const RotationMatrix& g, const SkewMatrix& m);

// Group exponential so(n) -> SO(n).
RotationMatrix exp_map(const SkewMatrix& m);

// R^3 -> so(3), X -> [[0,-X3,X2],[X3,0,-X1],[-X2,X1,0]], and its inverse.
SkewMatrix hat(const Vec& x);
Vec vee(const SkewMatrix& m);

// Throws DimensionError when sizes differ.
void require_same_dim(Index a, Index b, const char* what);

}  // namespace chaplygin
