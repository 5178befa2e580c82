#include "chaplygin/son.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <string>

namespace chaplygin {

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

Index pair_index(Index n, Index i, Index j) {
  if (i >= j || i < 0 || j >= n) {
    throw DimensionError("pair_index: need 0 <= i < j < n");
  }
  // Rows 0..i-1 contribute (n-1) + (n-2) + ... + (n-i) entries.
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<Index, Index> pair_at(Index n, Index k) {
  Index i = 0;
  while (k >= n - 1 - i) {
    k -= n - 1 - i;
    ++i;
  }
  return {i, i + 1 + k};
}

SkewMatrix SkewMatrix::from_matrix(const Mat& m, double tol) {
  if (m.rows() != m.cols()) {
    throw DimensionError("SkewMatrix: matrix is not square");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m + m.transpose()).cwiseAbs().maxCoeff() > tol * scale) {
    throw DomainError("SkewMatrix: matrix is not antisymmetric");
  }
  return skew_part(m);
}

SkewMatrix SkewMatrix::skew_part(const Mat& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("SkewMatrix: matrix is not square");
  }
  return SkewMatrix(Mat(0.5 * (m - m.transpose())));
}

SkewMatrix SkewMatrix::basis(Index n, Index i, Index j) {
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
    throw DimensionError("SkewMatrix::basis: invalid index pair");
  }
  SkewMatrix e(n);
  e.m_(i, j) = 1.0;
  e.m_(j, i) = -1.0;
  return e;
}

SkewMatrix SkewMatrix::from_coefficients(Index n, const Vec& coeffs) {
  require_same_dim(coeffs.size(), skew_dim(n), "SkewMatrix::from_coefficients");
  SkewMatrix out(n);
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j, ++k) {
      out.m_(i, j) = coeffs(k);
      out.m_(j, i) = -coeffs(k);
    }
  }
  return out;
}

Vec SkewMatrix::coefficients() const {
  const Index n = dim();
  Vec c(skew_dim(n));
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) c(k++) = m_(i, j);
  }
  return c;
}

double SkewMatrix::norm() const { return std::sqrt(inner(*this, *this)); }

SkewMatrix& SkewMatrix::operator+=(const SkewMatrix& o) {
  require_same_dim(dim(), o.dim(), "SkewMatrix::operator+");
  m_ += o.m_;
  return *this;
}

SkewMatrix& SkewMatrix::operator-=(const SkewMatrix& o) {
  require_same_dim(dim(), o.dim(), "SkewMatrix::operator-");
  m_ -= o.m_;
  return *this;
}

Vec SkewMatrix::operator*(const Vec& x) const {
  require_same_dim(dim(), x.size(), "SkewMatrix * Vec");
  return m_ * x;
}

RotationMatrix RotationMatrix::identity(Index n) {
  return RotationMatrix(Mat::Identity(n, n));
}

RotationMatrix RotationMatrix::from_matrix(const Mat& g, double tol) {
  if (g.rows() != g.cols()) {
    throw DimensionError("RotationMatrix: matrix is not square");
  }
  const Index n = g.rows();
  if ((g.transpose() * g - Mat::Identity(n, n)).cwiseAbs().maxCoeff() > tol) {
    throw DomainError("RotationMatrix: matrix is not orthogonal");
  }
  if (std::abs(g.determinant() - 1.0) > tol) {
    throw DomainError("RotationMatrix: determinant is not +1");
  }
  return RotationMatrix(g);
}

RotationMatrix RotationMatrix::nearest(const Mat& g) {
  Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat u = svd.matrixU();
  const Mat& v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0) u.col(u.cols() - 1) *= -1.0;
  return RotationMatrix(u * v.transpose());
}

double RotationMatrix::orthogonality_defect() const {
  const Index n = dim();
  return (g_.transpose() * g_ - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
}

SkewMatrix wedge(const Vec& x, const Vec& y) {
  require_same_dim(x.size(), y.size(), "wedge");
  return SkewMatrix::skew_part(2.0 * (x * y.transpose()));
}

double inner(const SkewMatrix& m, const SkewMatrix& n) {
  require_same_dim(m.dim(), n.dim(), "inner");
  return 0.5 * (m.matrix().array() * n.matrix().array()).sum();
}

SkewMatrix commutator(const SkewMatrix& m, const SkewMatrix& n) {
  require_same_dim(m.dim(), n.dim(), "commutator");
  return SkewMatrix::skew_part(m.matrix() * n.matrix() -
                               n.matrix() * m.matrix());
}

SkewMatrix proj_h_gamma(const SkewMatrix& m, const Vec& gamma) {
  require_same_dim(m.dim(), gamma.size(), "proj_h_gamma");
  return wedge(m * gamma, gamma);
}

SkewMatrix proj_complement(const SkewMatrix& m, const Vec& gamma) {
  return m - proj_h_gamma(m, gamma);
}

SkewMatrix adjoint(const RotationMatrix& g, const SkewMatrix& m) {
  require_same_dim(g.dim(), m.dim(), "adjoint");
  return SkewMatrix::skew_part(g.matrix() * m.matrix() *
                               g.matrix().transpose());
}

RotationMatrix exp_map(const SkewMatrix& m) {
  return RotationMatrix::nearest(Mat(m.matrix().exp()));
}

SkewMatrix hat(const Vec& x) {
  if (x.size() != 3) throw DimensionError("hat: requires a 3-vector");
  Mat m(3, 3);
  m << 0.0, -x(2), x(1),  //
      x(2), 0.0, -x(0),   //
      -x(1), x(0), 0.0;
  return SkewMatrix::from_matrix(m);
}

Vec vee(const SkewMatrix& m) {
  if (m.dim() != 3) throw DimensionError("vee: requires so(3)");
  return Vec{{m(2, 1), m(0, 2), m(1, 0)}};
}

}  // namespace chaplygin
