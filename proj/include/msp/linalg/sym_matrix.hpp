#ifndef MSP_LINALG_SYM_MATRIX_HPP
#define MSP_LINALG_SYM_MATRIX_HPP

#include "msp/core/errors.hpp"
#include "msp/core/types.hpp"

#include <string>

namespace msp {

/// Dense symmetric matrix. Symmetry is exact: the constructor stores
/// (M + M^T) / 2, and IEEE addition is commutative.
class SymMatrix
{
public:
  SymMatrix() = default;

  explicit SymMatrix(const Matrix& m)
  {
    if (m.rows() != m.cols())
      throw ShapeMismatch("SymMatrix: expected a square matrix, got " + std::to_string(m.rows()) +
                          "x" + std::to_string(m.cols()));
    m_ = (m + m.transpose()) * 0.5;
  }

  static SymMatrix identity(Index n) { return SymMatrix(Matrix::Identity(n, n)); }
  static SymMatrix zero(Index n) { return SymMatrix(Matrix::Zero(n, n)); }
  static SymMatrix diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

  Index size() const { return m_.rows(); }
  const Matrix& dense() const { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }

  double frobenius_norm() const { return m_.norm(); }

  SparseMatrix sparse() const { return m_.sparseView(); }

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) { return SymMatrix(a.m_ + b.m_); }
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) { return SymMatrix(a.m_ - b.m_); }
  friend SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.m_); }

private:
  Matrix m_;
};

} // namespace msp

#endif
