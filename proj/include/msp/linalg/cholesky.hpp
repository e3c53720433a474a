#ifndef MSP_LINALG_CHOLESKY_HPP
#define MSP_LINALG_CHOLESKY_HPP

#include "msp/core/errors.hpp"
#include "msp/core/types.hpp"
#include "msp/linalg/sym_matrix.hpp"

#include <Eigen/Cholesky>

#include <string>

namespace msp {

/// Dense Cholesky factor M = L L^T.
///
/// Besides solves with M, the factor provides the congruence actions
/// w -> L^{-1} w and w -> L^{-T} w. For any symmetric A the matrix
/// L^{-1} A L^{-T} has the same spectrum as M^{-1/2} A M^{-1/2}, which is how
/// symmetric square roots are avoided throughout the library.
class Cholesky
{
public:
  Cholesky() = default;

  explicit Cholesky(const SymMatrix& m, double pivot_rel = default_tolerances.cholesky_pivot)
    : llt_(m.dense())
  {
    const Index n = m.size();
    const double max_diag = n > 0 ? m.dense().diagonal().cwiseAbs().maxCoeff() : 0.0;
    const double threshold = pivot_rel * max_diag;
    if (llt_.info() != Eigen::Success) {
      throw NotPositiveDefinite("cholesky: matrix is not positive definite", first_bad_pivot(m));
    }
    const Matrix& l = llt_.matrixLLT();
    for (Index i = 0; i < n; ++i) {
      const double pivot = l(i, i) * l(i, i);
      if (!(pivot > threshold))
        throw NotPositiveDefinite("cholesky: pivot " + std::to_string(i) + " = " +
                                      std::to_string(pivot) + " below threshold",
                                  i);
    }
  }

  Index size() const { return llt_.rows(); }

  Matrix lower() const { return llt_.matrixL(); }

  Vector solve(const Vector& b) const { return llt_.solve(b); }
  Matrix solve(const Matrix& b) const { return llt_.solve(b); }

  /// L^{-1} b
  Vector solve_lower(const Vector& b) const { return llt_.matrixL().solve(b); }
  Matrix solve_lower(const Matrix& b) const { return llt_.matrixL().solve(b); }

  /// L^{-T} b
  Vector solve_upper(const Vector& b) const { return llt_.matrixU().solve(b); }
  Matrix solve_upper(const Matrix& b) const { return llt_.matrixU().solve(b); }

  /// L b
  Vector multiply_lower(const Vector& b) const { return llt_.matrixL() * b; }

  /// L^{-1} A L^{-T}, symmetrized.
  SymMatrix congruence(const SymMatrix& a) const
  {
    Matrix t = solve_lower(a.dense());
    Matrix c = solve_lower(Matrix(t.transpose()));
    return SymMatrix(c);
  }

private:
  // Index of the first non-positive pivot of an unpivoted LDL^T sweep, used
  // only to enrich the error message after Eigen reported failure.
  static Index first_bad_pivot(const SymMatrix& m)
  {
    Matrix a = m.dense();
    const Index n = a.rows();
    for (Index k = 0; k < n; ++k) {
      if (!(a(k, k) > 0.0))
        return k;
      for (Index j = k + 1; j < n; ++j)
        for (Index i = j; i < n; ++i)
          a(i, j) -= a(i, k) * a(j, k) / a(k, k);
    }
    return n;
  }

  Eigen::LLT<Matrix> llt_;
};

/// Factor `m`, throwing NotPositiveDefinite when a pivot is at or below
/// pivot_rel * max|diag(m)|.
inline Cholesky cholesky(const SymMatrix& m, double pivot_rel = default_tolerances.cholesky_pivot)
{
  return Cholesky(m, pivot_rel);
}

} // namespace msp

#endif
