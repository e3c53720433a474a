#ifndef MSP_CORE_TYPES_HPP
#define MSP_CORE_TYPES_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>

namespace msp {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Central tolerance record. Every numerical threshold used by the library
/// defaults to a field of this struct.
struct Tolerances
{
  /// Cholesky pivot threshold, relative to the largest diagonal entry.
  double cholesky_pivot = 1e-14;
  /// Largest dimension handled by the dense symmetric eigensolver.
  Index dense_cap = 4000;
  /// A_k (k >= 1) counts as semi-definite if lambda_min >= -psd * ||A_k||.
  double psd = 1e-10;
  /// B_k has full row rank if sigma_min > rank * sigma_max.
  double rank = 1e-10;
  /// Relative accuracy requested from Lanczos extremal eigenvalues.
  double lanczos = 1e-8;
  /// Upper bound on the Krylov dimension (also capped by n).
  Index lanczos_max_dim = 400;
  /// Default MINRES reduction of the preconditioned residual.
  double minres = 1e-10;
  /// Containment slack, relative to the spectral radius.
  double containment = 1e-8;
  /// Blocks above this size are validated with sparse factorizations only.
  Index dense_validation_cap = 2000;
};

inline constexpr Tolerances default_tolerances{};

} // namespace msp

#endif
