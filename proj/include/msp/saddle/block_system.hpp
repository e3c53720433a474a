#ifndef MSP_SADDLE_BLOCK_SYSTEM_HPP
#define MSP_SADDLE_BLOCK_SYSTEM_HPP

#include "msp/core/errors.hpp"
#include "msp/core/types.hpp"
#include "msp/linalg/cholesky.hpp"
#include "msp/linalg/lanczos.hpp"
#include "msp/linalg/operator.hpp"
#include "msp/linalg/sym_matrix.hpp"

#include <Eigen/SVD>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace msp {

enum class Validation { on, off };

/// Symmetric block-tridiagonal matrix with diagonal blocks (-1)^k A_k and
/// sub-diagonal blocks B_k (n_k x n_{k-1}), k = 0..N.
///
/// Blocks are held in sparse storage so that finite-element systems of
/// dimension ~10^4 fit; dense views are produced on request.
class BlockTridiagonalSystem
{
public:
  BlockTridiagonalSystem() = default;

  BlockTridiagonalSystem(std::vector<SparseMatrix> diag_blocks, std::vector<SparseMatrix> offdiag_blocks,
                         Validation validation = Validation::on,
                         const Tolerances& tol = default_tolerances)
    : diag_(std::move(diag_blocks)), off_(std::move(offdiag_blocks))
  {
    check_shapes();
    offsets_.push_back(0);
    for (const auto& a : diag_)
      offsets_.push_back(offsets_.back() + a.rows());
    if (validation == Validation::on)
      validate(tol);
  }

  /// Block count minus one.
  Index N() const { return static_cast<Index>(diag_.size()) - 1; }
  Index block_size(Index k) const { return diag_.at(k).rows(); }
  std::vector<Index> sizes() const
  {
    std::vector<Index> s;
    for (const auto& a : diag_)
      s.push_back(a.rows());
    return s;
  }
  Index offset(Index k) const { return offsets_.at(k); }
  Index size() const { return offsets_.back(); }

  const SparseMatrix& A(Index k) const { return diag_.at(k); }
  /// B_k for k = 1..N.
  const SparseMatrix& B(Index k) const
  {
    if (k < 1 || k > N())
      throw InvalidArgument("B(k): k must be in 1.." + std::to_string(N()));
    return off_[k - 1];
  }
  SymMatrix A_dense(Index k) const { return SymMatrix(Matrix(A(k))); }
  Matrix B_dense(Index k) const { return Matrix(B(k)); }

  /// Assembled matrix in sparse form.
  SparseMatrix sparse() const
  {
    std::vector<Eigen::Triplet<double>> trip;
    for (Index k = 0; k <= N(); ++k) {
      const double sign = k % 2 == 0 ? 1.0 : -1.0;
      const Index o = offsets_[k];
      for (Index c = 0; c < diag_[k].outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(diag_[k], c); it; ++it)
          trip.emplace_back(o + it.row(), o + it.col(), sign * it.value());
      if (k >= 1) {
        const Index op = offsets_[k - 1];
        for (Index c = 0; c < off_[k - 1].outerSize(); ++c)
          for (SparseMatrix::InnerIterator it(off_[k - 1], c); it; ++it) {
            trip.emplace_back(o + it.row(), op + it.col(), it.value());
            trip.emplace_back(op + it.col(), o + it.row(), it.value());
          }
      }
    }
    SparseMatrix m(size(), size());
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
  }

  /// Assembled matrix, dense. Built on every call; intended for moderate n.
  SymMatrix dense() const { return SymMatrix(Matrix(sparse())); }

  /// Matrix-free action of the assembled matrix.
  LinearOperator op() const
  {
    auto self = std::make_shared<const BlockTridiagonalSystem>(*this);
    return {size(), [self](const Vector& in, Vector& out) { self->multiply(in, out); }};
  }

  void multiply(const Vector& in, Vector& out) const
  {
    out.resize(size());
    for (Index k = 0; k <= N(); ++k) {
      auto seg = out.segment(offsets_[k], diag_[k].rows());
      const double sign = k % 2 == 0 ? 1.0 : -1.0;
      seg = sign * (diag_[k] * in.segment(offsets_[k], diag_[k].rows()));
      if (k >= 1)
        seg += off_[k - 1] * in.segment(offsets_[k - 1], diag_[k - 1].rows());
      if (k < N())
        seg += off_[k].transpose() * in.segment(offsets_[k + 1], diag_[k + 1].rows());
    }
  }

  /// Checks the standing assumptions: A_0 SPD, A_k PSD, n_k <= n_{k-1},
  /// B_k of full row rank. Throws AssumptionViolated with the failing block.
  void validate(const Tolerances& tol = default_tolerances) const
  {
    for (Index k = 1; k <= N(); ++k)
      if (block_size(k) > block_size(k - 1))
        throw AssumptionViolated("n_" + std::to_string(k) + " = " + std::to_string(block_size(k)) +
                                 " exceeds n_" + std::to_string(k - 1) + " = " +
                                 std::to_string(block_size(k - 1)));
    for (Index k = 0; k <= N(); ++k) {
      const double nrm = diag_[k].norm();
      SparseMatrix asym = SparseMatrix(diag_[k].transpose()) - diag_[k];
      if (asym.norm() > 1e-12 * nrm)
        throw AssumptionViolated("A_" + std::to_string(k) + " is not symmetric");
    }
    check_spd(0, tol);
    for (Index k = 1; k <= N(); ++k) {
      check_psd(k, tol);
      check_rank(k, tol);
    }
  }

private:
  void check_shapes() const
  {
    if (diag_.empty())
      throw ShapeMismatch("block system: need at least one diagonal block");
    if (off_.size() + 1 != diag_.size())
      throw ShapeMismatch("block system: " + std::to_string(diag_.size()) + " diagonal blocks need " +
                          std::to_string(diag_.size() - 1) + " off-diagonal blocks, got " +
                          std::to_string(off_.size()));
    for (std::size_t k = 0; k < diag_.size(); ++k) {
      if (diag_[k].rows() != diag_[k].cols() || diag_[k].rows() < 1)
        throw ShapeMismatch("A_" + std::to_string(k) + " must be square and non-empty");
      if (k >= 1 && (off_[k - 1].rows() != diag_[k].rows() || off_[k - 1].cols() != diag_[k - 1].rows()))
        throw ShapeMismatch("B_" + std::to_string(k) + " has shape " + std::to_string(off_[k - 1].rows()) +
                            "x" + std::to_string(off_[k - 1].cols()) + ", expected " +
                            std::to_string(diag_[k].rows()) + "x" + std::to_string(diag_[k - 1].rows()));
    }
  }

  void check_spd(Index k, const Tolerances& tol) const
  {
    const auto what = "A_" + std::to_string(k) + " is not positive definite";
    if (block_size(k) <= tol.dense_validation_cap) {
      try {
        Cholesky c(A_dense(k), tol.cholesky_pivot);
      } catch (const NotPositiveDefinite&) {
        throw AssumptionViolated(what);
      }
      return;
    }
    Eigen::SimplicialLLT<SparseMatrix> llt(diag_[k]);
    if (llt.info() != Eigen::Success)
      throw AssumptionViolated(what);
  }

  void check_psd(Index k, const Tolerances& tol) const
  {
    if (diag_[k].nonZeros() == 0)
      return;
    const double nrm = diag_[k].norm();
    double lmin = 0.0;
    if (block_size(k) <= tol.dense_validation_cap) {
      lmin = sym_eigvals(A_dense(k), tol.dense_cap)(0);
    } else {
      LanczosOptions o;
      o.rel_tol = tol.psd;
      lmin = extremal_eigs(LinearOperator::from_sparse(diag_[k]), Which::smallest, o).smallest;
    }
    if (lmin < -tol.psd * nrm)
      throw AssumptionViolated("A_" + std::to_string(k) + " is not positive semi-definite (lambda_min = " +
                               std::to_string(lmin) + ")");
  }

  void check_rank(Index k, const Tolerances& tol) const
  {
    const auto what = "B_" + std::to_string(k) + " does not have full row rank";
    const SparseMatrix& b = off_[k - 1];
    if (b.cols() <= tol.dense_validation_cap) {
      Eigen::BDCSVD<Matrix> svd{Matrix(b)};
      const Vector& s = svd.singularValues();
      if (s.size() < b.rows() || !(s(s.size() - 1) > tol.rank * s(0)))
        throw AssumptionViolated(what);
      return;
    }
    // Large blocks: B B^T must admit a Cholesky factor with pivots above rank^2.
    SparseMatrix bbt = b * SparseMatrix(b.transpose());
    Eigen::SimplicialLLT<SparseMatrix> llt(bbt);
    if (llt.info() != Eigen::Success)
      throw AssumptionViolated(what);
    const Vector d = SparseMatrix(llt.matrixL()).diagonal();
    const double dmax = bbt.diagonal().maxCoeff();
    for (Index i = 0; i < d.size(); ++i)
      if (!(d(i) * d(i) > tol.rank * tol.rank * dmax))
        throw AssumptionViolated(what);
  }

  std::vector<SparseMatrix> diag_;
  std::vector<SparseMatrix> off_;
  std::vector<Index> offsets_;
};

/// Builds a system from dense blocks A_0..A_N and B_1..B_N.
inline BlockTridiagonalSystem assemble(const std::vector<SymMatrix>& diag_blocks,
                                       const std::vector<Matrix>& offdiag_blocks,
                                       Validation validation = Validation::on,
                                       const Tolerances& tol = default_tolerances)
{
  std::vector<SparseMatrix> d, o;
  for (const auto& a : diag_blocks)
    d.push_back(a.dense().sparseView(0.0, 0.0));
  for (const auto& b : offdiag_blocks)
    o.push_back(b.sparseView(0.0, 0.0));
  return {std::move(d), std::move(o), validation, tol};
}

inline BlockTridiagonalSystem assemble_sparse(std::vector<SparseMatrix> diag_blocks,
                                              std::vector<SparseMatrix> offdiag_blocks,
                                              Validation validation = Validation::on,
                                              const Tolerances& tol = default_tolerances)
{
  return {std::move(diag_blocks), std::move(offdiag_blocks), validation, tol};
}

} // namespace msp

#endif
