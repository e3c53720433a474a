#ifndef MSP_SADDLE_SYMMETRIZE_HPP
#define MSP_SADDLE_SYMMETRIZE_HPP

#include "msp/core/errors.hpp"
#include "msp/core/types.hpp"
#include "msp/linalg/eigen.hpp"
#include "msp/linalg/operator.hpp"
#include "msp/saddle/block_system.hpp"
#include "msp/saddle/schur_chain.hpp"

#include <memory>
#include <vector>

namespace msp {

/// Q = L^{-1} A L^{-T} for P = blkdiag(L_k L_k^T). Q is congruent to A and
/// similar to P^{-1} A. Its blocks are
///   E_k = L_k^{-1} A_k L_k^{-T},   R_k = L_k^{-1} B_k L_{k-1}^{-T},
/// with (-1)^k E_k on the diagonal and R_k below it.
struct SymmetrizedSystem
{
  std::vector<SymMatrix> E; ///< E_0..E_N
  std::vector<Matrix> R;    ///< R_1..R_N stored at index k-1
  std::vector<Index> sizes;

  Index N() const { return static_cast<Index>(E.size()) - 1; }
  const Matrix& R_block(Index k) const { return R.at(k - 1); }

  Index size() const
  {
    Index n = 0;
    for (Index s : sizes)
      n += s;
    return n;
  }

  SymMatrix dense_q() const
  {
    Matrix q = Matrix::Zero(size(), size());
    Index o = 0, op = 0;
    for (Index k = 0; k <= N(); ++k) {
      const double sign = k % 2 == 0 ? 1.0 : -1.0;
      q.block(o, o, sizes[k], sizes[k]) = sign * E[k].dense();
      if (k >= 1) {
        q.block(o, op, sizes[k], sizes[k - 1]) = R[k - 1];
        q.block(op, o, sizes[k - 1], sizes[k]) = R[k - 1].transpose();
      }
      op = o;
      o += sizes[k];
    }
    return SymMatrix(q);
  }

  LinearOperator q_operator() const
  {
    auto self = std::make_shared<const SymmetrizedSystem>(*this);
    return {size(), [self](const Vector& in, Vector& out) {
              const auto& s = self->sizes;
              std::vector<Index> off{0};
              for (Index n : s)
                off.push_back(off.back() + n);
              for (Index k = 0; k <= self->N(); ++k) {
                const double sign = k % 2 == 0 ? 1.0 : -1.0;
                auto seg = out.segment(off[k], s[k]);
                seg = sign * (self->E[k].dense() * in.segment(off[k], s[k]));
                if (k >= 1)
                  seg += self->R[k - 1] * in.segment(off[k - 1], s[k - 1]);
                if (k < self->N())
                  seg += self->R[k].transpose() * in.segment(off[k + 1], s[k + 1]);
              }
            }};
  }
};

inline SymmetrizedSystem symmetrize(const BlockTridiagonalSystem& sys, const SchurChain& chain)
{
  if (chain.N() != sys.N())
    throw ShapeMismatch("symmetrize: block counts differ");
  SymmetrizedSystem out;
  out.sizes = sys.sizes();
  for (Index k = 0; k <= sys.N(); ++k) {
    if (chain.complement(k).size() != sys.block_size(k))
      throw ShapeMismatch("symmetrize: block " + std::to_string(k) + " size differs from the chain");
    out.E.push_back(chain.factor(k).congruence(sys.A_dense(k)));
    if (k >= 1) {
      Matrix t = chain.factor(k).solve_lower(sys.B_dense(k));               // L_k^{-1} B_k
      Matrix r = chain.factor(k - 1).solve_lower(Matrix(t.transpose()));    // L_{k-1}^{-1} B_k^T L_k^{-T}
      out.R.push_back(r.transpose());
    }
  }
  return out;
}

/// Eigenvalues of P^{-1} A, ascending, through the symmetrized form.
inline Vector preconditioned_eigenvalues(const BlockTridiagonalSystem& sys, const SchurChain& chain,
                                         Index cap = default_tolerances.dense_cap)
{
  return sym_eigvals(symmetrize(sys, chain).dense_q(), cap);
}

/// A^ = A + blkdiag(Delta_k), Delta_k = (-1)^k (S^_k - S~_k). Equivalently the
/// diagonal blocks become A^_k = A_k + S^_k - S~_k; the couplings are kept.
/// The S^_k are the exact Schur complements of A^.
inline BlockTridiagonalSystem perturbed_matrix(const BlockTridiagonalSystem& sys, const SchurChain& approx)
{
  SchurChain tilde = perturbed_schur_chain(sys, approx);
  std::vector<SparseMatrix> d, o;
  for (Index k = 0; k <= sys.N(); ++k) {
    Matrix ak = sys.A_dense(k).dense() + (approx.complement(k).dense() - tilde.complement(k).dense());
    d.push_back(SymMatrix(ak).dense().sparseView(0.0, 0.0));
    if (k >= 1)
      o.push_back(sys.B(k));
  }
  return {std::move(d), std::move(o), Validation::off};
}

} // namespace msp

#endif
