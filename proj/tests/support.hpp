#ifndef MSP_TESTS_SUPPORT_HPP
#define MSP_TESTS_SUPPORT_HPP

#include "msp/core/rng.hpp"
#include "msp/saddle/block_system.hpp"
#include "msp/saddle/schur_chain.hpp"

#include <algorithm>
#include <vector>

namespace msp::test {

inline Matrix m11(double v) { return Matrix::Constant(1, 1, v); }
inline SymMatrix s11(double v) { return SymMatrix(m11(v)); }

// Dense random system: sizes decrease by 0..3, A_0 SPD, A_k PSD (possibly zero).
inline BlockTridiagonalSystem random_system(RngStream& rng, Index n_blocks, Index n0, bool zero_ak = false)
{
  std::vector<SymMatrix> a;
  std::vector<Matrix> b;
  std::vector<Index> n{n0};
  for (Index k = 1; k < n_blocks; ++k)
    n.push_back(std::max<Index>(1, n.back() - static_cast<Index>(rng.uniform() * 4)));
  for (Index k = 0; k < n_blocks; ++k) {
    Matrix g = rng.normal_matrix(n[k], n[k]);
    if (k == 0)
      a.emplace_back(g * g.transpose() / double(n[k]) + 0.5 * Matrix::Identity(n[k], n[k]));
    else if (zero_ak)
      a.push_back(SymMatrix::zero(n[k]));
    else {
      Matrix h = rng.normal_matrix(n[k], n[k] / 2 + 1);
      a.emplace_back(rng.uniform() * h * h.transpose() / double(n[k]));
    }
    if (k >= 1)
      b.push_back(rng.normal_matrix(n[k], n[k - 1]));
  }
  return assemble(a, b);
}

inline Index even_count(const BlockTridiagonalSystem& sys)
{
  Index s = 0;
  for (Index k = 0; k <= sys.N(); k += 2)
    s += sys.block_size(k);
  return s;
}

// S^_k = S~_k - c_k A_k + delta_k H H^T with c_k in [0, 1), so that
// A^_k = (1 - c_k) A_k + delta_k H H^T stays semi-definite while S^_k - S~_k
// is indefinite.
inline SchurChain random_inexact(RngStream& rng, const BlockTridiagonalSystem& sys, double spread)
{
  return approximate_schur_chain(sys, [&](Index k, const SymMatrix& t) {
    const Index n = t.size();
    const double c = 0.99 * rng.uniform();
    const double delta = spread * rng.uniform() * t.dense().diagonal().mean();
    Matrix h = rng.normal_matrix(n, n / 3 + 1);
    return SymMatrix(t.dense() - c * sys.A_dense(k).dense() + delta / double(n) * h * h.transpose());
  });
}

} // namespace msp::test

#endif
