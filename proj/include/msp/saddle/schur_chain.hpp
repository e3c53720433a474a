#ifndef MSP_SADDLE_SCHUR_CHAIN_HPP
#define MSP_SADDLE_SCHUR_CHAIN_HPP

#include "msp/core/errors.hpp"
#include "msp/core/types.hpp"
#include "msp/linalg/cholesky.hpp"
#include "msp/linalg/operator.hpp"
#include "msp/saddle/block_system.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace msp {

/// SPD blocks S_0..S_N with cached Cholesky factors; defines the block
/// diagonal preconditioner blkdiag(S_0, ..., S_N).
class SchurChain
{
public:
  enum class Kind { exact, perturbed, approximate };

  SchurChain() = default;

  SchurChain(std::vector<SymMatrix> complements, Kind kind,
             double pivot_rel = default_tolerances.cholesky_pivot)
    : s_(std::move(complements)), kind_(kind)
  {
    if (s_.empty())
      throw ShapeMismatch("SchurChain: no blocks");
    offsets_.push_back(0);
    for (std::size_t k = 0; k < s_.size(); ++k) {
      try {
        l_.emplace_back(s_[k], pivot_rel);
      } catch (const NotPositiveDefinite& e) {
        throw NotPositiveDefinite("Schur chain level " + std::to_string(k) + ": " + e.what(), e.pivot(),
                                  static_cast<Index>(k));
      }
      offsets_.push_back(offsets_.back() + s_[k].size());
    }
  }

  Index N() const { return static_cast<Index>(s_.size()) - 1; }
  Kind kind() const { return kind_; }
  Index size() const { return offsets_.back(); }
  Index offset(Index k) const { return offsets_.at(k); }
  const SymMatrix& complement(Index k) const { return s_.at(k); }
  const std::vector<SymMatrix>& complements() const { return s_; }
  const Cholesky& factor(Index k) const { return l_.at(k); }

  /// blkdiag(S_k)^{-1} v
  Vector apply_inv(const Vector& v) const
  {
    check(v);
    Vector out(v.size());
    for (Index k = 0; k <= N(); ++k)
      out.segment(offsets_[k], s_[k].size()) = l_[k].solve(Vector(v.segment(offsets_[k], s_[k].size())));
    return out;
  }

  /// blkdiag(S_k) v
  Vector apply(const Vector& v) const
  {
    check(v);
    Vector out(v.size());
    for (Index k = 0; k <= N(); ++k)
      out.segment(offsets_[k], s_[k].size()) = s_[k].dense() * v.segment(offsets_[k], s_[k].size());
    return out;
  }

  LinearOperator inverse_operator() const
  {
    auto self = std::make_shared<const SchurChain>(*this);
    return {size(), [self](const Vector& in, Vector& out) { out = self->apply_inv(in); }};
  }

private:
  void check(const Vector& v) const
  {
    if (v.size() != size())
      throw ShapeMismatch("SchurChain: vector has length " + std::to_string(v.size()) + ", expected " +
                          std::to_string(size()));
  }

  std::vector<SymMatrix> s_;
  std::vector<Cholesky> l_;
  std::vector<Index> offsets_;
  Kind kind_ = Kind::exact;
};

namespace detail {

// A + B S^{-1} B^T with S = L L^T, formed as A + W^T W, W = L^{-1} B^T.
inline SymMatrix schur_step(const SymMatrix& a, const Matrix& b, const Cholesky& prev)
{
  Matrix w = prev.solve_lower(Matrix(b.transpose()));
  return SymMatrix(a.dense() + w.transpose() * w);
}

} // namespace detail

/// S_0 = A_0, S_k = A_k + B_k S_{k-1}^{-1} B_k^T.
inline SchurChain exact_schur_chain(const BlockTridiagonalSystem& sys)
{
  std::vector<SymMatrix> s;
  s.push_back(sys.A_dense(0));
  Cholesky prev;
  for (Index k = 0; k <= sys.N(); ++k) {
    if (k > 0)
      s.push_back(detail::schur_step(sys.A_dense(k), sys.B_dense(k), prev));
    try {
      prev = Cholesky(s.back());
    } catch (const NotPositiveDefinite& e) {
      throw NotPositiveDefinite("exact Schur chain level " + std::to_string(k) + ": " + e.what(), e.pivot(), k);
    }
  }
  return {std::move(s), SchurChain::Kind::exact};
}

/// The chain S~ induced by approximations S^: S~_0 = A_0 and
/// S~_k = A_k + B_k S^_{k-1}^{-1} B_k^T.
inline SchurChain perturbed_schur_chain(const BlockTridiagonalSystem& sys, const SchurChain& approx)
{
  if (approx.N() != sys.N())
    throw ShapeMismatch("perturbed_schur_chain: block counts differ");
  std::vector<SymMatrix> s;
  s.push_back(sys.A_dense(0));
  for (Index k = 1; k <= sys.N(); ++k)
    s.push_back(detail::schur_step(sys.A_dense(k), sys.B_dense(k), approx.factor(k - 1)));
  return {std::move(s), SchurChain::Kind::perturbed};
}

/// Approximate chain built level by level: S^_k = make(k, S~_k), where S~_k
/// is induced by the S^ already built (S~_0 = A_0).
template <class Make>
SchurChain approximate_schur_chain(const BlockTridiagonalSystem& sys, Make make)
{
  std::vector<SymMatrix> hat;
  std::vector<Cholesky> factors;
  for (Index k = 0; k <= sys.N(); ++k) {
    SymMatrix tilde = k == 0 ? sys.A_dense(0) : detail::schur_step(sys.A_dense(k), sys.B_dense(k), factors.back());
    hat.push_back(make(k, tilde));
    try {
      factors.emplace_back(hat.back());
    } catch (const NotPositiveDefinite& e) {
      throw NotPositiveDefinite("approximate Schur chain level " + std::to_string(k) + ": " + e.what(), e.pivot(), k);
    }
  }
  return {std::move(hat), SchurChain::Kind::approximate};
}

inline Vector precond_apply_inv(const SchurChain& chain, const Vector& v) { return chain.apply_inv(v); }

} // namespace msp

#endif
