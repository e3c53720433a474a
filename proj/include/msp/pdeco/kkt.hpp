#ifndef MSP_PDECO_KKT_HPP
#define MSP_PDECO_KKT_HPP

#include "msp/core/errors.hpp"
#include "msp/core/types.hpp"
#include "msp/linalg/operator.hpp"
#include "msp/pdeco/chebyshev.hpp"
#include "msp/pdeco/fem.hpp"
#include "msp/saddle/block_system.hpp"

#include <Eigen/SparseCholesky>

#include <memory>
#include <string>

namespace msp {

/// Optimality system for boundary observation with a distributed control:
///   [ beta M   M    0  ]
///   [   M      0    L  ]
///   [   0      L    Mb ]
/// i.e. A_0 = beta M, B_1 = M, A_1 = 0, B_2 = L, A_2 = Mb.
struct KktProblem
{
  BlockTridiagonalSystem system;
  Vector rhs;
  double beta = 1.0;
};

inline KktProblem assemble_kkt(const FemMatrices& fem, double beta, const Vector& desired,
                               Validation validation = Validation::on)
{
  if (!(beta > 0.0))
    throw InvalidArgument("assemble_kkt: beta must be positive");
  const Index n = fem.nodes();
  if (desired.size() != n)
    throw ShapeMismatch("assemble_kkt: desired state has length " + std::to_string(desired.size()) +
                        ", expected " + std::to_string(n));
  SparseMatrix zero(n, n);
  KktProblem p;
  p.beta = beta;
  p.system = BlockTridiagonalSystem({SparseMatrix(beta * fem.M), zero, fem.Mb}, {fem.M, fem.L}, validation);
  p.rhs = Vector::Zero(3 * n);
  p.rhs.tail(n) = fem.Mb * desired;
  return p;
}

inline KktProblem assemble_kkt(const FemMatrices& fem, double beta, Validation validation = Validation::on)
{
  return assemble_kkt(fem, beta, desired_state(fem), validation);
}

/// Block-diagonal preconditioner blkdiag(beta Mhat, Mhat / beta, beta L M^{-1} L)
/// with Mhat^{-1} given by Chebyshev semi-iteration. Only inverse actions
/// are provided.
class PdecoPreconditioner
{
public:
  PdecoPreconditioner(const FemMatrices& fem, double beta, const ChebyshevConfig& cheb)
    : state_(std::make_shared<State>(fem, beta, cheb))
  {
  }

  Index block_size() const { return state_->n; }
  double beta() const { return state_->beta; }

  /// Mhat^{-1} r.
  Vector mass_inv(const Vector& r) const { return cheb_apply(state_->m, state_->dinv, state_->cheb, r); }

  /// (beta L M^{-1} L)^{-1} r = L^{-1} M L^{-1} r / beta.
  Vector s2_inv(const Vector& r) const
  {
    Vector t = state_->llt.solve(r);
    return state_->llt.solve(Vector(state_->m * t)) / state_->beta;
  }

  /// beta L M^{-1} L r, with M^{-1} by sparse Cholesky.
  Vector s2(const Vector& r) const
  {
    Vector t = state_->l * r;
    return state_->beta * (state_->l * Vector(state_->mllt.solve(t)));
  }

  Vector apply_inv(const Vector& v) const
  {
    const Index n = state_->n;
    if (v.size() != 3 * n)
      throw ShapeMismatch("PdecoPreconditioner: vector length differs from 3n");
    Vector out(3 * n);
    out.head(n) = mass_inv(v.head(n)) / state_->beta;
    out.segment(n, n) = state_->beta * mass_inv(v.segment(n, n));
    out.tail(n) = s2_inv(v.tail(n));
    return out;
  }

  LinearOperator inverse_operator() const
  {
    auto self = *this;
    return {3 * state_->n, [self](const Vector& in, Vector& out) { out = self.apply_inv(in); }};
  }

  LinearOperator mass_inv_operator() const
  {
    auto self = *this;
    return {state_->n, [self](const Vector& in, Vector& out) { out = self.mass_inv(in); }};
  }

private:
  struct State
  {
    State(const FemMatrices& fem, double b, const ChebyshevConfig& c)
      : n(fem.nodes()), beta(b), cheb(c), m(fem.M), l(fem.L), dinv(fem.M.diagonal().cwiseInverse())
    {
      if (!(beta > 0.0))
        throw InvalidArgument("PdecoPreconditioner: beta must be positive");
      cheb.validate();
      llt.compute(l);
      mllt.compute(m);
      if (llt.info() != Eigen::Success || mllt.info() != Eigen::Success)
        throw NotPositiveDefinite("PdecoPreconditioner: sparse Cholesky failed", 0);
    }
    Index n;
    double beta;
    ChebyshevConfig cheb;
    SparseMatrix m, l;
    Vector dinv;
    Eigen::SimplicialLLT<SparseMatrix> llt, mllt;
  };
  std::shared_ptr<const State> state_;
};

} // namespace msp

#endif
