#ifndef MSP_LINALG_OPERATOR_HPP
#define MSP_LINALG_OPERATOR_HPP

#include "msp/core/errors.hpp"
#include "msp/core/types.hpp"

#include <functional>
#include <memory>
#include <string>
#include <utility>

namespace msp {

/// Matrix-free linear map v -> M v on R^n. Copies share the captured state.
class LinearOperator
{
public:
  using Action = std::function<void(const Vector& in, Vector& out)>;

  LinearOperator() = default;
  LinearOperator(Index n, Action action) : n_(n), action_(std::move(action)) {}

  Index size() const { return n_; }

  void apply(const Vector& in, Vector& out) const
  {
    if (in.size() != n_)
      throw ShapeMismatch("LinearOperator: input has length " + std::to_string(in.size()) +
                          ", expected " + std::to_string(n_));
    out.resize(n_);
    action_(in, out);
  }

  Vector apply(const Vector& in) const
  {
    Vector out(n_);
    apply(in, out);
    return out;
  }

  Vector operator()(const Vector& in) const { return apply(in); }

  /// Materialize column by column. Intended for tests and small operators.
  Matrix to_dense() const
  {
    Matrix m(n_, n_);
    Vector e = Vector::Zero(n_);
    Vector col(n_);
    for (Index j = 0; j < n_; ++j) {
      e(j) = 1.0;
      apply(e, col);
      m.col(j) = col;
      e(j) = 0.0;
    }
    return m;
  }

  static LinearOperator identity(Index n)
  {
    return {n, [](const Vector& in, Vector& out) { out = in; }};
  }

  static LinearOperator diagonal(Vector d)
  {
    auto diag = std::make_shared<const Vector>(std::move(d));
    return {diag->size(),
            [diag](const Vector& in, Vector& out) { out = diag->cwiseProduct(in); }};
  }

  static LinearOperator from_dense(Matrix m)
  {
    if (m.rows() != m.cols())
      throw ShapeMismatch("LinearOperator::from_dense: matrix must be square");
    auto mat = std::make_shared<const Matrix>(std::move(m));
    return {mat->rows(), [mat](const Vector& in, Vector& out) { out.noalias() = *mat * in; }};
  }

  static LinearOperator from_sparse(SparseMatrix m)
  {
    if (m.rows() != m.cols())
      throw ShapeMismatch("LinearOperator::from_sparse: matrix must be square");
    auto mat = std::make_shared<const SparseMatrix>(std::move(m));
    return {mat->rows(), [mat](const Vector& in, Vector& out) { out = *mat * in; }};
  }

private:
  Index n_ = 0;
  Action action_;
};

} // namespace msp

#endif
