#ifndef MSP_LINALG_EIGEN_HPP
#define MSP_LINALG_EIGEN_HPP

#include "msp/core/errors.hpp"
#include "msp/core/types.hpp"
#include "msp/linalg/cholesky.hpp"
#include "msp/linalg/sym_matrix.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace msp {

struct SymEig
{
  Vector values;  ///< ascending
  Matrix vectors; ///< orthonormal, column j pairs with values(j)
};

namespace detail {

inline void check_dense_cap(Index n, Index cap)
{
  if (n > cap)
    throw DimensionCap("dense eigensolver: n = " + std::to_string(n) + " exceeds cap " +
                       std::to_string(cap) + "; use extremal_eigs");
}

} // namespace detail

inline SymEig sym_eig(const SymMatrix& m, Index cap = default_tolerances.dense_cap)
{
  detail::check_dense_cap(m.size(), cap);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.dense(), Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw Error("sym_eig: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Eigenvalues only, ascending.
inline Vector sym_eigvals(const SymMatrix& m, Index cap = default_tolerances.dense_cap)
{
  detail::check_dense_cap(m.size(), cap);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.dense(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw Error("sym_eigvals: eigensolver did not converge");
  return es.eigenvalues();
}

namespace detail {

// Number of eigenvalues of the symmetric tridiagonal (d, e) strictly less
// than x (Sturm sequence via the LDL^T pivots of T - xI).
inline Index sturm_count(const std::vector<double>& d, const std::vector<double>& e2, double x,
                         double pivmin)
{
  Index count = 0;
  double q = d[0] - x;
  if (std::abs(q) < pivmin)
    q = -pivmin;
  if (q < 0.0)
    ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    q = d[i] - x - e2[i - 1] / q;
    if (std::abs(q) < pivmin)
      q = -pivmin;
    if (q < 0.0)
      ++count;
  }
  return count;
}

} // namespace detail

/// All eigenvalues of the symmetric tridiagonal matrix with diagonal `diag`
/// and off-diagonal `offdiag`, ascending, by Sturm-sequence bisection.
inline std::vector<double> tridiag_eig(const std::vector<double>& diag,
                                       const std::vector<double>& offdiag)
{
  const std::size_t n = diag.size();
  if (n == 0)
    throw ShapeMismatch("tridiag_eig: empty diagonal");
  if (offdiag.size() + 1 != n)
    throw ShapeMismatch("tridiag_eig: offdiag must have length " + std::to_string(n - 1));
  if (n == 1)
    return diag;

  std::vector<double> e2(offdiag.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double emax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0)
      r += std::abs(offdiag[i - 1]);
    if (i + 1 < n)
      r += std::abs(offdiag[i]);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    e2[i] = offdiag[i] * offdiag[i];
    emax = std::max(emax, e2[i]);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::max(std::abs(lo), std::abs(hi));
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, emax);
  lo -= 2.0 * eps * scale + pivmin;
  hi += 2.0 * eps * scale + pivmin;

  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    double a = lo;
    double b = hi;
    // The k-th eigenvalue (0-based) lies in [a, b] while count(a) <= k < count(b).
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (b - a <= 2.0 * eps * std::max(std::abs(a), std::abs(b)) + pivmin || mid == a || mid == b)
        break;
      if (detail::sturm_count(diag, e2, mid, pivmin) > static_cast<Index>(k))
        b = mid;
      else
        a = mid;
    }
    values[k] = 0.5 * (a + b);
    lo = a; // eigenvalues are ascending; the next search starts here
  }
  return values;
}

struct SpectralRange
{
  double min = 0.0;
  double max = 0.0;
};

/// Extremal eigenvalues of the pencil (a, s): a v = lambda s v with s SPD,
/// computed as the spectrum of L^{-1} a L^{-T} where s = L L^T.
inline SpectralRange gen_eig_extremes(const SymMatrix& a, const SymMatrix& s,
                                      Index cap = default_tolerances.dense_cap)
{
  if (a.size() != s.size())
    throw ShapeMismatch("gen_eig_extremes: pencil sizes differ");
  Cholesky chol(s);
  Vector ev = sym_eigvals(chol.congruence(a), cap);
  return {ev(0), ev(ev.size() - 1)};
}

struct Inertia
{
  Index positive = 0;
  Index negative = 0;
  Index zero = 0;
};

/// Eigenvalue sign counts; |lambda| <= zero_rel * max|lambda| counts as zero.
inline Inertia inertia(const Vector& eigenvalues, double zero_rel = 1e-10)
{
  const double scale = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  Inertia in;
  for (double v : eigenvalues) {
    if (std::abs(v) <= zero_rel * scale)
      ++in.zero;
    else if (v > 0.0)
      ++in.positive;
    else
      ++in.negative;
  }
  return in;
}

inline Inertia inertia(const SymMatrix& m, double zero_rel = 1e-10)
{
  return inertia(sym_eigvals(m), zero_rel);
}

} // namespace msp

#endif
