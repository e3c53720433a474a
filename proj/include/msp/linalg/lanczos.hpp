#ifndef MSP_LINALG_LANCZOS_HPP
#define MSP_LINALG_LANCZOS_HPP

#include "msp/core/intervals.hpp"
#include "msp/core/rng.hpp"
#include "msp/core/types.hpp"
#include "msp/linalg/eigen.hpp"
#include "msp/linalg/operator.hpp"
#include "msp/linalg/sym_matrix.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>

namespace msp {

struct LanczosOptions
{
  /// Krylov dimension cap; the effective cap is min(n, max_dim).
  Index max_dim = default_tolerances.lanczos_max_dim;
  double rel_tol = default_tolerances.lanczos;
  /// Ritz values are recomputed after at least `check_every` steps, and
  /// once the basis is large, only after it has grown by `check_growth`
  /// (each check costs O(k^3)).
  Index check_every = 10;
  std::uint64_t seed = 0x5eed;
  double check_growth = 1.1;
};

struct RitzSet
{
  Vector values;    ///< ascending
  Vector residuals; ///< |beta_{k+1} s_{k,i}|, an upper bound on the eigenvalue error
  Index steps = 0;
  bool exhausted = false; ///< the Krylov space became invariant
};

namespace detail {

inline RitzSet ritz_from_tridiagonal(const std::vector<double>& alpha, const std::vector<double>& beta,
                                     Index k, double beta_next, bool exhausted)
{
  Vector d(k);
  Vector e(std::max<Index>(k - 1, 0));
  for (Index i = 0; i < k; ++i)
    d(i) = alpha[i];
  for (Index i = 0; i + 1 < k; ++i)
    e(i) = beta[i + 1];
  RitzSet out;
  out.steps = k;
  out.exhausted = exhausted;
  if (k == 1) {
    out.values = d;
    out.residuals = Vector::Constant(1, std::abs(beta_next));
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  out.values = es.eigenvalues();
  out.residuals = (beta_next * es.eigenvectors().row(k - 1).transpose()).cwiseAbs();
  if (exhausted)
    out.residuals.setZero();
  return out;
}

} // namespace detail

namespace detail {

// Krylov basis and tridiagonal of one Lanczos run.
struct LanczosRun
{
  RitzSet ritz;
  Matrix q_basis;  // P-orthonormal Krylov vectors
  Matrix pq_basis; // P q_j, only filled when P != I
  std::vector<double> alpha;
  std::vector<double> betas; // betas[0] = 0, betas[j] couples q_{j-1} and q_j
};

// `apply(q, pq, out)` must set out = P F q for the operator F, self-adjoint
// in the P-inner product, whose Ritz values are wanted; pq = P q is passed
// so that polynomials in P^{-1} a can be formed without applying P.
template <class Apply>
LanczosRun lanczos_run(Index n, Apply apply, const std::optional<LinearOperator>& precond_inv,
                       const LanczosOptions& opts, const std::function<bool(const RitzSet&)>& done)
{
  if (precond_inv && precond_inv->size() != n)
    throw ShapeMismatch("lanczos: operator and preconditioner sizes differ");
  const Index kmax = std::max<Index>(1, std::min(n, opts.max_dim));

  LanczosRun run;
  Matrix& q_basis = run.q_basis;
  Matrix& pq_basis = run.pq_basis;
  q_basis.resize(n, kmax);
  if (precond_inv)
    pq_basis.resize(n, kmax);

  RngStream rng(opts.seed);
  Vector r = rng.normal_vector(n);
  Vector z = precond_inv ? precond_inv->apply(r) : r;
  double beta = std::sqrt(r.dot(z));

  std::vector<double>& alpha = run.alpha;
  std::vector<double>& betas = run.betas;
  betas.push_back(0.0);
  Vector w(n);
  Index next_check = std::min(opts.check_every, kmax);

  for (Index j = 0; j < kmax; ++j) {
    q_basis.col(j) = z / beta;
    if (precond_inv)
      pq_basis.col(j) = r / beta;
    const auto pq = [&](Index i) { return precond_inv ? pq_basis.col(i) : q_basis.col(i); };

    apply(Vector(q_basis.col(j)), Vector(pq(j)), w);
    if (j > 0)
      w -= betas[j] * pq(j - 1);
    const double aj = q_basis.col(j).dot(w);
    alpha.push_back(aj);
    w -= aj * pq(j);
    // Full reorthogonalization; the second pass only when the first one
    // removed most of w (Daniel-Gragg-Kaufman-Stewart test).
    for (int pass = 0; pass < 2; ++pass) {
      const double before = w.norm();
      Vector c = q_basis.leftCols(j + 1).transpose() * w;
      if (precond_inv)
        w.noalias() -= pq_basis.leftCols(j + 1) * c;
      else
        w.noalias() -= q_basis.leftCols(j + 1) * c;
      if (w.norm() > 0.7 * before)
        break;
    }
    r = w;
    z = precond_inv ? precond_inv->apply(r) : r;
    const double rz = r.dot(z);
    const double beta_next = rz > 0.0 ? std::sqrt(rz) : 0.0;
    const double scale = std::abs(aj) + betas[j];
    const bool exhausted =
        beta_next <= 1e3 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);
    const Index k = j + 1;
    if (exhausted || k == kmax || k >= next_check) {
      next_check = std::max(k + opts.check_every, static_cast<Index>(std::ceil(k * opts.check_growth)));
      run.ritz = ritz_from_tridiagonal(alpha, betas, k, beta_next, exhausted);
      if (exhausted || k == kmax || (done && done(run.ritz))) {
        q_basis.conservativeResize(n, k);
        if (precond_inv)
          pq_basis.conservativeResize(n, k);
        return run;
      }
    }
    betas.push_back(beta_next);
    beta = beta_next;
  }
  return run;
}

} // namespace detail

/// Lanczos with full reorthogonalization for the self-adjoint operator `a`.
///
/// With `precond_inv` present the process runs in the P-inner product and
/// produces Ritz values of P^{-1} a, i.e. of the pencil (a, P); P itself is
/// never applied. `done` is consulted at every check and may stop the
/// iteration early.
inline RitzSet lanczos(const LinearOperator& a, const std::optional<LinearOperator>& precond_inv,
                       const LanczosOptions& opts,
                       const std::function<bool(const RitzSet&)>& done = {})
{
  auto apply = [&a](const Vector& q, const Vector&, Vector& out) { a.apply(q, out); };
  return detail::lanczos_run(a.size(), apply, precond_inv, opts, done).ritz;
}

enum class Which { smallest, largest, both };

struct ExtremalEigs
{
  double smallest = std::numeric_limits<double>::quiet_NaN();
  double largest = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  Index iterations = 0;
};

namespace detail {

inline bool extremes_converged(const RitzSet& rs, Which which, double rel_tol)
{
  const Index k = rs.values.size();
  const double scale = std::max(rs.values.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  const bool lo = rs.residuals(0) <= rel_tol * scale;
  const bool hi = rs.residuals(k - 1) <= rel_tol * scale;
  switch (which) {
  case Which::smallest: return lo;
  case Which::largest: return hi;
  default: return lo && hi;
  }
}

inline ExtremalEigs to_extremal(const RitzSet& rs, Which which, double rel_tol)
{
  ExtremalEigs out;
  out.iterations = rs.steps;
  out.converged = rs.exhausted || extremes_converged(rs, which, rel_tol);
  if (which != Which::largest)
    out.smallest = rs.values(0);
  if (which != Which::smallest)
    out.largest = rs.values(rs.values.size() - 1);
  return out;
}

} // namespace detail

/// Extremal eigenvalue(s) of a self-adjoint operator. `converged == false`
/// means the Krylov cap was hit; the best estimate is still returned.
inline ExtremalEigs extremal_eigs(const LinearOperator& op, Which which, const LanczosOptions& opts = {})
{
  auto rs = lanczos(op, std::nullopt, opts, [&](const RitzSet& r) {
    return detail::extremes_converged(r, which, opts.rel_tol);
  });
  return detail::to_extremal(rs, which, opts.rel_tol);
}

/// Dense input: exact dense eigensolve when n fits under the cap, Lanczos otherwise.
inline ExtremalEigs extremal_eigs(const SymMatrix& m, Which which, const LanczosOptions& opts = {},
                                  Index cap = default_tolerances.dense_cap)
{
  if (m.size() <= cap) {
    Vector ev = sym_eigvals(m, cap);
    ExtremalEigs out;
    out.converged = true;
    out.iterations = 0;
    if (which != Which::largest)
      out.smallest = ev(0);
    if (which != Which::smallest)
      out.largest = ev(ev.size() - 1);
    return out;
  }
  return extremal_eigs(LinearOperator::from_dense(m.dense()), which, opts);
}

/// Extremal eigenvalues of the pencil (a, P) given only the action of P^{-1}.
inline ExtremalEigs pencil_extremal_eigs(const LinearOperator& a, const LinearOperator& precond_inv,
                                         Which which, const LanczosOptions& opts = {})
{
  auto rs = lanczos(a, precond_inv, opts, [&](const RitzSet& r) {
    return detail::extremes_converged(r, which, opts.rel_tol);
  });
  return detail::to_extremal(rs, which, opts.rel_tol);
}

struct EdgeEstimate
{
  SpectrumEdges edges;
  bool converged = false;
  Index iterations = 0;
  /// Largest residual among the four reported Ritz values; each edge is
  /// within this distance of an eigenvalue.
  double error_bound = 0.0;
};

namespace detail {

// Outermost Ritz values, and on each side of zero the converged Ritz value
// nearest to zero. Converged means residual <= tol * spectral radius.
// Indefinite problems produce unconverged Ritz values inside the spectral
// gap; one of those is tolerated when its residual interval reaches the
// reported edge, i.e. when it may be a poor copy of the edge eigenvalue.
inline EdgeEstimate edges_from_ritz(const RitzSet& rs, double rel_tol)
{
  EdgeEstimate out;
  out.iterations = rs.steps;
  const Index k = rs.values.size();
  const double scale = rs.values.cwiseAbs().maxCoeff();
  const double tol = rel_tol * scale;
  auto res = [&](Index i) { return rs.exhausted ? 0.0 : rs.residuals(i); };
  auto ok = [&](Index i) { return res(i) <= tol; };

  bool all = ok(0) && ok(k - 1);
  out.error_bound = std::max(res(0), res(k - 1));
  if (rs.values(0) < 0.0)
    out.edges.neg_lo = rs.values(0);
  if (rs.values(k - 1) > 0.0)
    out.edges.pos_hi = rs.values(k - 1);

  Index first_pos = 0;
  while (first_pos < k && rs.values(first_pos) <= 0.0)
    ++first_pos;

  // Walk from zero outwards; `step` is -1 on the negative side.
  auto side = [&](Index start, Index step, double& edge) {
    Index found = -1;
    for (Index i = start; i >= 0 && i < k; i += step)
      if (ok(i)) {
        found = i;
        break;
      }
    if (found < 0) {
      all = false;
      return;
    }
    edge = rs.values(found);
    out.error_bound = std::max(out.error_bound, res(found));
    for (Index i = start; i != found; i += step)
      if (std::abs(rs.values(i) - edge) > res(i))
        all = false;
  };
  if (first_pos > 0)
    side(first_pos - 1, -1, out.edges.neg_hi);
  if (first_pos < k)
    side(first_pos, 1, out.edges.pos_lo);
  out.converged = all;
  return out;
}

} // namespace detail

/// The four spectrum edges (most negative, least negative, least positive,
/// most positive) of the indefinite pencil (a, P).
inline EdgeEstimate pencil_spectrum_edges(const LinearOperator& a,
                                          const std::optional<LinearOperator>& precond_inv,
                                          const LanczosOptions& opts = {})
{
  auto rs = lanczos(a, precond_inv, opts, [&](const RitzSet& r) {
    return detail::edges_from_ritz(r, opts.rel_tol).converged;
  });
  return detail::edges_from_ritz(rs, opts.rel_tol);
}


struct NearestEig
{
  double value = std::numeric_limits<double>::quiet_NaN();
  /// Estimated distance from `value` to the eigenvalue, from the residual.
  double error_bound = std::numeric_limits<double>::infinity();
  bool converged = false;
  Index iterations = 0;
};

/// Eigenvalue of the pencil (a, P) nearest to `shift`, from Lanczos on the
/// folded operator F = (P^{-1} a - shift)^2. F is positive semi-definite in
/// the P-inner product, so the wanted eigenvalue is extremal for F even
/// when it is interior for P^{-1} a. The side of `shift` it lies on comes
/// from the Rayleigh quotient of the Ritz vector. Costs two products with
/// `a` and two with P^{-1} per step.
inline NearestEig pencil_nearest_eig(const LinearOperator& a, const std::optional<LinearOperator>& precond_inv,
                                     double shift, const LanczosOptions& opts = {})
{
  const Index n = a.size();
  auto pinv = [&](const Vector& v) { return precond_inv ? precond_inv->apply(v) : v; };
  auto apply = [&](const Vector& q, const Vector& pq, Vector& out) {
    Vector u = a.apply(q);
    Vector t = pinv(u);
    out = a.apply(t) - 2.0 * shift * u + shift * shift * pq;
  };
  // Clustered edges keep residuals large long after the smallest Ritz value
  // has settled, so a stagnating value with a moderate residual also counts.
  double prev = std::numeric_limits<double>::infinity();
  auto done = [&](const RitzSet& r) {
    const double theta = std::max(r.values(0), std::numeric_limits<double>::min());
    const bool tight = r.residuals(0) <= opts.rel_tol * theta;
    const bool settled = std::abs(prev - r.values(0)) <= opts.rel_tol * theta && r.residuals(0) <= 1e-2 * theta;
    prev = r.values(0);
    return tight || settled;
  };
  auto run = detail::lanczos_run(n, apply, precond_inv, opts, done);
  const RitzSet& rs = run.ritz;
  const Index k = rs.steps;

  // Ritz vector of the smallest Ritz value
  Vector d(k), e(std::max<Index>(k - 1, 0));
  for (Index i = 0; i < k; ++i)
    d(i) = run.alpha[i];
  for (Index i = 0; i + 1 < k; ++i)
    e(i) = run.betas[i + 1];
  Vector c = Vector::Ones(1);
  if (k > 1) {
    Eigen::SelfAdjointEigenSolver<Matrix> es;
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    c = es.eigenvectors().col(0);
  }
  Vector y = run.q_basis.leftCols(k) * c;
  Vector py = precond_inv ? Vector(run.pq_basis.leftCols(k) * c) : y;
  const double rayleigh = y.dot(a.apply(y)) / y.dot(py);

  NearestEig out;
  out.iterations = k;
  const double theta = std::max(rs.values(0), 0.0);
  const double rho = rs.exhausted ? 0.0 : rs.residuals(0);
  const double dist = std::sqrt(theta);
  out.value = rayleigh >= shift ? shift + dist : shift - dist;
  out.error_bound = dist - std::sqrt(std::max(theta - rho, 0.0));
  out.converged = rs.exhausted || rho <= 1e-2 * std::max(theta, std::numeric_limits<double>::min());
  return out;
}

/// The four spectrum edges of the indefinite pencil (a, P). The outer edges
/// come from plain Lanczos; the edges next to zero from folded Lanczos with
/// shifts that walk outwards through the eigenvalue-free gap: a nearest
/// eigenvalue on the wrong side at distance d from the shift s proves
/// (s - d, s + d) free of eigenvalues, so the next shift is s - d.
inline EdgeEstimate pencil_gap_edges(const LinearOperator& a, const std::optional<LinearOperator>& precond_inv,
                                     const LanczosOptions& opts = {}, int max_shifts = 60)
{
  EdgeEstimate out;
  double prev_lo = std::numeric_limits<double>::infinity(), prev_hi = prev_lo;
  auto outer = lanczos(a, precond_inv, opts, [&](const RitzSet& r) {
    const Index m = r.values.size();
    const double scale = r.values.cwiseAbs().maxCoeff();
    const bool settled = std::abs(prev_lo - r.values(0)) <= opts.rel_tol * scale &&
                         std::abs(prev_hi - r.values(m - 1)) <= opts.rel_tol * scale &&
                         std::max(r.residuals(0), r.residuals(m - 1)) <= 1e-2 * scale;
    prev_lo = r.values(0);
    prev_hi = r.values(m - 1);
    return settled || detail::extremes_converged(r, Which::both, opts.rel_tol);
  });
  const Index k = outer.values.size();
  out.iterations = outer.steps;
  out.converged = outer.exhausted || std::max(outer.residuals(0), outer.residuals(k - 1)) <=
                                         1e-2 * outer.values.cwiseAbs().maxCoeff();
  out.error_bound = outer.exhausted ? 0.0 : std::max(outer.residuals(0), outer.residuals(k - 1));
  const double lo = outer.values(0), hi = outer.values(k - 1);
  if (lo < 0.0)
    out.edges.neg_lo = lo;
  if (hi > 0.0)
    out.edges.pos_hi = hi;

  auto record = [&](const NearestEig& r, double& edge) {
    edge = r.value;
    out.iterations += r.iterations;
    out.converged = out.converged && r.converged;
    out.error_bound = std::max(out.error_bound, r.error_bound);
  };
  auto first = pencil_nearest_eig(a, precond_inv, 0.0, opts);
  const bool pos_first = first.value >= 0.0;
  record(first, pos_first ? out.edges.pos_lo : out.edges.neg_hi);
  // walk towards the other side
  const double sign = pos_first ? -1.0 : 1.0;
  const double limit = pos_first ? lo : hi;
  double s = sign * std::abs(first.value);
  for (int i = 0; i < max_shifts; ++i) {
    if ((pos_first && (lo >= 0.0 || s < limit)) || (!pos_first && (hi <= 0.0 || s > limit)))
      break; // no eigenvalue on the other side
    auto r = pencil_nearest_eig(a, precond_inv, s, opts);
    const bool other_side = pos_first ? r.value <= s : r.value >= s;
    if (other_side) {
      record(r, pos_first ? out.edges.neg_hi : out.edges.pos_lo);
      return out;
    }
    out.iterations += r.iterations;
    s += sign * std::abs(r.value - s);
  }
  if ((pos_first && lo < 0.0) || (!pos_first && hi > 0.0))
    out.converged = false;
  return out;
}

} // namespace msp

#endif
