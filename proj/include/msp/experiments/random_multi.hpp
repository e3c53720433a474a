#ifndef MSP_EXPERIMENTS_RANDOM_MULTI_HPP
#define MSP_EXPERIMENTS_RANDOM_MULTI_HPP

#include "msp/bounds/poly.hpp"
#include "msp/core/errors.hpp"
#include "msp/core/rng.hpp"
#include "msp/experiments/report.hpp"
#include "msp/linalg/minres.hpp"
#include "msp/saddle/block_system.hpp"
#include "msp/saddle/schur_chain.hpp"
#include "msp/saddle/symmetrize.hpp"

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

namespace msp {

enum class MultiVariant { diagonal, dense };

inline MultiVariant parse_multi_variant(const std::string& s)
{
  if (s == "diag" || s == "diagonal")
    return MultiVariant::diagonal;
  if (s == "dense")
    return MultiVariant::dense;
  throw InvalidArgument("unknown variant '" + s + "' (expected diag or dense)");
}

inline const char* to_string(MultiVariant v) { return v == MultiVariant::diagonal ? "diag" : "dense"; }

struct RandomMultiOptions
{
  Index n0 = 300;
  double rel_tol = default_tolerances.minres;
  Index max_iter = 5000;
  int max_attempts = 10;
};

namespace detail {

// sym(X) + c |lambda_min| I, which is positive definite for c > 1 and
// singular positive semi-definite for c = 1.
inline SymMatrix shifted_sym_part(const Matrix& x, double c)
{
  SymMatrix s(0.5 * (x + x.transpose()));
  const double lmin = sym_eigvals(s)(0);
  Matrix d = s.dense();
  d.diagonal().array() += c * std::abs(lmin);
  return SymMatrix(d);
}

} // namespace detail

/// Random system with N+1 blocks: n_{k+1} = n_k - ceil(10 rand), B_k uniform.
/// Diagonal variant: A_0 = diag(rand), A_k = diag(1e-4 rand). Dense variant:
/// A_k = sym(rand) shifted by |lambda_min| (times 1.01 for A_0).
inline BlockTridiagonalSystem random_multi_system(RngStream& rng, Index N, MultiVariant variant, Index n0)
{
  std::vector<Index> n{n0};
  for (Index k = 0; k < N; ++k)
    n.push_back(n.back() - static_cast<Index>(std::ceil(10.0 * rng.uniform())));
  if (n.back() < 1)
    throw InvalidArgument("random_multi_system: n0 too small for " + std::to_string(N + 1) + " blocks");
  std::vector<SymMatrix> a;
  std::vector<Matrix> b;
  for (Index k = 0; k <= N; ++k) {
    if (variant == MultiVariant::diagonal) {
      Vector d = rng.uniform_vector(n[k]);
      if (k > 0)
        d *= 1e-4;
      a.emplace_back(Matrix(d.asDiagonal()));
    } else {
      a.push_back(detail::shifted_sym_part(rng.uniform_matrix(n[k], n[k]), k == 0 ? 1.01 : 1.0));
    }
    if (k > 0)
      b.push_back(rng.uniform_matrix(n[k], n[k - 1]));
  }
  return assemble(a, b);
}

/// Exact block-diagonal Schur preconditioning of a random (N+1)-block system:
/// dense spectrum of P^{-1} A against the interval hull I_{N+1}, and MINRES
/// on a random right-hand side. Instances that violate the assumptions are
/// redrawn from the next stream, up to max_attempts times.
inline ExperimentReport random_multi_experiment(Index N, MultiVariant variant, std::uint64_t seed,
                                                const RandomMultiOptions& o = {})
{
  if (N < 1 || N > 8)
    throw InvalidArgument("random_multi_experiment: N must be in 1..8, got " + std::to_string(N));
  const auto t0 = std::chrono::steady_clock::now();
  std::string last_error;
  for (int attempt = 0; attempt < o.max_attempts; ++attempt) {
    RngStream rng(seed, static_cast<std::uint64_t>(attempt));
    BlockTridiagonalSystem sys;
    SchurChain chain;
    try {
      sys = random_multi_system(rng, N, variant, o.n0);
      chain = exact_schur_chain(sys);
    } catch (const AssumptionViolated& e) {
      last_error = e.what();
      continue;
    } catch (const NotPositiveDefinite& e) {
      last_error = e.what();
      continue;
    }

    ExperimentReport r;
    r.label = "multi_N" + std::to_string(N) + "_" + to_string(variant);
    r.seed = seed;
    r.system_dims = sys.sizes();
    r.bounds = interval_I(static_cast<int>(N) + 1);
    r.computed = spectrum_edges(preconditioned_eigenvalues(sys, chain));
    r.violations = containment_violations(r.bounds, r.computed);

    const Vector rhs = rng.uniform_vector(sys.size());
    auto sol = minres(sys.op(), chain.inverse_operator(), rhs, o.rel_tol, o.max_iter, MinresStop::euclidean);
    r.minres_iterations = static_cast<int>(sol.iterations);
    r.minres_converged = sol.converged;
    r.extras = {{"N", double(N)},
                {"n0", double(o.n0)},
                {"attempt", double(attempt)},
                {"true_relative_residual", sol.true_relative_residual}};
    r.timing_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }
  throw AssumptionViolated("random_multi_experiment: no admissible instance in " + std::to_string(o.max_attempts) +
                           " attempts (last: " + last_error + ")");
}

} // namespace msp

#endif
