#ifndef MSP_PDECO_EXPERIMENT_HPP
#define MSP_PDECO_EXPERIMENT_HPP

#include "msp/bounds/dsp.hpp"
#include "msp/experiments/report.hpp"
#include "msp/linalg/lanczos.hpp"
#include "msp/linalg/minres.hpp"
#include "msp/pdeco/chebyshev.hpp"
#include "msp/pdeco/fem.hpp"
#include "msp/pdeco/kkt.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

namespace msp {

/// Indicators for the preconditioner blkdiag(beta Mhat, Mhat / beta, beta L M^{-1} L).
/// E_0 is bracketed by the Chebyshev contraction, the R_i by powers of it;
/// E_1 = 0 and alpha_E2 = 0 because A_1 = 0 and Mb is singular. Only
/// beta_E2 = lambda_max(Mb, beta L M^{-1} L) needs an eigensolve.
inline IndicatorSet pdeco_indicators(const FemMatrices& fem, const PdecoPreconditioner& precond,
                                     const ChebyshevConfig& cheb, const LanczosOptions& opts = {})
{
  const double w = cheb_omega(cheb);
  IndicatorSet ind;
  ind.aE0 = 1.0 - w;
  ind.bE0 = 1.0 + w;
  ind.aE1 = ind.bE1 = 0.0;
  ind.aE2 = 0.0;
  ind.aR1 = ind.aE0 * ind.aE0;
  ind.bR1 = ind.bE0 * ind.bE0;
  ind.aR2 = ind.aE0;
  ind.bR2 = ind.bE0;

  auto mb = std::make_shared<const SparseMatrix>(fem.Mb);
  LinearOperator a{fem.nodes(), [mb](const Vector& in, Vector& out) { out = *mb * in; }};
  LinearOperator s2inv{fem.nodes(), [precond](const Vector& in, Vector& out) { out = precond.s2_inv(in); }};
  auto e = pencil_extremal_eigs(a, s2inv, Which::largest, opts);
  if (!e.converged)
    throw AssumptionViolated("pdeco_indicators: Lanczos for beta_E2 did not converge");
  ind.bE2 = e.largest;
  return ind;
}

inline IndicatorSet pdeco_indicators(const FemMatrices& fem, double beta, const ChebyshevConfig& cheb,
                                     const LanczosOptions& opts = {})
{
  return pdeco_indicators(fem, PdecoPreconditioner(fem, beta, cheb), cheb, opts);
}

/// All eigenvalues of P^{-1} A by a dense symmetric-definite solve of
/// A P^{-1} x = lambda x. Intended for h >= 2^-5 (dimension 3267).
inline Vector pdeco_dense_spectrum(const KktProblem& kkt, const PdecoPreconditioner& precond,
                                   Index cap = default_tolerances.dense_cap)
{
  const Index n = kkt.system.size();
  detail::check_dense_cap(n, cap);
  Matrix pinv = precond.inverse_operator().to_dense();
  pinv = 0.5 * (pinv + pinv.transpose()).eval();
  Matrix a = kkt.system.dense().dense();
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(a, pinv, Eigen::EigenvaluesOnly | Eigen::ABx_lx);
  if (ges.info() != Eigen::Success)
    throw AssumptionViolated("pdeco_dense_spectrum: eigensolver failed");
  return ges.eigenvalues();
}

enum class SpectrumMethod { automatic, dense, lanczos };

struct PdecoOptions
{
  int level = 5; ///< h = 2^-level
  double beta = 1.0;
  ChebyshevConfig cheb{};
  double rel_tol = default_tolerances.minres;
  Index max_iter = 2000;
  MinresStop stop = MinresStop::euclidean;
  SpectrumMethod spectrum = SpectrumMethod::automatic;
  bool compute_spectrum = true;
  LanczosOptions lanczos{3000, 1e-7, 10, 0x5eed};
};

inline std::string pdeco_label(const PdecoOptions& o)
{
  char buf[96];
  std::snprintf(buf, sizeof buf, "pdeco_h2^-%d_beta%g_cheb%d", o.level, o.beta, o.cheb.steps);
  return buf;
}

/// Builds the optimality system, solves it by preconditioned MINRES, and
/// compares the spectrum edges of P^{-1} A with the three-block bounds.
inline ExperimentReport run_pdeco(const PdecoOptions& o)
{
  if (o.level < 3 || o.level > 7)
    throw InvalidArgument("run_pdeco: level must be in 3..7");
  const auto t0 = std::chrono::steady_clock::now();
  const FemMatrices fem = assemble_fem(Index{1} << o.level);
  const KktProblem kkt = assemble_kkt(fem, o.beta);
  const PdecoPreconditioner precond(fem, o.beta, o.cheb);
  const IndicatorSet ind = pdeco_indicators(fem, precond, o.cheb);
  const DspBounds b = dsp_bounds(ind);

  ExperimentReport r;
  r.label = pdeco_label(o);
  r.system_dims = kkt.system.sizes();
  r.bounds = b.interval();
  r.bradley = std::make_pair(b.bradley_neg_hi, b.bradley_pos_lo);
  r.extras = {{"h", fem.h},         {"beta", o.beta},    {"cheb", double(o.cheb.steps)},
              {"omega", cheb_omega(o.cheb)}, {"bE2", ind.bE2}};

  const LinearOperator pinv = precond.inverse_operator();
  auto sol = minres(kkt.system.op(), pinv, kkt.rhs, o.rel_tol, o.max_iter, o.stop);
  r.minres_iterations = static_cast<int>(sol.iterations);
  r.minres_converged = sol.converged;
  r.extras.emplace_back("true_relative_residual", sol.true_relative_residual);

  if (o.compute_spectrum) {
    double slack = 0.0;
    const bool dense = o.spectrum == SpectrumMethod::dense ||
                       (o.spectrum == SpectrumMethod::automatic && kkt.system.size() <= default_tolerances.dense_cap);
    if (dense) {
      r.computed = spectrum_edges(pdeco_dense_spectrum(kkt, precond));
      r.extras.emplace_back("spectrum_dense", 1.0);
    } else {
      auto e = pencil_gap_edges(kkt.system.op(), pinv, o.lanczos);
      r.computed = e.edges;
      r.extras.emplace_back("spectrum_dense", 0.0);
      r.extras.emplace_back("lanczos_steps", double(e.iterations));
      r.extras.emplace_back("lanczos_error_bound", e.error_bound);
      slack = e.error_bound;
      if (!e.converged)
        r.violations.push_back("Lanczos spectrum edges did not converge in " + std::to_string(e.iterations) +
                               " steps");
    }
    auto v = containment_violations(r.bounds, r.computed, default_tolerances.containment, slack);
    r.violations.insert(r.violations.end(), v.begin(), v.end());
  }
  r.timing_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

} // namespace msp

#endif
