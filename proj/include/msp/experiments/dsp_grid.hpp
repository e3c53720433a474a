#ifndef MSP_EXPERIMENTS_DSP_GRID_HPP
#define MSP_EXPERIMENTS_DSP_GRID_HPP

#include "msp/bounds/dsp.hpp"
#include "msp/core/errors.hpp"
#include "msp/core/rng.hpp"
#include "msp/experiments/report.hpp"
#include "msp/saddle/block_system.hpp"
#include "msp/saddle/schur_chain.hpp"
#include "msp/saddle/symmetrize.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace msp {

/// Prescribed indicator extremes of one grid case, with E_1 = E_2 = 0.
struct DspCase
{
  double aE0 = 1, bE0 = 1;
  double aR1 = 1, bR1 = 1;
  double aR2 = 1, bR2 = 1;

  IndicatorSet indicators() const
  {
    IndicatorSet ind;
    ind.aE0 = aE0, ind.bE0 = bE0;
    ind.aR1 = aR1, ind.bR1 = bR1;
    ind.aR2 = aR2, ind.bR2 = bR2;
    return ind;
  }
};

struct DspGridOptions
{
  /// Candidate lower and upper extremes for each of (E_0, R_1, R_2).
  std::vector<double> alphas{0.1, 0.3, 0.9};
  std::vector<double> betas{1.2, 1.8, 5.0};
  int runs_per_case = 25;
  std::uint64_t seed = 1;
  /// 0 means one worker per hardware thread.
  unsigned threads = 0;
  /// Block sizes are round(base + spread * rand), redrawn until non-increasing.
  double size_base = 50.0;
  double size_spread = 10.0;
  int max_attempts = 10;
};

/// Cartesian product alphas^3 x betas^3 in the order (aE0, bE0, aR1, bR1, aR2, bR2),
/// last index fastest.
inline std::vector<DspCase> dsp_grid_cases(const DspGridOptions& o)
{
  if (o.alphas.empty() || o.betas.empty())
    throw InvalidArgument("dsp grid: empty parameter list");
  std::vector<DspCase> out;
  for (double a0 : o.alphas)
    for (double b0 : o.betas)
      for (double a1 : o.alphas)
        for (double b1 : o.betas)
          for (double a2 : o.alphas)
            for (double b2 : o.betas) {
              DspCase c{a0, b0, a1, b1, a2, b2};
              c.indicators().validate();
              out.push_back(c);
            }
  return out;
}

namespace detail {

// c1 X + c2 I with the pencil (X, c1 X + c2 I) spanning exactly [alpha, beta]:
// the map x -> x / (c1 x + c2) sends lambda_min(X) to alpha and lambda_max(X) to beta.
inline SymMatrix spectral_fit(const SymMatrix& x, double alpha, double beta)
{
  const Vector ev = sym_eigvals(x);
  const double lo = ev(0), hi = ev(ev.size() - 1);
  if (!(lo > 0.0))
    throw AssumptionViolated("spectral_fit: X is not positive definite");
  Matrix d = x.dense();
  if (hi - lo <= 1e-14 * hi) {
    d /= 0.5 * (alpha + beta);
    return SymMatrix(d);
  }
  const double c1 = (hi / beta - lo / alpha) / (hi - lo);
  const double c2 = lo / alpha - c1 * lo;
  d *= c1;
  d.diagonal().array() += c2;
  return SymMatrix(d);
}

inline double e0_error(const IndicatorSet& got, const DspCase& want)
{
  return std::max(std::abs(got.aE0 - want.aE0), std::abs(got.bE0 - want.bE0));
}

// The R_i minima inherit the conditioning of S~_i, which is poor when B_i
// is square, so they are realized less accurately than E_0.
inline double indicator_error(const IndicatorSet& got, const DspCase& want)
{
  return std::max({std::abs(got.aE0 - want.aE0), std::abs(got.bE0 - want.bE0), std::abs(got.aR1 - want.aR1),
                   std::abs(got.bR1 - want.bR1), std::abs(got.aR2 - want.aR2), std::abs(got.bR2 - want.bR2),
                   std::abs(got.aE1), std::abs(got.bE1), std::abs(got.aE2), std::abs(got.bE2)});
}

} // namespace detail

/// One trial: three blocks of size about 50..60, A_0 = sym(randn) shifted to
/// be positive definite, A_1 = A_2 = 0, B_k = randn, and S^_i fitted as
/// combinations of S~_i and I that realize the case's indicator extremes.
inline ExperimentReport dsp_trial(const DspCase& c, std::uint64_t seed, std::uint64_t stream,
                                  const DspGridOptions& o = {})
{
  const auto t0 = std::chrono::steady_clock::now();
  std::string last_error;
  for (int attempt = 0; attempt < o.max_attempts; ++attempt) {
    RngStream rng(seed, stream * static_cast<std::uint64_t>(o.max_attempts) + static_cast<std::uint64_t>(attempt));
    std::array<Index, 3> n{};
    do {
      for (auto& v : n)
        v = static_cast<Index>(std::lround(o.size_base + o.size_spread * rng.uniform()));
    } while (!(n[0] >= n[1] && n[1] >= n[2]));

    BlockTridiagonalSystem sys;
    SchurChain chain;
    try {
      Matrix g = rng.normal_matrix(n[0], n[0]);
      SymMatrix a0(0.5 * (g + g.transpose()));
      Matrix a0d = a0.dense();
      a0d.diagonal().array() += 1.01 * std::abs(sym_eigvals(a0)(0));
      std::vector<SymMatrix> a{SymMatrix(a0d), SymMatrix::zero(n[1]), SymMatrix::zero(n[2])};
      std::vector<Matrix> b{rng.normal_matrix(n[1], n[0]), rng.normal_matrix(n[2], n[1])};
      sys = assemble(a, b);
      const std::array<double, 3> lo{c.aE0, c.aR1, c.aR2}, hi{c.bE0, c.bR1, c.bR2};
      chain = approximate_schur_chain(
          sys, [&](Index k, const SymMatrix& tilde) { return detail::spectral_fit(tilde, lo[k], hi[k]); });
    } catch (const AssumptionViolated& e) {
      last_error = e.what();
      continue;
    } catch (const NotPositiveDefinite& e) {
      last_error = e.what();
      continue;
    }

    const IndicatorSet got = compute_indicators(sys, chain);
    const DspBounds bounds = dsp_bounds(c.indicators());

    ExperimentReport r;
    char buf[128];
    std::snprintf(buf, sizeof buf, "dsp_%g_%g_%g_%g_%g_%g", c.aE0, c.bE0, c.aR1, c.bR1, c.aR2, c.bR2);
    r.label = buf;
    r.seed = seed;
    r.system_dims = sys.sizes();
    r.bounds = bounds.interval();
    r.bradley = std::make_pair(bounds.bradley_neg_hi, bounds.bradley_pos_lo);
    r.computed = spectrum_edges(preconditioned_eigenvalues(sys, chain));
    r.violations = containment_violations(r.bounds, r.computed);
    r.extras = {{"stream", double(stream)},          {"attempt", double(attempt)},
                {"aE0", got.aE0},                    {"bE0", got.bE0},
                {"aR1", got.aR1},                    {"bR1", got.bR1},
                {"aR2", got.aR2},                    {"bR2", got.bR2},
                {"e0_error", detail::e0_error(got, c)},
                {"indicator_error", detail::indicator_error(got, c)}};
    r.timing_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }
  throw AssumptionViolated("dsp_trial: no admissible instance in " + std::to_string(o.max_attempts) +
                           " attempts (last: " + last_error + ")");
}

/// All cases times runs_per_case trials, in (case, trial) order. Trial t of
/// case i draws from stream i * runs + t, so the output does not depend on
/// the number of worker threads.
inline std::vector<ExperimentReport> random_dsp_grid(const DspGridOptions& o)
{
  if (o.runs_per_case < 1)
    throw InvalidArgument("dsp grid: runs_per_case must be >= 1");
  const auto cases = dsp_grid_cases(o);
  const std::size_t runs = static_cast<std::size_t>(o.runs_per_case);
  const std::size_t total = cases.size() * runs;
  std::vector<ExperimentReport> out(total);

  unsigned workers = o.threads ? o.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t t = next++; t < total; t = next++) {
      try {
        out[t] = dsp_trial(cases[t / runs], o.seed, t, o);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
        next = total;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w)
    pool.emplace_back(work);
  work();
  for (auto& th : pool)
    th.join();
  if (failure)
    std::rethrow_exception(failure);
  return out;
}

/// Worst-case extremes over the trials of each case: smallest neg_lo and
/// pos_lo, largest neg_hi and pos_hi. Trials of one case must be contiguous.
inline std::vector<ExperimentReport> aggregate_dsp_cases(const std::vector<ExperimentReport>& trials, int runs)
{
  if (runs < 1 || trials.size() % static_cast<std::size_t>(runs) != 0)
    throw InvalidArgument("aggregate_dsp_cases: trial count is not a multiple of runs");
  std::vector<ExperimentReport> out;
  for (std::size_t i = 0; i < trials.size(); i += static_cast<std::size_t>(runs)) {
    ExperimentReport r = trials[i];
    r.system_dims.clear();
    r.extras = {{"runs", double(runs)}};
    double worst_e0 = 0.0, worst_err = 0.0, time = 0.0;
    for (int t = 0; t < runs; ++t) {
      const auto& x = trials[i + static_cast<std::size_t>(t)];
      if (x.label != r.label)
        throw InvalidArgument("aggregate_dsp_cases: trials of case " + r.label + " are not contiguous");
      r.computed.neg_lo = std::min(r.computed.neg_lo, x.computed.neg_lo);
      r.computed.neg_hi = std::max(r.computed.neg_hi, x.computed.neg_hi);
      r.computed.pos_lo = std::min(r.computed.pos_lo, x.computed.pos_lo);
      r.computed.pos_hi = std::max(r.computed.pos_hi, x.computed.pos_hi);
      worst_e0 = std::max(worst_e0, x.extra("e0_error"));
      worst_err = std::max(worst_err, x.extra("indicator_error"));
      time += x.timing_seconds;
    }
    r.extras.emplace_back("e0_error", worst_e0);
    r.extras.emplace_back("indicator_error", worst_err);
    r.timing_seconds = time;
    r.violations = containment_violations(r.bounds, r.computed);
    out.push_back(std::move(r));
  }
  return out;
}

} // namespace msp

#endif
