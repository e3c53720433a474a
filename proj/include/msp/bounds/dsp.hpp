#ifndef MSP_BOUNDS_DSP_HPP
#define MSP_BOUNDS_DSP_HPP

#include "msp/core/errors.hpp"
#include "msp/core/intervals.hpp"
#include "msp/linalg/eigen.hpp"
#include "msp/saddle/block_system.hpp"
#include "msp/saddle/schur_chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

// Bounds for double saddle-point systems (three blocks) preconditioned by
// blkdiag(S^_0, S^_1, S^_2), in terms of the extremal eigenvalues of
//   E_i = S^_i^{-1/2} A_i S^_i^{-1/2},   R_i R_i^T,  R_i = S^_i^{-1/2} B_i S^_{i-1}^{-1/2}.

namespace msp {

struct IndicatorSet
{
  double aE0 = 1, bE0 = 1;
  double aE1 = 0, bE1 = 0;
  double aE2 = 0, bE2 = 0;
  double aR1 = 1, bR1 = 1;
  double aR2 = 1, bR2 = 1;

  void validate() const
  {
    if (!(aE0 > 0.0))
      throw InvalidArgument("indicators: alpha_E0 must be positive");
    if (aE1 < 0.0 || aE2 < 0.0)
      throw InvalidArgument("indicators: alpha_E1 and alpha_E2 must be non-negative");
    if (!(aR1 > 0.0) || !(aR2 > 0.0))
      throw InvalidArgument("indicators: alpha_R1 and alpha_R2 must be positive");
    if (aE0 > bE0 || aE1 > bE1 || aE2 > bE2 || aR1 > bR1 || aR2 > bR2)
      throw InvalidArgument("indicators: every alpha must not exceed its beta");
  }
};

namespace detail {

// Semi-definite blocks give eigenvalues a few ulps below zero; snap them.
inline SpectralRange psd_extremes(const SymMatrix& a, const SymMatrix& s)
{
  if (a.dense().isZero(0.0))
    return {0.0, 0.0};
  auto r = gen_eig_extremes(a, s);
  const double snap = 1e-12 * std::max(std::abs(r.max), 1.0);
  if (r.min < 0.0 && r.min > -snap)
    r.min = 0.0;
  return r;
}

} // namespace detail

/// Indicators of a three-block system for the approximations S^_0..S^_2.
inline IndicatorSet compute_indicators(const BlockTridiagonalSystem& sys, const SchurChain& approx)
{
  if (sys.N() != 2 || approx.N() != 2)
    throw WrongBlockCount("compute_indicators: need exactly three blocks, got " + std::to_string(sys.N() + 1));
  IndicatorSet ind;
  auto e0 = gen_eig_extremes(sys.A_dense(0), approx.complement(0));
  auto e1 = detail::psd_extremes(sys.A_dense(1), approx.complement(1));
  auto e2 = detail::psd_extremes(sys.A_dense(2), approx.complement(2));
  ind.aE0 = e0.min, ind.bE0 = e0.max;
  ind.aE1 = e1.min, ind.bE1 = e1.max;
  ind.aE2 = e2.min, ind.bE2 = e2.max;
  for (Index i = 1; i <= 2; ++i) {
    Matrix w = approx.factor(i - 1).solve_lower(Matrix(sys.B_dense(i).transpose()));
    auto r = gen_eig_extremes(SymMatrix(w.transpose() * w), approx.complement(i));
    (i == 1 ? ind.aR1 : ind.aR2) = r.min;
    (i == 1 ? ind.bR1 : ind.bR2) = r.max;
  }
  return ind;
}

/// Roots of p(l) = l^2 - l (e0 - e1) - r1 - e0 e1.
inline std::pair<double, double> lambda_pm(double e0, double e1, double r1)
{
  const double c = 0.5 * (e0 - e1);
  const double d = std::sqrt(0.25 * (e0 + e1) * (e0 + e1) + r1);
  // lambda_- via the product of roots when c > 0 avoids cancellation
  const double plus = c + d;
  const double minus = c >= 0.0 ? -(r1 + e0 * e1) / plus : c - d;
  return {minus, plus};
}

inline double p_eval(double l, double e0, double e1, double r1)
{
  return l * l - l * (e0 - e1) - r1 - e0 * e1;
}

/// pi(l) = (e0 - l) r2 + p(l) (l - e2).
inline double pi_eval(double l, double e0, double e1, double e2, double r1, double r2)
{
  return (e0 - l) * r2 + p_eval(l, e0, e1, r1) * (l - e2);
}

/// Three-block bounds that ignore the last level: the negative interval
/// [lambda_-(aE0, bE1, bR1), lambda_-(bE0, aE1, aR1)] and the positive
/// interval [aE0, lambda_+(bE0, aE1, bR1)].
inline BoundsInterval saddle_intervals(const IndicatorSet& ind)
{
  return {lambda_pm(ind.aE0, ind.bE1, ind.bR1).first, lambda_pm(ind.bE0, ind.aE1, ind.aR1).first, ind.aE0,
          lambda_pm(ind.bE0, ind.aE1, ind.bR1).second};
}

struct CubicRoots
{
  double mu_a = 0.0;
  double mu_b = 0.0;
  double mu_c = 0.0;
  /// r2 was at or below 1e-14; the roots are the r2 -> 0 limits
  /// {lambda_-, e2, lambda_+} in ascending order.
  bool degenerate = false;
};

namespace detail {

// Bisection on a sign-changing bracket followed by guarded Newton steps.
template <class F, class DF>
double bracket_root(F f, DF df, double lo, double hi)
{
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi)
      break;
    const double fm = f(mid);
    if (fm == 0.0)
      return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double d = df(x);
    if (d == 0.0)
      break;
    const double nx = x - f(x) / d;
    if (!(nx >= lo && nx <= hi) || std::abs(f(nx)) >= std::abs(f(x)))
      break;
    x = nx;
  }
  return x;
}

} // namespace detail

/// Real roots mu_a < lambda_- < 0 < mu_b < lambda_+ < mu_c of pi. Note the
/// argument order (e0, e1, e2, r1, r2).
inline CubicRoots pi_roots(double e0, double e1, double e2, double r1, double r2)
{
  if (!(r1 > 0.0))
    throw InvalidArgument("pi_roots: r1 must be positive");
  if (r2 < 0.0)
    throw InvalidArgument("pi_roots: r2 must be non-negative");
  const auto [lm, lp] = lambda_pm(e0, e1, r1);
  CubicRoots out;
  if (r2 <= 1e-14) {
    double z[3] = {lm, e2, lp};
    std::sort(z, z + 3);
    out = {z[0], z[1], z[2], true};
    return out;
  }
  auto f = [&](double l) { return pi_eval(l, e0, e1, e2, r1, r2); };
  // pi = l^3 - (e0 - e1 + e2) l^2 + c1 l + c0
  const double c2 = -(e0 - e1 + e2);
  const double c1 = -(r1 + e0 * e1) + e2 * (e0 - e1) - r2;
  auto df = [&](double l) { return 3.0 * l * l + 2.0 * c2 * l + c1; };

  double w = 1.0;
  double lo = lm - w;
  while (f(lo) >= 0.0) {
    w *= 2.0;
    lo = lm - w;
  }
  out.mu_a = detail::bracket_root(f, df, lo, lm);
  out.mu_b = detail::bracket_root(f, df, 0.0, lp);
  w = 1.0;
  double hi = lp + w;
  while (f(hi) <= 0.0) {
    w *= 2.0;
    hi = lp + w;
  }
  out.mu_c = detail::bracket_root(f, df, lp, hi);
  return out;
}

struct DspBounds
{
  double neg_lo = 0.0;
  double neg_hi = 0.0;
  double pos_lo = 0.0;
  double pos_hi = 0.0;
  /// Comparison values from the earlier three-block analysis.
  double bradley_neg_hi = 0.0;
  double bradley_pos_lo = 0.0;

  BoundsInterval interval() const { return {neg_lo, neg_hi, pos_lo, pos_hi}; }
};

/// Eigenvalue inclusion [mu_-^LB, lambda_-(bE0, aE1, aR1)] U [mu_+^LB, mu_+^UB].
inline DspBounds dsp_bounds(const IndicatorSet& ind)
{
  ind.validate();
  DspBounds b;
  b.neg_lo = pi_roots(ind.aE0, ind.bE1, ind.aE2, ind.bR1, ind.bR2).mu_a;
  b.neg_hi = lambda_pm(ind.bE0, ind.aE1, ind.aR1).first;
  b.pos_lo = std::min(ind.aE0, pi_roots(ind.aE0, ind.bE1, ind.aE2, ind.bR1, ind.aR2).mu_b);
  b.pos_hi = pi_roots(ind.bE0, ind.aE1, ind.bE2, ind.bR1, ind.bR2).mu_c;
  b.bradley_neg_hi = lambda_pm(ind.bE0, 0.0, ind.aR1).first;
  b.bradley_pos_lo = pi_roots(ind.aE0, ind.bE1, 0.0, ind.bR1, ind.aR2).mu_b;
  return b;
}

} // namespace msp

#endif
