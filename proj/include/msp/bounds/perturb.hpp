#ifndef MSP_BOUNDS_PERTURB_HPP
#define MSP_BOUNDS_PERTURB_HPP

#include "msp/core/intervals.hpp"
#include "msp/linalg/eigen.hpp"
#include "msp/saddle/block_system.hpp"
#include "msp/saddle/schur_chain.hpp"
#include "msp/saddle/symmetrize.hpp"

#include "json.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

namespace msp {

/// Extremes over k of the eigenvalues of (-1)^{k+1} (I - S^_k^{-1} S~_k).
struct PerturbationRange
{
  double sigma_minus = 0.0;
  double sigma_plus = 0.0;
};

/// sigma range for an approximate chain S^. The induced chain S~ is
/// S~_0 = A_0, S~_k = A_k + B_k S^_{k-1}^{-1} B_k^T.
inline PerturbationRange sigma_range(const SchurChain& approx, const BlockTridiagonalSystem& sys)
{
  SchurChain tilde = perturbed_schur_chain(sys, approx);
  PerturbationRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (Index k = 0; k <= sys.N(); ++k) {
    // pencil (S~_k, S^_k) eigenvalues lambda map to (-1)^{k+1} (1 - lambda)
    Vector ev = sym_eigvals(approx.factor(k).congruence(tilde.complement(k)));
    const double lo = ev(0), hi = ev(ev.size() - 1);
    if (k % 2 == 0) {
      r.sigma_minus = std::min(r.sigma_minus, lo - 1.0);
      r.sigma_plus = std::max(r.sigma_plus, hi - 1.0);
    } else {
      r.sigma_minus = std::min(r.sigma_minus, 1.0 - hi);
      r.sigma_plus = std::max(r.sigma_plus, 1.0 - lo);
    }
  }
  return r;
}

struct MinkowskiBounds
{
  PerturbationRange range;
  BoundsInterval base;
  BoundsInterval shifted;
  /// The shifted union reaches zero; the bound no longer certifies invertibility.
  bool contains_zero = false;

  nlohmann::ordered_json to_json() const
  {
    auto iv = [](const BoundsInterval& b) {
      return nlohmann::ordered_json::array({b.neg_lo, b.neg_hi, b.pos_lo, b.pos_hi});
    };
    nlohmann::ordered_json j;
    j["sigma_minus"] = range.sigma_minus;
    j["sigma_plus"] = range.sigma_plus;
    j["base_interval"] = iv(base);
    j["shifted_interval"] = iv(shifted);
    j["contains_zero"] = contains_zero;
    return j;
  }
};

/// base + [sigma-, sigma+], interval by interval, without clamping at zero.
inline MinkowskiBounds minkowski_bounds(const BoundsInterval& base, const PerturbationRange& range)
{
  MinkowskiBounds m;
  m.range = range;
  m.base = base;
  m.shifted = {base.neg_lo + range.sigma_minus, base.neg_hi + range.sigma_plus,
               base.pos_lo + range.sigma_minus, base.pos_hi + range.sigma_plus};
  m.contains_zero = m.shifted.neg_hi >= 0.0 || m.shifted.pos_lo <= 0.0;
  return m;
}

struct HypothesisReport
{
  bool ok = true;
  std::vector<std::string> failures;
};

/// The perturbation bound requires A^_0 positive definite and A^_k (k >= 1)
/// positive semi-definite, where A^ is the backward-perturbed matrix.
inline HypothesisReport check_perturbation_hypotheses(const BlockTridiagonalSystem& sys, const SchurChain& approx,
                                                      const Tolerances& tol = default_tolerances)
{
  HypothesisReport rep;
  BlockTridiagonalSystem ahat = perturbed_matrix(sys, approx);
  for (Index k = 0; k <= ahat.N(); ++k) {
    SymMatrix a = ahat.A_dense(k);
    const double lmin = sym_eigvals(a, tol.dense_cap)(0);
    const double nrm = a.frobenius_norm();
    const bool good = k == 0 ? lmin > tol.psd * nrm : lmin >= -tol.psd * nrm;
    if (!good) {
      rep.ok = false;
      rep.failures.push_back("A^_" + std::to_string(k) + " has lambda_min = " + std::to_string(lmin));
    }
  }
  return rep;
}

} // namespace msp

#endif
