#ifndef MSP_BOUNDS_POLY_HPP
#define MSP_BOUNDS_POLY_HPP

#include "msp/core/errors.hpp"
#include "msp/core/intervals.hpp"
#include "msp/linalg/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

// The polynomial family
//   U_0 = 1,  U_1 = x - 1,
//   U_{k+1}(x, g) = ((-1)^{k+1} (1 - g_k) + x) U_k(x, g) - g_k U_{k-1}(x, g),
// whose zeros localize the spectrum of an exactly preconditioned multiple
// saddle-point matrix with k+1 blocks. For g = 1 it reduces to P_k, with
// zeros 2 cos((2j-1) pi / (2k+1)).

namespace msp {

class GammaVector
{
public:
  GammaVector() = default;
  GammaVector(std::initializer_list<double> v) : GammaVector(std::vector<double>(v)) {}
  explicit GammaVector(std::vector<double> v) : v_(std::move(v))
  {
    for (std::size_t j = 0; j < v_.size(); ++j)
      if (!(v_[j] >= 0.0 && v_[j] <= 1.0))
        throw InvalidArgument("gamma_" + std::to_string(j + 1) + " = " + std::to_string(v_[j]) +
                              " is outside [0, 1]");
  }

  std::size_t size() const { return v_.size(); }
  /// 1-based, as in gamma_1..gamma_k.
  double operator[](std::size_t j) const { return v_.at(j - 1); }
  const std::vector<double>& values() const { return v_; }

private:
  std::vector<double> v_;
};

/// U_{k+1}(x, gamma) for gamma of length k.
inline double eval_U(double x, const GammaVector& gamma)
{
  double prev = 1.0;   // U_0
  double cur = x - 1.0; // U_1
  for (std::size_t k = 1; k <= gamma.size(); ++k) {
    const double g = gamma[k];
    const double sign = (k + 1) % 2 == 0 ? 1.0 : -1.0;
    const double next = (sign * (1.0 - g) + x) * cur - g * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Zeros of P_k, descending.
inline std::vector<double> zeros_P(int k)
{
  if (k < 1)
    throw InvalidArgument("zeros_P: k must be >= 1");
  std::vector<double> z;
  for (int j = 1; j <= k; ++j)
    z.push_back(2.0 * std::cos((2.0 * j - 1.0) * std::numbers::pi / (2.0 * k + 1.0)));
  return z;
}

/// Zeros of V_k = (-1)^k (x - 1) P_{k-1}(-x): the value 1 followed by the
/// negated zeros of P_{k-1} in descending order.
inline std::vector<double> zeros_V(int k)
{
  if (k < 2)
    throw InvalidArgument("zeros_V: k must be >= 2");
  std::vector<double> z{1.0};
  auto p = zeros_P(k - 1);
  for (auto it = p.rbegin(); it != p.rend(); ++it)
    z.push_back(-*it);
  return z;
}

/// Zeros of U_{k+1} for binary gamma, ascending. Each zero of gamma splits
/// the index range into segments of length k_i; a segment starting after
/// index j contributes the zeros of P_{k_i} multiplied by (-1)^j.
inline std::vector<double> zeros_U_binary(const GammaVector& gamma)
{
  const int k = static_cast<int>(gamma.size());
  std::vector<int> cuts{0};
  for (int j = 1; j <= k; ++j) {
    if (gamma[j] == 0.0)
      cuts.push_back(j);
    else if (gamma[j] != 1.0)
      throw InvalidArgument("zeros_U_binary: gamma_" + std::to_string(j) + " is not 0 or 1");
  }
  cuts.push_back(k + 1);
  std::vector<double> z;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const int len = cuts[i] - cuts[i - 1];
    const double sign = cuts[i - 1] % 2 == 0 ? 1.0 : -1.0;
    for (int s = 1; s <= len; ++s)
      z.push_back(sign * 2.0 * std::cos((2.0 * s - 1.0) * std::numbers::pi / (2.0 * len + 1.0)));
  }
  std::sort(z.begin(), z.end());
  return z;
}

/// The symmetric tridiagonal -M_{k+1} whose characteristic polynomial is
/// U_{k+1}(., gamma): diagonal -c_j with c_1 = -1, c_j = (-1)^j (1 - g_{j-1}),
/// off-diagonal sqrt(g_{j-1}).
inline std::pair<std::vector<double>, std::vector<double>> u_tridiagonal(const GammaVector& gamma)
{
  const std::size_t k = gamma.size();
  std::vector<double> d(k + 1), e(k);
  d[0] = 1.0;
  for (std::size_t j = 2; j <= k + 1; ++j) {
    const double sign = j % 2 == 0 ? 1.0 : -1.0;
    d[j - 1] = -sign * (1.0 - gamma[j - 1]);
    e[j - 2] = std::sqrt(gamma[j - 1]);
  }
  return {d, e};
}

/// Zeros of U_{k+1} for gamma in (0, 1]^k, ascending, as eigenvalues of
/// the tridiagonal -M_{k+1}. Zero entries decouple the matrix and must go
/// through zeros_U_binary.
inline std::vector<double> zeros_U_general(const GammaVector& gamma)
{
  for (std::size_t j = 1; j <= gamma.size(); ++j)
    if (!(gamma[j] > 0.0))
      throw DegenerateGamma("zeros_U_general: gamma_" + std::to_string(j) + " must be positive");
  auto [d, e] = u_tridiagonal(gamma);
  return tridiag_eig(d, e);
}

/// Interval hull I_m, m = k+1 >= 2, of all zeros of U_m over admissible gamma:
/// the zeros of P_j and -P_{j-1} for j = 1..m, split by sign.
inline BoundsInterval interval_I(int m)
{
  if (m < 2)
    throw InvalidArgument("interval_I: m must be >= 2");
  std::vector<double> z;
  for (int j = 1; j <= m; ++j) {
    for (double v : zeros_P(j))
      z.push_back(v);
    if (j >= 2)
      for (double v : zeros_P(j - 1))
        z.push_back(-v);
  }
  BoundsInterval b{0.0, -INFINITY, INFINITY, 0.0};
  for (double v : z) {
    if (v < 0.0) {
      b.neg_lo = std::min(b.neg_lo, v);
      b.neg_hi = std::max(b.neg_hi, v);
    } else {
      b.pos_lo = std::min(b.pos_lo, v);
      b.pos_hi = std::max(b.pos_hi, v);
    }
  }
  return b;
}

struct BoundsRow
{
  int k = 0;
  BoundsInterval interval;
};

/// Rows k = 1..max_k with interval I_{k+1}.
inline std::vector<BoundsRow> bounds_table(int max_k)
{
  if (max_k < 1)
    throw InvalidArgument("bounds_table: max_k must be >= 1");
  std::vector<BoundsRow> rows;
  for (int k = 1; k <= max_k; ++k)
    rows.push_back({k, interval_I(k + 1)});
  return rows;
}

inline void write_bounds_csv(std::ostream& out, const std::vector<BoundsRow>& rows)
{
  out << "k,bound_l_neg,bound_l_pos,bound_u_neg,bound_u_pos\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.4f,%.4f,%.4f,%.4f\n", r.k, r.interval.neg_lo, r.interval.neg_hi,
                  r.interval.pos_lo, r.interval.pos_hi);
    out << buf;
  }
}

} // namespace msp

#endif
