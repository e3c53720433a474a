#ifndef MSP_CORE_INTERVALS_HPP
#define MSP_CORE_INTERVALS_HPP

#include "msp/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace msp {

/// One negative and one positive interval, [neg_lo, neg_hi] U [pos_lo, pos_hi].
/// Well separated bounds satisfy neg_lo <= neg_hi < 0 < pos_lo <= pos_hi, but
/// shifted bounds may legitimately reach across zero, so the ordering is
/// checked by `separated()` rather than enforced.
struct BoundsInterval
{
  double neg_lo = 0.0;
  double neg_hi = 0.0;
  double pos_lo = 0.0;
  double pos_hi = 0.0;

  bool separated() const
  {
    return neg_lo <= neg_hi && neg_hi < 0.0 && 0.0 < pos_lo && pos_lo <= pos_hi;
  }

  bool contains(double x, double slack = 0.0) const
  {
    return (x >= neg_lo - slack && x <= neg_hi + slack) ||
           (x >= pos_lo - slack && x <= pos_hi + slack);
  }

  bool operator==(const BoundsInterval&) const = default;
};

/// Extremal negative and positive eigenvalues of an indefinite spectrum.
struct SpectrumEdges
{
  double neg_lo = std::numeric_limits<double>::quiet_NaN();
  double neg_hi = std::numeric_limits<double>::quiet_NaN();
  double pos_lo = std::numeric_limits<double>::quiet_NaN();
  double pos_hi = std::numeric_limits<double>::quiet_NaN();

  double spectral_radius() const
  {
    double r = 0.0;
    for (double v : {neg_lo, neg_hi, pos_lo, pos_hi})
      if (!std::isnan(v))
        r = std::max(r, std::abs(v));
    return r;
  }
};

inline SpectrumEdges spectrum_edges(const Vector& eigenvalues)
{
  SpectrumEdges e;
  for (double v : eigenvalues) {
    if (v < 0.0) {
      if (std::isnan(e.neg_lo) || v < e.neg_lo)
        e.neg_lo = v;
      if (std::isnan(e.neg_hi) || v > e.neg_hi)
        e.neg_hi = v;
    } else if (v > 0.0) {
      if (std::isnan(e.pos_lo) || v < e.pos_lo)
        e.pos_lo = v;
      if (std::isnan(e.pos_hi) || v > e.pos_hi)
        e.pos_hi = v;
    }
  }
  return e;
}

} // namespace msp

#endif
