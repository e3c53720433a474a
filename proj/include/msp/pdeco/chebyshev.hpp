#ifndef MSP_PDECO_CHEBYSHEV_HPP
#define MSP_PDECO_CHEBYSHEV_HPP

#include "msp/core/errors.hpp"
#include "msp/core/types.hpp"
#include "msp/linalg/operator.hpp"

#include <cmath>
#include <memory>
#include <string>

namespace msp {

/// Chebyshev semi-iteration for M x = r with the Jacobi splitting D = diag(M).
/// The spectrum of D^{-1} M is assumed to lie in [lambda_min, lambda_max];
/// for P1 mass matrices on triangles this is [1/2, 2].
struct ChebyshevConfig
{
  int steps = 1;
  double lambda_min = 0.5;
  double lambda_max = 2.0;

  void validate() const
  {
    if (steps < 1)
      throw InvalidArgument("Chebyshev: steps must be >= 1, got " + std::to_string(steps));
    if (!(lambda_min > 0.0) || lambda_max < lambda_min)
      throw InvalidArgument("Chebyshev: need 0 < lambda_min <= lambda_max");
  }
};

/// T_m(x) for x >= 1, via cosh(m acosh x).
inline double chebyshev_T(int m, double x)
{
  if (x < 1.0)
    throw InvalidArgument("chebyshev_T: argument must be >= 1");
  return std::cosh(m * std::acosh(x));
}

/// Spectral radius bound of I - Mhat^{-1} M after m steps:
/// 1 / T_m((b + a) / (b - a)); 1/T_m(5/3) for the default interval.
inline double cheb_omega(const ChebyshevConfig& cfg)
{
  cfg.validate();
  if (cfg.lambda_max == cfg.lambda_min)
    return 0.0;
  return 1.0 / chebyshev_T(cfg.steps, (cfg.lambda_max + cfg.lambda_min) / (cfg.lambda_max - cfg.lambda_min));
}

inline double cheb_omega(int steps) { return cheb_omega(ChebyshevConfig{steps}); }

/// x = Mhat^{-1} r: a fixed polynomial in D^{-1} M applied to D^{-1} r, hence
/// a symmetric linear operator.
inline Vector cheb_apply(const SparseMatrix& m, const Vector& dinv, const ChebyshevConfig& cfg, const Vector& rhs)
{
  const double theta = 0.5 * (cfg.lambda_max + cfg.lambda_min);
  const double delta = 0.5 * (cfg.lambda_max - cfg.lambda_min);
  Vector x = Vector::Zero(rhs.size());
  Vector r = rhs;
  Vector d = dinv.cwiseProduct(r) / theta;
  if (delta == 0.0)
    return d;
  const double sigma = theta / delta;
  double rho = 1.0 / sigma;
  for (int k = 0; k < cfg.steps; ++k) {
    x += d;
    if (k + 1 == cfg.steps)
      break;
    r -= m * d;
    const double rho_next = 1.0 / (2.0 * sigma - rho);
    d = (rho_next * rho) * d + (2.0 * rho_next / delta) * dinv.cwiseProduct(r);
    rho = rho_next;
  }
  return x;
}

inline Vector cheb_apply(const SparseMatrix& m, const ChebyshevConfig& cfg, const Vector& rhs)
{
  cfg.validate();
  if (rhs.size() != m.rows())
    throw ShapeMismatch("cheb_apply: right-hand side length differs from M");
  return cheb_apply(m, Vector(m.diagonal().cwiseInverse()), cfg, rhs);
}

/// Mhat^{-1} as an operator; M is copied into shared state.
inline LinearOperator cheb_operator(const SparseMatrix& m, const ChebyshevConfig& cfg)
{
  cfg.validate();
  auto mm = std::make_shared<const SparseMatrix>(m);
  auto dinv = std::make_shared<const Vector>(m.diagonal().cwiseInverse());
  return {m.rows(), [mm, dinv, cfg](const Vector& in, Vector& out) { out = cheb_apply(*mm, *dinv, cfg, in); }};
}

} // namespace msp

#endif
