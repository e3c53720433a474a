#ifndef MSP_LINALG_MINRES_HPP
#define MSP_LINALG_MINRES_HPP

#include "msp/core/errors.hpp"
#include "msp/core/types.hpp"
#include "msp/linalg/operator.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace msp {

struct SolveReport
{
  Vector solution;
  Index iterations = 0;
  /// Preconditioned residual norm over its initial value; entry 0 is 1.
  std::vector<double> relative_residuals;
  /// ||b - A x|| / ||b|| evaluated once at exit.
  double true_relative_residual = 0.0;
  bool converged = false;
};

/// Stopping test. `preconditioned` monitors the P^{-1}-norm of the residual
/// (free, from the recurrences); `euclidean` requires ||b - A x|| <= rel_tol ||b||,
/// at the cost of one extra product with A per step.
enum class MinresStop { preconditioned, euclidean };

/// Preconditioned MINRES (Paige and Saunders) from a zero initial guess.
///
/// `precond_inv` applies P^{-1} for an SPD preconditioner P. The Lanczos
/// process runs in the P-inner product and the monitored quantity is the
/// P^{-1}-norm of the residual, which MINRES reduces monotonically. The
/// iteration stops once that norm falls to rel_tol times its initial value.
inline SolveReport minres(const LinearOperator& a, const LinearOperator& precond_inv, const Vector& b,
                          double rel_tol = default_tolerances.minres, Index max_iter = 1000,
                          MinresStop stop = MinresStop::preconditioned)
{
  const Index n = a.size();
  if (precond_inv.size() != n || b.size() != n)
    throw ShapeMismatch("minres: operator, preconditioner and rhs sizes differ");

  SolveReport rep;
  rep.solution = Vector::Zero(n);
  rep.relative_residuals.push_back(1.0);

  Vector r1 = b;
  Vector y = precond_inv.apply(r1);
  const double rz = r1.dot(y);
  if (rz < 0.0)
    throw AssumptionViolated("minres: preconditioner is not positive definite");
  const double beta1 = std::sqrt(rz);
  if (beta1 == 0.0) {
    rep.converged = true;
    rep.relative_residuals.back() = 0.0;
    return rep;
  }

  const double eps = std::numeric_limits<double>::epsilon();
  double oldb = 0.0;
  double beta = beta1;
  double dbar = 0.0;
  double epsln = 0.0;
  double phibar = beta1;
  double cs = -1.0;
  double sn = 0.0;
  Vector r2 = r1;
  Vector v(n);
  Vector w = Vector::Zero(n);
  Vector w1(n);
  Vector w2 = Vector::Zero(n);
  Vector& x = rep.solution;

  for (Index itn = 1; itn <= max_iter; ++itn) {
    v = y / beta;
    a.apply(v, y);
    if (itn >= 2)
      y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1.swap(r2);
    r2 = y;
    precond_inv.apply(r2, y);
    oldb = beta;
    const double bb = r2.dot(y);
    if (bb < 0.0)
      throw AssumptionViolated("minres: preconditioner is not positive definite");
    beta = std::sqrt(bb);

    // Apply the previous rotation, then form and apply the new one.
    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    double gamma = std::hypot(gbar, beta);
    gamma = std::max(gamma, eps);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1.swap(w2);
    w2.swap(w);
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;

    rep.iterations = itn;
    rep.relative_residuals.push_back(phibar / beta1);
    if (stop == MinresStop::euclidean) {
      if ((b - a.apply(x)).norm() <= rel_tol * b.norm()) {
        rep.converged = true;
        break;
      }
      if (beta == 0.0)
        break;
    } else if (phibar / beta1 <= rel_tol || beta == 0.0) {
      rep.converged = phibar / beta1 <= rel_tol;
      break;
    }
  }

  const double bnorm = b.norm();
  rep.true_relative_residual = (b - a.apply(x)).norm() / bnorm;
  return rep;
}

} // namespace msp

#endif
