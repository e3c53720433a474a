#include "catch_amalgamated.hpp"

#include "msp/bounds/dsp.hpp"
#include "msp/bounds/poly.hpp"
#include "msp/saddle/symmetrize.hpp"
#include "support.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace msp;
using namespace msp::test;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Real roots of the monic cubic via companion-matrix eigenvalues.
std::vector<double> companion_roots(double e0, double e1, double e2, double r1, double r2)
{
  const double c2 = -(e0 - e1 + e2);
  const double c1 = -(r1 + e0 * e1) + e2 * (e0 - e1) - r2;
  const double c0 = e2 * (r1 + e0 * e1) + e0 * r2;
  Matrix c = Matrix::Zero(3, 3);
  c(0, 0) = -c2;
  c(0, 1) = -c1;
  c(0, 2) = -c0;
  c(1, 0) = c(2, 1) = 1.0;
  Eigen::EigenSolver<Matrix> es(c, false);
  std::vector<double> r;
  for (int i = 0; i < 3; ++i)
    r.push_back(es.eigenvalues()(i).real());
  std::sort(r.begin(), r.end());
  return r;
}

IndicatorSet worked_instance()
{
  IndicatorSet ind;
  ind.aE0 = 0.01;
  ind.bE0 = 1.0;
  ind.aE1 = 0.0;
  ind.bE1 = 0.1;
  ind.aR1 = 1.0;
  ind.bR1 = 2.0;
  ind.aE2 = 0.1;
  ind.bE2 = 1.0;
  ind.aR2 = 1e-3;
  ind.bR2 = 1.0;
  return ind;
}

IndicatorSet random_indicators(RngStream& rng)
{
  auto pair = [&](double lo, double hi) {
    double a = rng.uniform(lo, hi), b = rng.uniform(lo, hi);
    return std::make_pair(std::min(a, b), std::max(a, b));
  };
  IndicatorSet ind;
  std::tie(ind.aE0, ind.bE0) = pair(0.01, 3.0);
  std::tie(ind.aE1, ind.bE1) = pair(0.0, 2.0);
  std::tie(ind.aE2, ind.bE2) = pair(0.0, 2.0);
  std::tie(ind.aR1, ind.bR1) = pair(0.01, 3.0);
  std::tie(ind.aR2, ind.bR2) = pair(0.001, 3.0);
  return ind;
}

Vector pencil_eigs(const BlockTridiagonalSystem& sys, const SchurChain& chain)
{
  Matrix p = Matrix::Zero(sys.size(), sys.size());
  for (Index k = 0; k <= sys.N(); ++k)
    p.block(sys.offset(k), sys.offset(k), sys.block_size(k), sys.block_size(k)) = chain.complement(k).dense();
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(sys.dense().dense(), p, Eigen::EigenvaluesOnly);
  return ges.eigenvalues();
}

// S^_k = D S~_k D with D a random diagonal near the identity.
SchurChain diag_scaled_inexact(RngStream& rng, const BlockTridiagonalSystem& sys, double spread)
{
  return approximate_schur_chain(sys, [&](Index, const SymMatrix& t) {
    const Index n = t.size();
    Vector d = Vector::Ones(n) + spread * (rng.uniform_vector(n) - 0.5 * Vector::Ones(n));
    return SymMatrix(d.asDiagonal() * t.dense() * d.asDiagonal());
  });
}

} // namespace

TEST_CASE("lambda_pm examples")
{
  auto [m1, p1] = lambda_pm(1, 0, 1);
  CHECK_THAT(m1, WithinAbs(-0.618034, 1e-6));
  CHECK_THAT(p1, WithinAbs(1.618034, 1e-6));
  auto [m2, p2] = lambda_pm(1, 1, 1);
  CHECK_THAT(m2, WithinAbs(-std::sqrt(2.0), 1e-15));
  CHECK_THAT(p2, WithinAbs(std::sqrt(2.0), 1e-15));

  RngStream rng(61);
  for (int trial = 0; trial < 1000; ++trial) {
    const double e0 = rng.uniform(0, 5), e1 = rng.uniform(0, 5), r1 = rng.uniform(1e-3, 5);
    auto [m, p] = lambda_pm(e0, e1, r1);
    REQUIRE(m < 0.0);
    REQUIRE(p > 0.0);
    const double scale = std::max({1.0, e0 * e0, e1 * e1, r1});
    REQUIRE(std::abs(p_eval(m, e0, e1, r1)) <= 1e-12 * scale);
    REQUIRE(std::abs(p_eval(p, e0, e1, r1)) <= 1e-12 * scale);
  }
}

TEST_CASE("saddle_intervals examples")
{
  IndicatorSet a;
  a.aE0 = a.bE0 = 1;
  a.aE1 = a.bE1 = 0;
  a.aR1 = a.bR1 = 1;
  auto i = saddle_intervals(a);
  CHECK_THAT(i.neg_lo, WithinAbs(-0.618034, 1e-6));
  CHECK_THAT(i.neg_hi, WithinAbs(-0.618034, 1e-6));
  CHECK(i.pos_lo == 1.0);
  CHECK_THAT(i.pos_hi, WithinAbs(1.618034, 1e-6));

  IndicatorSet ones;
  ones.aE0 = ones.bE0 = ones.aE1 = ones.bE1 = ones.aR1 = ones.bR1 = 1;
  auto j = saddle_intervals(ones);
  CHECK_THAT(j.neg_lo, WithinAbs(-std::sqrt(2.0), 1e-15));
  CHECK_THAT(j.neg_hi, WithinAbs(-std::sqrt(2.0), 1e-15));
  CHECK(j.pos_lo == 1.0);
  CHECK_THAT(j.pos_hi, WithinAbs(std::sqrt(2.0), 1e-15));
}

TEST_CASE("saddle_intervals contain the spectrum of random two-block systems")
{
  RngStream rng(62);
  for (int trial = 0; trial < 50; ++trial) {
    auto sys = random_system(rng, 2, 10 + static_cast<Index>(rng.uniform() * 40));
    auto approx = diag_scaled_inexact(rng, sys, 0.5);
    IndicatorSet ind;
    auto e0 = gen_eig_extremes(sys.A_dense(0), approx.complement(0));
    auto e1 = gen_eig_extremes(sys.A_dense(1), approx.complement(1));
    Matrix w = approx.factor(0).solve_lower(Matrix(sys.B_dense(1).transpose()));
    auto r1 = gen_eig_extremes(SymMatrix(w.transpose() * w), approx.complement(1));
    ind.aE0 = e0.min, ind.bE0 = e0.max;
    ind.aE1 = std::max(0.0, e1.min), ind.bE1 = e1.max;
    ind.aR1 = r1.min, ind.bR1 = r1.max;
    auto iv = saddle_intervals(ind);
    Vector ev = pencil_eigs(sys, approx);
    const double tol = 1e-9 * ev.cwiseAbs().maxCoeff();
    for (double v : ev)
      REQUIRE(iv.contains(v, tol));
  }
}

TEST_CASE("pi_roots examples")
{
  auto r = pi_roots(1, 0, 0, 1, 1);
  auto p3 = zeros_P(3);
  CHECK_FALSE(r.degenerate);
  CHECK_THAT(r.mu_a, WithinAbs(p3[2], 1e-13));
  CHECK_THAT(r.mu_b, WithinAbs(p3[1], 1e-13));
  CHECK_THAT(r.mu_c, WithinAbs(p3[0], 1e-13));
  CHECK_THAT(r.mu_a, WithinAbs(-1.2470, 1e-4));
  CHECK_THAT(r.mu_b, WithinAbs(0.4450, 1e-4));
  CHECK_THAT(r.mu_c, WithinAbs(1.8019, 1e-4));
}

TEST_CASE("pi_roots ordering, trace identity, residuals and companion oracle")
{
  RngStream rng(63);
  for (int trial = 0; trial < 2000; ++trial) {
    const double e0 = rng.uniform(1e-3, 5), e1 = rng.uniform(0, 5), e2 = rng.uniform(0, 5);
    const double r1 = rng.uniform(1e-3, 5), r2 = rng.uniform(1e-6, 5);
    auto r = pi_roots(e0, e1, e2, r1, r2);
    auto [lm, lp] = lambda_pm(e0, e1, r1);
    REQUIRE(r.mu_a < lm);
    REQUIRE(lm < 0.0);
    REQUIRE(0.0 < r.mu_b);
    REQUIRE(r.mu_b < lp);
    REQUIRE(lp < r.mu_c);
    REQUIRE_THAT(r.mu_a + r.mu_b + r.mu_c, WithinAbs(e0 - e1 + e2, 1e-11 * std::max(1.0, e0 + e1 + e2)));
    const double coef = std::max({1.0, e0 + e1 + e2, r1 + e0 * e1 + e2 * (e0 + e1) + r2,
                                  e2 * (r1 + e0 * e1) + e0 * r2});
    for (double mu : {r.mu_a, r.mu_b, r.mu_c}) {
      const double s = std::max(1.0, std::pow(std::abs(mu), 3)) * coef;
      REQUIRE(std::abs(pi_eval(mu, e0, e1, e2, r1, r2)) <= 1e-12 * s);
    }
    auto c = companion_roots(e0, e1, e2, r1, r2);
    REQUIRE_THAT(r.mu_a, WithinAbs(c[0], 1e-8 * std::max(1.0, std::abs(c[0]))));
    REQUIRE_THAT(r.mu_b, WithinAbs(c[1], 1e-8 * std::max(1.0, std::abs(c[1]))));
    REQUIRE_THAT(r.mu_c, WithinAbs(c[2], 1e-8 * std::max(1.0, std::abs(c[2]))));
  }
}

TEST_CASE("pi_roots degenerate limit")
{
  const double e0 = 1.3, e1 = 0.2, e2 = 0.4, r1 = 0.7;
  auto [lm, lp] = lambda_pm(e0, e1, r1);
  auto near = pi_roots(e0, e1, e2, r1, 1e-10);
  CHECK_FALSE(near.degenerate);
  CHECK_THAT(near.mu_a, WithinAbs(lm, 1e-8));
  CHECK_THAT(near.mu_b, WithinAbs(e2, 1e-8));
  CHECK_THAT(near.mu_c, WithinAbs(lp, 1e-8));

  auto limit = pi_roots(e0, e1, e2, r1, 0.0);
  CHECK(limit.degenerate);
  CHECK(limit.mu_a == lm);
  CHECK(limit.mu_b == e2);
  CHECK(limit.mu_c == lp);
}

TEST_CASE("dsp_bounds on the comparison instance")
{
  auto b = dsp_bounds(worked_instance());
  CHECK(b.pos_lo == 0.01);
  CHECK_THAT(b.bradley_pos_lo, WithinRel(5e-6, 0.2));
  CHECK(b.pos_lo > b.bradley_pos_lo);
  CHECK(b.neg_hi <= b.bradley_neg_hi + 1e-12);
}

TEST_CASE("dsp_bounds with exact indicators and zero A_1, A_2")
{
  // R_1 R_1^T = I exactly and R_2 R_2^T = I: every indicator of an exact chain.
  IndicatorSet ind;
  ind.aE0 = ind.bE0 = 1;
  ind.aR1 = ind.bR1 = ind.aR2 = ind.bR2 = 1;
  auto b = dsp_bounds(ind);
  auto i3 = interval_I(3);
  CHECK_THAT(b.neg_lo, WithinAbs(-1.2470, 1e-4));
  CHECK_THAT(b.neg_hi, WithinAbs(-0.6180, 1e-4));
  CHECK_THAT(b.pos_lo, WithinAbs(0.4450, 1e-4));
  CHECK_THAT(b.pos_hi, WithinAbs(1.8019, 1e-4));
  CHECK(b.neg_lo >= i3.neg_lo - 1e-9);
  CHECK(b.neg_hi <= i3.neg_hi + 1e-9);
  CHECK(b.pos_lo >= i3.pos_lo - 1e-9);
  CHECK(b.pos_hi <= i3.pos_hi + 1e-9);
}

TEST_CASE("dsp_bounds against the earlier comparison values")
{
  RngStream rng(64);
  for (int trial = 0; trial < 5000; ++trial) {
    auto ind = random_indicators(rng);
    auto b = dsp_bounds(ind);
    REQUIRE(b.neg_lo <= b.neg_hi);
    REQUIRE(b.neg_hi < 0.0);
    REQUIRE(0.0 < b.pos_lo);
    REQUIRE(b.pos_lo <= b.pos_hi);
    // both refinements are at least as tight
    REQUIRE(b.neg_hi <= b.bradley_neg_hi + 1e-12);
    REQUIRE(b.pos_lo >= b.bradley_pos_lo - 1e-12);
  }
}

TEST_CASE("dsp_bounds rejects invalid indicators")
{
  IndicatorSet ind;
  ind.aE0 = 0.0;
  CHECK_THROWS_AS(dsp_bounds(ind), InvalidArgument);
  IndicatorSet swapped;
  swapped.aR1 = 2.0;
  swapped.bR1 = 1.0;
  CHECK_THROWS_AS(dsp_bounds(swapped), InvalidArgument);
}

TEST_CASE("compute_indicators examples")
{
  RngStream rng(65);
  auto sys0 = random_system(rng, 3, 25, true);
  auto exact = exact_schur_chain(sys0);
  auto ind = compute_indicators(sys0, exact);
  CHECK(ind.bR1 <= 1.0 + 1e-10);
  CHECK(ind.bR2 <= 1.0 + 1e-10);
  CHECK(ind.aE1 == 0.0);
  CHECK(ind.bE2 == 0.0);
  CHECK_THAT(ind.aE0, WithinAbs(1.0, 1e-10));

  // S^ = S~: R_i R_i^T has the extremes of the pencil (S~_i - A_i, S~_i).
  auto sys = random_system(rng, 3, 25);
  auto approx = diag_scaled_inexact(rng, sys, 0.4);
  auto on_tilde = approximate_schur_chain(sys, [&](Index k, const SymMatrix& t) {
    return k == 0 ? approx.complement(0) : t;
  });
  auto ind2 = compute_indicators(sys, on_tilde);
  auto t1 = perturbed_schur_chain(sys, on_tilde);
  for (Index i = 1; i <= 2; ++i) {
    auto ref = gen_eig_extremes(t1.complement(i) - sys.A_dense(i), t1.complement(i));
    CHECK_THAT(i == 1 ? ind2.aR1 : ind2.aR2, WithinAbs(ref.min, 1e-10));
    CHECK_THAT(i == 1 ? ind2.bR1 : ind2.bR2, WithinAbs(ref.max, 1e-10));
  }

  CHECK_THROWS_AS(compute_indicators(random_system(rng, 2, 5), exact_schur_chain(random_system(rng, 2, 5))),
                  WrongBlockCount);
}

TEST_CASE("compute_indicators on a diagonal instance with prescribed spectra")
{
  // A_0 = diag(a), B_1 = I, B_2 = I, A_1 = A_2 = 0, S^_0 = diag(a / e0).
  // Then E_0 = diag(e0), S~_1 = diag(e0 / a), S^_1 = diag(e0 / a / r1) gives
  // R_1 R_1^T = diag(r1), and likewise R_2 R_2^T = diag(r2).
  const Index n = 6;
  Vector a(n), e0(n), r1(n), r2(n);
  a << 1, 2, 3, 4, 5, 6;
  e0 << 0.3, 0.5, 0.7, 0.9, 1.1, 1.3;
  r1 << 0.2, 0.4, 0.6, 0.8, 1.0, 1.2;
  r2 << 1.5, 1.4, 1.3, 1.2, 1.1, 1.0;
  Matrix id = Matrix::Identity(n, n);
  auto sys = assemble({SymMatrix::diagonal(a), SymMatrix::zero(n), SymMatrix::zero(n)}, {id, id});
  Vector s0 = a.cwiseQuotient(e0);
  Vector s1 = s0.cwiseInverse().cwiseQuotient(r1);
  Vector s2 = s1.cwiseInverse().cwiseQuotient(r2);
  SchurChain chain({SymMatrix::diagonal(s0), SymMatrix::diagonal(s1), SymMatrix::diagonal(s2)},
                   SchurChain::Kind::approximate);
  auto ind = compute_indicators(sys, chain);
  CHECK_THAT(ind.aE0, WithinAbs(0.3, 1e-10));
  CHECK_THAT(ind.bE0, WithinAbs(1.3, 1e-10));
  CHECK_THAT(ind.aR1, WithinAbs(0.2, 1e-10));
  CHECK_THAT(ind.bR1, WithinAbs(1.2, 1e-10));
  CHECK_THAT(ind.aR2, WithinAbs(1.0, 1e-10));
  CHECK_THAT(ind.bR2, WithinAbs(1.5, 1e-10));
}

TEST_CASE("dsp_bounds contain the spectrum of random inexact three-block systems")
{
  RngStream rng(66);
  for (int trial = 0; trial < 60; ++trial) {
    auto sys = random_system(rng, 3, 10 + static_cast<Index>(rng.uniform() * 50), trial % 2 == 0);
    auto approx = diag_scaled_inexact(rng, sys, 0.6 * rng.uniform());
    auto b = dsp_bounds(compute_indicators(sys, approx));
    Vector ev = preconditioned_eigenvalues(sys, approx);
    const double tol = 1e-8 * ev.cwiseAbs().maxCoeff();
    for (double v : ev)
      REQUIRE(b.interval().contains(v, tol));
  }
}

TEST_CASE("exactly preconditioned zero-diagonal systems stay inside the three-block hull")
{
  RngStream rng(67);
  auto i3 = interval_I(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto sys = random_system(rng, 3, 30, true);
    auto b = dsp_bounds(compute_indicators(sys, exact_schur_chain(sys)));
    REQUIRE(b.neg_lo >= i3.neg_lo - 1e-9);
    REQUIRE(b.neg_hi <= i3.neg_hi + 1e-9);
    REQUIRE(b.pos_lo >= i3.pos_lo - 1e-9);
    REQUIRE(b.pos_hi <= i3.pos_hi + 1e-9);
  }
}
