#include "catch_amalgamated.hpp"

#include "msp/pdeco/experiment.hpp"
#include "msp/saddle/schur_chain.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace msp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Matrix dense(const SparseMatrix& s) { return Matrix(s); }

Vector linear(const FemMatrices& f, double a, double b, double c)
{
  return interpolate(f, [=](double x, double y) { return a * x + b * y + c; });
}

bool on_boundary(const FemMatrices& f, Index p)
{
  const Index n = f.divisions, i = p % (n + 1), j = p / (n + 1);
  return i == 0 || j == 0 || i == n || j == n;
}

Matrix mass_hat(const PdecoPreconditioner& pc)
{
  Matrix inv = pc.mass_inv_operator().to_dense();
  return Matrix(0.5 * (inv + inv.transpose())).inverse();
}

} // namespace

TEST_CASE("FEM matrices: partition of unity and Neumann kernel")
{
  for (Index n : {8, 16, 32}) {
    auto f = assemble_fem(n);
    Vector one = Vector::Ones(f.nodes());
    CHECK(f.nodes() == (n + 1) * (n + 1));
    CHECK_THAT(one.dot(f.M * one), WithinAbs(1.0, 1e-12));
    CHECK_THAT(one.dot(f.Mb * one), WithinAbs(4.0, 1e-12));
    CHECK((f.K * one).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((dense(f.L) - dense(f.K) - dense(f.M)).norm() <= 1e-14 * dense(f.L).norm());
    for (const SparseMatrix* m : {&f.M, &f.K, &f.Mb})
      CHECK((dense(*m) - dense(*m).transpose()).norm() == 0.0);
  }
  CHECK_THROWS_AS(assemble_fem(4), InvalidArgument);
  CHECK_THROWS_AS(assemble_fem(24), InvalidArgument);
}

TEST_CASE("FEM matrices integrate linear functions exactly")
{
  auto f = assemble_fem(8);
  const double a = 0.7, b = -1.3, c = 0.4;
  Vector u = linear(f, a, b, c);
  // int (a x + b y + c)^2 over the unit square
  const double l2 = a * a / 3 + b * b / 3 + c * c + a * b / 2 + a * c + b * c;
  CHECK_THAT(u.dot(f.M * u), WithinAbs(l2, 1e-12));
  CHECK_THAT(u.dot(f.K * u), WithinAbs(a * a + b * b, 1e-12));
  // int over the boundary of x^2: 1/3 + 1/3 + 0 + 1
  Vector x = linear(f, 1, 0, 0);
  CHECK_THAT(x.dot(f.Mb * x), WithinAbs(5.0 / 3.0, 1e-12));
}

TEST_CASE("FEM stiffness is the five-point stencil at interior nodes")
{
  auto f = assemble_fem(16);
  Matrix k = dense(f.K);
  const Index np = 17;
  for (Index j = 1; j < 16; ++j)
    for (Index i = 1; i < 16; ++i) {
      const Index p = j * np + i;
      REQUIRE_THAT(k(p, p), WithinAbs(4.0, 1e-12));
      REQUIRE_THAT(k(p, p + 1), WithinAbs(-1.0, 1e-12));
      REQUIRE_THAT(k(p, p + np), WithinAbs(-1.0, 1e-12));
      REQUIRE_THAT(k(p, p + np + 1), WithinAbs(0.0, 1e-12));
      REQUIRE_THAT(k(p, p + np - 1), WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("FEM definiteness, boundary support and Jacobi spectrum of M")
{
  auto f = assemble_fem(8);
  CHECK(sym_eigvals(SymMatrix(dense(f.M)))(0) > 0.0);
  CHECK(sym_eigvals(SymMatrix(dense(f.L)))(0) > 0.0);
  CHECK(sym_eigvals(SymMatrix(dense(f.K)))(0) > -1e-12);
  CHECK(sym_eigvals(SymMatrix(dense(f.Mb)))(0) > -1e-12);
  for (Index c = 0; c < f.Mb.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(f.Mb, c); it; ++it) {
      REQUIRE(on_boundary(f, it.row()));
      REQUIRE(on_boundary(f, it.col()));
    }
  Vector d = f.M.diagonal().cwiseInverse().cwiseSqrt();
  Vector ev = sym_eigvals(SymMatrix(d.asDiagonal() * dense(f.M) * d.asDiagonal()));
  CHECK(ev(0) >= 0.5 - 1e-12);
  CHECK(ev(ev.size() - 1) <= 2.0 + 1e-12);
}

TEST_CASE("desired_state examples")
{
  auto f = assemble_fem(32);
  CHECK(forward_solve(f, Vector::Zero(f.nodes())).norm() == 0.0);
  Vector y = forward_solve(f, Vector::Constant(f.nodes(), 2.5));
  CHECK((y.array() + 2.5).abs().maxCoeff() <= 1e-10);

  Vector u = interpolate(f, [](double x, double yy) { return 4.0 * x * (1.0 - x) + yy; });
  Vector yh = desired_state(f);
  Vector one = Vector::Ones(f.nodes());
  // discrete mass balance is exact; the continuous integral of u is 7/6
  CHECK_THAT(one.dot(f.M * yh), WithinAbs(-one.dot(f.M * u), 1e-12));
  CHECK_THAT(one.dot(f.M * yh), WithinAbs(-7.0 / 6.0, 4.0 * f.h * f.h));
}

TEST_CASE("assemble_kkt dimensions, blocks and right-hand side")
{
  auto f5 = assemble_fem(32);
  auto kkt = assemble_kkt(f5, 1.0);
  CHECK(kkt.system.size() == 3267);
  CHECK(kkt.system.N() == 2);
  CHECK(kkt.rhs.head(2 * f5.nodes()).norm() == 0.0);
  CHECK((kkt.rhs.tail(f5.nodes()) - f5.Mb * desired_state(f5)).norm() == 0.0);
  CHECK(kkt.system.A(1).nonZeros() == 0);

  auto f6 = assemble_fem(64);
  CHECK(assemble_kkt(f6, 1e-3, Validation::off).system.size() == 12675);
  CHECK_THROWS_AS(assemble_kkt(f5, 0.0), InvalidArgument);
}

TEST_CASE("exact Schur chain of the optimality system")
{
  auto f = assemble_fem(8);
  for (double beta : {1.0, 1e-3}) {
    auto kkt = assemble_kkt(f, beta);
    auto chain = exact_schur_chain(kkt.system);
    Matrix m = dense(f.M), l = dense(f.L);
    Matrix s1 = m / beta;
    Matrix s2 = dense(f.Mb) + beta * l * m.llt().solve(l);
    CHECK((chain.complement(1).dense() - s1).norm() <= 1e-9 * s1.norm());
    CHECK((chain.complement(2).dense() - s2).norm() <= 1e-9 * s2.norm());
  }
}

TEST_CASE("cheb_omega examples")
{
  CHECK_THAT(cheb_omega(1), WithinAbs(0.6, 1e-15));
  CHECK_THAT(cheb_omega(3), WithinAbs(27.0 / 365.0, 1e-15));
  CHECK(cheb_omega(10) < 1e-4);
  for (int m = 1; m < 30; ++m) {
    REQUIRE(cheb_omega(m) > 0.0);
    REQUIRE(cheb_omega(m) < 1.0);
    REQUIRE(cheb_omega(m + 1) < cheb_omega(m));
  }
  CHECK_THROWS_AS(cheb_omega(0), InvalidArgument);
  CHECK(cheb_omega(ChebyshevConfig{4, 1.0, 1.0}) == 0.0);
}

TEST_CASE("cheb_apply: exact on diagonal M with a point interval")
{
  Vector d(5);
  d << 1, 2, 3, 4, 5;
  SparseMatrix m = Matrix(d.asDiagonal()).sparseView();
  Vector r(5);
  r << 1, -1, 2, 0.5, 3;
  for (int steps : {1, 4}) {
    Vector x = cheb_apply(m, ChebyshevConfig{steps, 1.0, 1.0}, r);
    CHECK((x - r.cwiseQuotient(d)).norm() <= 1e-15);
  }
  // on the default interval [1/2, 2] one step is r / (5/4 diag M), not exact
  Vector x1 = cheb_apply(m, ChebyshevConfig{1}, r);
  CHECK((x1 - 0.8 * r.cwiseQuotient(d)).norm() <= 1e-15);
}

TEST_CASE("cheb_apply is a symmetric linear operator")
{
  auto f = assemble_fem(16);
  RngStream rng(71);
  for (int m : {1, 2, 3, 5, 10}) {
    ChebyshevConfig cfg{m};
    Vector u = rng.normal_vector(f.nodes()), v = rng.normal_vector(f.nodes());
    Vector mu = cheb_apply(f.M, cfg, u), mv = cheb_apply(f.M, cfg, v);
    CHECK_THAT(mu.dot(v), WithinAbs(u.dot(mv), 1e-11 * std::abs(u.dot(mv)) + 1e-11));
    CHECK((cheb_apply(f.M, cfg, Vector(3.5 * u)) - 3.5 * mu).norm() <= 1e-12 * mu.norm());
    CHECK((cheb_apply(f.M, cfg, Vector(u + v)) - mu - mv).norm() <= 1e-12 * (mu + mv).norm());
  }
}

TEST_CASE("cheb_apply spectrum of Mhat^{-1} M lies in [1 - omega, 1 + omega]")
{
  auto f = assemble_fem(16);
  Matrix m = dense(f.M);
  for (int steps = 1; steps <= 10; ++steps) {
    PdecoPreconditioner pc(f, 1.0, ChebyshevConfig{steps});
    Matrix inv = pc.mass_inv_operator().to_dense();
    inv = 0.5 * (inv + inv.transpose()).eval();
    // eigenvalues of (M, Mhat) = eigenvalues of Mhat^{-1} M
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(m, inv, Eigen::EigenvaluesOnly | Eigen::ABx_lx);
    const double w = cheb_omega(steps);
    INFO("steps = " << steps);
    CHECK(ges.eigenvalues()(0) >= 1.0 - w - 1e-10);
    CHECK(ges.eigenvalues()(m.rows() - 1) <= 1.0 + w + 1e-10);
  }
}

TEST_CASE("PdecoPreconditioner blocks")
{
  auto f = assemble_fem(8);
  RngStream rng(72);
  PdecoPreconditioner pc(f, 0.01, ChebyshevConfig{3});
  Vector v = rng.normal_vector(f.nodes());
  CHECK((pc.s2(pc.s2_inv(v)) - v).norm() <= 1e-10 * v.norm());

  Vector z = rng.normal_vector(3 * f.nodes());
  Vector pz = pc.apply_inv(z);
  const Index n = f.nodes();
  CHECK((pz.head(n) - pc.mass_inv(z.head(n)) / 0.01).norm() <= 1e-12 * pz.norm());
  CHECK((pz.segment(n, n) - 0.01 * pc.mass_inv(z.segment(n, n))).norm() <= 1e-12 * pz.norm());
  CHECK_THROWS_AS(pc.apply_inv(v), ShapeMismatch);
}

TEST_CASE("pdeco_indicators agree with dense indicators")
{
  auto f = assemble_fem(16);
  for (double beta : {1.0, 1e-3}) {
    for (int steps : {1, 3}) {
      ChebyshevConfig cfg{steps};
      PdecoPreconditioner pc(f, beta, cfg);
      auto ind = pdeco_indicators(f, pc, cfg);
      auto kkt = assemble_kkt(f, beta);
      Matrix mh = mass_hat(pc);
      Matrix m = dense(f.M), l = dense(f.L);
      SchurChain chain({SymMatrix(beta * mh), SymMatrix(mh / beta), SymMatrix(beta * l * m.llt().solve(l))},
                       SchurChain::Kind::approximate);
      auto ref = compute_indicators(kkt.system, chain);
      INFO("beta = " << beta << ", steps = " << steps);
      // the closed-form indicators bracket the dense ones; the dense R_2
      // goes through a Schur complement with condition number ~ 1/beta
      const double tol = 1e-10 / beta;
      CHECK(ref.aE0 >= ind.aE0 - tol);
      CHECK(ref.bE0 <= ind.bE0 + tol);
      CHECK(ref.aR1 >= ind.aR1 - tol);
      CHECK(ref.bR1 <= ind.bR1 + tol);
      CHECK(ref.aR2 >= ind.aR2 - tol);
      CHECK(ref.bR2 <= ind.bR2 + tol);
      CHECK(ref.bE1 == 0.0);
      CHECK_THAT(ref.aE2, WithinAbs(0.0, 1e-10));
      CHECK_THAT(ind.bE2, WithinRel(ref.bE2, 1e-8));
    }
  }
}

TEST_CASE("pdeco bounds at h = 2^-6")
{
  auto f = assemble_fem(64);
  struct Row
  {
    double beta;
    int cheb;
    double neg_lo, neg_hi, pos_lo, pos_hi;
  };
  const Row rows[] = {
      {1.0, 1, -1.9288, -0.0944, 0.0537, 4.4527},  {1.0, 3, -1.3239, -0.5335, 0.3751, 4.2769},
      {1.0, 5, -1.2554, -0.6084, 0.4370, 4.2582},  {1.0, 10, -1.2470, -0.6180, 0.4450, 4.2559},
      {1e-3, 5, -1.2554, -0.6084, 0.4370, 4002.7},
  };
  for (const auto& r : rows) {
    auto b = dsp_bounds(pdeco_indicators(f, r.beta, ChebyshevConfig{r.cheb}));
    INFO("beta = " << r.beta << ", cheb = " << r.cheb);
    CHECK_THAT(b.neg_lo, WithinRel(r.neg_lo, 1e-3));
    CHECK_THAT(b.neg_hi, WithinRel(r.neg_hi, 1e-3));
    CHECK_THAT(b.pos_lo, WithinRel(r.pos_lo, 1e-3));
    CHECK_THAT(b.pos_hi, WithinRel(r.pos_hi, 1e-3));
  }
}

TEST_CASE("run_pdeco at h = 2^-5: iterations, dense spectrum and containment")
{
  PdecoOptions o;
  o.level = 5;
  o.beta = 1.0;
  o.cheb.steps = 3;
  auto r = run_pdeco(o);
  CHECK(r.minres_converged);
  CHECK(r.minres_iterations >= 26);
  CHECK(r.minres_iterations <= 36);
  CHECK(r.extra("true_relative_residual") <= 1e-10);
  CHECK(r.extra("spectrum_dense") == 1.0);
  CHECK(r.violations.empty());
  CHECK_THAT(r.computed.neg_lo, WithinRel(-1.3065, 1e-2));
  CHECK_THAT(r.computed.pos_lo, WithinRel(0.4294, 1e-2));
  CHECK_THAT(r.computed.pos_hi, WithinRel(4.2769, 1e-2));
}
