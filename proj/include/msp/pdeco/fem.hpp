#ifndef MSP_PDECO_FEM_HPP
#define MSP_PDECO_FEM_HPP

#include "msp/core/errors.hpp"
#include "msp/core/types.hpp"

#include <Eigen/SparseCholesky>

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace msp {

/// P1 matrices on the unit square. Nodes are numbered j (n + 1) + i for the
/// point (i h, j h), n = 1 / h.
struct FemMatrices
{
  SparseMatrix M;  ///< mass
  SparseMatrix K;  ///< stiffness
  SparseMatrix L;  ///< K + M
  SparseMatrix Mb; ///< boundary mass
  double h = 0.0;
  Index divisions = 0;

  Index nodes() const { return (divisions + 1) * (divisions + 1); }
  double x(Index node) const { return h * static_cast<double>(node % (divisions + 1)); }
  double y(Index node) const { return h * static_cast<double>(node / (divisions + 1)); }
};

/// Uniform mesh of 2 n^2 right triangles, every cell split along its
/// (+1, +1) diagonal. `divisions` = 1 / h must be a power of two in [8, 128].
inline FemMatrices assemble_fem(Index divisions)
{
  if (divisions < 8 || divisions > 128 || (divisions & (divisions - 1)) != 0)
    throw InvalidArgument("assemble_fem: 1/h must be a power of two in [8, 128], got " +
                          std::to_string(divisions));
  const Index n = divisions;
  const Index np = n + 1;
  const double h = 1.0 / static_cast<double>(n);
  const double area = 0.5 * h * h;
  const auto id = [np](Index i, Index j) { return j * np + i; };

  using Trip = Eigen::Triplet<double>;
  std::vector<Trip> m, k, mb;
  m.reserve(18 * n * n);
  k.reserve(18 * n * n);

  auto element = [&](const std::array<Index, 3>& v, const std::array<std::array<double, 2>, 3>& p) {
    // gradients of the barycentric coordinates: (y_{b} - y_{c}, x_{c} - x_{b}) / (2 area)
    double g[3][2];
    for (int a = 0; a < 3; ++a) {
      const auto& pb = p[(a + 1) % 3];
      const auto& pc = p[(a + 2) % 3];
      g[a][0] = (pb[1] - pc[1]) / (2.0 * area);
      g[a][1] = (pc[0] - pb[0]) / (2.0 * area);
    }
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        m.emplace_back(v[a], v[b], area / 12.0 * (a == b ? 2.0 : 1.0));
        k.emplace_back(v[a], v[b], area * (g[a][0] * g[b][0] + g[a][1] * g[b][1]));
      }
  };

  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const double x0 = h * i, y0 = h * j, x1 = h * (i + 1), y1 = h * (j + 1);
      element({id(i, j), id(i + 1, j), id(i + 1, j + 1)}, {{{x0, y0}, {x1, y0}, {x1, y1}}});
      element({id(i, j), id(i + 1, j + 1), id(i, j + 1)}, {{{x0, y0}, {x1, y1}, {x0, y1}}});
    }

  auto edge = [&](Index a, Index b) {
    mb.emplace_back(a, a, h / 3.0);
    mb.emplace_back(b, b, h / 3.0);
    mb.emplace_back(a, b, h / 6.0);
    mb.emplace_back(b, a, h / 6.0);
  };
  for (Index t = 0; t < n; ++t) {
    edge(id(t, 0), id(t + 1, 0));
    edge(id(t, n), id(t + 1, n));
    edge(id(0, t), id(0, t + 1));
    edge(id(n, t), id(n, t + 1));
  }

  FemMatrices f;
  f.h = h;
  f.divisions = n;
  const Index nn = np * np;
  f.M.resize(nn, nn);
  f.K.resize(nn, nn);
  f.Mb.resize(nn, nn);
  f.M.setFromTriplets(m.begin(), m.end());
  f.K.setFromTriplets(k.begin(), k.end());
  f.Mb.setFromTriplets(mb.begin(), mb.end());
  f.L = f.K + f.M;
  f.M.makeCompressed();
  f.K.makeCompressed();
  f.Mb.makeCompressed();
  f.L.makeCompressed();
  return f;
}

/// Nodal interpolant of a control u(x, y).
template <class F>
Vector interpolate(const FemMatrices& fem, F u)
{
  Vector v(fem.nodes());
  for (Index p = 0; p < fem.nodes(); ++p)
    v(p) = u(fem.x(p), fem.y(p));
  return v;
}

/// State y for the control u: L y = -M u, the weak form of
/// -lap y + y + u = 0 with homogeneous Neumann data.
inline Vector forward_solve(const FemMatrices& fem, const Vector& control)
{
  Eigen::SimplicialLLT<SparseMatrix> llt(fem.L);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("forward_solve: L is not positive definite", 0, 0);
  return llt.solve(Vector(-(fem.M * control)));
}

/// Desired state: the state generated by the control 4 x (1 - x) + y.
inline Vector desired_state(const FemMatrices& fem)
{
  return forward_solve(fem, interpolate(fem, [](double x, double y) { return 4.0 * x * (1.0 - x) + y; }));
}

} // namespace msp

#endif
