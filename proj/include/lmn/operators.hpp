#pragma once

#include <stdexcept>

#include "lmn/field.hpp"

namespace lmn {

// Discrete first derivatives: second-order centered in the interior with
// first-order one-sided closures at the boundary. Together with trapezoid
// weights this pair satisfies summation-by-parts, so discrete integrals of
// divergences reduce to boundary fluxes exactly.
template <class T>
FieldT<T> dx_sbp(const FieldT<T>& f) {
  const Grid& g = f.grid;
  FieldT<T> out(g);
  const double ih = 1.0 / g.hx, ih2 = 0.5 / g.hx;
  for (int j = 0; j < g.npy(); ++j) {
    out.at(0, j) = (f.at(1, j) - f.at(0, j)) * ih;
    for (int i = 1; i < g.nx; ++i) out.at(i, j) = (f.at(i + 1, j) - f.at(i - 1, j)) * ih2;
    out.at(g.nx, j) = (f.at(g.nx, j) - f.at(g.nx - 1, j)) * ih;
  }
  return out;
}

template <class T>
FieldT<T> dy_sbp(const FieldT<T>& f) {
  const Grid& g = f.grid;
  FieldT<T> out(g);
  if (g.is1d()) return out;
  const double ih = 1.0 / g.hy, ih2 = 0.5 / g.hy;
  for (int i = 0; i < g.npx(); ++i) {
    out.at(i, 0) = (f.at(i, 1) - f.at(i, 0)) * ih;
    out.at(i, g.ny) = (f.at(i, g.ny) - f.at(i, g.ny - 1)) * ih;
  }
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.npx(); ++i) out.at(i, j) = (f.at(i, j + 1) - f.at(i, j - 1)) * ih2;
  return out;
}

template <class T>
VectorFieldT<T> gradient_sbp(const FieldT<T>& f) {
  VectorFieldT<T> out(f.grid);
  out.x = dx_sbp(f);
  out.y = dy_sbp(f);
  return out;
}

template <class T>
FieldT<T> divergence_sbp(const VectorFieldT<T>& v) {
  FieldT<T> out = dx_sbp(v.x);
  if (!v.grid().is1d()) out += dy_sbp(v.y);
  return out;
}

// 2D scalar curl: dx(vy) - dy(vx)
template <class T>
FieldT<T> curl_sbp(const VectorFieldT<T>& v) {
  if (v.grid().is1d()) throw std::invalid_argument("curl: 2D fields only");
  FieldT<T> out = dx_sbp(v.y);
  out -= dy_sbp(v.x);
  return out;
}

enum class GhostKind { mirror, odd };

// Five-point Laplacian. Ghost nodes reflect the interior (mirror -> Neumann)
// or negate it about the boundary value (odd -> Dirichlet). The mirror variant
// is exactly diagonalized by the sampled cosine modes.
template <class T>
FieldT<T> laplacian(const FieldT<T>& f, GhostKind ghost = GhostKind::mirror) {
  const Grid& g = f.grid;
  FieldT<T> out(g);
  const double ax = 1.0 / (g.hx * g.hx);
  const double ay = g.is1d() ? 0.0 : 1.0 / (g.hy * g.hy);
  // ghost value one node past the boundary: mirror f(-1)=f(1) (Neumann),
  // odd f(-1)=2 f(0)-f(1) (Dirichlet about the boundary value)
  auto ghosted = [&](int i, int j) -> T {
    int im = i, jm = j;           // mirrored index
    int ib = i, jb = j;           // boundary node
    if (i < 0) { im = -i; ib = 0; }
    if (i > g.nx) { im = 2 * g.nx - i; ib = g.nx; }
    if (!g.is1d()) {
      if (j < 0) { jm = -j; jb = 0; }
      if (j > g.ny) { jm = 2 * g.ny - j; jb = g.ny; }
    }
    if (ghost == GhostKind::mirror) return f.at(im, jm);
    return 2.0 * f.at(ib, jb) - f.at(im, jm);
  };
  for (int j = 0; j < g.npy(); ++j)
    for (int i = 0; i < g.npx(); ++i) {
      T c = f.at(i, j);
      T xm = (i == 0) ? ghosted(-1, j) : f.at(i - 1, j);
      T xp = (i == g.nx) ? ghosted(g.nx + 1, j) : f.at(i + 1, j);
      T sx = xm + xp - 2.0 * c;
      T sy{};
      if (!g.is1d()) {
        T ym = (j == 0) ? ghosted(i, -1) : f.at(i, j - 1);
        T yp = (j == g.ny) ? ghosted(i, g.ny + 1) : f.at(i, j + 1);
        sy = ym + yp - 2.0 * c;
      }
      out.at(i, j) = ax * sx + ay * sy;
    }
  return out;
}

template <class T>
VectorFieldT<T> laplacian(const VectorFieldT<T>& v, GhostKind ghost = GhostKind::mirror) {
  VectorFieldT<T> out(v.grid());
  out.x = laplacian(v.x, ghost);
  if (!v.grid().is1d()) out.y = laplacian(v.y, ghost);
  return out;
}

// u . grad f with centered/SBP first derivatives
inline ScalarField advect(const VectorField& u, const ScalarField& f) {
  ScalarField fx = dx_sbp(f);
  ScalarField out = f.grid.is1d() ? ScalarField(f.grid) : dy_sbp(f);
  const Grid& g = f.grid;
  for (long k = 0; k < out.size(); ++k)
    out.v[k] = u.x.v[k] * fx.v[k] + (g.is1d() ? 0.0 : u.y.v[k] * out.v[k]);
  return out;
}

// Fourth-difference smoothing used as a mild convection filter. Applied only
// at nodes two or more cells away from the boundary; strength sigma scales the
// (1,-4,6,-4,1)/16 stencil.
inline ScalarField fourth_difference_filter(const ScalarField& f, double sigma) {
  const Grid& g = f.grid;
  ScalarField out = f;
  if (sigma == 0) return out;
  for (int j = 0; j < g.npy(); ++j)
    for (int i = 2; i <= g.nx - 2; ++i) {
      double d4 = f.at(i - 2, j) - 4 * f.at(i - 1, j) + 6 * f.at(i, j) - 4 * f.at(i + 1, j) +
                  f.at(i + 2, j);
      out.at(i, j) -= sigma * d4 / 16.0;
    }
  if (!g.is1d()) {
    ScalarField tmp = out;
    for (int j = 2; j <= g.ny - 2; ++j)
      for (int i = 0; i < g.npx(); ++i) {
        double d4 = tmp.at(i, j - 2) - 4 * tmp.at(i, j - 1) + 6 * tmp.at(i, j) -
                    4 * tmp.at(i, j + 1) + tmp.at(i, j + 2);
        out.at(i, j) -= sigma * d4 / 16.0;
      }
  }
  return out;
}

inline void zero_boundary(ScalarField& f) {
  const Grid& g = f.grid;
  for (int j = 0; j < g.npy(); ++j)
    for (int i = 0; i < g.npx(); ++i)
      if (g.on_boundary(i, j)) f.at(i, j) = 0.0;
}

inline void zero_boundary(VectorField& v) {
  zero_boundary(v.x);
  if (!v.grid().is1d()) zero_boundary(v.y);
}

}  // namespace lmn
