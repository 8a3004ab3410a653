#pragma once

#include <algorithm>
#include <complex>
#include <functional>
#include <vector>

#include "lmn/domain.hpp"

namespace lmn {

// Node-sampled field with value type T. Layout is x-fastest: v[i + npx*j].
template <class T>
struct FieldT {
  Grid grid;
  std::vector<T> v;

  FieldT() = default;
  explicit FieldT(const Grid& g, T fill = T{}) : grid(g), v(g.size(), fill) {}

  T& at(int i, int j) { return v[i + long(grid.npx()) * j]; }
  const T& at(int i, int j) const { return v[i + long(grid.npx()) * j]; }
  long size() const { return long(v.size()); }

  template <class F>
  static FieldT sample(const Grid& g, F&& fn) {
    FieldT out(g);
    for (int j = 0; j < g.npy(); ++j)
      for (int i = 0; i < g.npx(); ++i) out.at(i, j) = fn(g.x(i), g.y(j));
    return out;
  }

  FieldT& operator+=(const FieldT& o) {
    for (long k = 0; k < size(); ++k) v[k] += o.v[k];
    return *this;
  }
  FieldT& operator-=(const FieldT& o) {
    for (long k = 0; k < size(); ++k) v[k] -= o.v[k];
    return *this;
  }
  FieldT& operator*=(T s) {
    for (auto& x : v) x *= s;
    return *this;
  }
  friend FieldT operator+(FieldT a, const FieldT& b) { return a += b; }
  friend FieldT operator-(FieldT a, const FieldT& b) { return a -= b; }
  friend FieldT operator*(T s, FieldT a) { return a *= s; }
};

using ScalarField = FieldT<double>;
using ComplexField = FieldT<std::complex<double>>;

// Two-component vector field; the y component is kept zero on slab grids.
template <class T>
struct VectorFieldT {
  FieldT<T> x, y;

  VectorFieldT() = default;
  explicit VectorFieldT(const Grid& g) : x(g), y(g) {}
  const Grid& grid() const { return x.grid; }

  template <class FX, class FY>
  static VectorFieldT sample(const Grid& g, FX&& fx, FY&& fy) {
    VectorFieldT out(g);
    out.x = FieldT<T>::sample(g, fx);
    if (!g.is1d()) out.y = FieldT<T>::sample(g, fy);
    return out;
  }

  VectorFieldT& operator+=(const VectorFieldT& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  VectorFieldT& operator-=(const VectorFieldT& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  VectorFieldT& operator*=(T s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend VectorFieldT operator+(VectorFieldT a, const VectorFieldT& b) { return a += b; }
  friend VectorFieldT operator-(VectorFieldT a, const VectorFieldT& b) { return a -= b; }
  friend VectorFieldT operator*(T s, VectorFieldT a) { return a *= s; }
};

using VectorField = VectorFieldT<double>;
using ComplexVectorField = VectorFieldT<std::complex<double>>;

// Director field: three real components over a 1D/2D domain (d in R^3).
struct DirectorField {
  ScalarField c1, c2, c3;

  DirectorField() = default;
  explicit DirectorField(const Grid& g) : c1(g), c2(g), c3(g) {}
  const Grid& grid() const { return c1.grid; }

  ScalarField& comp(int k) { return k == 0 ? c1 : (k == 1 ? c2 : c3); }
  const ScalarField& comp(int k) const { return k == 0 ? c1 : (k == 1 ? c2 : c3); }

  template <class F>
  static DirectorField sample(const Grid& g, F&& fn) {
    // fn(x,y) -> std::array<double,3>
    DirectorField out(g);
    for (int j = 0; j < g.npy(); ++j)
      for (int i = 0; i < g.npx(); ++i) {
        auto d = fn(g.x(i), g.y(j));
        out.c1.at(i, j) = d[0];
        out.c2.at(i, j) = d[1];
        out.c3.at(i, j) = d[2];
      }
    return out;
  }

  double norm2_at(int i, int j) const {
    double a = c1.at(i, j), b = c2.at(i, j), c = c3.at(i, j);
    return a * a + b * b + c * c;
  }
};

// Symmetric 2x2 tensor field (xy == yx); xx only is used on slabs.
struct SymTensorField {
  ScalarField xx, xy, yy;
  SymTensorField() = default;
  explicit SymTensorField(const Grid& g) : xx(g), xy(g), yy(g) {}
  const Grid& grid() const { return xx.grid; }
};

}  // namespace lmn
