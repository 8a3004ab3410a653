#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "lmn/field.hpp"
#include "lmn/operators.hpp"

namespace lmn {

// Composite-trapezoid quadrature of a node field.
inline double integrate(const ScalarField& f) {
  const Grid& g = f.grid;
  double s = 0;
  for (int j = 0; j < g.npy(); ++j)
    for (int i = 0; i < g.npx(); ++i) s += g.weight(i, j) * f.at(i, j);
  return s;
}

inline double mean(const ScalarField& f) { return integrate(f) / f.grid.domain.measure(); }

inline double inner(const ScalarField& a, const ScalarField& b) {
  const Grid& g = a.grid;
  double s = 0;
  for (int j = 0; j < g.npy(); ++j)
    for (int i = 0; i < g.npx(); ++i) s += g.weight(i, j) * a.at(i, j) * b.at(i, j);
  return s;
}

inline double inner(const VectorField& a, const VectorField& b) {
  double s = inner(a.x, b.x);
  if (!a.grid().is1d()) s += inner(a.y, b.y);
  return s;
}

// (f,g) = int f conj(g)
inline std::complex<double> inner(const ComplexField& a, const ComplexField& b) {
  const Grid& g = a.grid;
  std::complex<double> s = 0;
  for (int j = 0; j < g.npy(); ++j)
    for (int i = 0; i < g.npx(); ++i) s += g.weight(i, j) * a.at(i, j) * std::conj(b.at(i, j));
  return s;
}

struct NormSpec {
  enum Kind { Lp, H1Seminorm, Linf } kind = Lp;
  double p = 2.0;
  static NormSpec lp(double p) { return {Lp, p}; }
  static NormSpec l2() { return {Lp, 2.0}; }
  static NormSpec linf() { return {Linf, 0.0}; }
  static NormSpec h1() { return {H1Seminorm, 2.0}; }
};

inline double norm(const ScalarField& f, const NormSpec& spec) {
  const Grid& g = f.grid;
  switch (spec.kind) {
    case NormSpec::Linf: {
      double m = 0;
      for (double x : f.v) m = std::max(m, std::abs(x));
      return m;
    }
    case NormSpec::Lp: {
      if (spec.p < 1) throw std::invalid_argument("norm: p >= 1 required");
      double s = 0;
      for (int j = 0; j < g.npy(); ++j)
        for (int i = 0; i < g.npx(); ++i) s += g.weight(i, j) * std::pow(std::abs(f.at(i, j)), spec.p);
      return std::pow(s, 1.0 / spec.p);
    }
    case NormSpec::H1Seminorm: {
      VectorField gr = gradient_sbp(f);
      return std::sqrt(inner(gr, gr));
    }
  }
  return 0;
}

inline double norm_l2(const ScalarField& f) { return norm(f, NormSpec::l2()); }

inline double norm(const VectorField& v, const NormSpec& spec) {
  const Grid& g = v.grid();
  if (spec.kind == NormSpec::Linf) {
    double m = 0;
    for (long k = 0; k < v.x.size(); ++k) {
      double a = std::hypot(v.x.v[k], g.is1d() ? 0.0 : v.y.v[k]);
      m = std::max(m, a);
    }
    return m;
  }
  if (spec.kind == NormSpec::Lp) {
    double s = 0;
    for (int j = 0; j < g.npy(); ++j)
      for (int i = 0; i < g.npx(); ++i) {
        double a = std::hypot(v.x.at(i, j), g.is1d() ? 0.0 : v.y.at(i, j));
        s += g.weight(i, j) * std::pow(a, spec.p);
      }
    return std::pow(s, 1.0 / spec.p);
  }
  // H1 seminorm of a vector field: l2 of all first derivatives
  double s = 0;
  VectorField gx = gradient_sbp(v.x);
  s += inner(gx, gx);
  if (!g.is1d()) {
    VectorField gy = gradient_sbp(v.y);
    s += inner(gy, gy);
  }
  return std::sqrt(s);
}

inline double norm_l2(const VectorField& v) { return norm(v, NormSpec::l2()); }

inline double norm_l2(const DirectorField& d) {
  double s = 0;
  for (int k = 0; k < 3; ++k) {
    double a = norm_l2(d.comp(k));
    s += a * a;
  }
  return std::sqrt(s);
}

inline double norm_linf(const DirectorField& d) {
  double m = 0;
  for (long k = 0; k < d.c1.size(); ++k)
    m = std::max(m, std::sqrt(d.c1.v[k] * d.c1.v[k] + d.c2.v[k] * d.c2.v[k] + d.c3.v[k] * d.c3.v[k]));
  return m;
}

// sqrt(sum_k |grad d_k|_L2^2)
inline double h1_seminorm(const DirectorField& d) {
  double s = 0;
  for (int k = 0; k < 3; ++k) {
    VectorField gr = gradient_sbp(d.comp(k));
    s += inner(gr, gr);
  }
  return std::sqrt(s);
}

inline double h1_norm(const DirectorField& d) {
  double a = norm_l2(d), b = h1_seminorm(d);
  return std::sqrt(a * a + b * b);
}

// L4 norm of |grad d| over the domain
inline double grad_l4(const DirectorField& d) {
  const Grid& g = d.grid();
  VectorField g1 = gradient_sbp(d.c1), g2 = gradient_sbp(d.c2), g3 = gradient_sbp(d.c3);
  double s = 0;
  for (int j = 0; j < g.npy(); ++j)
    for (int i = 0; i < g.npx(); ++i) {
      double q = g1.x.at(i, j) * g1.x.at(i, j) + g2.x.at(i, j) * g2.x.at(i, j) +
                 g3.x.at(i, j) * g3.x.at(i, j);
      if (!g.is1d())
        q += g1.y.at(i, j) * g1.y.at(i, j) + g2.y.at(i, j) * g2.y.at(i, j) +
             g3.y.at(i, j) * g3.y.at(i, j);
      s += g.weight(i, j) * q * q;  // |grad d|^4
    }
  return std::pow(s, 0.25);
}

}  // namespace lmn
