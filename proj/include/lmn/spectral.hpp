#pragma once

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <vector>

#include "lmn/field.hpp"

namespace lmn {

// One closed-form Neumann-Laplacian eigenmode on a rectangle or slab:
// Phi = amp * cos(m pi x / Lx) cos(n pi y / Ly), unit L2 norm.
struct NeumannMode {
  Domain domain;
  int m = 0, n = 0;
  double lambda0 = 0.0;  // lambda, with -Lap Phi = lambda^2 Phi

  double lambda2() const { return lambda0 * lambda0; }
  bool is_constant() const { return m == 0 && n == 0; }

  double kx() const { return m * pi / domain.Lx; }
  double ky() const { return domain.is1d() ? 0.0 : n * pi / domain.Ly; }
  double amplitude() const {
    double a = std::sqrt((m == 0 ? 1.0 : 2.0) / domain.Lx);
    double b = domain.is1d() ? 1.0 : std::sqrt((n == 0 ? 1.0 : 2.0) / domain.Ly);
    return a * b;
  }

  double eval(double x, double y) const {
    double v = amplitude() * std::cos(kx() * x);
    if (!domain.is1d()) v *= std::cos(ky() * y);
    return v;
  }
  // gradient components of Phi
  double eval_dx(double x, double y) const {
    double v = -amplitude() * kx() * std::sin(kx() * x);
    if (!domain.is1d()) v *= std::cos(ky() * y);
    return v;
  }
  double eval_dy(double x, double y) const {
    if (domain.is1d()) return 0.0;
    return -amplitude() * ky() * std::cos(kx() * x) * std::sin(ky() * y);
  }

  ScalarField sample(const Grid& g) const {
    return ScalarField::sample(g, [this](double x, double y) { return eval(x, y); });
  }
  // sampled g = grad Phi / lambda (unit L2 for lambda > 0)
  VectorField sample_gradient_unit(const Grid& g) const {
    if (lambda0 <= 0) throw std::invalid_argument("sample_gradient_unit: constant mode");
    VectorField out(g);
    for (int j = 0; j < g.npy(); ++j)
      for (int i = 0; i < g.npx(); ++i) {
        out.x.at(i, j) = eval_dx(g.x(i), g.y(j)) / lambda0;
        if (!g.is1d()) out.y.at(i, j) = eval_dy(g.x(i), g.y(j)) / lambda0;
      }
    return out;
  }
};

// eigenvector of the inviscid wave operator: (Phi, m^+-) with
// m^+- = +- grad Phi / (i lambda); satisfies L phi^+- = +- i lambda phi^+-
struct WaveEigenvector {
  NeumannMode mode;
  int sign = +1;

  FieldT<std::complex<double>> scalar_part(const Grid& g) const {
    FieldT<std::complex<double>> out(g);
    ScalarField re = mode.sample(g);
    for (long k = 0; k < out.size(); ++k) out.v[k] = re.v[k];
    return out;
  }
  VectorFieldT<std::complex<double>> vector_part(const Grid& g) const {
    // +-grad Phi/(i lambda) = -+ i grad Phi / lambda
    VectorFieldT<std::complex<double>> out(g);
    VectorField gu = mode.sample_gradient_unit(g);
    std::complex<double> f(0.0, -double(sign));
    for (long k = 0; k < out.x.size(); ++k) {
      out.x.v[k] = f * gu.x.v[k];
      if (!g.is1d()) out.y.v[k] = f * gu.y.v[k];
    }
    return out;
  }
};

inline NeumannMode eigenpair(const Domain& dom, int m, int n = 0) {
  if (m < 0 || n < 0) throw std::invalid_argument("eigenpair: index components must be >= 0");
  if (dom.is1d() && n != 0) throw std::invalid_argument("eigenpair: slab modes have a single index");
  NeumannMode mode;
  mode.domain = dom;
  mode.m = m;
  mode.n = dom.is1d() ? 0 : n;
  double kx = m * pi / dom.Lx;
  double ky = dom.is1d() ? 0.0 : n * pi / dom.Ly;
  mode.lambda0 = std::sqrt(kx * kx + ky * ky);
  return mode;
}

enum class ModeClass { trivial, damped, undamped };  // trivial / I / J

inline const char* mode_class_name(ModeClass c) {
  switch (c) {
    case ModeClass::trivial: return "trivial";
    case ModeClass::damped: return "I";
    case ModeClass::undamped: return "J";
  }
  return "?";
}

// First-order eigenvalue correction of the viscous wave operator:
// i lambda_{k,1}^+- = -((1 +- i)/2) sqrt(mu / (2 lambda^3)) * B,
// B = integral over the boundary of |grad Phi|^2 ds.
struct DampingCorrection {
  std::complex<double> value_plus{0.0, 0.0};  // i lambda_{k,1}^+
  double boundary_integral = 0.0;
  ModeClass mode_class = ModeClass::trivial;

  std::complex<double> value(int sign) const {
    return sign >= 0 ? value_plus : std::conj(value_plus);
  }
};

// closed-form boundary integral of |grad Phi|^2
inline double boundary_gradient_integral(const NeumannMode& mode) {
  if (mode.is_constant()) return 0.0;
  if (mode.domain.is1d()) return 0.0;  // d Phi/dx ~ sin vanishes at both endpoints
  double A2 = mode.amplitude() * mode.amplitude();
  double kx = mode.kx(), ky = mode.ky();
  double s = 0.0;
  // two y-edges carry the tangential x-derivative, and vice versa
  if (mode.m > 0) s += 2.0 * A2 * kx * kx * (0.5 * mode.domain.Lx);
  if (mode.n > 0) s += 2.0 * A2 * ky * ky * (0.5 * mode.domain.Ly);
  return s;
}

inline DampingCorrection damping_correction(const NeumannMode& mode, double mu) {
  if (mu <= 0) throw std::invalid_argument("damping_correction: mu must be positive");
  DampingCorrection out;
  out.boundary_integral = boundary_gradient_integral(mode);
  if (mode.is_constant()) {
    out.mode_class = ModeClass::trivial;
    return out;
  }
  if (out.boundary_integral == 0.0) {
    out.mode_class = ModeClass::undamped;
    return out;
  }
  out.mode_class = ModeClass::damped;
  double lam = mode.lambda0;
  double mag = 0.5 * std::sqrt(mu / (2.0 * lam * lam * lam)) * out.boundary_integral;
  out.value_plus = std::complex<double>(-mag, -mag);
  return out;
}

// Ordered eigenbasis: constant mode first (flagged trivial), then the N
// lowest nonconstant modes sorted by (lambda, n, m).
struct SpectralBasis {
  Domain domain;
  double mu = 1.0;
  int truncation = 0;  // retained nonconstant modes
  std::vector<NeumannMode> modes;
  std::vector<DampingCorrection> corrections;

  int count() const { return int(modes.size()); }
};

inline SpectralBasis build_basis(const Domain& dom, int N, double mu = 1.0) {
  if (N < 1) throw std::invalid_argument("build_basis: N >= 1 required");
  SpectralBasis basis;
  basis.domain = dom;
  basis.mu = mu;
  basis.truncation = N;
  std::vector<NeumannMode> cand;
  if (dom.is1d()) {
    for (int m = 1; m <= N; ++m) cand.push_back(eigenpair(dom, m));
  } else {
    // enough index range to cover the N smallest eigenvalues
    int M = N + 2;
    while ((M + 1) * (M + 1) - 1 < 4 * N) ++M;
    for (int m = 0; m <= M; ++m)
      for (int n = 0; n <= M; ++n) {
        if (m == 0 && n == 0) continue;
        cand.push_back(eigenpair(dom, m, n));
      }
  }
  std::sort(cand.begin(), cand.end(), [](const NeumannMode& a, const NeumannMode& b) {
    if (a.lambda0 != b.lambda0) return a.lambda0 < b.lambda0;
    if (a.n != b.n) return a.n < b.n;
    return a.m < b.m;
  });
  cand.resize(std::min<size_t>(cand.size(), size_t(N)));

  basis.modes.push_back(eigenpair(dom, 0, 0));
  for (auto& mode : cand) basis.modes.push_back(mode);
  for (auto& mode : basis.modes) basis.corrections.push_back(damping_correction(mode, mu));
  return basis;
}

struct ConditionHReport {
  bool satisfied = true;
  double tol = 1e-8;
  std::vector<int> violating;  // indices into basis.modes
  // Gram-Schmidt side condition for equal-eigenvalue pairs:
  // max |int_boundary grad Phi_k . grad Phi_l ds| (checked, not enforced)
  double max_degenerate_cross = 0.0;
};

namespace detail {

// boundary integral of grad Phi_k . grad Phi_l by composite trapezoid
inline double boundary_grad_cross(const NeumannMode& a, const NeumannMode& b, int samples = 2048) {
  const Domain& dom = a.domain;
  if (dom.is1d()) {
    return a.eval_dx(0, 0) * b.eval_dx(0, 0) + a.eval_dx(dom.Lx, 0) * b.eval_dx(dom.Lx, 0);
  }
  auto edge = [&](auto&& point, double len) {
    double s = 0;
    for (int i = 0; i <= samples; ++i) {
      double t = len * i / samples;
      auto [x, y] = point(t);
      double v = a.eval_dx(x, y) * b.eval_dx(x, y) + a.eval_dy(x, y) * b.eval_dy(x, y);
      s += ((i == 0 || i == samples) ? 0.5 : 1.0) * v;
    }
    return s * len / samples;
  };
  double s = 0;
  s += edge([&](double t) { return std::pair{t, 0.0}; }, dom.Lx);
  s += edge([&](double t) { return std::pair{t, dom.Ly}; }, dom.Lx);
  s += edge([&](double t) { return std::pair{0.0, t}; }, dom.Ly);
  s += edge([&](double t) { return std::pair{dom.Lx, t}; }, dom.Ly);
  return s;
}

}  // namespace detail

// Overdetermined-eigenproblem check: a nonconstant mode with constant
// boundary trace (its normal derivative already vanishes) is a nontrivial
// solution, and the domain then fails condition (H).
inline ConditionHReport check_condition_H(const SpectralBasis& basis, double tol = 1e-8) {
  ConditionHReport rep;
  rep.tol = tol;
  const Domain& dom = basis.domain;
  const int samples = 1024;
  for (int k = 0; k < basis.count(); ++k) {
    const NeumannMode& mode = basis.modes[k];
    if (mode.is_constant()) continue;
    double lo = 1e300, hi = -1e300;
    auto visit = [&](double x, double y) {
      double v = mode.eval(x, y);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    };
    if (dom.is1d()) {
      visit(0, 0);
      visit(dom.Lx, 0);
    } else {
      for (int i = 0; i <= samples; ++i) {
        double tx = dom.Lx * i / samples, ty = dom.Ly * i / samples;
        visit(tx, 0);
        visit(tx, dom.Ly);
        visit(0, ty);
        visit(dom.Lx, ty);
      }
    }
    if (hi - lo <= tol) {
      rep.satisfied = false;
      rep.violating.push_back(k);
    }
  }
  for (int k = 1; k < basis.count(); ++k)
    for (int l = k + 1; l < basis.count(); ++l) {
      if (basis.modes[k].lambda0 != basis.modes[l].lambda0) continue;
      double c = std::abs(detail::boundary_grad_cross(basis.modes[k], basis.modes[l]));
      rep.max_degenerate_cross = std::max(rep.max_degenerate_cross, c);
    }
  return rep;
}

}  // namespace lmn
