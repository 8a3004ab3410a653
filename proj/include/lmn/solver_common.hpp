#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lmn/acoustic.hpp"
#include "lmn/config.hpp"
#include "lmn/leray.hpp"
#include "lmn/model.hpp"

namespace lmn {

struct NumericalAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Semi-implicit director update shared by both solvers: transport and penalty
// force explicit, diffusion implicit, Dirichlet trace preserved exactly by
// lifting with the previous field.
inline DirectorField director_step(const Spectral2D& sp, const DirectorField& d,
                                   const VectorField& u, double dt, const ModelParams& p) {
  const Grid& g = d.grid();
  PenaltyFields pen = penalty(d, p.sigma0);
  DirectorField out(g);
  for (int a = 0; a < 3; ++a) {
    ScalarField adv = advect(u, d.comp(a));
    ScalarField lap = laplacian(d.comp(a), GhostKind::mirror);  // interior rows only matter
    ScalarField r(g);
    for (long k = 0; k < r.size(); ++k)
      r.v[k] = -dt * adv.v[k] - p.theta * dt * pen.f.comp(a).v[k] + p.theta * dt * lap.v[k];
    ScalarField v = sp.dirichlet_helmholtz(1.0, p.theta * dt, r);
    out.comp(a) = d.comp(a) + v;
  }
  return out;
}

// one trajectory of either solver, sampled at the output stride
struct Trajectory {
  Grid grid;
  ModelParams params;
  double dt = 0;
  bool incompressible = false;
  std::vector<double> times;
  std::vector<ScalarField> rho;  // empty for incompressible runs
  std::vector<VectorField> u;
  std::vector<DirectorField> d;
  std::vector<ScalarField> pi;
  LedgerSeries ledger;
  std::vector<double> mode_times;                    // acoustic-trace sampling grid
  std::vector<std::vector<ModeAmplitude>> modes;     // per mode_times entry
  std::vector<std::vector<ModeForcing>> forcings;    // per mode_times entry (compressible)
  double beta_gap_bound = 0;  // recorded |b - beta| bound, not asserted
  bool aborted = false;
  std::string note;

  int samples() const { return int(times.size()); }
};

struct InitialState {
  ScalarField rho;
  VectorField u;
  DirectorField d;
};

// Initial data policy: rho = 1 + eps * amplitude * phi0 with a fixed smooth
// zero-mean profile; u and d are eps-independent.
inline InitialState make_initial_state(const RunConfig& cfg) {
  Grid g = cfg.make_grid();
  const Domain& dom = cfg.domain;
  InitialState s{ScalarField(g, 1.0), VectorField(g), DirectorField(g)};
  double eps = cfg.params.epsilon;
  double amp = cfg.init_amplitude;
  auto sx = [&](double x) { return pi * x / dom.Lx; };
  auto sy = [&](double y) { return dom.is1d() ? 0.0 : pi * y / dom.Ly; };

  s.d = DirectorField::sample(g, [&](double, double) { return std::array<double, 3>{0, 0, 1}; });

  const std::string& prof = cfg.init_profile;
  if (prof == "equilibrium") {
    return s;
  }
  if (prof.rfind("acoustic", 0) == 0) {
    // acoustic[:m,n] low mode density perturbation, fluid at rest
    int m = 1, n = 0;
    auto colon = prof.find(':');
    if (colon != std::string::npos) {
      auto comma = prof.find(',', colon);
      m = std::stoi(prof.substr(colon + 1));
      if (comma != std::string::npos) n = std::stoi(prof.substr(comma + 1));
    }
    NeumannMode mode = eigenpair(dom, m, dom.is1d() ? 0 : n);
    ScalarField phi = mode.sample(g);
    for (long k = 0; k < s.rho.size(); ++k) s.rho.v[k] += eps * amp * phi.v[k];
    return s;
  }
  if (prof == "bubble" || prof == "sweep") {
    // zero-mean density profile, solenoidal velocity bubble, tilted director
    NeumannMode m10 = eigenpair(dom, 1, 0);
    ScalarField f10 = m10.sample(g);
    ScalarField f01;
    if (!dom.is1d()) f01 = eigenpair(dom, 0, 1).sample(g);
    for (long k = 0; k < s.rho.size(); ++k) {
      double phi = f10.v[k] + (dom.is1d() ? 0.0 : f01.v[k]);
      s.rho.v[k] += eps * amp * phi * (dom.is1d() ? 1.0 : 1.0 / std::sqrt(2.0));
    }
    if (!dom.is1d()) {
      // u = speed * curl(psi), psi = sin^2(sx) sin^2(sy); vanishes on the boundary
      double spd = cfg.init_speed;
      s.u = VectorField::sample(
          g,
          [&](double x, double y) {
            double a = std::sin(sx(x)), b = std::sin(sy(y));
            return spd * a * a * 2.0 * b * std::cos(sy(y)) * (pi / dom.Ly);
          },
          [&](double x, double y) {
            double a = std::sin(sx(x)), b = std::sin(sy(y));
            return -spd * 2.0 * a * std::cos(sx(x)) * (pi / dom.Lx) * b * b;
          });
    }
    s.d = DirectorField::sample(g, [&](double x, double y) {
      double tilt = cfg.init_tilt * std::sin(sx(x)) * (dom.is1d() ? 1.0 : std::sin(sy(y)));
      double nrm = std::sqrt(tilt * tilt + 1.0);
      return std::array<double, 3>{tilt / nrm, 0.0, 1.0 / nrm};
    });
    return s;
  }
  if (prof == "director1d") {
    // fluid at rest; director varies along x only (slab Ginzburg-Landau flow)
    s.d = DirectorField::sample(g, [&](double x, double) {
      double a = 0.6 * std::sin(sx(x));
      double c = std::sqrt(std::max(0.0, 1.0 - a * a));
      return std::array<double, 3>{a, 0.0, c};
    });
    return s;
  }
  throw ConfigError("unknown init.profile: " + prof);
}

// velocity split by the density indicator |rho - 1| <= 1/2
struct VelocitySplit {
  VectorField u1, u2;
};

inline VelocitySplit velocity_split(const ScalarField& rho, const VectorField& u) {
  const Grid& g = rho.grid;
  VelocitySplit out{VectorField(g), VectorField(g)};
  for (long k = 0; k < rho.size(); ++k) {
    bool near = std::abs(rho.v[k] - 1.0) <= 0.5;
    (near ? out.u1 : out.u2).x.v[k] = u.x.v[k];
    if (!g.is1d()) (near ? out.u1 : out.u2).y.v[k] = u.y.v[k];
  }
  return out;
}

inline double max_speed(const VectorField& u) {
  double m = 0;
  const Grid& g = u.grid();
  for (long k = 0; k < u.x.size(); ++k) {
    double s = std::abs(u.x.v[k]);
    if (!g.is1d()) s = std::hypot(u.x.v[k], u.y.v[k]);
    m = std::max(m, s);
  }
  return m;
}

inline double advective_cfl_limit(const Grid& g, const VectorField& u) {
  double umax = std::max(max_speed(u), 1e-12);
  double h = g.is1d() ? g.hx : std::min(g.hx, g.hy);
  return 0.4 * h / umax;
}

}  // namespace lmn
