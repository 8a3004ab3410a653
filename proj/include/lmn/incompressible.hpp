#pragma once

#include <cmath>

#include "lmn/solver_common.hpp"

namespace lmn {

struct IncompressibleState {
  double t = 0;
  VectorField u;
  DirectorField d;
  ScalarField pi;  // hydrostatic pressure, zero mean
};

// Chorin-type projection scheme for the limit system: director update as in
// the compressible solver, velocity predictor with implicit viscosity (exact
// DST solve) and the deviatoric Ericksen force -lambda div(grad d (x) grad d)
// (the isotropic part is absorbed into pi), then Leray projection on the
// cosine band. div u vanishes on the band after projection by construction.
class IncompressibleSolver {
 public:
  IncompressibleSolver(const Grid& g, const ModelParams& p)
      : grid_(g), sp_(g), ops_(g), params_(p) {
    params_.validate();
  }

  const BandOps& band_ops() const { return ops_; }

  IncompressibleState step(const IncompressibleState& s, double dt) const {
    if (dt <= 0) throw std::invalid_argument("step: dt must be positive");
    double cfl = advective_cfl_limit(grid_, s.u);
    if (dt > cfl * (1.0 + 1e-9))
      throw NumericalAbort("incompressible step: advective CFL violated");
    const ModelParams& p = params_;
    const bool two_d = !grid_.is1d();

    DirectorField dstar = director_step(sp_, s.d, s.u, dt, p);

    // deviatoric Ericksen force only; projection supplies the pressure
    VectorField force = tensor_divergence(distortion_tensor(dstar));
    force *= -p.lambda;

    VectorField rhs(grid_);
    {
      ScalarField cx = advect(s.u, s.u.x);
      ScalarField cy = two_d ? advect(s.u, s.u.y) : ScalarField(grid_);
      for (long k = 0; k < rhs.x.size(); ++k) {
        rhs.x.v[k] = s.u.x.v[k] / dt - cx.v[k] + force.x.v[k];
        if (two_d) rhs.y.v[k] = s.u.y.v[k] / dt - cy.v[k] + force.y.v[k];
      }
    }
    VectorField ustar(grid_);
    ustar.x = sp_.dirichlet_helmholtz(1.0 / dt, p.mu, rhs.x);
    if (two_d) ustar.y = sp_.dirichlet_helmholtz(1.0 / dt, p.mu, rhs.y);

    IncompressibleState out;
    out.t = s.t + dt;
    ScalarField psi = ops_.leray_potential(ustar);
    VectorField q = ops_.gradient_reconstruct(ops_.gradient_coeffs(ustar));
    out.u = ustar;
    out.u -= q;
    out.pi = psi;
    out.pi *= 1.0 / dt;
    out.d = std::move(dstar);
    return out;
  }

 private:
  Grid grid_;
  Spectral2D sp_;
  BandOps ops_;
  ModelParams params_;
};

inline Trajectory run_incompressible(const RunConfig& cfg) {
  Grid g = cfg.make_grid();
  IncompressibleSolver solver(g, cfg.params);
  BandOps ops(g);

  InitialState init = make_initial_state(cfg);
  IncompressibleState s;
  s.t = 0;
  // initial velocity is projected: u(0) = P u0
  VectorField q0 = ops.gradient_reconstruct(ops.gradient_coeffs(init.u));
  s.u = init.u;
  s.u -= q0;
  s.d = init.d;
  s.pi = ScalarField(g);

  Trajectory traj;
  traj.grid = g;
  traj.params = cfg.params;
  traj.dt = cfg.dt;
  traj.incompressible = true;

  auto record = [&](const IncompressibleState& st) {
    traj.times.push_back(st.t);
    traj.u.push_back(st.u);
    traj.d.push_back(st.d);
    traj.pi.push_back(st.pi);
    ScalarField one(g, 1.0);
    EnergyLedger inst = instantaneous_energy(one, st.u, st.d, cfg.params, /*incompressible=*/true);
    traj.ledger.push(st.t, inst, dissipation_rates(st.u, st.d, cfg.params));
  };

  record(s);
  const long max_steps = 200 * std::lround(std::ceil(cfg.T / cfg.dt)) + 100;
  for (long n = 0; s.t < cfg.T - 1e-12 && n < max_steps; ++n) {
    double dt = std::min(cfg.dt, cfg.T - s.t);
    dt = std::min(dt, advective_cfl_limit(g, s.u));
    try {
      s = solver.step(s, dt);
    } catch (const NumericalAbort& e) {
      traj.aborted = true;
      traj.note = e.what();
      return traj;
    }
    if ((n + 1) % cfg.output_stride == 0 || s.t >= cfg.T - 1e-12) record(s);
    if (traj.ledger.max_relative_drift() > 0.25) {
      traj.aborted = true;
      traj.note = "energy ledger increased beyond the abort threshold";
      return traj;
    }
  }
  if (s.t < cfg.T - 1e-12) {
    traj.aborted = true;
    traj.note = "time step collapsed before reaching final time";
  }
  return traj;
}

}  // namespace lmn
