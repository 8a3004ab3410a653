#pragma once

#include <cmath>

#include "lmn/solver_common.hpp"

namespace lmn {

struct CompressibleState {
  double t = 0;
  ScalarField rho;
  VectorField u;
  DirectorField d;
};

// Semi-implicit compressible stepper. Per step:
//   (i)   director update, diffusion implicit (exact DST solve);
//   (ii)  momentum predictor: explicit convection and Ericksen force,
//         implicit viscosity (PCG with an exact constant-coefficient
//         preconditioner);
//   (iii) implicit acoustic correction: the pressure gradient is linearized
//         about the current density and the resulting constant-coefficient
//         Helmholtz problem is solved exactly in cosine space; the density
//         update then uses the conservative flux form, so mass is conserved
//         to round-off and the scheme is stable for any eps at fixed dt.
class CompressibleSolver {
 public:
  CompressibleSolver(const Grid& g, const ModelParams& p, double filter_sigma = 0.02,
                     double theta_acoustic = 0.5)
      : grid_(g), sp_(g), params_(p), filter_sigma_(filter_sigma), theta_(theta_acoustic) {
    params_.validate();
  }

  const Spectral2D& engine() const { return sp_; }

  CompressibleState step(const CompressibleState& s, double dt) const {
    if (dt <= 0) throw std::invalid_argument("step: dt must be positive");
    double cfl = advective_cfl_limit(grid_, s.u);
    if (dt > cfl * (1.0 + 1e-9))
      throw NumericalAbort("compressible step: advective CFL violated (dt " + std::to_string(dt) +
                           " > " + std::to_string(cfl) + ")");
    const ModelParams& p = params_;
    const bool two_d = !grid_.is1d();

    // (i) director
    DirectorField dstar = director_step(sp_, s.d, s.u, dt, p);

    // (ii) momentum predictor with implicit viscosity
    SymTensorField stress = ericksen_stress(dstar, p.sigma0);
    VectorField force = tensor_divergence(stress);
    force *= -p.lambda;

    VectorField rhs(grid_);
    {
      ScalarField cx = advect(s.u, s.u.x);
      ScalarField cy = two_d ? advect(s.u, s.u.y) : ScalarField(grid_);
      for (long k = 0; k < rhs.x.size(); ++k) {
        double r = s.rho.v[k];
        rhs.x.v[k] = r * s.u.x.v[k] / dt - r * cx.v[k] + force.x.v[k];
        if (two_d) rhs.y.v[k] = r * s.u.y.v[k] / dt - r * cy.v[k] + force.y.v[k];
      }
    }
    VectorField ustar(grid_);
    ustar.x = implicit_viscous_solve(s.rho, rhs.x, dt);
    if (two_d) ustar.y = implicit_viscous_solve(s.rho, rhs.y, dt);
    if (filter_sigma_ > 0) {
      ustar.x = fourth_difference_filter(ustar.x, filter_sigma_);
      if (two_d) ustar.y = fourth_difference_filter(ustar.y, filter_sigma_);
    }

    // (iii) implicit acoustic correction
    double rho_bar = integrate(s.rho) / grid_.domain.measure();
    double abar = p.gamma * std::pow(rho_bar, p.gamma - 1.0);
    double ie2 = 1.0 / (p.epsilon * p.epsilon);

    ScalarField pn(grid_);
    for (long k = 0; k < pn.size(); ++k) {
      if (s.rho.v[k] < 0) throw NumericalAbort("compressible step: negative density input");
      pn.v[k] = std::pow(s.rho.v[k], p.gamma);
    }
    VectorField flux_star(grid_);
    for (long k = 0; k < flux_star.x.size(); ++k) {
      flux_star.x.v[k] = s.rho.v[k] * ustar.x.v[k];
      if (two_d) flux_star.y.v[k] = s.rho.v[k] * ustar.y.v[k];
    }
    ScalarField div_fs = divergence_sbp(flux_star);
    ScalarField hrhs(grid_);
    double ia = 1.0 / (theta_ * abar);
    for (long k = 0; k < hrhs.size(); ++k) hrhs.v[k] = pn.v[k] * ia - dt * div_fs.v[k];
    ScalarField w = sp_.neumann_helmholtz(ia, theta_ * dt * dt * ie2, hrhs);

    VectorField gw = gradient_sbp(w);
    CompressibleState out;
    out.t = s.t + dt;
    out.u = VectorField(grid_);
    for (long k = 0; k < out.u.x.size(); ++k) {
      double c = dt * ie2 / s.rho.v[k];
      out.u.x.v[k] = ustar.x.v[k] - c * gw.x.v[k];
      if (two_d) out.u.y.v[k] = ustar.y.v[k] - c * gw.y.v[k];
    }
    zero_boundary(out.u);

    // conservative density update with the theta-weighted flux velocity
    VectorField flux(grid_);
    for (long k = 0; k < flux.x.size(); ++k) {
      double uxm = (1.0 - theta_) * ustar.x.v[k] + theta_ * out.u.x.v[k];
      flux.x.v[k] = s.rho.v[k] * uxm;
      if (two_d) {
        double uym = (1.0 - theta_) * ustar.y.v[k] + theta_ * out.u.y.v[k];
        flux.y.v[k] = s.rho.v[k] * uym;
      }
    }
    ScalarField div_flux = divergence_sbp(flux);
    out.rho = s.rho;
    for (long k = 0; k < out.rho.size(); ++k) out.rho.v[k] -= dt * div_flux.v[k];
    for (double r : out.rho.v)
      if (r < 0) throw NumericalAbort("compressible step: negative density");

    out.d = std::move(dstar);
    return out;
  }

 private:
  // (rho/dt - mu Lap_D) x = rhs on interior nodes, x = 0 on the boundary;
  // PCG preconditioned with the exact mean-coefficient solve
  ScalarField implicit_viscous_solve(const ScalarField& rho, const ScalarField& rhs,
                                     double dt) const {
    const ModelParams& p = params_;
    double rho_bar = integrate(rho) / grid_.domain.measure();
    ScalarField b = rhs;
    zero_boundary(b);
    auto apply = [&](const ScalarField& x) {
      ScalarField y = laplacian(x, GhostKind::odd);
      for (long k = 0; k < y.size(); ++k) y.v[k] = rho.v[k] / dt * x.v[k] - p.mu * y.v[k];
      zero_boundary(y);
      return y;
    };
    auto precond = [&](const ScalarField& r) {
      return sp_.dirichlet_helmholtz(rho_bar / dt, p.mu, r);
    };
    auto dot = [](const ScalarField& a, const ScalarField& c) {
      double s = 0;
      for (long k = 0; k < a.size(); ++k) s += a.v[k] * c.v[k];
      return s;
    };

    ScalarField x(grid_);
    ScalarField r = b;
    ScalarField z = precond(r);
    ScalarField pdir = z;
    double rz = dot(r, z);
    double bnorm = std::sqrt(dot(b, b));
    if (bnorm == 0) return x;
    for (int it = 0; it < 200; ++it) {
      ScalarField Ap = apply(pdir);
      double alpha = rz / dot(pdir, Ap);
      for (long k = 0; k < x.size(); ++k) {
        x.v[k] += alpha * pdir.v[k];
        r.v[k] -= alpha * Ap.v[k];
      }
      if (std::sqrt(dot(r, r)) <= 1e-13 * bnorm) break;
      z = precond(r);
      double rz_new = dot(r, z);
      double beta = rz_new / rz;
      rz = rz_new;
      for (long k = 0; k < pdir.size(); ++k) pdir.v[k] = z.v[k] + beta * pdir.v[k];
    }
    return x;
  }

  Grid grid_;
  Spectral2D sp_;
  ModelParams params_;
  double filter_sigma_;
  double theta_;
};

// full run with ledger, mode traces and retry-on-negative-density
inline Trajectory run_compressible(const RunConfig& cfg) {
  Grid g = cfg.make_grid();
  CompressibleSolver solver(g, cfg.params, cfg.filter_sigma, cfg.theta_acoustic);
  BandOps ops(g);
  SpectralBasis basis = build_basis(cfg.domain, cfg.modes_N, cfg.params.mu);

  InitialState init = make_initial_state(cfg);
  CompressibleState s{0.0, init.rho, init.u, init.d};

  Trajectory traj;
  traj.grid = g;
  traj.params = cfg.params;
  traj.dt = cfg.dt;
  traj.incompressible = false;

  double kappa = std::min(2.0, cfg.params.gamma);
  double alpha = std::min(1.0 - 1.0 / kappa, 0.5 - 0.5 / cfg.params.gamma);

  auto record = [&](const CompressibleState& st) {
    traj.times.push_back(st.t);
    traj.rho.push_back(st.rho);
    traj.u.push_back(st.u);
    traj.d.push_back(st.d);
    traj.pi.push_back(pressure(st.rho, st.d, cfg.params).pi_eps);
    EnergyLedger inst = instantaneous_energy(st.rho, st.u, st.d, cfg.params);
    traj.ledger.push(st.t, inst, dissipation_rates(st.u, st.d, cfg.params));
  };
  auto record_modes = [&](const CompressibleState& st) {
    WaveState w{density_fluctuation(st.rho, cfg.params.epsilon), VectorField(g),
                cfg.params.epsilon};
    for (long k = 0; k < w.m.x.size(); ++k) {
      w.m.x.v[k] = st.rho.v[k] * st.u.x.v[k];
      if (!g.is1d()) w.m.y.v[k] = st.rho.v[k] * st.u.y.v[k];
    }
    traj.mode_times.push_back(st.t);
    traj.modes.push_back(mode_amplitudes(ops, w, basis));
    traj.forcings.push_back(acoustic_forcing(ops, st.rho, st.u, st.d, cfg.params, basis));
    double gap = std::pow(cfg.params.epsilon, 0.5 * alpha) *
                 (norm(w.phi, NormSpec::lp(kappa)) +
                  norm(w.m, NormSpec::lp(2.0 * cfg.params.gamma / (cfg.params.gamma + 1.0))));
    traj.beta_gap_bound = std::max(traj.beta_gap_bound, gap);
  };

  // acoustic traces default to eight samples per shortest retained period
  long modes_stride = cfg.output_stride;
  {
    double lam_max = basis.modes.back().lambda0;
    if (lam_max > 0) {
      double period = 2.0 * pi * cfg.params.epsilon / (std::sqrt(cfg.params.gamma) * lam_max);
      modes_stride = std::max<long>(1, long(period / (8.0 * cfg.dt)));
      modes_stride = std::min<long>(modes_stride, cfg.output_stride);
    }
  }

  record(s);
  record_modes(s);
  const long max_steps = 200 * std::lround(std::ceil(cfg.T / cfg.dt)) + 100;
  for (long n = 0; s.t < cfg.T - 1e-12 && n < max_steps; ++n) {
    double dt = std::min(cfg.dt, cfg.T - s.t);
    dt = std::min(dt, advective_cfl_limit(g, s.u));
    bool advanced = false;
    for (int halving = 0; halving <= 10 && !advanced; ++halving) {
      try {
        s = solver.step(s, dt);
        advanced = true;
      } catch (const NumericalAbort& e) {
        if (halving == 10) {
          traj.aborted = true;
          traj.note = e.what();
          return traj;
        }
        dt *= 0.5;
      }
    }
    bool final_step = s.t >= cfg.T - 1e-12;
    if ((n + 1) % cfg.output_stride == 0 || final_step) record(s);
    if ((n + 1) % modes_stride == 0 || final_step) record_modes(s);
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
