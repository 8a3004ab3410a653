#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <vector>

#include "lmn/compressible.hpp"
#include "lmn/incompressible.hpp"

namespace lmn {

struct SweepConfig {
  RunConfig base;                 // compressible member template (grid, dt, T, init)
  std::vector<double> epsilons;   // decreasing
  bool concurrent = true;
  bool damping_table = true;      // include a linearized-wave damping table
  double damping_eps = 0.04;
  int refinement_factor = 2;      // grid factor for the d-difference error floor

  void validate() const {
    base.validate();
    if (epsilons.size() < 2) throw ConfigError("sweep: need at least two epsilons");
    for (double e : epsilons)
      if (!(e > 0 && e < 1)) throw ConfigError("sweep: epsilon values must lie in (0,1)");
    for (size_t i = 1; i < epsilons.size(); ++i)
      if (!(epsilons[i] < epsilons[i - 1])) throw ConfigError("sweep: epsilons must decrease");
  }
};

struct FitResult {
  double slope = 0;
  double correlation = 0;
  int used = 0;
  bool flagged = false;  // some pairs excluded (nonpositive values)
  bool defined = true;   // false when fewer than 3 usable pairs
};

// least-squares slope in log-log coordinates
inline FitResult fit_rate(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 pairs");
  FitResult res;
  std::vector<double> xs, ys;
  for (auto& [e, v] : pairs) {
    if (!(e > 0)) throw std::invalid_argument("fit_rate: epsilon must be positive");
    if (!(v > 0)) {
      res.flagged = true;
      continue;
    }
    xs.push_back(std::log(e));
    ys.push_back(std::log(v));
  }
  res.used = int(xs.size());
  if (res.used < 3) {
    res.defined = false;
    return res;
  }
  double n = res.used, sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < res.used; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  double cov = n * sxy - sx * sy;
  double vx = n * sxx - sx * sx;
  double vy = n * syy - sy * sy;
  res.slope = cov / vx;
  res.correlation = (vy > 0) ? cov / std::sqrt(vx * vy) : 1.0;
  return res;
}

struct LimitNorms {
  double u_l2l2 = 0;    // ||u_eps - u||_{L2((0,T)xOmega)}
  double d_l2h1 = 0;    // ||d_eps - d||_{L2(0,T;H1)}
  double grad_d_l4 = 0; // ||grad d_eps||_{L4((0,T)xOmega)} of the compressible run
};

namespace detail {

inline double time_l2(const std::vector<double>& times, const std::vector<double>& vals2) {
  // trapezoid of squared spatial norms, then square root
  double s = 0;
  for (size_t i = 1; i < times.size(); ++i)
    s += 0.5 * (times[i] - times[i - 1]) * (vals2[i] + vals2[i - 1]);
  return std::sqrt(s);
}

}  // namespace detail

inline LimitNorms compare_to_limit(const Trajectory& comp, const Trajectory& inc) {
  if (!comp.grid.same_layout(inc.grid))
    throw std::invalid_argument("compare_to_limit: trajectories live on different grids");
  if (comp.times.size() != inc.times.size())
    throw std::invalid_argument("compare_to_limit: misaligned output times");
  for (size_t i = 0; i < comp.times.size(); ++i)
    if (std::abs(comp.times[i] - inc.times[i]) > 1e-10)
      throw std::invalid_argument("compare_to_limit: misaligned output times");

  LimitNorms out;
  std::vector<double> u2, d2, g4;
  for (size_t i = 0; i < comp.times.size(); ++i) {
    VectorField du = comp.u[i];
    du -= inc.u[i];
    u2.push_back(inner(du, du));
    double dl2 = 0, dh1 = 0;
    for (int a = 0; a < 3; ++a) {
      ScalarField dd = comp.d[i].comp(a) - inc.d[i].comp(a);
      double l2 = norm_l2(dd);
      VectorField gr = gradient_sbp(dd);
      dl2 += l2 * l2;
      dh1 += inner(gr, gr);
    }
    d2.push_back(dl2 + dh1);
    double g = grad_l4(comp.d[i]);
    g4.push_back(g * g * g * g);
  }
  out.u_l2l2 = detail::time_l2(comp.times, u2);
  out.d_l2h1 = detail::time_l2(comp.times, d2);
  // L4 in time of the L4 spatial norm
  double s = 0;
  for (size_t i = 1; i < comp.times.size(); ++i)
    s += 0.5 * (comp.times[i] - comp.times[i - 1]) * (g4[i] + g4[i - 1]);
  out.grad_d_l4 = std::pow(s, 0.25);
  return out;
}

struct SweepPoint {
  double eps = 0;
  double rho_lgamma_sup = 0;  // sup_t ||rho - 1||_{L^gamma}
  double rho_lkappa_sup = 0;  // sup_t ||rho - 1||_{L^kappa}
  LimitNorms diff;
  double q1u_l2l2 = 0;
  double q_tail = 0;
  double ledger_drift = 0;
  bool aborted = false;
  std::string note;
};

struct DampingRow {
  int m = 0, n = 0;
  double lambda0 = 0;
  double predicted_rate = 0;  // -Re(i lambda_1)/sqrt(eps)
  double measured_rate = 0;   // raw envelope rate of |beta|
  double bulk_rate = 0;       // interior viscous rate mu lambda^2/2
  double boundary_rate = 0;   // measured - bulk
  double ratio = 0;           // boundary / predicted (damped modes)
  ModeClass cls = ModeClass::trivial;
};

struct RateReport {
  double kappa = 2.0;
  std::vector<SweepPoint> points;
  FitResult rho_gamma_fit, rho_kappa_fit;
  bool fits_defined = true;
  double inc_drift = 0;
  double refinement_floor_d = 0;
  bool condition_H = false;
  double damping_eps = 0;
  std::vector<DampingRow> damping;

  // acceptance verdicts over the sweep
  bool pass_energy = false;
  bool pass_density_slope = false;
  bool pass_monotone = false;
  bool pass_d_floor = false;
  bool all_pass() const {
    return pass_energy && pass_density_slope && pass_monotone && pass_d_floor;
  }
};

struct SweepResult {
  RateReport report;
  Trajectory reference;             // incompressible, base grid
  Trajectory reference_fine;        // incompressible, refined grid
  std::vector<Trajectory> members;  // compressible runs, one per epsilon
};

// Desk-scale defaults: 64^2 grid, T = 0.5, eps list {0.2, 0.1, 0.05, 0.025};
// the initial amplitudes are sized so that the acoustic response dominates
// the density deviation while the director comparison stays within the grid
// refinement error floor.
inline SweepConfig default_sweep_config() {
  SweepConfig sw;
  sw.base.domain = Domain::rectangle(pi, pi);
  sw.base.nx = sw.base.ny = 64;
  sw.base.params = ModelParams{};  // gamma 2, mu = lambda = theta = 1, sigma0 0.2
  sw.base.T = 0.5;
  sw.base.dt = 2e-3;
  sw.base.output_stride = 10;
  sw.base.modes_N = 16;
  sw.base.init_profile = "bubble";
  sw.base.init_amplitude = 0.02;
  sw.base.init_speed = 0.15;
  sw.base.init_tilt = 0.4;
  sw.epsilons = {0.2, 0.1, 0.05, 0.025};
  return sw;
}

namespace detail {

inline Trajectory restrict_to(const Trajectory& fine, const Grid& coarse, int factor) {
  Trajectory out;
  out.grid = coarse;
  out.params = fine.params;
  out.dt = fine.dt;
  out.incompressible = fine.incompressible;
  out.times = fine.times;
  auto restrict_scalar = [&](const ScalarField& f) {
    ScalarField c(coarse);
    for (int j = 0; j < coarse.npy(); ++j)
      for (int i = 0; i < coarse.npx(); ++i) c.at(i, j) = f.at(i * factor, coarse.is1d() ? 0 : j * factor);
    return c;
  };
  for (size_t s = 0; s < fine.times.size(); ++s) {
    VectorField u(coarse);
    u.x = restrict_scalar(fine.u[s].x);
    if (!coarse.is1d()) u.y = restrict_scalar(fine.u[s].y);
    out.u.push_back(std::move(u));
    DirectorField d(coarse);
    for (int a = 0; a < 3; ++a) d.comp(a) = restrict_scalar(fine.d[s].comp(a));
    out.d.push_back(std::move(d));
    if (s < fine.rho.size()) out.rho.push_back(restrict_scalar(fine.rho[s]));
    if (s < fine.pi.size()) out.pi.push_back(restrict_scalar(fine.pi[s]));
  }
  return out;
}

inline std::vector<DampingRow> damping_table(const Domain& dom, double mu, double eps, int modes) {
  // linearized wave runs, one tracked mode at a time
  std::vector<DampingRow> rows;
  SpectralBasis basis = build_basis(dom, modes, mu);
  int n = dom.is1d() ? 128 : 96;
  Grid g = dom.is1d() ? Grid(dom, n) : Grid(dom, n, n);
  for (int k = 1; k < basis.count(); ++k) {
    const NeumannMode& mode = basis.modes[k];
    const DampingCorrection& corr = basis.corrections[k];
    DampingRow row;
    row.m = mode.m;
    row.n = mode.n;
    row.lambda0 = mode.lambda0;
    row.cls = corr.mode_class;
    row.predicted_rate = -corr.value_plus.real() / std::sqrt(eps);
    row.bulk_rate = bulk_decay_rate(mu, mode.lambda0);
    ScalarField phi0 = mode.sample(g);
    VectorField m0(g);
    double total_guess = row.predicted_rate + row.bulk_rate;
    WaveRunOptions opts;
    opts.steps_per_period = 24;
    SpectralBasis single = build_basis(dom, 1, mu);
    single.modes[1] = mode;
    single.corrections[1] = corr;
    auto res = linearized_wave_run(phi0, m0, eps, mu, 1.2 / total_guess, single, opts);
    const AcousticTrace* tr = nullptr;
    for (auto& t : res.traces)
      if (t.m == mode.m && t.n == mode.n && t.sign == +1) tr = &t;
    std::vector<double> mags;
    for (auto& b : tr->beta) mags.push_back(std::abs(b));
    row.measured_rate = fit_damping_rate(tr->times, mags);
    row.boundary_rate = row.measured_rate - row.bulk_rate;
    row.ratio = (row.predicted_rate > 0) ? row.boundary_rate / row.predicted_rate : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace detail

// Executes the incompressible reference once, each compressible member run,
// the refined reference for the d error floor, and assembles the rate report.
inline SweepResult run_sweep(const SweepConfig& sweep) {
  sweep.validate();
  SweepResult out;
  RateReport& rep = out.report;
  const RunConfig& base = sweep.base;
  rep.kappa = std::min(2.0, base.params.gamma);

  RunConfig inc_cfg = base;
  auto inc_future = std::async(sweep.concurrent ? std::launch::async : std::launch::deferred,
                               [&]() { return run_incompressible(inc_cfg); });

  RunConfig fine_cfg = base;
  fine_cfg.nx *= sweep.refinement_factor;
  if (!base.domain.is1d()) fine_cfg.ny *= sweep.refinement_factor;
  auto fine_future = std::async(sweep.concurrent ? std::launch::async : std::launch::deferred,
                                [&]() { return run_incompressible(fine_cfg); });

  std::vector<std::future<Trajectory>> member_futures;
  for (double eps : sweep.epsilons) {
    RunConfig cfg = base;
    cfg.params.epsilon = eps;
    member_futures.push_back(std::async(sweep.concurrent ? std::launch::async : std::launch::deferred,
                                        [cfg]() { return run_compressible(cfg); }));
  }

  out.reference = inc_future.get();
  out.reference_fine = fine_future.get();
  rep.inc_drift = out.reference.ledger.max_relative_drift();

  Grid g = base.make_grid();
  BandOps ops(g);
  SpectralBasis basis = build_basis(base.domain, base.modes_N, base.params.mu);
  rep.condition_H = check_condition_H(basis).satisfied;

  for (size_t i = 0; i < sweep.epsilons.size(); ++i) {
    Trajectory traj = member_futures[i].get();
    SweepPoint pt;
    pt.eps = sweep.epsilons[i];
    pt.aborted = traj.aborted;
    pt.note = traj.note;
    if (!traj.aborted) {
      double gam = base.params.gamma;
      for (size_t s = 0; s < traj.times.size(); ++s) {
        ScalarField dev = traj.rho[s];
        for (auto& x : dev.v) x -= 1.0;
        pt.rho_lgamma_sup = std::max(pt.rho_lgamma_sup, norm(dev, NormSpec::lp(gam)));
        pt.rho_lkappa_sup = std::max(pt.rho_lkappa_sup, norm(dev, NormSpec::lp(rep.kappa)));
      }
      pt.diff = compare_to_limit(traj, out.reference);
      std::vector<double> q2;
      double tail = 0;
      for (size_t s = 0; s < traj.times.size(); ++s) {
        QSplit qs = q_split(ops, traj.u[s], basis);
        q2.push_back(inner(qs.Q1, qs.Q1));
        tail = std::max(tail, qs.tail_norm);
      }
      pt.q1u_l2l2 = detail::time_l2(traj.times, q2);
      pt.q_tail = tail;
      pt.ledger_drift = traj.ledger.max_relative_drift();
    }
    rep.points.push_back(pt);
    out.members.push_back(std::move(traj));
  }

  // refinement error floor for the d comparison
  Trajectory fine_on_coarse = detail::restrict_to(out.reference_fine, g, sweep.refinement_factor);
  rep.refinement_floor_d = compare_to_limit(fine_on_coarse, out.reference).d_l2h1;

  // rate fits
  std::vector<std::pair<double, double>> pg, pk;
  bool any_abort = false;
  for (auto& pt : rep.points) {
    any_abort |= pt.aborted;
    if (!pt.aborted) {
      pg.push_back({pt.eps, pt.rho_lgamma_sup});
      pk.push_back({pt.eps, pt.rho_lkappa_sup});
    }
  }
  if (pg.size() >= 3) {
    rep.rho_gamma_fit = fit_rate(pg);
    rep.rho_kappa_fit = fit_rate(pk);
    rep.fits_defined = rep.rho_gamma_fit.defined && rep.rho_kappa_fit.defined;
  } else {
    rep.fits_defined = false;
  }

  if (sweep.damping_table) {
    rep.damping_eps = sweep.damping_eps;
    rep.damping = detail::damping_table(base.domain, base.params.mu, sweep.damping_eps,
                                        std::min(base.modes_N, 6));
  }

  // verdicts
  rep.pass_energy = !any_abort && rep.inc_drift <= 0.01;
  for (auto& pt : rep.points) rep.pass_energy = rep.pass_energy && pt.ledger_drift <= 0.01;
  rep.pass_density_slope =
      rep.fits_defined && rep.rho_kappa_fit.slope >= 0.8 && rep.rho_kappa_fit.slope <= 1.2;
  rep.pass_monotone = !any_abort;
  for (size_t i = 1; i < rep.points.size(); ++i) {
    const auto& a = rep.points[i - 1];
    const auto& b = rep.points[i];
    double tol = 1e-12;
    rep.pass_monotone = rep.pass_monotone && b.diff.u_l2l2 <= a.diff.u_l2l2 * (1 + tol) &&
                        b.diff.d_l2h1 <= a.diff.d_l2h1 * (1 + tol) &&
                        b.q1u_l2l2 <= a.q1u_l2l2 * (1 + tol);
  }
  rep.pass_d_floor = !any_abort && !rep.points.empty() &&
                     rep.points.back().diff.d_l2h1 <= 3.0 * rep.refinement_floor_d;
  return out;
}

}  // namespace lmn
