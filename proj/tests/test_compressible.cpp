#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lmn/compressible.hpp"

using namespace lmn;

namespace {

RunConfig base_config(int n = 32) {
  RunConfig c;
  c.domain = Domain::rectangle(pi, pi);
  c.nx = c.ny = n;
  c.params.gamma = 2.0;
  c.params.epsilon = 0.1;
  c.params.mu = 1.0;
  c.params.lambda = 1.0;
  c.params.theta = 1.0;
  c.params.sigma0 = 0.2;
  c.T = 0.05;
  c.dt = 2e-3;
  c.output_stride = 5;
  c.modes_N = 8;
  return c;
}

CompressibleState equilibrium_state(const Grid& g) {
  CompressibleState s;
  s.t = 0;
  s.rho = ScalarField(g, 1.0);
  s.u = VectorField(g);
  s.d = DirectorField::sample(g, [](double, double) { return std::array<double, 3>{0, 0, 1}; });
  return s;
}

}  // namespace

TEST_CASE("equilibrium is a fixed point to round-off") {
  RunConfig cfg = base_config();
  Grid g = cfg.make_grid();
  CompressibleSolver solver(g, cfg.params, cfg.filter_sigma, cfg.theta_acoustic);
  CompressibleState s = equilibrium_state(g);
  CompressibleState s1 = solver.step(s, 2e-3);
  ScalarField drho = s1.rho - s.rho;
  CHECK(norm(drho, NormSpec::linf()) < 1e-12);
  CHECK(norm(s1.u, NormSpec::linf()) < 1e-12);
  ScalarField dd = s1.d.c3 - s.d.c3;
  CHECK(norm(dd, NormSpec::linf()) < 1e-12);
}

TEST_CASE("mass is conserved to round-off for every step") {
  RunConfig cfg = base_config();
  cfg.init_profile = "bubble";
  cfg.init_amplitude = 0.2;
  Grid g = cfg.make_grid();
  CompressibleSolver solver(g, cfg.params, cfg.filter_sigma, cfg.theta_acoustic);
  InitialState init = make_initial_state(cfg);
  CompressibleState s{0.0, init.rho, init.u, init.d};
  double m0 = integrate(s.rho);
  for (int n = 0; n < 10; ++n) {
    s = solver.step(s, 1.5e-3);
    CHECK(std::abs(integrate(s.rho) / m0 - 1.0) < 1e-12);
  }
}

TEST_CASE("acoustic mode amplitude matches the Duhamel modal oracle") {
  // small-amplitude single acoustic mode; after one full period the
  // gamma-anisotropy factor returns to one and |beta| compares directly
  RunConfig cfg = base_config(128);
  cfg.params.epsilon = 0.01;
  cfg.init_profile = "acoustic:1,0";
  cfg.init_amplitude = 0.01;
  cfg.filter_sigma = 0.0;
  Grid g = cfg.make_grid();
  CompressibleSolver solver(g, cfg.params, cfg.filter_sigma, cfg.theta_acoustic);
  BandOps ops(g);
  SpectralBasis basis = build_basis(cfg.domain, 2, cfg.params.mu);

  InitialState init = make_initial_state(cfg);
  CompressibleState s{0.0, init.rho, init.u, init.d};

  double gamma = cfg.params.gamma, eps = cfg.params.epsilon, mu = cfg.params.mu;
  NeumannMode m10 = eigenpair(cfg.domain, 1, 0);
  double period = 2.0 * pi * eps / (std::sqrt(gamma) * m10.lambda0);
  int steps = 64;
  double dt = period / steps;

  auto beta_of = [&](const CompressibleState& st) {
    WaveState w{density_fluctuation(st.rho, eps), VectorField(g), eps};
    for (long k = 0; k < w.m.x.size(); ++k) {
      w.m.x.v[k] = st.rho.v[k] * st.u.x.v[k];
      w.m.y.v[k] = st.rho.v[k] * st.u.y.v[k];
    }
    auto amps = mode_amplitudes(ops, w, basis);
    for (auto& a : amps)
      if (a.m == 1 && a.n == 0) return a.beta_plus;
    return complexd(0);
  };

  complexd b0 = beta_of(s);
  for (int n = 0; n < steps; ++n) s = solver.step(s, dt);
  complexd b1 = beta_of(s);

  // zeroth-order prediction in symmetrized (unit-speed) variables:
  // eps_tilde = eps/sqrt(gamma); the analytic eigenvalue carries the
  // boundary-layer sqrt(eps) term and the interior viscous eps term
  double eps_t = eps / std::sqrt(gamma);
  DampingCorrection corr = damping_correction(m10, mu);
  complexd ilam = complexd(0, m10.lambda0) + std::sqrt(eps_t) * corr.value_plus -
                  eps_t * bulk_decay_rate(mu, m10.lambda0);
  std::vector<double> times{0.0, period};
  std::vector<complexd> czero{0.0, 0.0};
  auto pred = duhamel_solve(std::abs(b0), ilam, czero, eps_t, times);
  CHECK(std::abs(b1) == doctest::Approx(std::abs(pred.back())).epsilon(0.05));
}

TEST_CASE("epsilon robustness: fixed dt across a 16x Mach range") {
  for (double eps : {0.2, 0.0125}) {
    RunConfig cfg = base_config(24);
    cfg.params.epsilon = eps;
    cfg.init_profile = "bubble";
    cfg.T = 0.02;
    cfg.dt = 2e-3;
    Trajectory t = run_compressible(cfg);
    CHECK_FALSE(t.aborted);
    CHECK(t.times.back() >= cfg.T - 1e-9);
  }
}

TEST_CASE("director maximum principle along a run") {
  RunConfig cfg = base_config(32);
  cfg.init_profile = "bubble";
  cfg.T = 0.05;
  Trajectory t = run_compressible(cfg);
  REQUIRE_FALSE(t.aborted);
  double bound = std::max(1.0, norm_linf(t.d.front())) + 1e-8;
  for (auto& d : t.d) CHECK(norm_linf(d) <= bound);
}

TEST_CASE("energy ledger stays nonincreasing within tolerance") {
  RunConfig cfg = base_config(32);
  cfg.init_profile = "bubble";
  cfg.T = 0.1;
  cfg.output_stride = 2;
  Trajectory t = run_compressible(cfg);
  REQUIRE_FALSE(t.aborted);
  CHECK(t.ledger.max_relative_drift() < 0.01);
}

TEST_CASE("velocity split: indicator cases") {
  Grid g(Domain::rectangle(pi, pi), 32);
  VectorField u(g);
  for (auto& x : u.x.v) x = 0.7;
  ScalarField rho1(g, 1.0);
  auto s1 = velocity_split(rho1, u);
  CHECK(norm_l2(s1.u2) == 0.0);
  CHECK(norm_l2(s1.u1 - u) == 0.0);

  ScalarField rho2(g, 2.0);
  auto s2 = velocity_split(rho2, u);
  CHECK(norm_l2(s2.u1) == 0.0);
  CHECK(norm_l2(s2.u2 - u) == 0.0);

  // rho = 1 + 0.6 cos x crosses the 1/2 threshold; masses add up exactly
  ScalarField rho3 = ScalarField::sample(g, [](double x, double) { return 1.0 + 0.6 * std::cos(x); });
  auto s3 = velocity_split(rho3, u);
  double total = inner(u, u);
  CHECK(inner(s3.u1, s3.u1) + inner(s3.u2, s3.u2) == doctest::Approx(total).epsilon(1e-12));
  CHECK(inner(s3.u1, s3.u1) > 0.0);
  CHECK(inner(s3.u2, s3.u2) > 0.0);
  VectorField sum = s3.u1 + s3.u2;
  sum -= u;
  CHECK(norm_l2(sum) == 0.0);
}

TEST_CASE("negative density input is rejected") {
  RunConfig cfg = base_config();
  Grid g = cfg.make_grid();
  CompressibleSolver solver(g, cfg.params, cfg.filter_sigma, cfg.theta_acoustic);
  CompressibleState s = equilibrium_state(g);
  for (auto& r : s.rho.v) r = -0.5;
  CHECK_THROWS_AS(solver.step(s, 1e-3), NumericalAbort);
}

TEST_CASE("CFL violation is rejected") {
  RunConfig cfg = base_config();
  Grid g = cfg.make_grid();
  CompressibleSolver solver(g, cfg.params, cfg.filter_sigma, cfg.theta_acoustic);
  CompressibleState s = equilibrium_state(g);
  for (auto& x : s.u.x.v) x = 1.0;
  zero_boundary(s.u);
  CHECK_THROWS_AS(solver.step(s, 1.0), NumericalAbort);
}

TEST_CASE("equilibrium run emits identical ledger rows") {
  RunConfig cfg = base_config(24);
  cfg.init_profile = "equilibrium";
  cfg.T = 0.02;
  Trajectory t = run_compressible(cfg);
  REQUIRE_FALSE(t.aborted);
  for (auto& row : t.ledger.rows()) {
    CHECK(row.total() == doctest::Approx(t.ledger.rows().front().total()).epsilon(1e-12));
    CHECK(row.total_plus_dissipation() < 1e-12);
  }
}

TEST_CASE("sweep members share eps-independent initial velocity and director") {
  RunConfig a = base_config(24), b = base_config(24);
  a.init_profile = b.init_profile = "bubble";
  a.params.epsilon = 0.2;
  b.params.epsilon = 0.025;
  InitialState ia = make_initial_state(a), ib = make_initial_state(b);
  VectorField du = ia.u;
  du -= ib.u;
  CHECK(norm_l2(du) == 0.0);
  for (int k = 0; k < 3; ++k) {
    ScalarField dd = ia.d.comp(k) - ib.d.comp(k);
    CHECK(norm(dd, NormSpec::linf()) == 0.0);
  }
  // rho = 1 + eps * phi with the same fixed profile
  ScalarField fa = density_fluctuation(ia.rho, a.params.epsilon);
  ScalarField fb = density_fluctuation(ib.rho, b.params.epsilon);
  CHECK(norm_l2(fa - fb) < 1e-12);
}

TEST_CASE("refinement study: self-convergence at first order or better") {
  auto final_u = [&](int n) {
    RunConfig cfg = base_config(n);
    cfg.init_profile = "bubble";
    cfg.init_amplitude = 0.05;
    cfg.T = 0.04;
    cfg.dt = 1e-3;
    cfg.output_stride = 1000000;  // record initial and final only
    Trajectory t = run_compressible(cfg);
    REQUIRE_FALSE(t.aborted);
    return t.u.back();
  };
  VectorField u32 = final_u(32), u64 = final_u(64), u128 = final_u(128);
  auto restrict2 = [](const VectorField& fine, const Grid& coarse) {
    VectorField out(coarse);
    for (int j = 0; j < coarse.npy(); ++j)
      for (int i = 0; i < coarse.npx(); ++i) {
        out.x.at(i, j) = fine.x.at(2 * i, 2 * j);
        out.y.at(i, j) = fine.y.at(2 * i, 2 * j);
      }
    return out;
  };
  VectorField d1 = u32;
  d1 -= restrict2(u64, u32.grid());
  VectorField d2 = u64;
  d2 -= restrict2(u128, u64.grid());
  double e1 = norm_l2(d1), e2 = norm_l2(d2);
  double order = std::log2(e1 / e2);
  CHECK(order >= 1.0);
}
