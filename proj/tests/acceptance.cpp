// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Thresholds are fixed here, not configurable.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "lmn/report.hpp"

using namespace lmn;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

template <class Fn>
void criterion(int number, const std::string& name, Fn&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] %2d. %-28s %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", number, name.c_str(),
              out.detail.c_str(), secs);
  std::fflush(stdout);
  if (!out.pass) ++g_failures;
}

ScalarField random_band_scalar(const Grid& g, std::mt19937& rng, int kmax = 6) {
  std::uniform_real_distribution<double> U(-1, 1);
  ScalarField f(g);
  std::vector<double> ax(kmax + 1), ay(kmax + 1);
  for (int m = 0; m <= kmax; ++m)
    for (int n = 0; n <= kmax; ++n) {
      double a = U(rng);
      for (int j = 0; j < g.npy(); ++j)
        for (int i = 0; i < g.npx(); ++i)
          f.at(i, j) += a * std::cos(m * g.x(i)) * std::cos(n * g.y(j));
    }
  return f;
}

VectorField random_band_vector(const Grid& g, std::mt19937& rng, int kmax = 6) {
  VectorField v(g);
  v.x = random_band_scalar(g, rng, kmax);
  v.y = random_band_scalar(g, rng, kmax);
  return v;
}

// shared sweep result for criteria 6-9
SweepResult* g_sweep = nullptr;

Outcome c1_projection_algebra() {
  Grid g(Domain::rectangle(pi, pi), 128);
  BandOps ops(g);
  std::mt19937 rng(2024);
  double worst_idem = 0, worst_orth = 0;
  for (int trial = 0; trial < 20; ++trial) {
    VectorField v = random_band_vector(g, rng);
    VectorField w = random_band_vector(g, rng);
    auto pv = leray_project(ops, v);
    auto pw = leray_project(ops, w);
    auto ppv = leray_project(ops, pv.P);
    worst_idem = std::max(worst_idem, norm_l2(ppv.P - pv.P) / norm_l2(v));
    worst_orth =
        std::max(worst_orth, std::abs(inner(pv.P, pw.Q)) / (norm_l2(v) * norm_l2(w)));
  }
  Outcome o;
  o.pass = worst_idem <= 1e-10 && worst_orth <= 1e-9;
  char buf[160];
  std::snprintf(buf, sizeof buf, "idempotency %.2e (<=1e-10), orthogonality %.2e (<=1e-9)",
                worst_idem, worst_orth);
  o.detail = buf;
  return o;
}

Outcome c2_spectral_correctness() {
  Grid g(Domain::rectangle(pi, pi), 128);
  SpectralBasis basis = build_basis(g.domain, 32);
  std::vector<ScalarField> sampled;
  for (auto& m : basis.modes) sampled.push_back(m.sample(g));
  double gram_dev = 0;
  for (size_t i = 0; i < sampled.size(); ++i)
    for (size_t j = i; j < sampled.size(); ++j)
      gram_dev = std::max(gram_dev,
                          std::abs(inner(sampled[i], sampled[j]) - (i == j ? 1.0 : 0.0)));

  NeumannMode mode = eigenpair(g.domain, 2, 1);
  std::vector<double> errs;
  for (int n : {64, 128, 256}) {
    Grid gr(g.domain, n);
    ScalarField phi = mode.sample(gr);
    ScalarField resid = laplacian(phi, GhostKind::mirror) + mode.lambda2() * phi;
    errs.push_back(norm_l2(resid));
  }
  double o1 = std::log2(errs[0] / errs[1]);
  double o2 = std::log2(errs[1] / errs[2]);
  Outcome o;
  o.pass = gram_dev <= 1e-10 && o1 > 1.9 && o2 > 1.9 && o1 < 2.1 && o2 < 2.1;
  char buf[160];
  std::snprintf(buf, sizeof buf, "gram deviation %.2e (<=1e-10), eigen-residual orders %.3f, %.3f",
                gram_dev, o1, o2);
  o.detail = buf;
  return o;
}

struct DampingMeasurement {
  double raw = 0, boundary = 0, ratio = 0;
};

DampingMeasurement measure_damping(const Domain& dom, int n, double eps, double mu, int spp,
                                   int mode_m) {
  Grid g = dom.is1d() ? Grid(dom, n) : Grid(dom, n, n);
  NeumannMode mode = eigenpair(dom, mode_m, 0);
  DampingCorrection corr = damping_correction(mode, mu);
  double pred = -corr.value_plus.real() / std::sqrt(eps);
  double bulk = bulk_decay_rate(mu, mode.lambda0);
  double total_guess = std::max(pred + bulk, 1e-3);
  SpectralBasis basis = build_basis(dom, 2, mu);
  ScalarField phi0 = mode.sample(g);
  VectorField m0(g);
  WaveRunOptions opts;
  opts.steps_per_period = spp;
  auto res = linearized_wave_run(phi0, m0, eps, mu, 1.6 / total_guess, basis, opts);
  const AcousticTrace* tr = nullptr;
  for (auto& t : res.traces)
    if (t.m == mode_m && t.n == 0 && t.sign == +1) tr = &t;
  std::vector<double> mags;
  for (auto& b : tr->beta) mags.push_back(std::abs(b));
  DampingMeasurement out;
  out.raw = fit_damping_rate(tr->times, mags);
  out.boundary = out.raw - bulk;
  out.ratio = pred > 0 ? out.boundary / pred : 0.0;
  return out;
}

Outcome c3_damping_constant() {
  Domain dom = Domain::rectangle(pi, pi);
  struct Case {
    double eps;
    int n, spp;
  };
  std::vector<Case> cases{{0.04, 96, 48}, {0.01, 128, 32}, {0.0025, 160, 24}};
  std::vector<double> boundary;
  bool pass = true;
  std::string detail = "boundary/predicted:";
  for (auto& c : cases) {
    DampingMeasurement m = measure_damping(dom, c.n, c.eps, 1.0, c.spp, 1);
    boundary.push_back(m.boundary);
    char buf[64];
    std::snprintf(buf, sizeof buf, " %.3f", m.ratio);
    detail += buf;
    pass = pass && m.ratio >= 0.7 && m.ratio <= 1.3;
  }
  for (size_t i = 1; i < boundary.size(); ++i) {
    double ratio = boundary[i] / boundary[i - 1];  // eps vs 4 eps
    char buf[64];
    std::snprintf(buf, sizeof buf, "; rate(eps)/rate(4eps) %.3f", ratio);
    detail += buf;
    pass = pass && ratio >= 1.6 && ratio <= 2.4;
  }
  return {pass, detail + " (bands [0.7,1.3], [1.6,2.4])"};
}

Outcome c4_jmode_non_damping() {
  Domain dom = Domain::slab(pi);
  std::vector<double> rates;
  for (double eps : {0.04, 0.01, 0.0025})
    rates.push_back(measure_damping(dom, 128, eps, 1.0, 24, 1).raw);
  double lo = *std::min_element(rates.begin(), rates.end());
  double hi = *std::max_element(rates.begin(), rates.end());
  char buf[160];
  std::snprintf(buf, sizeof buf, "raw rates %.4f / %.4f / %.4f, spread %.3fx (<2x)", rates[0],
                rates[1], rates[2], hi / lo);
  return {hi / lo < 2.0, buf};
}

Outcome c5_riemann_lebesgue() {
  std::vector<double> times;
  std::vector<complexd> one, bk, bl;
  int N = 4000;
  for (int i = 0; i <= N; ++i) {
    double t = double(i) / N;
    times.push_back(t);
    one.push_back(1.0);
    bk.push_back(complexd(std::exp(-t), 0.1 * t));
    bl.push_back(complexd(std::cos(2 * t), -0.2));
  }
  // closed form: |int_0^1 e^{10 i t} dt| = 2 |sin 5| / 10 = 0.19178...
  std::vector<double> t2{0.0, 0.5, 1.0};
  std::vector<complexd> o2{1.0, 1.0, 1.0};
  double closed = std::abs(oscillation_integral(t2, o2, o2, 1.0, 0.1));
  double expect = 0.2 * std::abs(std::sin(5.0));
  bool pass = std::abs(closed - expect) <= 1e-6;

  double cmin = 1e300, cmax = 0;
  for (double eps : {0.08, 0.04, 0.02, 0.01}) {
    double val = std::abs(oscillation_integral(times, bk, bl, 1.7, eps));
    cmin = std::min(cmin, val / eps);
    cmax = std::max(cmax, val / eps);
  }
  pass = pass && (cmax / cmin < 2.0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "closed form %.8f vs %.8f, |I|/eps spread %.3fx (<2x)", closed,
                expect, cmax / cmin);
  return {pass, buf};
}

Outcome c6_energy_inequality() {
  const RateReport& r = g_sweep->report;
  double worst = r.inc_drift;
  for (auto& p : r.points) worst = std::max(worst, p.ledger_drift);
  char buf[120];
  std::snprintf(buf, sizeof buf, "worst ledger drift %.2e (<=1e-2)", worst);
  return {r.pass_energy && worst <= 0.01, buf};
}

Outcome c7_density_rate() {
  const RateReport& r = g_sweep->report;
  char buf[120];
  std::snprintf(buf, sizeof buf, "slope %.4f in [0.8,1.2], corr %.4f", r.rho_kappa_fit.slope,
                r.rho_kappa_fit.correlation);
  return {r.pass_density_slope, buf};
}

Outcome c8_limit_convergence() {
  const RateReport& r = g_sweep->report;
  char buf[160];
  std::snprintf(buf, sizeof buf, "monotone %s; final d diff %.3e <= 3 x floor %.3e",
                r.pass_monotone ? "yes" : "no", r.points.back().diff.d_l2h1,
                r.refinement_floor_d);
  return {r.pass_monotone && r.pass_d_floor, buf};
}

Outcome c9_invariants() {
  bool pass = true;
  std::string detail;

  // mass conservation along the finest sweep member
  const Trajectory& traj = g_sweep->members.back();
  double m0 = integrate(traj.rho.front());
  double mass_dev = 0;
  for (auto& rho : traj.rho) mass_dev = std::max(mass_dev, std::abs(integrate(rho) / m0 - 1.0));
  pass = pass && mass_dev <= 1e-12;

  // director maximum principle on every stored trajectory
  double bound = std::max(1.0, norm_linf(traj.d.front())) + 1e-8;
  double dmax = 0;
  for (auto& d : traj.d) dmax = std::max(dmax, norm_linf(d));
  pass = pass && dmax <= bound;

  // beta identity on random band-limited states
  Grid g(Domain::rectangle(pi, pi), 64);
  BandOps ops(g);
  SpectralBasis basis = build_basis(g.domain, 8);
  std::mt19937 rng(7);
  double beta_dev = 0;
  for (int trial = 0; trial < 5; ++trial) {
    WaveState w;
    w.phi = random_band_scalar(g, rng, 4);
    w.m = random_band_vector(g, rng, 4);
    auto parts = leray_project(ops, w.m);
    auto amps = mode_amplitudes(ops, w, basis);
    for (auto& a : amps) {
      VectorField gk = eigenpair(g.domain, a.m, a.n).sample_gradient_unit(g);
      complexd lhs = 2.0 * complexd(0.0, inner(parts.Q, gk));
      beta_dev = std::max(beta_dev, std::abs(lhs - (a.beta_plus - a.beta_minus)));
    }
  }
  pass = pass && beta_dev <= 1e-10;

  // duhamel vs direct integration
  double duh_dev = 0;
  {
    std::mt19937 r2(3);
    std::uniform_real_distribution<double> U(-1, 1);
    double eps = 0.5;
    complexd ilam(-0.4, 1.3);
    std::vector<double> times;
    std::vector<complexd> c;
    for (int i = 0; i <= 30; ++i) {
      times.push_back(0.02 * i);
      c.push_back(complexd(U(r2), U(r2)));
    }
    auto b = duhamel_solve(complexd(0.3, -0.1), ilam, c, eps, times);
    complexd z = std::conj(ilam) / eps;
    complexd y = complexd(0.3, -0.1);
    const int sub = 4000;
    for (size_t i = 1; i < times.size(); ++i) {
      double h = (times[i] - times[i - 1]) / sub;
      for (int s = 0; s < sub; ++s) {
        double tau0 = s * h;
        auto cf = [&](double tau) {
          double wgt = tau / (times[i] - times[i - 1]);
          return c[i - 1] * (1.0 - wgt) + c[i] * wgt;
        };
        complexd k1 = z * y + cf(tau0);
        complexd k2 = z * (y + 0.5 * h * k1) + cf(tau0 + 0.5 * h);
        complexd k3 = z * (y + 0.5 * h * k2) + cf(tau0 + 0.5 * h);
        complexd k4 = z * (y + h * k3) + cf(tau0 + h);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      duh_dev = std::max(duh_dev, std::abs(y - b[i]));
    }
    pass = pass && duh_dev <= 1e-8;
  }

  // penalty force gradient check at random directors
  double pen_dev = 0;
  {
    std::mt19937 r3(11);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    Grid gs(Domain::rectangle(pi, pi), 8);
    double sigma0 = 0.2;
    for (int trial = 0; trial < 40; ++trial) {
      std::array<double, 3> dv{U(r3), U(r3), U(r3)};
      auto make = [&](const std::array<double, 3>& val) {
        return DirectorField::sample(gs, [&](double, double) { return val; });
      };
      auto pf = penalty(make(dv), sigma0);
      double h = 1e-6;
      for (int a = 0; a < 3; ++a) {
        auto dp = dv, dm = dv;
        dp[a] += h;
        dm[a] -= h;
        double fd = (penalty(make(dp), sigma0).F.v[0] - penalty(make(dm), sigma0).F.v[0]) / (2 * h);
        double f = pf.f.comp(a).v[0];
        pen_dev = std::max(pen_dev, std::abs(f - fd) / (1.0 + std::abs(f)));
      }
    }
    pass = pass && pen_dev <= 1e-6;
  }

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "mass %.1e (<=1e-12); |d| %.6f (<=%.6f); beta %.1e (<=1e-10); duhamel %.1e "
                "(<=1e-8); penalty %.1e (<=1e-6)",
                mass_dev, dmax, bound, beta_dev, duh_dev, pen_dev);
  return {pass, buf};
}

Outcome c10_determinism() {
  SweepConfig sw = default_sweep_config();
  sw.base.nx = sw.base.ny = 32;
  sw.base.T = 0.1;
  sw.base.modes_N = 6;
  sw.epsilons = {0.2, 0.1};
  sw.damping_table = false;
  auto render = [&]() {
    SweepResult res = run_sweep(sw);
    return io::rate_report_json(res.report).dump() + io::norms_csv(res.report);
  };
  std::string a = render();
  std::string b = render();
  char buf[120];
  std::snprintf(buf, sizeof buf, "repeated sweep reports %s (%zu bytes)",
                a == b ? "bitwise identical" : "DIFFER", a.size());
  return {a == b, buf};
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");

  criterion(1, "projection algebra", c1_projection_algebra);
  criterion(2, "spectral correctness", c2_spectral_correctness);
  criterion(3, "damping constant", c3_damping_constant);
  criterion(4, "J-mode non-damping", c4_jmode_non_damping);
  criterion(5, "riemann-lebesgue", c5_riemann_lebesgue);

  SweepConfig sw = default_sweep_config();
  sw.damping_table = false;
  std::printf("... running the default sweep (64^2, T = 0.5, eps {0.2, 0.1, 0.05, 0.025})\n");
  std::fflush(stdout);
  SweepResult sweep_result = run_sweep(sw);
  g_sweep = &sweep_result;

  criterion(6, "energy inequality", c6_energy_inequality);
  criterion(7, "density rate", c7_density_rate);
  criterion(8, "limit convergence", c8_limit_convergence);
  criterion(9, "invariant suite", c9_invariants);
  criterion(10, "determinism", c10_determinism);

  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures;
}
