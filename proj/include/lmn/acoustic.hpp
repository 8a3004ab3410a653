#pragma once

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <vector>

#include "lmn/leray.hpp"
#include "lmn/model.hpp"
#include "lmn/spectral.hpp"

namespace lmn {

using complexd = std::complex<double>;

// stacked acoustic state (density fluctuation, momentum)
struct WaveState {
  ScalarField phi;
  VectorField m;
  double epsilon = 0.1;
};

// L(phi, m) = (div m, grad phi); the viscous variant adds eps*(0, mu Lap m)
template <class T>
struct WavePair {
  FieldT<T> phi;
  VectorFieldT<T> m;
};

template <class T>
WavePair<T> apply_wave_operator(const FieldT<T>& phi, const VectorFieldT<T>& m, bool viscous,
                                double mu, double epsilon) {
  WavePair<T> out;
  out.phi = divergence_sbp(m);
  out.m = gradient_sbp(phi);
  if (viscous) {
    VectorFieldT<T> lap = laplacian(m, GhostKind::mirror);
    lap *= T(epsilon * mu);
    out.m += lap;
  }
  return out;
}

inline WaveState apply_wave_operator(const WaveState& w, bool viscous, double mu) {
  auto r = apply_wave_operator(w.phi, w.m, viscous, mu, w.epsilon);
  return WaveState{std::move(r.phi), std::move(r.m), w.epsilon};
}

// ---------------------------------------------------------------------------
// exponential integrator kernels, with w = z h:
//   int_0^h e^{z s} ds   = h   * phi1(w),  phi1(w) = (e^w - 1)/w
//   int_0^h s e^{z s} ds = h^2 * psi2(w),  psi2(w) = (e^w (w-1) + 1)/w^2
// series branch near w = 0 where the closed forms cancel
namespace detail {

inline complexd phi1(complexd w) {
  if (std::abs(w) < 1e-4) {
    // 1 + w/2 + w^2/6 + w^3/24
    return 1.0 + w * (0.5 + w * (1.0 / 6.0 + w / 24.0));
  }
  return (std::exp(w) - 1.0) / w;
}

inline complexd psi2(complexd w) {
  if (std::abs(w) < 1e-3) {
    // 1/2 + w/3 + w^2/8 + w^3/30
    return 0.5 + w * (1.0 / 3.0 + w * (0.125 + w / 30.0));
  }
  return (std::exp(w) * (w - 1.0) + 1.0) / (w * w);
}

}  // namespace detail

// Variation-of-constants solution of b' = conj(i lambda_eps)/eps * b + c(t)
// with c piecewise linear between samples; exact per interval.
inline std::vector<complexd> duhamel_solve(complexd b0, complexd i_lambda_eps,
                                           const std::vector<complexd>& c, double epsilon,
                                           const std::vector<double>& times) {
  if (i_lambda_eps.real() > 1e-12)
    throw std::invalid_argument("duhamel_solve: Re(i lambda) > 0 (unstable mode)");
  if (times.size() < 1 || c.size() != times.size())
    throw std::invalid_argument("duhamel_solve: times and forcing must align");
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("duhamel_solve: times must increase");

  complexd z = std::conj(i_lambda_eps) / epsilon;
  std::vector<complexd> b(times.size());
  b[0] = b0;
  for (size_t i = 1; i < times.size(); ++i) {
    double h = times[i] - times[i - 1];
    complexd w = z * h;
    // int_0^h e^{z(h-s)} c(s) ds with c linear: substitute sigma = h - s
    complexd dc = c[i] - c[i - 1];
    complexd integral = h * (c[i] * detail::phi1(w) - dc * detail::psi2(w));
    b[i] = std::exp(w) * b[i - 1] + integral;
  }
  return b;
}

// Filon-type quadrature of int_0^T e^{i dlambda t / eps} bk(t) bl(t) dt with
// the product piecewise linear between samples and the oscillation integrated
// exactly.
inline complexd oscillation_integral(const std::vector<double>& times,
                                     const std::vector<complexd>& bk,
                                     const std::vector<complexd>& bl, double dlambda,
                                     double epsilon) {
  if (dlambda == 0.0)
    throw std::invalid_argument("oscillation_integral: dlambda = 0 is the gradient case");
  if (bk.size() != times.size() || bl.size() != times.size() || times.size() < 2)
    throw std::invalid_argument("oscillation_integral: misaligned sample grids");
  const complexd iw(0.0, dlambda / epsilon);
  complexd total = 0;
  for (size_t i = 1; i < times.size(); ++i) {
    double h = times[i] - times[i - 1];
    complexd w = iw * h;
    complexd p0 = bk[i - 1] * bl[i - 1];
    complexd dp = bk[i] * bl[i] - p0;
    // int_0^h e^{iw s}(p0 + dp s/h) ds
    complexd part = h * (p0 * detail::phi1(w) + dp * detail::psi2(w));
    total += std::exp(iw * times[i - 1]) * part;
  }
  return total;
}

// ---------------------------------------------------------------------------

struct ModeAmplitude {
  int m = 0, n = 0;
  double lambda0 = 0;
  complexd beta_plus, beta_minus;  // (phi_eps, phi_k0^+-)
};

// beta^+- = <phi, Phi_k> +- i <m, grad Phi_k / lambda_k>
inline std::vector<ModeAmplitude> mode_amplitudes(const BandOps& ops, const WaveState& w,
                                                  const SpectralBasis& basis) {
  Coef2D ph = ops.scalar_coeffs(w.phi);
  Coef2D q = ops.gradient_coeffs(w.m);
  std::vector<ModeAmplitude> out;
  for (int k = 0; k < basis.count(); ++k) {
    const NeumannMode& mode = basis.modes[k];
    if (mode.is_constant()) continue;
    ModeAmplitude a;
    a.m = mode.m;
    a.n = mode.n;
    a.lambda0 = mode.lambda0;
    double c = ph.at(mode.m, mode.n);
    double g = q.at(mode.m, mode.n);
    a.beta_plus = complexd(c, g);
    a.beta_minus = complexd(c, -g);
    out.push_back(a);
  }
  return out;
}

struct ModeForcing {
  int m = 0, n = 0;
  double lambda0 = 0;
  complexd c_plus, c_minus;  // (g_eps, m_k0^+-)
};

// Nonlinear acoustic forcing g_eps = -div(rho u (x) u) - grad(pi_rem)
// - lambda div(grad d (x) grad d), with the pressure remainder
// (rho^gamma - 1 - gamma(rho-1))/eps^2 replacing rho^gamma/eps^2 so the linear
// pressure gradient lives only in the wave operator.
inline VectorField acoustic_forcing_field(const ScalarField& rho, const VectorField& u,
                                          const DirectorField& d, const ModelParams& p) {
  const Grid& g = rho.grid;
  const bool two_d = !g.is1d();
  // momentum flux rho u (x) u
  SymTensorField R(g);
  for (long k = 0; k < R.xx.size(); ++k) {
    double r = rho.v[k];
    R.xx.v[k] = r * u.x.v[k] * u.x.v[k];
    if (two_d) {
      R.xy.v[k] = r * u.x.v[k] * u.y.v[k];
      R.yy.v[k] = r * u.y.v[k] * u.y.v[k];
    }
  }
  VectorField out = tensor_divergence(R);
  out *= -1.0;

  // pressure remainder and elastic isotropic parts
  ScalarField pi_rem(g);
  SymTensorField t = distortion_tensor(d);
  ScalarField F = penalty(d, p.sigma0).F;
  double ie2 = 1.0 / (p.epsilon * p.epsilon);
  for (long k = 0; k < pi_rem.size(); ++k) {
    double r = rho.v[k];
    double grad2 = t.xx.v[k] + (two_d ? t.yy.v[k] : 0.0);
    pi_rem.v[k] = (std::pow(r, p.gamma) - 1.0 - p.gamma * (r - 1.0)) * ie2 -
                  0.5 * p.lambda * grad2 - p.lambda * F.v[k];
  }
  VectorField gp = gradient_sbp(pi_rem);
  out -= gp;

  VectorField el = tensor_divergence(t);
  el *= p.lambda;
  out -= el;
  return out;
}

inline std::vector<ModeForcing> acoustic_forcing(const BandOps& ops, const ScalarField& rho,
                                                 const VectorField& u, const DirectorField& d,
                                                 const ModelParams& p, const SpectralBasis& basis) {
  VectorField gf = acoustic_forcing_field(rho, u, d, p);
  Coef2D q = ops.gradient_coeffs(gf);
  std::vector<ModeForcing> out;
  for (int k = 0; k < basis.count(); ++k) {
    const NeumannMode& mode = basis.modes[k];
    if (mode.is_constant()) continue;
    ModeForcing f;
    f.m = mode.m;
    f.n = mode.n;
    f.lambda0 = mode.lambda0;
    double ghat = q.at(mode.m, mode.n);
    f.c_plus = complexd(0.0, ghat);
    f.c_minus = complexd(0.0, -ghat);
    out.push_back(f);
  }
  return out;
}

// time series of one mode's complex amplitudes
struct AcousticTrace {
  int m = 0, n = 0;
  int sign = +1;
  double lambda0 = 0;
  std::vector<double> times;
  std::vector<complexd> b;     // zeroth-order amplitude (= beta here)
  std::vector<complexd> beta;  // projection on the inviscid eigenvector
  std::vector<complexd> c;     // forcing projection
  double gap_bound = 0;        // recorded |b - beta| bound, not asserted
};

// ---------------------------------------------------------------------------
// Q1/Q2 split of the gradient part by damping class

struct QSplit {
  VectorField Q1, Q2;
  double tail_norm = 0;  // gradient energy beyond the basis truncation
};

inline QSplit q_split(const BandOps& ops, const VectorField& u, const SpectralBasis& basis) {
  Coef2D q = ops.gradient_coeffs(u);
  Coef2D q1(q.nm, q.nn), q2(q.nm, q.nn);
  double total2 = 0;
  for (int n = 0; n < q.nn; ++n)
    for (int m = 0; m < q.nm; ++m) total2 += q.at(m, n) * q.at(m, n);
  double retained2 = 0;
  for (int k = 0; k < basis.count(); ++k) {
    const NeumannMode& mode = basis.modes[k];
    if (mode.is_constant()) continue;
    double val = q.at(mode.m, mode.n);
    retained2 += val * val;
    if (basis.corrections[k].mode_class == ModeClass::damped)
      q1.at(mode.m, mode.n) = val;
    else
      q2.at(mode.m, mode.n) = val;
  }
  QSplit out;
  out.Q1 = ops.gradient_reconstruct(q1);
  out.Q2 = ops.gradient_reconstruct(q2);
  out.tail_norm = std::sqrt(std::max(0.0, total2 - retained2));
  return out;
}

// ---------------------------------------------------------------------------
// damping-rate fit: least-squares slope of log|b| over the envelope peaks

inline double fit_damping_rate(const std::vector<double>& times, const std::vector<double>& mags) {
  if (times.size() != mags.size() || times.size() < 10)
    throw std::invalid_argument("fit_damping_rate: need at least 10 aligned samples");
  for (double v : mags)
    if (!(v > 0)) throw std::invalid_argument("fit_damping_rate: magnitudes must be positive");

  std::vector<double> ts, ys;
  for (size_t i = 1; i + 1 < mags.size(); ++i)
    if (mags[i] > mags[i - 1] && mags[i] >= mags[i + 1]) {
      ts.push_back(times[i]);
      ys.push_back(std::log(mags[i]));
    }
  if (ts.size() < 3) {
    ts.assign(times.begin(), times.end());
    ys.clear();
    for (double v : mags) ys.push_back(std::log(v));
  }
  double n = double(ts.size()), st = 0, sy = 0, stt = 0, sty = 0;
  for (size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sy += ys[i];
    stt += ts[i] * ts[i];
    sty += ts[i] * ys[i];
  }
  double denom = n * stt - st * st;
  if (denom == 0) return 0.0;
  double slope = (n * sty - st * sy) / denom;
  return -slope;  // positive = decay
}

// ---------------------------------------------------------------------------
// Linearized dissipative wave run:
//   d phi/dt = -div m / eps,  d m/dt = -grad phi / eps + mu Lap m,  m|bdry = 0.
// Strang splitting of the exact modal rotation (unitary on the band) with the
// exact FD Dirichlet heat substep. Unconditionally stable; exactly energy
// conserving when mu = 0.

struct WaveRunOptions {
  double dt = 0;              // 0: choose from steps_per_period
  int steps_per_period = 24;  // of the fastest initially-active mode
  int record_stride = 1;
  double T = 1.0;
};

struct WaveRunResult {
  WaveState final_state;
  std::vector<AcousticTrace> traces;  // per retained nonconstant mode, + then -
  std::vector<double> energy_times;
  std::vector<double> energy;  // (|phi|^2 + |m|^2)/2
  double dt = 0;
  long steps = 0;
};

class LinearWaveSolver {
 public:
  LinearWaveSolver(const Grid& g, double epsilon, double mu)
      : ops_(g), sp_(g), eps_(epsilon), mu_(mu) {}

  WaveRunResult run(const ScalarField& phi0, const VectorField& m0, const SpectralBasis& basis,
                    const WaveRunOptions& opts) {
    WaveState w{phi0, m0, eps_};

    Coef2D ph = ops_.scalar_coeffs(w.phi);
    Coef2D q = ops_.gradient_coeffs(w.m);

    // fastest active mode sets the resolved period
    double lam_ref = 0;
    double scale = 0;
    for (int n = 0; n < ph.nn; ++n)
      for (int m = 0; m < ph.nm; ++m)
        scale = std::max({scale, std::abs(ph.at(m, n)), std::abs(q.at(m, n))});
    for (int n = 0; n < ph.nn; ++n)
      for (int m = 0; m < ph.nm; ++m) {
        if (m == 0 && n == 0) continue;
        if (std::abs(ph.at(m, n)) > 1e-10 * scale || std::abs(q.at(m, n)) > 1e-10 * scale)
          lam_ref = std::max(lam_ref, std::sqrt(ops_.lambda2(m, n)));
      }
    if (lam_ref == 0) lam_ref = 1.0;

    double dt = opts.dt > 0 ? opts.dt : 2.0 * pi * eps_ / (lam_ref * opts.steps_per_period);
    long steps = std::max<long>(1, long(std::ceil(opts.T / dt - 1e-12)));
    dt = opts.T / steps;

    WaveRunResult res;
    res.dt = dt;
    res.steps = steps;
    for (int k = 0; k < basis.count(); ++k) {
      if (basis.modes[k].is_constant()) continue;
      for (int sign : {+1, -1}) {
        AcousticTrace tr;
        tr.m = basis.modes[k].m;
        tr.n = basis.modes[k].n;
        tr.sign = sign;
        tr.lambda0 = basis.modes[k].lambda0;
        res.traces.push_back(tr);
      }
    }

    auto record = [&](double t) {
      Coef2D phc = ops_.scalar_coeffs(w.phi);
      Coef2D qc = ops_.gradient_coeffs(w.m);
      size_t idx = 0;
      for (int k = 0; k < basis.count(); ++k) {
        const NeumannMode& mode = basis.modes[k];
        if (mode.is_constant()) continue;
        double a = phc.at(mode.m, mode.n), b = qc.at(mode.m, mode.n);
        for (int sign : {+1, -1}) {
          AcousticTrace& tr = res.traces[idx++];
          tr.times.push_back(t);
          complexd beta(a, sign * b);
          tr.beta.push_back(beta);
          tr.b.push_back(beta);
          tr.c.push_back(0.0);
        }
      }
      res.energy_times.push_back(t);
      double e = 0.5 * (inner(w.phi, w.phi) + inner(w.m, w.m));
      res.energy.push_back(e);
    };

    record(0.0);
    for (long s = 0; s < steps; ++s) {
      viscous_substep(w, 0.5 * dt);
      rotate(w, dt);
      viscous_substep(w, 0.5 * dt);
      if ((s + 1) % opts.record_stride == 0 || s + 1 == steps) record((s + 1) * dt);
    }
    res.final_state = w;
    // recorded |b - beta| bound from the eigenvector correction, alpha = 1/4
    double gap = std::pow(eps_, 0.125) * (norm_l2(res.final_state.phi) + norm_l2(res.final_state.m));
    for (auto& tr : res.traces) tr.gap_bound = gap;
    return res;
  }

 private:
  void viscous_substep(WaveState& w, double tau) {
    if (mu_ <= 0 || tau <= 0) return;
    w.m.x = sp_.dirichlet_heat(mu_ * tau, w.m.x);
    if (!ops_.grid().is1d()) w.m.y = sp_.dirichlet_heat(mu_ * tau, w.m.y);
  }

  void rotate(WaveState& w, double dt) {
    Coef2D ph = ops_.scalar_coeffs(w.phi);
    Coef2D q = ops_.gradient_coeffs(w.m);
    Coef2D dph(ph.nm, ph.nn), dq(q.nm, q.nn);
    for (int n = 0; n < ph.nn; ++n)
      for (int m = 0; m < ph.nm; ++m) {
        if (m == 0 && n == 0) continue;
        double lam2 = ops_.lambda2(m, n);
        if (lam2 <= 0) continue;
        double theta = std::sqrt(lam2) * dt / eps_;
        double ct = std::cos(theta), st = std::sin(theta);
        double a = ph.at(m, n), b = q.at(m, n);
        // d/dt (a, b) = (lambda/eps) (b, -a)
        double an = a * ct + b * st;
        double bn = -a * st + b * ct;
        dph.at(m, n) = an - a;
        dq.at(m, n) = bn - b;
      }
    w.phi += ops_.scalar_reconstruct(dph);
    w.m += ops_.gradient_reconstruct(dq);
  }

  BandOps ops_;
  Spectral2D sp_;
  double eps_, mu_;
};

inline WaveRunResult linearized_wave_run(const ScalarField& phi0, const VectorField& m0,
                                         double epsilon, double mu, double T,
                                         const SpectralBasis& basis, WaveRunOptions opts = {}) {
  opts.T = T;
  LinearWaveSolver solver(phi0.grid, epsilon, mu);
  return solver.run(phi0, m0, basis, opts);
}

// interior viscous decay rate of the sampled eigenmode, mu lambda^2 / 2;
// subtracting it from a measured envelope rate isolates the boundary-layer
// contribution that the sqrt(eps) eigenvalue correction predicts
inline double bulk_decay_rate(double mu, double lambda0) { return 0.5 * mu * lambda0 * lambda0; }

}  // namespace lmn
