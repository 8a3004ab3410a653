#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lmn/norms.hpp"
#include "lmn/operators.hpp"

namespace lmn {

struct ModelParams {
  double gamma = 2.0;     // adiabatic exponent, > 3/2
  double epsilon = 0.1;   // Mach parameter in (0,1)
  double mu = 1.0;        // viscosity
  double lambda = 1.0;    // elastic coupling
  double theta = 1.0;     // director relaxation
  double sigma0 = 0.2;    // penalization length

  void validate() const {
    if (!(gamma > 1.5)) throw std::invalid_argument("params: gamma > 3/2 required");
    if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("params: epsilon in (0,1)");
    if (mu <= 0 || lambda <= 0 || theta <= 0 || sigma0 <= 0)
      throw std::invalid_argument("params: coefficients must be positive");
  }
};

struct PenaltyFields {
  ScalarField F;     // (|d|^2-1)^2 / (4 sigma0^2)
  DirectorField f;   // (|d|^2-1) d / (2 sigma0^2)
};

inline PenaltyFields penalty(const DirectorField& d, double sigma0) {
  if (sigma0 <= 0) throw std::invalid_argument("penalty: sigma0 must be positive");
  const Grid& g = d.grid();
  PenaltyFields out{ScalarField(g), DirectorField(g)};
  // f is the exact gradient of F; the energy identity depends on this pairing
  double inv = 1.0 / (sigma0 * sigma0);
  for (long k = 0; k < out.F.size(); ++k) {
    double n2 = d.c1.v[k] * d.c1.v[k] + d.c2.v[k] * d.c2.v[k] + d.c3.v[k] * d.c3.v[k];
    double s = n2 - 1.0;
    out.F.v[k] = 0.25 * s * s * inv;
    out.f.c1.v[k] = s * d.c1.v[k] * inv;
    out.f.c2.v[k] = s * d.c2.v[k] * inv;
    out.f.c3.v[k] = s * d.c3.v[k] * inv;
  }
  return out;
}

// grad d (x) grad d: spatial 2x2 tensor with the three director components
// summed in each entry, T_ij = sum_a d_i(d_a) d_j(d_a)
inline SymTensorField distortion_tensor(const DirectorField& d) {
  const Grid& g = d.grid();
  SymTensorField t(g);
  for (int a = 0; a < 3; ++a) {
    ScalarField gx = dx_sbp(d.comp(a));
    ScalarField gy = g.is1d() ? ScalarField(g) : dy_sbp(d.comp(a));
    for (long k = 0; k < t.xx.size(); ++k) {
      t.xx.v[k] += gx.v[k] * gx.v[k];
      if (!g.is1d()) {
        t.xy.v[k] += gx.v[k] * gy.v[k];
        t.yy.v[k] += gy.v[k] * gy.v[k];
      }
    }
  }
  return t;
}

// Ericksen stress grad d (x) grad d - (|grad d|^2/2 + F(d)) I
inline SymTensorField ericksen_stress(const DirectorField& d, double sigma0) {
  SymTensorField t = distortion_tensor(d);
  ScalarField F = penalty(d, sigma0).F;
  const bool two_d = !d.grid().is1d();
  for (long k = 0; k < t.xx.size(); ++k) {
    double trace = t.xx.v[k] + (two_d ? t.yy.v[k] : 0.0);
    double iso = 0.5 * trace + F.v[k];
    t.xx.v[k] -= iso;
    if (two_d) t.yy.v[k] -= iso;
  }
  return t;
}

inline VectorField tensor_divergence(const SymTensorField& t) {
  const Grid& g = t.grid();
  VectorField out(g);
  out.x = dx_sbp(t.xx);
  if (!g.is1d()) {
    out.x += dy_sbp(t.xy);
    out.y = dx_sbp(t.xy);
    out.y += dy_sbp(t.yy);
  }
  return out;
}

struct PressureFields {
  ScalarField P;       // rho^gamma / eps^2
  ScalarField pi_eps;  // P - (lambda/2)|grad d|^2 - lambda F(d)
};

inline PressureFields pressure(const ScalarField& rho, const DirectorField& d,
                               const ModelParams& p) {
  const Grid& g = rho.grid;
  PressureFields out{ScalarField(g), ScalarField(g)};
  double ie2 = 1.0 / (p.epsilon * p.epsilon);
  for (double r : rho.v)
    if (r < 0) throw std::domain_error("pressure: negative density sample");
  SymTensorField t = distortion_tensor(d);
  ScalarField F = penalty(d, p.sigma0).F;
  const bool two_d = !g.is1d();
  for (long k = 0; k < out.P.size(); ++k) {
    out.P.v[k] = std::pow(rho.v[k], p.gamma) * ie2;
    double grad2 = t.xx.v[k] + (two_d ? t.yy.v[k] : 0.0);
    out.pi_eps.v[k] = out.P.v[k] - 0.5 * p.lambda * grad2 - p.lambda * F.v[k];
  }
  return out;
}

inline ScalarField density_fluctuation(const ScalarField& rho, double epsilon) {
  if (epsilon <= 0) throw std::invalid_argument("density_fluctuation: epsilon > 0 required");
  ScalarField out = rho;
  for (auto& x : out.v) x = (x - 1.0) / epsilon;
  return out;
}

// normalized so that the rest state rho = 1 carries zero internal energy
inline double internal_energy_density(double rho, double gamma) {
  return std::pow(rho, gamma) - gamma * rho + (gamma - 1.0);
}

// Instantaneous energies plus running dissipation integrals, accumulated with
// trapezoid-in-time. total_plus_dissipation is the monitored Lyapunov sum.
struct EnergyLedger {
  double t = 0;
  double kinetic = 0;
  double internal = 0;
  double elastic = 0;
  double penalty_energy = 0;
  double diss_visc = 0;
  double diss_dir = 0;

  double total() const { return kinetic + internal + elastic + penalty_energy; }
  double total_plus_dissipation() const { return total() + diss_visc + diss_dir; }
};

struct EnergyRates {
  double visc = 0;  // mu |grad u|^2
  double dir = 0;   // lambda theta |Lap d - f(d)|^2
};

inline EnergyLedger instantaneous_energy(const ScalarField& rho, const VectorField& u,
                                         const DirectorField& d, const ModelParams& p,
                                         bool incompressible = false) {
  const Grid& g = rho.grid;
  EnergyLedger e;
  double ie = 1.0 / (p.epsilon * p.epsilon * (p.gamma - 1.0));
  SymTensorField t = distortion_tensor(d);
  ScalarField F = penalty(d, p.sigma0).F;
  const bool two_d = !g.is1d();
  for (int j = 0; j < g.npy(); ++j)
    for (int i = 0; i < g.npx(); ++i) {
      double w = g.weight(i, j);
      double u2 = u.x.at(i, j) * u.x.at(i, j) + (two_d ? u.y.at(i, j) * u.y.at(i, j) : 0.0);
      double r = incompressible ? 1.0 : rho.at(i, j);
      e.kinetic += w * 0.5 * r * u2;
      if (!incompressible) e.internal += w * ie * internal_energy_density(r, p.gamma);
      double grad2 = t.xx.at(i, j) + (two_d ? t.yy.at(i, j) : 0.0);
      e.elastic += w * 0.5 * p.lambda * grad2;
      e.penalty_energy += w * p.lambda * F.at(i, j);
    }
  return e;
}

inline EnergyRates dissipation_rates(const VectorField& u, const DirectorField& d,
                                     const ModelParams& p) {
  EnergyRates r;
  const Grid& g = u.grid();
  double gu = 0;
  {
    VectorField gx = gradient_sbp(u.x);
    gu += inner(gx, gx);
    if (!g.is1d()) {
      VectorField gy = gradient_sbp(u.y);
      gu += inner(gy, gy);
    }
  }
  r.visc = p.mu * gu;
  PenaltyFields pen = penalty(d, p.sigma0);
  double s = 0;
  for (int a = 0; a < 3; ++a) {
    ScalarField lap = laplacian(d.comp(a), GhostKind::odd);
    ScalarField res = lap - pen.f.comp(a);
    s += inner(res, res);
  }
  r.dir = p.lambda * p.theta * s;
  return r;
}

// time series of ledger rows with trapezoid accumulation of the dissipation
class LedgerSeries {
 public:
  void push(double t, const EnergyLedger& inst, const EnergyRates& rates) {
    EnergyLedger row = inst;
    row.t = t;
    if (!rows_.empty()) {
      const EnergyLedger& prev = rows_.back();
      double dt = t - prev.t;
      row.diss_visc = prev.diss_visc + 0.5 * dt * (last_rates_.visc + rates.visc);
      row.diss_dir = prev.diss_dir + 0.5 * dt * (last_rates_.dir + rates.dir);
    }
    last_rates_ = rates;
    rows_.push_back(row);
  }
  const std::vector<EnergyLedger>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }

  // max increase of total_plus_dissipation relative to the initial total
  double max_relative_drift() const {
    if (rows_.size() < 2) return 0.0;
    double e0 = rows_.front().total_plus_dissipation();
    double scale = std::max(std::abs(e0), 1e-10);  // floor for exact equilibria
    double worst = 0;
    double running = e0;
    for (const auto& r : rows_) {
      double v = r.total_plus_dissipation();
      worst = std::max(worst, (v - running) / scale);
      running = std::min(running, v);
    }
    return worst;
  }

 private:
  std::vector<EnergyLedger> rows_;
  EnergyRates last_rates_;
};

}  // namespace lmn
