#pragma once

#include <cmath>

#include "lmn/norms.hpp"
#include "lmn/transform.hpp"

namespace lmn {

// Band-limited projections onto the closed-form Neumann eigenbasis and the
// associated gradient basis g_mn = grad Phi_mn / lambda_mn, plus the Leray
// decomposition built from them. Retained band: m < nx, n < ny (sub-Nyquist),
// where the sampled modes are exactly orthonormal under trapezoid weights.
class BandOps {
 public:
  explicit BandOps(const Grid& g) : sp_(g) {}

  const Spectral2D& engine() const { return sp_; }
  const Grid& grid() const { return sp_.grid; }

  double lambda2(int m, int n) const {
    double kx = sp_.ax.k(m), ky = sp_.ay.k(n);
    return kx * kx + ky * ky;
  }

  // coefficients <f, Phi_mn> for the retained band (Nyquist rows zeroed)
  Coef2D scalar_coeffs(const ScalarField& f) const {
    Coef2D c = sp_.forward(f, Spectral2D::Basis::cosine, Spectral2D::Basis::cosine);
    for (int n = 0; n < c.nn; ++n)
      for (int m = 0; m < c.nm; ++m) {
        if (is_nyquist(m, n)) {
          c.at(m, n) = 0.0;
          continue;
        }
        c.at(m, n) *= sp_.ax.amp(m) * sp_.ay.amp(n);
      }
    return c;
  }

  ScalarField scalar_reconstruct(const Coef2D& b) const {
    Coef2D c = b;
    for (int n = 0; n < c.nn; ++n)
      for (int m = 0; m < c.nm; ++m)
        c.at(m, n) = is_nyquist(m, n) ? 0.0 : c.at(m, n) * sp_.ax.amp(m) * sp_.ay.amp(n);
    return sp_.evaluate(c, Spectral2D::Basis::cosine, Spectral2D::Basis::cosine);
  }

  // coefficients q_mn = <v, g_mn> over the retained band ((0,0) excluded)
  Coef2D gradient_coeffs(const VectorField& v) const {
    Coef2D sc = sp_.forward(v.x, Spectral2D::Basis::sine, Spectral2D::Basis::cosine);
    Coef2D q(sc.nm, sc.nn);
    const bool two_d = !grid().is1d();
    Coef2D cs = two_d ? sp_.forward(v.y, Spectral2D::Basis::cosine, Spectral2D::Basis::sine)
                      : Coef2D(sc.nm, sc.nn);
    for (int n = 0; n < q.nn; ++n)
      for (int m = 0; m < q.nm; ++m) {
        if ((m == 0 && n == 0) || is_nyquist(m, n)) continue;
        double kx = sp_.ax.k(m), ky = sp_.ay.k(n);
        double lam = std::sqrt(kx * kx + ky * ky);
        double a = sp_.ax.amp(m) * sp_.ay.amp(n) / lam;
        q.at(m, n) = -a * (kx * sc.at(m, n) + (two_d ? ky * cs.at(m, n) : 0.0));
      }
    return q;
  }

  VectorField gradient_reconstruct(const Coef2D& q) const {
    VectorField out(grid());
    Coef2D cx(q.nm, q.nn), cy(q.nm, q.nn);
    const bool two_d = !grid().is1d();
    for (int n = 0; n < q.nn; ++n)
      for (int m = 0; m < q.nm; ++m) {
        if ((m == 0 && n == 0) || is_nyquist(m, n)) continue;
        double kx = sp_.ax.k(m), ky = sp_.ay.k(n);
        double lam = std::sqrt(kx * kx + ky * ky);
        double a = sp_.ax.amp(m) * sp_.ay.amp(n) / lam;
        cx.at(m, n) = -a * kx * q.at(m, n);
        if (two_d) cy.at(m, n) = -a * ky * q.at(m, n);
      }
    out.x = sp_.evaluate(cx, Spectral2D::Basis::sine, Spectral2D::Basis::cosine);
    if (two_d) out.y = sp_.evaluate(cy, Spectral2D::Basis::cosine, Spectral2D::Basis::sine);
    return out;
  }

  // scalar potential psi with grad psi = Qv, zero mean
  ScalarField leray_potential(const VectorField& v) const {
    Coef2D q = gradient_coeffs(v);
    for (int n = 0; n < q.nn; ++n)
      for (int m = 0; m < q.nm; ++m) {
        if ((m == 0 && n == 0) || is_nyquist(m, n)) continue;
        q.at(m, n) /= std::sqrt(lambda2(m, n));
      }
    return scalar_reconstruct(q);
  }

  // L2 norm of div(Qv) measured on the band (exact for band-limited fields
  // with vanishing normal trace)
  double divergence_band_norm(const VectorField& v) const {
    Coef2D q = gradient_coeffs(v);
    double s = 0;
    for (int n = 0; n < q.nn; ++n)
      for (int m = 0; m < q.nm; ++m) s += lambda2(m, n) * q.at(m, n) * q.at(m, n);
    return std::sqrt(s);
  }

 private:
  bool is_nyquist(int m, int n) const {
    if (sp_.ax.n > 0 && m >= sp_.ax.n) return true;
    if (!grid().is1d() && sp_.ay.n > 0 && n >= sp_.ay.n) return true;
    return false;
  }

  Spectral2D sp_;
};

struct LerayParts {
  VectorField P, Q;
};

// Helmholtz/Leray split v = Pv + Qv with div Pv = 0 and Qv a gradient,
// computed as the orthogonal projection onto the gradient band.
inline LerayParts leray_project(const BandOps& ops, const VectorField& v) {
  VectorField q = ops.gradient_reconstruct(ops.gradient_coeffs(v));
  VectorField p = v;
  p -= q;
  return {std::move(p), std::move(q)};
}

struct PoissonResult {
  ScalarField psi;
  double removed_mean = 0.0;  // mean of the rhs that had to be projected out
  bool compatible = true;     // |mean| below tolerance
};

// Spectral solve of -Lap psi = rhs, d psi/d nu = 0, zero-mean psi, using the
// continuous eigenvalues of the closed-form basis (exact on the band).
inline PoissonResult neumann_poisson_solve(const BandOps& ops, const ScalarField& rhs,
                                           double mean_tol = 1e-10) {
  PoissonResult res;
  double mu = mean(rhs);
  res.removed_mean = mu;
  res.compatible = std::abs(mu) <= mean_tol * (1.0 + norm_l2(rhs));
  Coef2D b = ops.scalar_coeffs(rhs);
  for (int n = 0; n < b.nn; ++n)
    for (int m = 0; m < b.nm; ++m) {
      if (m == 0 && n == 0) {
        b.at(m, n) = 0.0;
        continue;
      }
      double l2v = ops.lambda2(m, n);
      if (l2v > 0) b.at(m, n) /= l2v;
    }
  res.psi = ops.scalar_reconstruct(b);
  return res;
}

// -Lap f computed on the band with continuous eigenvalues
inline ScalarField neg_laplacian_band(const BandOps& ops, const ScalarField& f) {
  Coef2D b = ops.scalar_coeffs(f);
  for (int n = 0; n < b.nn; ++n)
    for (int m = 0; m < b.nm; ++m) b.at(m, n) *= ops.lambda2(m, n);
  return ops.scalar_reconstruct(b);
}

}  // namespace lmn
