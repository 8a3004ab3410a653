#pragma once

#include <cmath>
#include <vector>

#include "lmn/field.hpp"

namespace lmn {

// Sampled trigonometric transforms along one axis. On the node set x_j = jh,
// trapezoid weights make the sampled cosines cos(m pi j/n) exactly orthogonal
// (DCT-I identity), and the interior sines exactly orthogonal (DST-I). The
// discrete eigenvalues of the mirror-Neumann / Dirichlet five-point Laplacian
// on these modes are (4/h^2) sin^2(m pi / 2n).
struct Axis1D {
  int n = 0;  // cells; n+1 nodes; slab y-axis has n == 0
  double L = 1.0, h = 1.0;
  std::vector<double> cosM, cosMT;  // (n+1)^2, cosM[m*(n+1)+j] = cos(m pi j / n)
  std::vector<double> sinM, sinMT;
  std::vector<double> w;            // trapezoid weights including h
  std::vector<double> fd_eig;       // (4/h^2) sin^2(m pi / 2n)
  std::vector<double> cos_wnorm;    // discrete weighted norm^2 of cos mode m

  Axis1D() = default;
  Axis1D(int n_, double L_) : n(n_), L(L_) {
    int np = n + 1;
    h = (n == 0) ? 1.0 : L / n;
    cosM.assign(size_t(np) * np, 1.0);
    cosMT.assign(size_t(np) * np, 1.0);
    sinM.assign(size_t(np) * np, 0.0);
    sinMT.assign(size_t(np) * np, 0.0);
    w.assign(np, h);
    fd_eig.assign(np, 0.0);
    cos_wnorm.assign(np, L);
    if (n == 0) {
      w[0] = 1.0;
      cos_wnorm[0] = 1.0;
      return;
    }
    w[0] = w[n] = 0.5 * h;
    for (int m = 0; m <= n; ++m) {
      for (int j = 0; j <= n; ++j) {
        double a = pi * m * j / n;
        cosM[size_t(m) * np + j] = std::cos(a);
        cosMT[size_t(j) * np + m] = std::cos(a);
        sinM[size_t(m) * np + j] = std::sin(a);
        sinMT[size_t(j) * np + m] = std::sin(a);
      }
      double s = std::sin(0.5 * pi * m / n);
      fd_eig[m] = 4.0 * s * s / (h * h);
      cos_wnorm[m] = (m == 0 || m == n) ? L : 0.5 * L;
    }
  }

  int np() const { return n + 1; }
  double k(int m) const { return (n == 0) ? 0.0 : m * pi / L; }  // continuous wavenumber
  // continuous normalization sqrt(c_m / L), c_m = 1 for m=0 else 2
  double amp(int m) const { return (n == 0) ? 1.0 : std::sqrt((m == 0 ? 1.0 : 2.0) / L); }
};

// Flat (npx x npy) coefficient array, m-fastest.
struct Coef2D {
  int nm = 0, nn = 0;
  std::vector<double> a;
  Coef2D() = default;
  Coef2D(int nm_, int nn_) : nm(nm_), nn(nn_), a(size_t(nm_) * nn_, 0.0) {}
  double& at(int m, int n) { return a[size_t(m) + size_t(nm) * n]; }
  double at(int m, int n) const { return a[size_t(m) + size_t(nm) * n]; }
};

// Separable transforms, direct Helmholtz solves and band-limited projections
// on one grid. All loops are plain matrix products; desk-scale grids do not
// need an FFT.
class Spectral2D {
 public:
  Grid grid;
  Axis1D ax, ay;

  explicit Spectral2D(const Grid& g)
      : grid(g), ax(g.nx, g.domain.Lx), ay(g.is1d() ? 0 : g.ny, g.is1d() ? 1.0 : g.domain.Ly) {}

  // ---- stage kernels ----------------------------------------------------
  // along x: out(m, j) = sum_i M[m,i] * in(i,j) * (weighted ? wx[i] : 1)
  void stage_x(const std::vector<double>& M, const double* in, double* out, bool weighted) const {
    int npx = ax.np(), npy = ay.np();
    std::vector<double> row(npx);
    for (int j = 0; j < npy; ++j) {
      const double* col = in + size_t(j) * npx;
      if (weighted)
        for (int i = 0; i < npx; ++i) row[i] = col[i] * ax.w[i];
      else
        for (int i = 0; i < npx; ++i) row[i] = col[i];
      double* o = out + size_t(j) * npx;
      for (int m = 0; m < npx; ++m) {
        const double* Mr = M.data() + size_t(m) * npx;
        double s = 0;
        for (int i = 0; i < npx; ++i) s += Mr[i] * row[i];
        o[m] = s;
      }
    }
  }

  // along y: out(m, n) = sum_j N[n,j] * in(m,j) * (weighted ? wy[j] : 1)
  void stage_y(const std::vector<double>& N, const double* in, double* out, bool weighted) const {
    int npx = ax.np(), npy = ay.np();
    std::fill(out, out + size_t(npx) * npy, 0.0);
    for (int nmode = 0; nmode < npy; ++nmode) {
      double* o = out + size_t(nmode) * npx;
      const double* Nr = N.data() + size_t(nmode) * npy;
      for (int j = 0; j < npy; ++j) {
        double c = Nr[j] * (weighted ? ay.w[j] : 1.0);
        if (c == 0) continue;
        const double* col = in + size_t(j) * npx;
        for (int m = 0; m < npx; ++m) o[m] += c * col[m];
      }
    }
  }

  // inverse along y: out(m, j) = sum_n N[n,j] * in(m,n)
  void stage_y_inv(const std::vector<double>& N, const double* in, double* out) const {
    int npx = ax.np(), npy = ay.np();
    std::fill(out, out + size_t(npx) * npy, 0.0);
    for (int j = 0; j < npy; ++j) {
      double* o = out + size_t(j) * npx;
      for (int nmode = 0; nmode < npy; ++nmode) {
        double c = N[size_t(nmode) * npy + j];
        if (c == 0) continue;
        const double* col = in + size_t(nmode) * npx;
        for (int m = 0; m < npx; ++m) o[m] += c * col[m];
      }
    }
  }

  // inverse along x: out(i, j) = sum_m MT[i,m] * in(m,j)
  void stage_x_inv(const std::vector<double>& MT, const double* in, double* out) const {
    int npx = ax.np(), npy = ay.np();
    for (int j = 0; j < npy; ++j) {
      const double* col = in + size_t(j) * npx;
      double* o = out + size_t(j) * npx;
      for (int i = 0; i < npx; ++i) {
        const double* Mr = MT.data() + size_t(i) * npx;
        double s = 0;
        for (int m = 0; m < npx; ++m) s += Mr[m] * col[m];
        o[i] = s;
      }
    }
  }

  enum class Basis { cosine, sine };

  // weighted forward transform: out(m,n) = <f, b_m(x) b_n(y)>_trapezoid
  Coef2D forward(const ScalarField& f, Basis bx, Basis by) const {
    Coef2D out(ax.np(), ay.np());
    std::vector<double> tmp(size_t(ax.np()) * ay.np());
    stage_x(bx == Basis::cosine ? ax.cosM : ax.sinM, f.v.data(), tmp.data(), true);
    stage_y(by == Basis::cosine ? ay.cosM : ay.sinM, tmp.data(), out.a.data(), true);
    return out;
  }

  // plain evaluation f(i,j) = sum_{m,n} c(m,n) b_m(x_i) b_n(y_j)
  ScalarField evaluate(const Coef2D& c, Basis bx, Basis by) const {
    ScalarField out(grid);
    std::vector<double> tmp(size_t(ax.np()) * ay.np());
    stage_y_inv(by == Basis::cosine ? ay.cosM : ay.sinM, c.a.data(), tmp.data());
    stage_x_inv(bx == Basis::cosine ? ax.cosMT : ax.sinMT, tmp.data(), out.v.data());
    return out;
  }

  // ---- exact FD solves ---------------------------------------------------

  // (a I - b Lap_h^Neumann) x = rhs, mirror-ghost Laplacian, exact.
  // If a == 0 the constant mode is projected out (pure Neumann Poisson).
  ScalarField neumann_helmholtz(double a, double b, const ScalarField& rhs) const {
    Coef2D c = forward(rhs, Basis::cosine, Basis::cosine);
    for (int nmode = 0; nmode < ay.np(); ++nmode)
      for (int m = 0; m < ax.np(); ++m) {
        double den = (a + b * (ax.fd_eig[m] + ay.fd_eig[nmode])) * ax.cos_wnorm[m] *
                     ay.cos_wnorm[nmode];
        double& cc = c.at(m, nmode);
        cc = (m == 0 && nmode == 0 && a == 0.0) ? 0.0 : cc / den;
      }
    return evaluate(c, Basis::cosine, Basis::cosine);
  }

  // (a I - b Lap_h^Dirichlet) x = rhs on interior nodes; boundary of the
  // result is zero. Exact for the five-point interior operator.
  ScalarField dirichlet_helmholtz(double a, double b, const ScalarField& rhs) const {
    return dirichlet_filter(rhs, [&](double ex, double ey) { return 1.0 / (a + b * (ex + ey)); });
  }

  // exact heat substep exp(kappa Lap_h^Dirichlet) f (kappa >= 0)
  ScalarField dirichlet_heat(double kappa, const ScalarField& f) const {
    return dirichlet_filter(f, [&](double ex, double ey) { return std::exp(-kappa * (ex + ey)); });
  }

  template <class Fn>
  ScalarField dirichlet_filter(const ScalarField& f, Fn&& factor) const {
    // plain (unweighted) sine sums; boundary rows drop out since sin = 0 there
    Coef2D c(ax.np(), ay.np());
    std::vector<double> tmp(size_t(ax.np()) * ay.np());
    stage_x(ax.sinM, f.v.data(), tmp.data(), false);
    if (grid.is1d()) {
      for (int m = 0; m < ax.np(); ++m) c.at(m, 0) = tmp[m];
    } else {
      stage_y(ay.sinM, tmp.data(), c.a.data(), false);
    }
    double scale = (ax.n ? 2.0 / ax.n : 1.0) * (grid.is1d() ? 1.0 : 2.0 / ay.n);
    for (int nmode = 0; nmode < ay.np(); ++nmode)
      for (int m = 0; m < ax.np(); ++m)
        c.at(m, nmode) *= scale * factor(ax.fd_eig[m], grid.is1d() ? 0.0 : ay.fd_eig[nmode]);
    if (grid.is1d()) {
      ScalarField out(grid);
      stage_x_inv(ax.sinMT, c.a.data(), out.v.data());
      return out;
    }
    return evaluate(c, Basis::sine, Basis::sine);
  }
};

}  // namespace lmn
