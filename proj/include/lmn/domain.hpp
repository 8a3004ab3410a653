#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace lmn {

inline constexpr double pi = 3.14159265358979323846;

enum class DomainKind { rectangle2d, slab1d };

// Axis-aligned computational domain: [0,Lx]x[0,Ly] or the slab [0,Lx].
struct Domain {
  DomainKind kind = DomainKind::rectangle2d;
  double Lx = pi;
  double Ly = pi;  // unused for slab1d

  static Domain rectangle(double lx, double ly) {
    if (lx <= 0 || ly <= 0) throw std::invalid_argument("Domain: extents must be positive");
    return Domain{DomainKind::rectangle2d, lx, ly};
  }
  static Domain slab(double lx) {
    if (lx <= 0) throw std::invalid_argument("Domain: extents must be positive");
    return Domain{DomainKind::slab1d, lx, 1.0};
  }

  bool is1d() const { return kind == DomainKind::slab1d; }
  double measure() const { return is1d() ? Lx : Lx * Ly; }
};

// Uniform node-centered grid. nx cells in x (nx+1 nodes); ny cells in y.
// A slab grid has ny == 0 and a single node row in y.
struct Grid {
  Domain domain;
  int nx = 0;
  int ny = 0;
  double hx = 0;
  double hy = 0;

  Grid() = default;
  Grid(const Domain& dom, int nx_, int ny_ = -1) : domain(dom), nx(nx_) {
    if (dom.is1d()) {
      ny = 0;
      if (ny_ > 0) throw std::invalid_argument("Grid: slab domain takes no ny");
    } else {
      ny = (ny_ < 0) ? nx_ : ny_;
      if (ny < 8) throw std::invalid_argument("Grid: ny >= 8 required");
    }
    if (nx < 8) throw std::invalid_argument("Grid: nx >= 8 required");
    hx = dom.Lx / nx;
    hy = is1d() ? 1.0 : dom.Ly / ny;
  }

  bool is1d() const { return domain.is1d(); }
  int npx() const { return nx + 1; }
  int npy() const { return ny + 1; }
  long size() const { return long(npx()) * npy(); }
  double x(int i) const { return i * hx; }
  double y(int j) const { return is1d() ? 0.0 : j * hy; }

  // trapezoid quadrature weight of node (i,j), including cell volume
  double weight(int i, int j) const {
    double wx = (i == 0 || i == nx) ? 0.5 : 1.0;
    double wy = (is1d() || j == 0 || j == ny) ? 1.0 : 1.0;
    if (!is1d()) wy = (j == 0 || j == ny) ? 0.5 : 1.0;
    return wx * hx * wy * hy;
  }

  bool on_boundary(int i, int j) const {
    if (i == 0 || i == nx) return true;
    if (!is1d() && (j == 0 || j == ny)) return true;
    return false;
  }

  bool same_layout(const Grid& o) const {
    return nx == o.nx && ny == o.ny && domain.kind == o.domain.kind &&
           domain.Lx == o.domain.Lx && domain.Ly == o.domain.Ly;
  }
};

}  // namespace lmn
