#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lmn/leray.hpp"
#include "lmn/norms.hpp"
#include "lmn/operators.hpp"
#include "lmn/spectral.hpp"

using namespace lmn;

namespace {

Grid box(int n) { return Grid(Domain::rectangle(pi, pi), n); }

// band-limited random field from low cosine modes
ScalarField random_scalar(const Grid& g, unsigned seed, int kmax = 5) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  ScalarField f(g);
  for (int m = 0; m <= kmax; ++m)
    for (int n = 0; n <= kmax; ++n) {
      double a = U(rng);
      for (int j = 0; j < g.npy(); ++j)
        for (int i = 0; i < g.npx(); ++i)
          f.at(i, j) += a * std::cos(m * g.x(i)) * std::cos(n * g.y(j));
    }
  return f;
}

VectorField random_vector(const Grid& g, unsigned seed, int kmax = 5) {
  VectorField v(g);
  v.x = random_scalar(g, seed, kmax);
  v.y = random_scalar(g, seed + 1000, kmax);
  return v;
}

}  // namespace

TEST_CASE("gradient of a constant field vanishes") {
  Grid g = box(16);
  ScalarField c(g, 3.5);
  VectorField gr = gradient_sbp(c);
  CHECK(norm_l2(gr) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("laplacian of cos x converges at second order") {
  double prev = 0;
  for (int n : {32, 64, 128}) {
    Grid g = box(n);
    ScalarField f = ScalarField::sample(g, [](double x, double) { return std::cos(x); });
    ScalarField lap = laplacian(f, GhostKind::mirror);
    double err = 0;
    for (long k = 0; k < f.size(); ++k) err = std::max(err, std::abs(lap.v[k] + f.v[k]));
    if (prev > 0) CHECK(prev / err > 3.4);  // ~4 for O(h^2)
    prev = err;
  }
}

TEST_CASE("div grad of an eigenfunction reproduces -lambda^2 Phi") {
  Grid g = box(128);
  NeumannMode mode = eigenpair(g.domain, 1, 1);
  ScalarField phi = mode.sample(g);
  ScalarField lap = laplacian(phi, GhostKind::mirror);
  double err = 0;
  for (long k = 0; k < phi.size(); ++k) err = std::max(err, std::abs(lap.v[k] + 2.0 * phi.v[k]));
  CHECK(err < 2.0 * 2.0 * (g.hx * g.hx) / 12.0 * 4.0);
}

TEST_CASE("norms: analytic values") {
  Grid g = box(128);
  ScalarField one(g, 1.0);
  CHECK(norm(one, NormSpec::l2()) == doctest::Approx(pi).epsilon(1e-12));
  ScalarField cx = ScalarField::sample(g, [](double x, double) { return std::cos(x); });
  CHECK(norm(cx, NormSpec::l2()) == doctest::Approx(std::sqrt(pi * pi / 2)).epsilon(1e-12));
  ScalarField phi10 = eigenpair(g.domain, 1, 0).sample(g);
  CHECK(norm(phi10, NormSpec::l2()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(norm(cx, NormSpec::linf()) == doctest::Approx(1.0));
  // L1 of cos x over the box: 2*pi
  CHECK(norm(cx, NormSpec::lp(1.0)) == doctest::Approx(2 * pi).epsilon(1e-4));
}

TEST_CASE("summation by parts: integral of a divergence is a boundary flux") {
  Grid g = box(32);
  VectorField v = random_vector(g, 7);
  zero_boundary(v);
  ScalarField dv = divergence_sbp(v);
  CHECK(std::abs(integrate(dv)) < 1e-12);
}

TEST_CASE("neumann poisson: eigenfunction identities") {
  Grid g = box(64);
  BandOps ops(g);

  ScalarField cx = ScalarField::sample(g, [](double x, double) { return std::cos(x); });
  auto r1 = neumann_poisson_solve(ops, cx);
  CHECK(r1.compatible);
  CHECK(norm_l2(r1.psi - cx) < 1e-12);

  ScalarField zero(g, 0.0);
  auto r0 = neumann_poisson_solve(ops, zero);
  CHECK(norm_l2(r0.psi) < 1e-14);

  NeumannMode m21 = eigenpair(g.domain, 2, 1);
  ScalarField phi = m21.sample(g);
  auto r2 = neumann_poisson_solve(ops, phi);
  ScalarField expect = (1.0 / m21.lambda2()) * phi;
  CHECK(norm_l2(r2.psi - expect) < 1e-12);

  // non-zero-mean rhs is flagged
  ScalarField shifted = cx;
  for (auto& x : shifted.v) x += 0.3;
  auto r3 = neumann_poisson_solve(ops, shifted);
  CHECK_FALSE(r3.compatible);
  CHECK(r3.removed_mean == doctest::Approx(0.3).epsilon(1e-10));
}

TEST_CASE("poisson residual on band-limited rhs") {
  Grid g = box(64);
  BandOps ops(g);
  ScalarField rhs = random_scalar(g, 11);
  double mu = mean(rhs);
  for (auto& x : rhs.v) x -= mu;
  auto r = neumann_poisson_solve(ops, rhs);
  ScalarField res = neg_laplacian_band(ops, r.psi) - rhs;
  CHECK(norm_l2(res) <= 1e-8 * norm_l2(rhs));
}

TEST_CASE("leray: pure gradient goes to Q") {
  Grid g = box(64);
  BandOps ops(g);
  VectorField v = VectorField::sample(
      g, [](double x, double) { return -std::sin(x); }, [](double, double) { return 0.0; });
  auto parts = leray_project(ops, v);
  CHECK(norm_l2(parts.P) < 1e-11);
  CHECK(norm_l2(parts.Q - v) < 1e-11);
}

TEST_CASE("leray: solenoidal field with zero normal trace goes to P") {
  // v = (d_y psi, -d_x psi), psi = sin^2 x sin^2 y; the quadrature of the
  // odd-parity products carries an O(h^2) error, so Q shrinks at 2nd order
  auto qnorm = [&](int n) {
    Grid g = box(n);
    BandOps ops(g);
    VectorField v = VectorField::sample(
        g,
        [](double x, double y) { return std::sin(x) * std::sin(x) * 2 * std::sin(y) * std::cos(y); },
        [](double x, double y) { return -2 * std::sin(x) * std::cos(x) * std::sin(y) * std::sin(y); });
    auto parts = leray_project(ops, v);
    CHECK(norm_l2(parts.P - v) == doctest::Approx(norm_l2(parts.Q)).epsilon(1e-9));
    return norm_l2(parts.Q);
  };
  double q64 = qnorm(64), q128 = qnorm(128);
  CHECK(q64 < 2e-3);
  CHECK(q64 / q128 > 3.4);
}

TEST_CASE("leray: constant field is a gradient up to the cosine tail") {
  // (1,0) = grad x; the sine expansion of the constant converges like 1/sqrt(n)
  auto pnorm = [&](int n) {
    Grid g = box(n);
    BandOps ops(g);
    VectorField v(g);
    for (auto& x : v.x.v) x = 1.0;
    auto parts = leray_project(ops, v);
    return norm_l2(parts.P) / norm_l2(v);
  };
  double p128 = pnorm(128);
  CHECK(p128 < 0.1);
  CHECK(pnorm(256) < 0.85 * p128);
}

TEST_CASE("projection algebra: idempotent, orthogonal, complementary") {
  Grid g = box(64);
  BandOps ops(g);
  for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
    VectorField v = random_vector(g, seed);
    VectorField w = random_vector(g, seed + 77);
    auto pv = leray_project(ops, v);
    auto pw = leray_project(ops, w);
    auto ppv = leray_project(ops, pv.P);
    CHECK(norm_l2(ppv.P - pv.P) <= 1e-10 * norm_l2(v));
    CHECK(std::abs(inner(pv.P, pw.Q)) <= 1e-9 * norm_l2(v) * norm_l2(w));
    VectorField sum = pv.P + pv.Q;
    sum -= v;
    CHECK(norm_l2(sum) <= 1e-12 * norm_l2(v));
  }
}

TEST_CASE("divergence on the band vanishes after projection") {
  Grid g = box(64);
  BandOps ops(g);
  VectorField v = random_vector(g, 21);
  auto parts = leray_project(ops, v);
  double ref = norm(parts.P, NormSpec::h1());
  CHECK(ops.divergence_band_norm(parts.P) <= 1e-10 * std::max(1.0, ref));
}

TEST_CASE("leray potential recovers a band-limited potential exactly") {
  Grid g = box(64);
  BandOps ops(g);
  // chi = combination of low modes with zero mean; v = grad chi analytically
  auto chi = [](double x, double y) {
    return 0.7 * std::cos(x) + 0.3 * std::cos(2 * x) * std::cos(y) - 0.2 * std::cos(3 * y);
  };
  auto chix = [](double x, double y) {
    return -0.7 * std::sin(x) - 0.6 * std::sin(2 * x) * std::cos(y);
  };
  auto chiy = [](double x, double y) {
    return -0.3 * std::cos(2 * x) * std::sin(y) + 0.6 * std::sin(3 * y);
  };
  VectorField v = VectorField::sample(g, chix, chiy);
  ScalarField psi = ops.leray_potential(v);
  ScalarField expect = ScalarField::sample(g, chi);
  CHECK(std::abs(mean(psi)) < 1e-12);
  CHECK(norm_l2(psi - expect) < 1e-11);
  // and Qv reproduces v itself
  auto parts = leray_project(ops, v);
  CHECK(norm_l2(parts.P) < 1e-11);
}

TEST_CASE("direct helmholtz solves invert the FD operators exactly") {
  Grid g = box(32);
  Spectral2D sp(g);
  ScalarField f = random_scalar(g, 5);

  ScalarField x = sp.neumann_helmholtz(2.0, 0.7, f);
  ScalarField back = laplacian(x, GhostKind::mirror);
  for (long k = 0; k < back.size(); ++k) back.v[k] = 2.0 * x.v[k] - 0.7 * back.v[k];
  CHECK(norm_l2(back - f) < 1e-10 * norm_l2(f));

  ScalarField fi = f;
  zero_boundary(fi);
  ScalarField xd = sp.dirichlet_helmholtz(2.0, 0.7, fi);
  ScalarField lap = laplacian(xd, GhostKind::odd);
  ScalarField resid(g);
  for (int j = 1; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i)
      resid.at(i, j) = 2.0 * xd.at(i, j) - 0.7 * lap.at(i, j) - fi.at(i, j);
  CHECK(norm_l2(resid) < 1e-10 * norm_l2(fi));
}

TEST_CASE("slab grid: operators and solves degrade to 1D") {
  Grid g(Domain::slab(pi), 64);
  BandOps ops(g);
  ScalarField cx = ScalarField::sample(g, [](double x, double) { return std::cos(x); });
  auto r = neumann_poisson_solve(ops, cx);
  CHECK(norm_l2(r.psi - cx) < 1e-12);
  CHECK(norm(cx, NormSpec::l2()) == doctest::Approx(std::sqrt(pi / 2)).epsilon(1e-12));

  VectorField v(g);
  v.x = ScalarField::sample(g, [](double x, double) { return -std::sin(x); });
  auto parts = leray_project(ops, v);
  CHECK(norm_l2(parts.P) < 1e-11);
}

TEST_CASE("fourth difference filter damps the checkerboard and keeps smooth fields") {
  Grid g = box(32);
  ScalarField smooth = ScalarField::sample(g, [](double x, double y) { return std::cos(x) * std::cos(y); });
  ScalarField fs = fourth_difference_filter(smooth, 0.05);
  CHECK(norm_l2(fs - smooth) < 2e-4 * norm_l2(smooth));
  ScalarField checker(g);
  for (int j = 0; j < g.npy(); ++j)
    for (int i = 0; i < g.npx(); ++i) checker.at(i, j) = ((i + j) % 2 == 0) ? 1.0 : -1.0;
  ScalarField fc = fourth_difference_filter(checker, 0.05);
  double before = 0, after = 0;
  for (int j = 4; j < g.ny - 4; ++j)
    for (int i = 4; i < g.nx - 4; ++i) {
      before += checker.at(i, j) * checker.at(i, j);
      after += fc.at(i, j) * fc.at(i, j);
    }
  CHECK(after < before);
}

TEST_CASE("operator preconditions: rank mismatch and bad norm exponents") {
  Grid slab(Domain::slab(pi), 16);
  VectorField v(slab);
  CHECK_THROWS_AS(curl_sbp(v), std::invalid_argument);
  Grid g = box(16);
  ScalarField f(g, 1.0);
  CHECK_THROWS_AS(norm(f, NormSpec::lp(0.5)), std::invalid_argument);
}
