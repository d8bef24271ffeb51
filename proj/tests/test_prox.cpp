#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sngca/prox.hpp"
#include "sngca/rng.hpp"

using namespace sngca;

namespace {

SymMatrix scaled_identity(int n, double c) {
  SymMatrix s = SymMatrix::identity(n);
  s *= c;
  return s;
}

SymMatrix uniform_sym(int n, double c) {
  SymMatrix s(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) s(i, j) = c;
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("prox");

TEST_CASE("prox_P fixes the center at zero signal") {
  const int d = 5;
  const double m = 2.0;
  SymMatrix P0 = scaled_identity(d, m / d);
  SpectralSym out = prox_P(P0, SymMatrix(d), m, 1.0);
  CHECK((out.mat.dense() - P0.dense()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("prox_P concentrates on the large coordinate and matches a grid oracle") {
  const int d = 3;
  const double m = 1.0, beta = 1.0;
  SymMatrix P0 = scaled_identity(d, 1.0 / 3.0);
  SymMatrix S(d);
  S(0, 0) = 10.0;
  SpectralSym out = prox_P(P0, S, m, beta);
  CHECK(out.mat(0, 0) >= 0.9);

  double val = testing::objective_P(P0, S, m, beta, out.mat);
  // Fine grid over the diagonal simplex slice (solution is diagonal here).
  double best = -1e100;
  const int steps = 200;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; i + j <= steps; ++j) {
      Eigen::Vector3d p(i / double(steps), j / double(steps), 0.0);
      if (p[0] + p[1] > 1.0) continue;
      p[2] = std::min(1.0 - p[0] - p[1], 1.0);
      SymMatrix cand = SymMatrix::from_diagonal(p);
      best = std::max(best, testing::objective_P(P0, S, m, beta, cand));
    }
  CHECK(val >= best - 1e-4);
}

TEST_CASE("prox_P output is always feasible") {
  Rng rng(101);
  for (int rep = 0; rep < 20; ++rep) {
    int d = 2 + rep % 4;
    double m = 1.0 + rep % d;
    SymMatrix P0 = scaled_identity(d, std::min(0.9, m / d));
    SymMatrix S = SymMatrix::from_dense(testing::random_symmetric(d, rng, 2.0));
    SpectralSym out = prox_P(P0, S, m, 0.7);
    EigenDecomp ed = eig_sym(out.mat);
    CHECK(ed.eigenvalues.minCoeff() >= -1e-12);
    CHECK(ed.eigenvalues.maxCoeff() <= 1.0 + 1e-12);
    CHECK(out.mat.trace() <= m + 1e-8);
  }
}

TEST_CASE("prox_P matches the projected-gradient oracle on random instances") {
  Rng rng(103);
  for (int rep = 0; rep < 8; ++rep) {
    int d = 3 + rep % 2;
    double m = 1.0 + rep % 2;
    double beta = 0.5 + 0.25 * (rep % 3);
    SymMatrix P0 = scaled_identity(d, std::min(0.8, m / d));
    SymMatrix S = SymMatrix::from_dense(testing::random_symmetric(d, rng));
    SpectralSym out = prox_P(P0, S, m, beta);
    double val = testing::objective_P(P0, S, m, beta, out.mat);
    double oracle = testing::pg_max_P(P0, S, m, beta);
    CHECK(val >= oracle - 1e-5);
    CHECK(val <= oracle + 1e-4);
  }
}

TEST_CASE("prox_W closed forms") {
  const int L = 4;
  SymMatrix W0(L);
  CHECK(prox_W(W0, SymMatrix(L), 2.0).frobenius_norm() == 0.0);

  Rng rng(107);
  double beta = 1.5;
  SymMatrix S = SymMatrix::from_dense(testing::random_symmetric(L, rng));
  S *= (beta / 2.0) / S.frobenius_norm();  // |S| = beta/2 -> inside the ball
  SymMatrix inside = prox_W(W0, S, beta);
  SymMatrix expected = S;
  expected *= 1.0 / beta;
  CHECK((inside.dense() - expected.dense()).cwiseAbs().maxCoeff() <= 1e-14);

  SymMatrix big = S;
  big *= 6.0;  // |big| = 3 beta -> radially normalized
  SymMatrix outside = prox_W(W0, big, beta);
  CHECK(outside.frobenius_norm() == doctest::Approx(1.0).epsilon(1e-12));
  SymMatrix dir = big;
  dir *= 1.0 / big.frobenius_norm();
  CHECK((outside.dense() - dir.dense()).cwiseAbs().maxCoeff() <= 1e-12);

  double val = testing::objective_W(W0, big, beta, outside);
  double oracle = testing::pg_max_W(W0, big, beta);
  CHECK(val >= oracle - 1e-8);
}

TEST_CASE("prox_Z fixes the uniform center and saturates under a strong signal") {
  const int n = 5;
  SymMatrix Z0 = scaled_identity(n, 1.0 / n);
  SpectralSym fixed = prox_Z(Z0, SymMatrix(n), 0.8);
  CHECK((fixed.mat.dense() - Z0.dense()).cwiseAbs().maxCoeff() <= 1e-12);

  double beta = 0.7;
  SymMatrix S(n);
  S(0, 0) = 50.0 * beta;
  SpectralSym sat = prox_Z(Z0, S, beta);
  CHECK(sat.eig.eigenvalues[0] >= 1.0 - 1e-20);
  CHECK(sat.mat.trace() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("prox_Z matches the projected-gradient oracle on random 4x4 instances") {
  Rng rng(109);
  for (int rep = 0; rep < 8; ++rep) {
    const int n = 4;
    double beta = 0.4 + 0.3 * (rep % 3);
    SymMatrix Z0 = scaled_identity(n, 1.0 / n);
    SymMatrix S = SymMatrix::from_dense(testing::random_symmetric(n, rng));
    SpectralSym out = prox_Z(Z0, S, beta);
    double val = testing::objective_Z(Z0, S, beta, out.mat);
    double oracle = testing::pg_max_Z(Z0, S, beta);
    CHECK(val >= oracle - 1e-5);
    CHECK(val <= oracle + 1e-4);
    // Spectahedron feasibility.
    CHECK(out.mat.trace() <= 1.0 + 1e-10);
    CHECK(out.eig.eigenvalues.minCoeff() >= 0.0);
  }
}

TEST_CASE("prox_Y fixes the start at zero signal") {
  const int L = 3;
  SymMatrix u0 = uniform_sym(L, 1.0 / (2.0 * L * L));
  SymMatrix v0 = uniform_sym(L, 1.0 / (2.0 * L * L));
  auto [u, v] = prox_Y(u0, v0, SymMatrix(L), 0.5);
  CHECK((u.dense() - u0.dense()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((v.dense() - v0.dense()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("prox_Y under a constant signal reweights u against v by exp(2c/beta)") {
  const int L = 3;
  const double beta = 0.9, c = 0.4;
  SymMatrix u0 = uniform_sym(L, 1.0 / (2.0 * L * L));
  SymMatrix v0 = uniform_sym(L, 1.0 / (2.0 * L * L));
  SymMatrix S = uniform_sym(L, c);
  auto [u, v] = prox_Y(u0, v0, S, beta);
  double total = 0.0;
  for (int i = 0; i < L; ++i)
    for (int j = 0; j <= i; ++j) {
      CHECK(u(i, j) / v(i, j) == doctest::Approx(std::exp(2.0 * c / beta)));
      total += ((i == j) ? 1.0 : 2.0) * (u(i, j) + v(i, j));
    }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("prox_Y matches the exponentiated-gradient oracle on random 3x3 grids") {
  Rng rng(113);
  for (int rep = 0; rep < 8; ++rep) {
    const int L = 3;
    double beta = 0.5 + 0.2 * (rep % 3);
    SymMatrix u0 = uniform_sym(L, 1.0 / (2.0 * L * L));
    SymMatrix v0 = uniform_sym(L, 1.0 / (2.0 * L * L));
    SymMatrix S = SymMatrix::from_dense(testing::random_symmetric(L, rng, 0.8));
    auto [u, v] = prox_Y(u0, v0, S, beta);
    double val = testing::objective_Y(u0, v0, S, beta, u, v);
    double oracle = testing::eg_max_Y(u0, v0, S, beta);
    CHECK(val >= oracle - 1e-8);
    CHECK(val <= oracle + 1e-6);
  }
}

TEST_CASE("prox_joint equals the componentwise transforms") {
  Rng rng(127);
  const int d = 3, L = 4, nz = 2;
  const double m = 2.0;
  ProxWeights w;
  w.beta_P = 0.8;
  w.beta_W = 1.1;
  w.beta_Z = 0.6;
  w.beta_Y = 0.9;

  GamePoint z0;
  z0.P = scaled_identity(d, m / d);
  z0.W = SymMatrix(L);
  z0.Z = scaled_identity(nz, 1.0 / nz);
  z0.u = uniform_sym(L, 1.0 / (2.0 * L * L));
  z0.v = uniform_sym(L, 1.0 / (2.0 * L * L));

  DualVector s;
  s.P = SymMatrix::from_dense(testing::random_symmetric(d, rng));
  s.W = SymMatrix::from_dense(testing::random_symmetric(L, rng));
  s.Z = SymMatrix::from_dense(testing::random_symmetric(nz, rng));
  s.Y = SymMatrix::from_dense(testing::random_symmetric(L, rng));

  GamePoint out = prox_joint(z0, s, w, m);
  CHECK((out.P.dense() - prox_P(z0.P, s.P, m, w.beta_P).mat.dense()).norm() <= 1e-13);
  CHECK((out.W.dense() - prox_W(z0.W, s.W, w.beta_W).dense()).norm() <= 1e-13);
  CHECK((out.Z.dense() - prox_Z(z0.Z, s.Z, w.beta_Z).mat.dense()).norm() <= 1e-13);
  auto [u, v] = prox_Y(z0.u, z0.v, s.Y, w.beta_Y);
  CHECK((out.u.dense() - u.dense()).norm() <= 1e-13);
  CHECK((out.v.dense() - v.dense()).norm() <= 1e-13);
}

TEST_CASE("entropy prox outputs keep strictly positive spectra and grids") {
  Rng rng(131);
  const int d = 4;
  SymMatrix P0 = scaled_identity(d, 0.25);
  SymMatrix S = SymMatrix::from_dense(testing::random_symmetric(d, rng, 30.0));
  SpectralSym p = prox_P(P0, S, 1.0, 0.3);
  CHECK(p.eig.eigenvalues.minCoeff() > 0.0);

  SymMatrix Z0 = scaled_identity(d, 0.25);
  SpectralSym z = prox_Z(Z0, S, 0.3);
  CHECK(z.eig.eigenvalues.minCoeff() > 0.0);

  SymMatrix u0 = uniform_sym(d, 1.0 / (2.0 * d * d));
  auto [u, v] = prox_Y(u0, u0, S, 0.3);
  double umin = 1e300, vmin = 1e300;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) {
      umin = std::min(umin, u(i, j));
      vmin = std::min(vmin, v(i, j));
    }
  CHECK(umin > 0.0);
  CHECK(vmin > 0.0);
}

TEST_SUITE_END();
