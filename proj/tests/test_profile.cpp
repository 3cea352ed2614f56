#include <doctest.h>

#include <cmath>
#include <numbers>

#include "conduit/ode.hpp"
#include "conduit/quadrature.hpp"
#include "conduit/spectral.hpp"

using namespace conduit;
using Eigen::VectorXd;

namespace {

double energy_residual(const WaveProfile& w) {
  double r = 0;
  for (int i = 0; i < w.n; ++i) {
    const double kd = w.k * w.deriv[i];
    r = std::max(r, std::abs(0.5 * kd * kd + effective_potential(w.values[i], w.params) - w.params.E));
  }
  return r;
}

}  // namespace

TEST_CASE("Dormand-Prince integrates the harmonic oscillator") {
  auto f = [](double, const Eigen::Vector2d& y) { return Eigen::Vector2d(y[1], -y[0]); };
  std::vector<double> times{1.0, 2.0, std::numbers::pi};
  std::vector<Eigen::Vector2d> out;
  integrate_dp45(f, Eigen::Vector2d(1, 0), 0.0, times,
                 [&](std::size_t, double, const Eigen::Vector2d& y) { out.push_back(y); });
  REQUIRE(out.size() == 3);
  CHECK(out[0][0] == doctest::Approx(std::cos(1.0)).epsilon(1e-10));
  CHECK(out[2][0] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(std::abs(out[2][1]) < 1e-10);
}

TEST_CASE("spectral derivative of a trigonometric polynomial") {
  const int n = 32;
  VectorXd f(n), df(n), d2f(n);
  for (int i = 0; i < n; ++i) {
    const double t = 2 * std::numbers::pi * i / n;
    f[i] = std::sin(3 * t) + 0.5 * std::cos(t);
    df[i] = 2 * std::numbers::pi * (3 * std::cos(3 * t) - 0.5 * std::sin(t));
    d2f[i] = -4 * std::numbers::pi * std::numbers::pi * (9 * std::sin(3 * t) + 0.5 * std::cos(t));
  }
  CHECK((spectral_derivative(f, 1) - df).cwiseAbs().maxCoeff() < 1e-11);
  CHECK((spectral_derivative(f, 2) - d2f).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((differentiation_matrix(n, 1) * f - df).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("profile is even with its maximum at theta = 0") {
  const auto w = reconstruct_profile(WaveParams{-1, 0.01, 1}, 64);
  CHECK(w.n == 64);
  Eigen::Index imax;
  w.values.maxCoeff(&imax);
  CHECK(imax == 0);
  for (int i = 1; i < w.n; ++i) CHECK(w.values[i] == doctest::Approx(w.values[w.n - i]).epsilon(1e-14));
  CHECK(w.omega == doctest::Approx(w.k * w.c).epsilon(1e-15));
  CHECK(w.theta[1] == doctest::Approx(1.0 / 64));
}

TEST_CASE("energy residual at n = 256") {
  for (double E : {1e-4, 0.01, 0.05}) {
    const auto w = reconstruct_profile(WaveParams{-1, E, 1}, 256);
    CAPTURE(E);
    CHECK(energy_residual(w) < 1e-10);
  }
}

TEST_CASE("profile solves the second-order equation") {
  const WaveParams p{-1.2, 0.0, 0.8};
  auto [emin, emax] = energy_range(p);
  const WaveParams q{p.a, emin + 0.4 * (emax - emin), p.c};
  const auto w = reconstruct_profile(q, 128);
  const VectorXd d2 = spectral_derivative(w.values, 2);
  double r = 0;
  for (int i = 0; i < w.n; ++i)
    r = std::max(r, std::abs(w.k * w.k * d2[i] + potential_derivatives(w.values[i], q).d1));
  CHECK(r < 1e-9);
}

TEST_CASE("grid means agree with the quadrature means") {
  const WaveParams p{-1, 0.01, 1};
  const auto w = reconstruct_profile(p, 128);
  CHECK(w.values.mean() == doctest::Approx(w.mass).epsilon(1e-12));
  const VectorXd qd =
      (w.values.array() + w.k * w.k * w.deriv.array().square()) / w.values.array().square();
  CHECK(qd.mean() == doctest::Approx(w.qinv).epsilon(1e-11));
  // per-wavelength forms
  CHECK(w.values.mean() / w.k == doctest::Approx(mass(p)).epsilon(1e-8));
  CHECK(qd.mean() / w.k == doctest::Approx(q_invariant(p)).epsilon(1e-8));
}

TEST_CASE("degenerate energy gives the exact constant state") {
  const WaveParams p{-1, 0, 1};
  const auto w = reconstruct_profile(p, 32);
  CHECK((w.values.array() == 1.0).all());
  CHECK((w.deriv.array() == 0.0).all());
  CHECK(w.k == doctest::Approx(1 / (2 * std::numbers::pi)).epsilon(1e-15));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(reconstruct_profile(WaveParams{-1, 0.01, 1}, 15), DomainError);
  CHECK_THROWS_AS(reconstruct_profile(WaveParams{-1, 0.01, 1}, 33), DomainError);
  CHECK_THROWS_AS(reconstruct_profile(WaveParams{-1, 0.5, 1}, 32), RegionError);
}
