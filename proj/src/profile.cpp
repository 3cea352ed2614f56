#include <cmath>
#include <vector>

#include "conduit/ode.hpp"
#include "conduit/quadrature.hpp"
#include "conduit/spectral.hpp"

namespace conduit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd profile_residual(const VectorXd& phi, const MatrixXd& d1, const MatrixXd& d2, double k,
                          double c, double E) {
  const VectorXd p1 = d1 * phi, p2 = d2 * phi;
  const double kk = k * k;
  return (c * phi.array() - phi.array().square() + kk * c * p1.array().square() -
          kk * c * phi.array() * p2.array() - 2 * c * E)
      .matrix();
}

// Newton on the first-integral form of the profile equation, restricted to even grid functions.
void polish_even(VectorXd& phi, double k, double c, double E) {
  const int n = static_cast<int>(phi.size());
  const int h = n / 2;
  const MatrixXd d1 = differentiation_matrix(n, 1), d2 = differentiation_matrix(n, 2);
  const double kk = k * k;
  double best = profile_residual(phi, d1, d2, k, c, E).cwiseAbs().maxCoeff();
  for (int it = 0; it < 8; ++it) {
    const VectorXd r = profile_residual(phi, d1, d2, k, c, E);
    const VectorXd p1 = d1 * phi, p2 = d2 * phi;
    MatrixXd jac = (-kk * c) * (phi.asDiagonal() * d2);
    jac += (2 * kk * c) * (p1.asDiagonal() * d1);
    jac.diagonal().array() += c - 2 * phi.array() - kk * c * p2.array();

    MatrixXd je(h + 1, h + 1);
    for (int j = 0; j <= h; ++j) {
      VectorXd col = jac.col(j);
      if (j > 0 && j < h) col += jac.col(n - j);
      je.col(j) = col.head(h + 1);
    }
    const VectorXd delta = je.partialPivLu().solve(r.head(h + 1));
    VectorXd trial = phi;
    for (int j = 0; j <= h; ++j) {
      trial[j] -= delta[j];
      if (j > 0 && j < h) trial[n - j] = trial[j];
    }
    const double res = profile_residual(trial, d1, d2, k, c, E).cwiseAbs().maxCoeff();
    if (!(res < best)) break;
    best = res;
    phi = trial;
    if (delta.cwiseAbs().maxCoeff() < 1e-15 * phi.cwiseAbs().maxCoeff()) break;
  }
}

}  // namespace

WaveProfile reconstruct_profile(const WaveParams& p, int n) {
  if (n < 16 || n % 2 != 0) throw DomainError("profile grid needs even n >= 16");
  const Orbit orbit(p);
  const double T = orbit.period();

  WaveProfile w;
  w.n = n;
  w.theta = VectorXd::LinSpaced(n, 0, 1.0 - 1.0 / n);
  w.k = 1 / T;
  w.c = p.c;
  w.omega = w.k * p.c;
  w.params = p;
  w.mass = orbit.mean_mass();
  w.qinv = orbit.mean_qinv();

  if (orbit.turning().degenerate) {
    w.values = VectorXd::Constant(n, orbit.turning().phi_max);
    w.deriv = VectorXd::Zero(n);
    return w;
  }

  const int h = n / 2;
  std::vector<double> times(h);
  for (int i = 1; i <= h; ++i) times[i - 1] = i * T / n;
  w.values.resize(n);
  w.deriv.resize(n);
  w.values[0] = orbit.turning().phi_max;
  w.deriv[0] = 0;
  auto rhs = [&](double, const Eigen::Vector2d& y) {
    return Eigen::Vector2d(y[1], -potential_derivatives(y[0], p).d1);
  };
  OdeOptions opt;
  opt.rtol = 1e-13;
  opt.atol = 1e-15;
  double drift = 0;
  integrate_dp45(
      rhs, Eigen::Vector2d(orbit.turning().phi_max, 0.0), 0.0, times,
      [&](std::size_t idx, double, const Eigen::Vector2d& y) {
        const int i = static_cast<int>(idx) + 1;
        if (!(y[0] > 0)) throw OdeNotConverged("profile left phi > 0");
        w.values[i] = w.values[n - i] = y[0];
        w.deriv[i] = T * y[1];
        w.deriv[n - i] = -T * y[1];
        drift = std::max(drift, std::abs(0.5 * y[1] * y[1] + effective_potential(y[0], p) - p.E));
      },
      opt);
  w.deriv[h] = 0;
  if (drift > 1e-9 * std::max(1.0, std::abs(p.E)))
    throw EnergyDriftError("energy drift " + std::to_string(drift) + " along the profile ODE");

  polish_even(w.values, w.k, p.c, p.E);
  w.deriv = spectral_derivative(w.values, 1);
  return w;
}

}  // namespace conduit
