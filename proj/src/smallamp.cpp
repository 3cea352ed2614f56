#include "conduit/smallamp.hpp"

#include <cmath>
#include <numbers>

namespace conduit {

namespace {
constexpr double two_pi = 2 * std::numbers::pi;

void check_kM(double k, double M) {
  if (!(k > 0 && M > 0)) throw DomainError("small-amplitude expansion needs k > 0 and M > 0");
}
}  // namespace

OmegaExpansion omega_expansion(double k, double M) {
  check_kM(k, M);
  const double x = two_pi * two_pi * k * k * M;
  OmegaExpansion o{};
  o.omega0 = 2 * k * M / (x + 1);
  o.omega2 = (1 - 8 * x) / (12 * two_pi * two_pi * k * M * M * (x + 1));
  o.d_omega0 = 2 * M * (1 - x) / ((x + 1) * (x + 1));
  o.d2_omega0 = 4 * two_pi * two_pi * k * M * M * (x - 3) / std::pow(x + 1, 3);
  return o;
}

AsymptoticSpeeds asymptotic_speeds(double k, double M, double A) {
  const auto o = omega_expansion(k, M);
  const double x = two_pi * two_pi * k * k * M;
  AsymptoticSpeeds s{};
  s.lambda1 = 2 * M;
  s.n_coef = (8 * x * x + 5 * x + 3) / (12 * two_pi * two_pi * k * M * M * (x + 1) * (x + 3));
  const std::complex<double> root = std::sqrt(std::complex<double>(-s.n_coef * o.d2_omega0));
  s.lambda_plus = o.d_omega0 + A * root;
  s.lambda_minus = o.d_omega0 - A * root;
  return s;
}

double mi_threshold(double M) {
  if (!(M > 0)) throw DomainError("mi_threshold needs M > 0");
  return std::sqrt(3 / M) / two_pi;
}

StokesData stokes_data(double k, double M, double A) {
  StokesData d{};
  d.k = k;
  d.M = M;
  d.A = A;
  d.x = two_pi * two_pi * k * k * M;
  d.omega = omega_expansion(k, M);
  d.speeds = asymptotic_speeds(k, M, A);
  d.elliptic = d.omega.d2_omega0 > 0;
  return d;
}

WaveProfile stokes_profile(double k, double M, double A, int n) {
  check_kM(k, M);
  if (!(A >= 0)) throw DomainError("amplitude must be non-negative");
  if (!(A < M / 10)) throw AmplitudeTooLarge("A must be below M/10");
  if (n < 16 || n % 2 != 0) throw DomainError("profile grid needs even n >= 16");
  const double x = two_pi * two_pi * k * k * M;
  const double b = (x + 1) / (12 * two_pi * two_pi * k * k * M * M);
  const auto o = omega_expansion(k, M);

  WaveProfile w;
  w.n = n;
  w.theta = Eigen::VectorXd::LinSpaced(n, 0, 1.0 - 1.0 / n);
  w.values.resize(n);
  w.deriv.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = two_pi * w.theta[i];
    w.values[i] = M + A * std::cos(t) + A * A * b * std::cos(2 * t);
    w.deriv[i] = -two_pi * (A * std::sin(t) + 2 * A * A * b * std::sin(2 * t));
  }
  w.k = k;
  w.omega = o.omega0 + A * A * o.omega2;
  w.c = w.omega / k;
  w.mass = M;
  w.qinv = ((w.values.array() + k * k * w.deriv.array().square()) / w.values.array().square()).mean();
  // Linear-theory parameters: M is the critical point, E sits A^2 V''/2 above its minimum.
  const double c = w.c;
  w.params.c = c;
  w.params.a = -(2 * M * std::log(M) / c + M / c + 1) / (2 * M);
  w.params.E = effective_potential(M, w.params) +
               0.5 * potential_derivatives(M, w.params).d2 * A * A;
  return w;
}

}  // namespace conduit
