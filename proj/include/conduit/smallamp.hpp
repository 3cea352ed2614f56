#pragma once

#include <complex>

#include "conduit/quadrature.hpp"

namespace conduit {

/// Frequency expansion omega = omega0 + A^2 omega2 and k-derivatives of omega0,
/// with x = (2 pi k)^2 M.
struct OmegaExpansion {
  double omega0;
  double omega2;
  double d_omega0;   ///< d omega0 / dk
  double d2_omega0;  ///< d^2 omega0 / dk^2
};

OmegaExpansion omega_expansion(double k, double M);

/// Leading-order characteristic speeds of the modulation system (lab frame):
/// lambda1 = 2M and lambda_pm = omega0' +- A sqrt(-n omega0'').
struct AsymptoticSpeeds {
  double lambda1;
  std::complex<double> lambda_plus;
  std::complex<double> lambda_minus;
  double n_coef;
};

AsymptoticSpeeds asymptotic_speeds(double k, double M, double A);

/// Critical wavenumber of modulational instability, (2 pi k)^2 M = 3.
double mi_threshold(double M);

/// Row of the small-amplitude table.
struct StokesData {
  double k, M, A, x;
  OmegaExpansion omega;
  AsymptoticSpeeds speeds;
  bool elliptic;
};

StokesData stokes_data(double k, double M, double A);

/// Truncated Stokes profile M + A cos(2 pi theta) + A^2 phi2 cos(4 pi theta); requires A < M/10.
/// params carries linear-theory estimates of (a, E, c) only.
WaveProfile stokes_profile(double k, double M, double A, int n);

}  // namespace conduit
