#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "conduit/quadrature.hpp"

namespace conduit {

/// Bloch operators at one xi in the Fourier basis e^{2 pi i m theta}, |m| <= n/2 - 1:
///   G f = f + k^2 phi'' f - k^2 phi f''
///   L f = c f - 2 phi f - k^2 c phi'' f + 2 k^2 c phi' f' - k^2 c phi f''
///   A   = G^{-1} k (d/dtheta + i xi) L
/// with d/dtheta + i xi acting as i (2 pi m + xi).
struct OperatorStack {
  double xi = 0;
  double k = 0;
  double c = 0;
  Eigen::VectorXi modes;
  Eigen::MatrixXcd G, L, A;
  double cond_G = 1;  ///< estimate from the LU reciprocal condition number
};

/// Origin eigenvalues lambda_j(xi) tracked across xi, and the limits mu_j(0) of
/// mu_j(xi) = lambda_j(xi) / (i k xi).
struct BlochResult {
  std::vector<double> xis;
  std::vector<std::array<std::complex<double>, 3>> triples;  ///< lambda_j per xi, branch order fixed
  Eigen::Vector3cd slopes;  ///< mu_j(0), sorted by real then imaginary part
  double residual = 0;      ///< RMS misfit of the linear fits
};

OperatorStack assemble_operators(const WaveProfile& w, double xi);

/// Eigenvalues of A_xi sorted by modulus.
Eigen::VectorXcd bloch_spectrum(const WaveProfile& w, double xi);

/// Three eigenvalues nearest the origin, tracked across xi by nearest-neighbour matching,
/// each fitted linearly in xi and evaluated at xi = 0.
BlochResult origin_slopes(const WaveProfile& w,
                          const std::vector<double>& xis = {1e-3, -1e-3, 5e-4, -5e-4});

/// Physical-space representation F^{-1} M F on the (2N+1)-point grid.
Eigen::MatrixXcd to_physical(const Eigen::MatrixXcd& m);

/// Eigenvalue of the constant state phi == M at Fourier mode m:
/// i k kappa (c - 2 M / (1 + k^2 M kappa^2)), kappa = 2 pi m + xi.
std::complex<double> constant_state_symbol(double k, double M, double c, int m, double xi);

/// Generalized-kernel checks of A_0 built from the profile partials.
struct KernelDiagnostics {
  double res_phi_prime;  ///< |A0 phi'|
  double res_phi_M;      ///< |A0 phi_M + k c_M phi'|
  double res_phi_Q;      ///< |A0 phi_Q + k c_Q phi'|
  double res_phi_k;      ///< |A0 phi_k + k c_k phi' + 2 k^2 c G^{-1}((phi')^2 - phi phi'')'|
  double res_adj_one;    ///< |A0^dagger 1|
  double res_adj_G;      ///< |A0^dagger (G^dagger phi^{-2})|
  Eigen::Matrix<double, 2, 3> gram;  ///< {1, G^dagger phi^{-2}} against {phi', phi_M, phi_Q}
  double mean_phi_k;                 ///< <1, phi_k>
  double weighted_phi_k;             ///< <G^dagger phi^{-2}, phi_k>
  double weighted_phi_k_expected;    ///< 2k <phi^{-2}, (phi')^2>
};

KernelDiagnostics kernel_diagnostics(const WaveParams& p, int n);

}  // namespace conduit
