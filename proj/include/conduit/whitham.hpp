#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "conduit/reparam.hpp"

namespace conduit {

/// Hyperbolic (all characteristic speeds real) is a necessary condition for modulational
/// stability only; Elliptic implies instability.
enum class Classification { Hyperbolic, Elliptic, Marginal };

std::string to_string(Classification c);

struct FluxAverages {
  double F2;  ///< int_0^1 (2 k^2 c phi'^2 - phi^2) dtheta
  double F3;  ///< int_0^1 2 ln(phi) dtheta
};

/// Trapezoid averages over a grid profile.
FluxAverages flux_averages(const WaveProfile& w);
/// Quadrature averages over the orbit (k^2 phi'^2 = 2 (E - V)).
FluxAverages flux_averages(const Orbit& o);

/// Modulation matrix D in the mean coordinates (k, M, Q):
/// rows (-(c + k c_k), -k c_M, -k c_Q), grad F2, grad F3.
struct WhithamMatrix {
  Eigen::Matrix3d entries;
  Eigen::Matrix3d error;       ///< propagated finite-difference error
  Eigen::Vector3cd speeds;     ///< eig(D), sorted by real then imaginary part
  Eigen::Vector3cd speeds_lab; ///< eig(-D)
  Classification classification = Classification::Marginal;
  double tol = 1e-7;
  WaveParams params;
  WhithamCoords coords;
  Eigen::Vector3d c_grad;  ///< (c_k, c_M, c_Q)
};

/// Roots of the characteristic cubic of a 3x3 matrix via its companion matrix, one Newton
/// polish each, sorted by real then imaginary part.
Eigen::Vector3cd cubic_eigenvalues(const Eigen::Matrix3d& d);

/// Hyperbolic if max|Im| <= tol*rho, Elliptic if max|Im| > 10*tol*rho, else Marginal.
Classification classify(const Eigen::Vector3cd& eig, double tol = 1e-7);

WhithamMatrix whitham_matrix(const WaveParams& p, double rel_step = 1e-3);

/// A small-amplitude sweep point: wavenumber, mean mass, half peak-to-trough amplitude.
struct AmplitudePoint {
  double k;
  double M;
  double A;
};
using SweepPoint = std::variant<WaveParams, AmplitudePoint>;

struct SweepResult {
  bool ok = false;
  std::string failure;  ///< reason when !ok
  WaveParams params{};
  WhithamCoords coords{};
  Eigen::Vector3cd speeds = Eigen::Vector3cd::Zero();
  Classification classification = Classification::Marginal;
};

/// Classifies every point on a thread pool; results come back in input order and failing
/// points are recorded with their reason instead of aborting the sweep.
std::vector<SweepResult> classify_sweep(const std::vector<SweepPoint>& points, int threads = 0);

}  // namespace conduit
