#pragma once

#include <Eigen/Dense>
#include <utility>

#include "conduit/potential.hpp"

namespace conduit {

struct TurningPoints {
  double phi_min;
  double phi_max;
  bool degenerate = false;  ///< E == E_min: the orbit is the constant state phi2
  bool boundary = false;    ///< E == E_max: phi_min is the saddle phi1
};

/// Sampled periodic profile on theta_i = i/n, theta in [0, 1).
/// `mass` and `qinv` are per-unit-phase means, the coordinates of the modulation system.
struct WaveProfile {
  int n = 0;
  Eigen::VectorXd theta;
  Eigen::VectorXd values;
  Eigen::VectorXd deriv;  ///< d(values)/dtheta
  double k = 0;
  double c = 0;
  double omega = 0;
  WaveParams params;
  double mass = 0;
  double qinv = 0;
};

/// Gauss-Legendre rule on [0, 1], n nodes (cached, thread-safe).
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n);

TurningPoints turning_points(const WaveParams& p);

/// Quadrature of the phase measure on one orbit of phi_zz = -V'(phi).
/// Nodes cover one half-orbit, phi = m - h cos(pi s), with Gauss-Legendre in s
/// doubled until the period and the phase means settle.
class Orbit {
public:
  explicit Orbit(const WaveParams& p, double rtol = 1e-14, int max_nodes = 4096);

  const WaveParams& params() const { return params_; }
  const TurningPoints& turning() const { return tp_; }
  double period() const { return period_; }
  double wavenumber() const { return 1.0 / period_; }
  int nodes_used() const { return static_cast<int>(phi_.size()); }

  /// phi at the nodes, E - V(phi) at the nodes, normalized phase weights.
  const Eigen::VectorXd& phi() const { return phi_; }
  const Eigen::VectorXd& gap() const { return gap_; }
  const Eigen::VectorXd& weights() const { return w_; }

  /// Phase mean of f(phi, E - V(phi)) over theta in [0, 1).
  template <typename F>
  double average(F&& f) const {
    double s = 0;
    for (Eigen::Index i = 0; i < phi_.size(); ++i) s += w_[i] * f(phi_[i], gap_[i]);
    return s;
  }

  double mean_mass() const;  ///< int_0^1 phi dtheta
  double mean_qinv() const;  ///< int_0^1 (phi + k^2 phi_theta^2) / phi^2 dtheta

private:
  void fill(int n);

  WaveParams params_;
  TurningPoints tp_;
  double period_ = 0;
  Eigen::VectorXd phi_, gap_, w_;
};

/// Period T in z; RegionError outside the existence region.
double period(const WaveParams& p);
/// Per-wavelength mass int_0^T phi dz.
double mass(const WaveParams& p);
/// Per-wavelength int_0^T (phi + phi_z^2) / phi^2 dz.
double q_invariant(const WaveParams& p);

/// Even grid profile with its maximum at theta = 0; n even, n >= 16.
WaveProfile reconstruct_profile(const WaveParams& p, int n);

}  // namespace conduit
