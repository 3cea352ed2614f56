#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace conduit {

/// Periodic solution of u_t + (u^2)_x - (u^2 (u^{-1} u_t)_x)_x = 0 on [0, L).
struct EvolutionState {
  int n = 0;
  double L = 1;
  Eigen::VectorXd u;
  double t = 0;
  double dt = 0;  ///< next step size proposed by the controller
  double M = 0;   ///< mean of u
  double Q = 0;   ///< mean of u^{-1} + u^{-2} u_x^2
  Eigen::VectorXd rate;  ///< u_t at (t, u), reused by the next step
};

struct EvolutionOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double min_step = 1e-10;
  double dealias = 2.0 / 3.0;
  double resolution_tol = 1e-9;  ///< relative size allowed in the top third of the kept band
};

EvolutionState make_state(const Eigen::VectorXd& u, double L, double dt);

/// Mean mass and mean Q density of a grid function on [0, L).
double mass_mean(const Eigen::VectorXd& u);
double q_mean(const Eigen::VectorXd& u, double L);

/// u_t = H[u]^{-1}(-(u^2)_x) with H[u] f = f - (u^2 (u^{-1} f)_x)_x. Solved for g = u_t / u,
/// where H becomes u g - (u^2 g_x)_x, symmetric positive definite after discretization.
Eigen::VectorXd conduit_rate(const Eigen::VectorXd& u, double L, double dealias = 2.0 / 3.0);

/// One accepted Dormand-Prince step of at most `max_dt` (retries on rejection).
EvolutionState step(const EvolutionState& s, const EvolutionOptions& opt = {},
                    double max_dt = INFINITY);

/// Energy sum |u_m|^2 over the modes m = j N_w +- 1 (0 < m < n/2) adjacent to the carrier
/// harmonics of a wave with `wavelengths` periods in the domain.
double sideband_energy(const Eigen::VectorXd& u, int wavelengths);

/// True when the top third of the dealiased band holds less than `tol` of the peak coefficient.
bool is_resolved(const Eigen::VectorXd& u, double tol, double dealias = 2.0 / 3.0);

struct Snapshot {
  double t;
  double M;
  double Q;
  double sideband_energy;
  std::optional<Eigen::VectorXd> u;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  EvolutionState final;
  long steps = 0;
  std::vector<std::string> warnings;
};

/// Integrate to t_max, recording at multiples of record_every (and at t0, t_max).
Trajectory evolve(const EvolutionState& s0, double t_max, double record_every, int wavelengths = 1,
                  bool keep_u = false, const EvolutionOptions& opt = {});

/// `profile` (one wavelength, uniform in phase) tiled over `wavelengths` periods of length 1/k,
/// plus `noise` times random-phase cosines on the carrier sidebands 1 and N_w +- 1.
struct SeededWave {
  Eigen::VectorXd u;
  double L;
};
SeededWave seeded_wave(const Eigen::VectorXd& profile, double k, int wavelengths, double noise,
                       unsigned seed);

}  // namespace conduit
