#pragma once

#include <Eigen/Dense>
#include <functional>

#include "conduit/quadrature.hpp"

namespace conduit {

/// Wavenumber and per-wavelength integrals: k = 1/T, M = int_0^T phi dz, Q = int_0^T (phi + phi_z^2)/phi^2 dz.
struct ModParams {
  double k;
  double M;
  double Q;
};

/// Wavenumber and per-unit-phase means (k, k M, k Q): the coordinates of the modulation system.
struct WhithamCoords {
  double k;
  double M;
  double Q;
};

inline WhithamCoords to_whitham(const ModParams& m) { return {m.k, m.k * m.M, m.k * m.Q}; }
inline ModParams to_mod_params(const WhithamCoords& w) { return {w.k, w.M / w.k, w.Q / w.k}; }

struct Nondegeneracy {
  double T_a;
  double TM_aE;    ///< det d(T,M)/d(a,E)
  double TMQ_aEc;  ///< det d(T,M,Q)/d(a,E,c)
  bool T_a_degenerate = false;
  bool TM_degenerate = false;
  bool TMQ_degenerate = false;
  bool any() const { return T_a_degenerate || TM_degenerate || TMQ_degenerate; }
};

/// Finite-difference Jacobian with its Richardson error estimate.
template <typename Scalar, int Rows, int Cols>
struct JacobianEstimate {
  Eigen::Matrix<Scalar, Rows, Cols> value;
  Eigen::Matrix<Scalar, Rows, Cols> error;
};
using Jacobian3 = JacobianEstimate<double, 3, 3>;

/// Chart y = (a, r, c) of the existence region with E = E_min(a, c) + r^2.
/// Every quantity of the wave is smooth in y through r = 0.
Eigen::Vector3d to_chart(const WaveParams& p);
WaveParams from_chart(const Eigen::Vector3d& y);

/// d(a, E, c)-partials from chart partials: columns (a, r, c) -> (a, E, c).
Eigen::MatrixXd chart_to_aEc(const Eigen::MatrixXd& d_chart, const WaveParams& p);

/// Central differences in the chart at steps h, h/2, h/4 with Richardson extrapolation of the
/// last two; the error is the change from the previous extrapolant. `rel_step` scales the
/// steps (a: max(1,|a|), r: min(r, r_max - r), c: c). Steps shrink while a stencil point
/// leaves the region.
JacobianEstimate<double, Eigen::Dynamic, 3> chart_jacobian(
    const std::function<Eigen::VectorXd(const WaveParams&)>& f, const WaveParams& p,
    double rel_step = 1e-3);

ModParams kmq_map(const WaveParams& p);
WhithamCoords whitham_coords(const WaveParams& p);

/// d(k, M, Q)/d(a, E, c) for the per-wavelength ModParams.
Jacobian3 jacobian_kmq(const WaveParams& p, double rel_step = 1e-3);

Nondegeneracy nondegeneracy(const WaveParams& p, double rel_step = 1e-3);
/// Flag logic on given brackets: a bracket is degenerate when |value| <= max(floor, 10 * error).
Nondegeneracy classify_nondegeneracy(const Eigen::Vector3d& values, const Eigen::Vector3d& errors,
                                     double floor = 1e-12);

struct InversionReport {
  WaveParams params;
  int iterations;
  double residual;
};

/// Newton in the chart for kmq_map(p) = m; relative residual below `tol`.
InversionReport invert_to_aEc_report(const ModParams& m, const WaveParams& guess, double tol = 1e-10,
                                     int max_iter = 50);
WaveParams invert_to_aEc(const ModParams& m, const WaveParams& guess);
WaveParams invert_whitham(const WhithamCoords& w, const WaveParams& guess);

/// Half peak-to-trough amplitude (phi_max - phi_min) / 2.
double wave_amplitude(const WaveParams& p);

/// Wave with wavenumber k, mean mass M and half peak-to-trough amplitude A, by Newton from
/// the linear small-amplitude guess.
WaveParams match_amplitude(double k, double M, double A, int max_iter = 50);

/// Grid derivatives of the even profile along the modulation coordinates (k, M, Q) (means),
/// each taken with the other two fixed, plus the gradient of c in the same coordinates.
struct ProfilePartials {
  Eigen::VectorXd phi_k, phi_M, phi_Q;
  Eigen::Vector3d c_grad;  ///< (c_k, c_M, c_Q)
  Eigen::VectorXd error;   ///< max Richardson error per grid point over the three partials
};
ProfilePartials profile_partials(const WaveParams& p, int n, double rel_step = 1e-3);

}  // namespace conduit
