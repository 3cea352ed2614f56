#include "conduit/reparam.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace conduit {

using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {

struct Well {
  double phi2;
  double emin;
  double emax;
};

std::optional<Well> well(double a, double c) {
  if (!(c > 0)) return std::nullopt;
  const WaveParams p{a, 0, c};
  const auto cp = critical_points(p);
  if (!cp || cp->near_degenerate) return std::nullopt;
  return Well{cp->phi2, effective_potential(cp->phi2, p), effective_potential(cp->phi1, p)};
}

bool chart_valid(const Vector3d& y) {
  const auto w = well(y[0], y[2]);
  return w && y[1] * y[1] < w->emax - w->emin;
}

double max_rel(const Vector3d& r) { return r.cwiseAbs().maxCoeff(); }

// Newton in the chart on a relative residual; FD Jacobian from chart_jacobian.
InversionReport chart_newton(const std::function<Vector3d(const WaveParams&)>& residual,
                             Vector3d y, double tol, int max_iter) {
  Vector3d r = residual(from_chart(y));
  for (int it = 0;; ++it) {
    if (max_rel(r) < tol) return {from_chart(y), it, max_rel(r)};
    if (it >= max_iter)
      throw NewtonNotConverged("residual " + std::to_string(max_rel(r)) + " after " +
                               std::to_string(max_iter) + " iterations");
    const auto jac = chart_jacobian([&](const WaveParams& q) -> VectorXd { return residual(q); },
                                    from_chart(y));
    const Matrix3d J = jac.value;
    Eigen::JacobiSVD<Matrix3d> svd(J);
    const auto sv = svd.singularValues();
    if (!(sv[2] > 1e-14 * sv[0])) throw SingularJacobian("chart Jacobian is singular");
    const Vector3d dy = J.fullPivLu().solve(-r);
    double lambda = 1;
    for (int ls = 0;; ++ls) {
      const Vector3d trial = y + lambda * dy;
      if (chart_valid(trial)) {
        const Vector3d rt = residual(from_chart(trial));
        if (rt.allFinite() && (max_rel(rt) < max_rel(r) || ls >= 20)) {
          y = trial;
          r = rt;
          break;
        }
      }
      lambda /= 2;
      if (ls >= 40) throw NewtonNotConverged("line search left the existence region");
    }
  }
}

}  // namespace

Vector3d to_chart(const WaveParams& p) {
  const auto [emin, emax] = energy_range(p);
  if (!(p.E >= emin && p.E < emax)) throw RegionError("E outside [E_min, E_max)");
  return {p.a, std::sqrt(p.E - emin), p.c};
}

WaveParams from_chart(const Vector3d& y) {
  const auto w = well(y[0], y[2]);
  if (!w) throw RegionError("chart point has no potential well");
  return {y[0], w->emin + y[1] * y[1], y[2]};
}

MatrixXd chart_to_aEc(const MatrixXd& d, const WaveParams& p) {
  const auto w = well(p.a, p.c);
  if (!w) throw RegionError("no potential well");
  const double r = std::sqrt(p.E - w->emin);
  if (!(r > 0)) throw RegionError("E == E_min: E-derivatives undefined in the chart");
  const double phi2sq = w->phi2 * w->phi2;
  const double dr_da = -phi2sq / (2 * r);
  const double dr_dE = 1 / (2 * r);
  const double dr_dc = phi2sq * std::log(w->phi2) / (p.c * p.c) / (2 * r);
  MatrixXd out(d.rows(), 3);
  out.col(0) = d.col(0) + dr_da * d.col(1);
  out.col(1) = dr_dE * d.col(1);
  out.col(2) = d.col(2) + dr_dc * d.col(1);
  return out;
}

JacobianEstimate<double, Eigen::Dynamic, 3> chart_jacobian(
    const std::function<VectorXd(const WaveParams&)>& f, const WaveParams& p, double rel_step) {
  const auto w = well(p.a, p.c);
  if (!w) throw RegionError("no potential well");
  const Vector3d y = to_chart(p);
  const double rmax = std::sqrt(w->emax - w->emin);
  const double r = y[1];
  Vector3d h(rel_step * std::max(1.0, std::abs(p.a)),
             rel_step * (r > 0 ? std::min(r, rmax - r) : rmax), rel_step * p.c);

  JacobianEstimate<double, Eigen::Dynamic, 3> out;
  for (int j = 0; j < 3; ++j) {
    const double h0 = h[j];
    auto ok = [&](double step) {
      return chart_valid(y + step * Vector3d::Unit(j)) && chart_valid(y - step * Vector3d::Unit(j));
    };
    while (!ok(h[j])) {
      h[j] /= 2;
      if (h[j] < 1e-5 * h0) throw SteppingError("finite-difference stencil leaves the existence region");
    }
    auto at = [&](double step) { return f(from_chart(y + step * Vector3d::Unit(j))); };
    auto central = [&](double step) -> VectorXd { return (at(step) - at(-step)) / (2 * step); };
    const VectorXd d1 = central(h[j]), d2 = central(h[j] / 2), d4 = central(h[j] / 4);
    const VectorXd r1 = (4 * d2 - d1) / 3, r2 = (4 * d4 - d2) / 3;
    if (j == 0) {
      out.value.resize(d1.size(), 3);
      out.error.resize(d1.size(), 3);
    }
    out.value.col(j) = r2;
    out.error.col(j) = (r2 - r1).cwiseAbs();
  }
  return out;
}

ModParams kmq_map(const WaveParams& p) {
  const Orbit o(p);
  return {1 / o.period(), o.period() * o.mean_mass(), o.period() * o.mean_qinv()};
}

WhithamCoords whitham_coords(const WaveParams& p) {
  const Orbit o(p);
  return {1 / o.period(), o.mean_mass(), o.mean_qinv()};
}

namespace {
Jacobian3 aEc_jacobian(const std::function<VectorXd(const WaveParams&)>& f, const WaveParams& p,
                       double rel_step) {
  const auto jc = chart_jacobian(f, p, rel_step);
  Jacobian3 out;
  out.value = chart_to_aEc(jc.value, p);
  // Errors combine with |coefficients| of the chain rule.
  const MatrixXd ones = MatrixXd::Identity(3, 3);
  const MatrixXd coef = chart_to_aEc(ones, p).cwiseAbs();
  out.error = jc.error * coef;
  return out;
}
}  // namespace

Jacobian3 jacobian_kmq(const WaveParams& p, double rel_step) {
  return aEc_jacobian(
      [](const WaveParams& q) -> VectorXd {
        const auto m = kmq_map(q);
        return Vector3d(m.k, m.M, m.Q);
      },
      p, rel_step);
}

Nondegeneracy classify_nondegeneracy(const Vector3d& v, const Vector3d& e, double floor) {
  Nondegeneracy n{v[0], v[1], v[2]};
  n.T_a_degenerate = !(std::abs(v[0]) > std::max(floor, 10 * e[0]));
  n.TM_degenerate = !(std::abs(v[1]) > std::max(floor, 10 * e[1]));
  n.TMQ_degenerate = !(std::abs(v[2]) > std::max(floor, 10 * e[2]));
  return n;
}

Nondegeneracy nondegeneracy(const WaveParams& p, double rel_step) {
  const auto j = aEc_jacobian(
      [](const WaveParams& q) -> VectorXd {
        const Orbit o(q);
        return Vector3d(o.period(), o.period() * o.mean_mass(), o.period() * o.mean_qinv());
      },
      p, rel_step);
  const Matrix3d& J = j.value;
  const Matrix3d& E = j.error;
  Vector3d v, e;
  v[0] = J(0, 0);
  e[0] = E(0, 0);
  v[1] = J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0);
  e[1] = std::abs(J(1, 1)) * E(0, 0) + std::abs(J(0, 0)) * E(1, 1) + std::abs(J(1, 0)) * E(0, 1) +
         std::abs(J(0, 1)) * E(1, 0);
  v[2] = J.determinant();
  double err = 0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      Matrix3d m = J;
      m(r, c) += 1;
      err += std::abs(m.determinant() - v[2]) * E(r, c);
    }
  e[2] = err;
  return classify_nondegeneracy(v, e);
}

InversionReport invert_to_aEc_report(const ModParams& m, const WaveParams& guess, double tol,
                                     int max_iter) {
  if (!(m.k > 0 && m.M > 0 && m.Q > 0)) throw DomainError("ModParams must be positive");
  auto residual = [&](const WaveParams& q) {
    const auto v = kmq_map(q);
    return Vector3d((v.k - m.k) / m.k, (v.M - m.M) / m.M, (v.Q - m.Q) / m.Q);
  };
  return chart_newton(residual, to_chart(guess), tol, max_iter);
}

WaveParams invert_to_aEc(const ModParams& m, const WaveParams& guess) {
  return invert_to_aEc_report(m, guess).params;
}

WaveParams invert_whitham(const WhithamCoords& w, const WaveParams& guess) {
  return invert_to_aEc(to_mod_params(w), guess);
}

double wave_amplitude(const WaveParams& p) {
  const auto tp = turning_points(p);
  return (tp.phi_max - tp.phi_min) / 2;
}

WaveParams match_amplitude(double k, double M, double A, int max_iter) {
  if (!(k > 0 && M > 0 && A > 0)) throw DomainError("match_amplitude needs k, M, A > 0");
  const double x = 4 * std::numbers::pi * std::numbers::pi * k * k * M;
  const double c = 2 * M / (x + 1);
  const double a = -(2 * M * std::log(M) / c + M / c + 1) / (2 * M);
  WaveParams g{a, 0, c};
  g.E = effective_potential(M, g) + 0.5 * (2 / c - 1 / M) * A * A;
  if (!in_region(g)) throw RegionError("linear guess outside the existence region; amplitude too large");
  auto residual = [&](const WaveParams& q) {
    const Orbit o(q);
    const auto tp = o.turning();
    return Vector3d((1 / o.period() - k) / k, (o.mean_mass() - M) / M,
                    ((tp.phi_max - tp.phi_min) / 2 - A) / A);
  };
  return chart_newton(residual, to_chart(g), 1e-12, max_iter).params;
}

ProfilePartials profile_partials(const WaveParams& p, int n, double rel_step) {
  auto f = [n](const WaveParams& q) -> VectorXd {
    const auto w = reconstruct_profile(q, n);
    VectorXd v(n + 4);
    v.head(n) = w.values;
    v.tail(4) << w.k, w.mass, w.qinv, q.c;
    return v;
  };
  const auto jc = chart_jacobian(f, p, rel_step);
  const Matrix3d j1 = jc.value.block(n, 0, 3, 3);
  const Matrix3d j1inv = j1.inverse();
  const MatrixXd z = jc.value * j1inv;
  const MatrixXd ez = jc.error * j1inv.cwiseAbs();

  ProfilePartials out;
  out.phi_k = z.col(0).head(n);
  out.phi_M = z.col(1).head(n);
  out.phi_Q = z.col(2).head(n);
  out.c_grad = z.row(n + 3).transpose();
  out.error = ez.topRows(n).rowwise().maxCoeff();
  return out;
}

}  // namespace conduit
