#include "conduit/whitham.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <thread>

namespace conduit {

using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Vector3cd;
using Eigen::VectorXd;
using cd = std::complex<double>;

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Hyperbolic: return "hyperbolic";
    case Classification::Elliptic: return "elliptic";
    case Classification::Marginal: return "marginal";
  }
  return "unknown";
}

FluxAverages flux_averages(const WaveProfile& w) {
  const double kk = w.k * w.k;
  const double f2 = (2 * kk * w.c * w.deriv.array().square() - w.values.array().square()).mean();
  const double f3 = (2 * w.values.array().log()).mean();
  return {f2, f3};
}

FluxAverages flux_averages(const Orbit& o) {
  const double c = o.params().c;
  return {o.average([c](double phi, double e) { return 4 * c * e - phi * phi; }),
          o.average([](double phi, double) { return 2 * std::log(phi); })};
}

Vector3cd cubic_eigenvalues(const Matrix3d& d) {
  const double tr = d.trace();
  const double minors = d(0, 0) * d(1, 1) - d(0, 1) * d(1, 0) + d(0, 0) * d(2, 2) -
                        d(0, 2) * d(2, 0) + d(1, 1) * d(2, 2) - d(1, 2) * d(2, 1);
  const double det = d.determinant();
  Matrix3d comp;
  comp << tr, -minors, det, 1, 0, 0, 0, 1, 0;
  Eigen::EigenSolver<Matrix3d> es(comp, false);
  if (es.info() != Eigen::Success) throw EigenSolveError("companion eigenvalue solve failed");
  Vector3cd roots = es.eigenvalues();
  for (auto& z : roots) {
    const cd f = ((z - tr) * z + minors) * z - det;
    const cd df = (3.0 * z - 2.0 * tr) * z + minors;
    if (std::abs(df) > 0) {
      const cd zn = z - f / df;
      const cd fn = ((zn - tr) * zn + minors) * zn - det;
      if (std::abs(fn) < std::abs(f)) z = zn;
    }
  }
  if (!roots.allFinite()) throw EigenSolveError("non-finite characteristic roots");
  std::sort(roots.begin(), roots.end(), [](cd a, cd b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

Classification classify(const Vector3cd& eig, double tol) {
  const double rho = eig.cwiseAbs().maxCoeff();
  const double im = eig.imag().cwiseAbs().maxCoeff();
  if (im <= tol * rho) return Classification::Hyperbolic;
  if (im > 10 * tol * rho) return Classification::Elliptic;
  return Classification::Marginal;
}

WhithamMatrix whitham_matrix(const WaveParams& p, double rel_step) {
  auto f = [](const WaveParams& q) -> VectorXd {
    const Orbit o(q);
    const auto fl = flux_averages(o);
    VectorXd v(5);
    v << 1 / o.period(), o.mean_mass(), o.mean_qinv(), fl.F2, fl.F3;
    return v;
  };
  const auto jc = chart_jacobian(f, p, rel_step);
  const Matrix3d j1 = jc.value.topRows(3);
  Eigen::FullPivLU<Matrix3d> lu(j1);
  if (!lu.isInvertible()) throw SingularJacobian("(k, M, Q) chart Jacobian is singular");
  const Matrix3d j1inv = lu.inverse();

  // Rows: c, F2, F3 as functions of the chart; c is the third chart coordinate.
  Matrix3d rows;
  rows.row(0) << 0, 0, 1;
  rows.bottomRows(2) = jc.value.bottomRows(2);
  const Matrix3d grad = rows * j1inv;
  // First-order propagation of the row errors and of the J1 errors through the inverse.
  Matrix3d err = Matrix3d::Zero();
  err.bottomRows(2) = jc.error.bottomRows(2) * j1inv.cwiseAbs();
  err += grad.cwiseAbs() * (jc.error.topRows(3) * j1inv.cwiseAbs());

  const VectorXd base = f(p);
  const WhithamCoords w{base[0], base[1], base[2]};
  WhithamMatrix out;
  out.params = p;
  out.coords = w;
  out.c_grad = grad.row(0).transpose();
  out.entries.row(0) = -w.k * grad.row(0);
  out.entries(0, 0) -= p.c;
  out.entries.bottomRows(2) = grad.bottomRows(2);
  out.error = err;
  out.error.row(0) *= w.k;
  out.speeds = cubic_eigenvalues(out.entries);
  out.speeds_lab = cubic_eigenvalues(-out.entries);
  out.classification = classify(out.speeds, out.tol);
  return out;
}

std::vector<SweepResult> classify_sweep(const std::vector<SweepPoint>& points, int threads) {
  std::vector<SweepResult> results(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      SweepResult& r = results[i];
      try {
        WaveParams p;
        if (const auto* ap = std::get_if<AmplitudePoint>(&points[i]))
          p = match_amplitude(ap->k, ap->M, ap->A);
        else
          p = std::get<WaveParams>(points[i]);
        r.params = p;
        const auto wm = whitham_matrix(p);
        r.coords = wm.coords;
        r.speeds = wm.speeds;
        r.classification = wm.classification;
        r.ok = true;
      } catch (const std::exception& e) {
        r.ok = false;
        r.failure = e.what();
      }
    }
  };
  int n = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n = std::min<int>(n, static_cast<int>(std::max<std::size_t>(1, points.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace conduit
