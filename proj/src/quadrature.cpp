#include "conduit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "conduit/roots.hpp"

namespace conduit {

using Eigen::VectorXd;

std::pair<VectorXd, VectorXd> gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::pair<VectorXd, VectorXd>> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  VectorXd s(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double wi = 1.0 / ((1 - x * x) * dp * dp);
    s[i] = (1 - x) / 2;
    s[n - 1 - i] = (1 + x) / 2;
    w[i] = w[n - 1 - i] = wi;
  }
  return cache.emplace(n, std::pair{s, w}).first->second;
}

TurningPoints turning_points(const WaveParams& p) {
  const auto cp = critical_points(p);
  if (!cp) throw RegionError("a >= zeta(c): no potential well");
  const double emin = effective_potential(cp->phi2, p);
  const double emax = effective_potential(cp->phi1, p);
  if (!(p.E >= emin && p.E <= emax))
    throw RegionError("E outside [E_min, E_max]");
  if (p.E == emin || cp->phi1 == cp->phi2) return {cp->phi2, cp->phi2, true, false};

  auto fdf = [&](double phi) {
    return std::pair{p.E - effective_potential(phi, p), -potential_derivatives(phi, p).d1};
  };
  TurningPoints tp{};
  if (p.E == emax) {
    tp.phi_min = cp->phi1;
    tp.boundary = true;
  } else {
    tp.phi_min = newton_bisect(fdf, cp->phi1, cp->phi2, 0.0);
  }
  double hi = 2 * cp->phi2;
  while (p.E - effective_potential(hi, p) >= 0) hi *= 2;
  tp.phi_max = newton_bisect(fdf, cp->phi2, hi, 0.0);
  if (!(tp.phi_max > tp.phi_min)) return {cp->phi2, cp->phi2, true, false};
  return tp;
}

Orbit::Orbit(const WaveParams& p, double rtol, int max_nodes) : params_(p), tp_(turning_points(p)) {
  if (tp_.boundary) throw RegionError("E == E_max: homoclinic orbit has no finite period");
  if (tp_.degenerate) {
    const double v2 = potential_derivatives(tp_.phi_min, p).d2;
    period_ = 2 * std::numbers::pi / std::sqrt(v2);
    phi_ = VectorXd::Constant(1, tp_.phi_min);
    gap_ = VectorXd::Zero(1);
    w_ = VectorXd::Ones(1);
    return;
  }
  int n = 16;
  fill(n);
  Eigen::Vector3d prev(period_, mean_mass(), mean_qinv());
  double prev_change = std::numeric_limits<double>::infinity();
  for (;;) {
    n *= 2;
    if (n > max_nodes)
      throw QuadratureNotConverged("period quadrature exceeded " + std::to_string(max_nodes) + " nodes");
    fill(n);
    const Eigen::Vector3d cur(period_, mean_mass(), mean_qinv());
    const double change = ((cur - prev).array().abs() / cur.array().abs()).maxCoeff();
    if (change <= std::max(rtol, 64 * std::numeric_limits<double>::epsilon())) return;
    // Rounding floor: the change has stopped shrinking at a negligible level.
    if (change < 1e-11 && change > 0.25 * prev_change) return;
    prev = cur;
    prev_change = change;
  }
}

void Orbit::fill(int n) {
  const auto& [s, gw] = gauss_legendre(n);
  const double lo = tp_.phi_min, hi = tp_.phi_max;
  const double h = (hi - lo) / 2;
  phi_.resize(n);
  gap_.resize(n);
  w_.resize(n);
  double total = 0;
  for (int i = 0; i < n; ++i) {
    const double half = std::numbers::pi * s[i] / 2;
    const double below = 2 * h * std::sin(half) * std::sin(half);  // phi - phi_min
    const double above = 2 * h * std::cos(half) * std::cos(half);  // phi_max - phi
    double phi, g;
    if (below <= above) {
      phi = lo + below;
      g = -potential_divided_difference_delta(lo, below, params_) / above;
    } else {
      phi = hi - above;
      g = potential_divided_difference_delta(hi, -above, params_) / below;
    }
    phi_[i] = phi;
    gap_[i] = g * below * above;
    w_[i] = gw[i] * std::numbers::pi / std::sqrt(g);
    total += w_[i];
  }
  period_ = std::numbers::sqrt2 * total;
  w_ /= total;
}

double Orbit::mean_mass() const {
  return average([](double phi, double) { return phi; });
}

double Orbit::mean_qinv() const {
  return average([](double phi, double e) { return 1 / phi + 2 * e / (phi * phi); });
}

double period(const WaveParams& p) { return Orbit(p).period(); }

double mass(const WaveParams& p) {
  const Orbit o(p);
  return o.period() * o.mean_mass();
}

double q_invariant(const WaveParams& p) {
  const Orbit o(p);
  return o.period() * o.mean_qinv();
}

}  // namespace conduit
