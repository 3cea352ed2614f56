#include "conduit/potential.hpp"

#include <cmath>

#include "conduit/roots.hpp"

namespace conduit {

std::optional<CriticalPair> critical_points(const WaveParams& p) {
  if (!(p.c > 0)) throw DomainError("critical_points requires c > 0");
  if (!(p.a < zeta(p.c))) return std::nullopt;

  // V'' vanishes at phi_plus; V' has its minimum there.
  const double phi_plus = std::exp(-(p.a * p.c + 1.5));
  auto fdf = [&](double phi) {
    const auto d = potential_derivatives(phi, p);
    return std::pair{d.d1, d.d2};
  };

  if (potential_derivatives(phi_plus, p).d1 >= 0) return CriticalPair{phi_plus, phi_plus, true};

  double lo = 0.5 * phi_plus;
  while (potential_derivatives(lo, p).d1 <= 0) {
    lo *= 0.5;
    if (lo < 1e-300) throw RootNotConverged("no lower bracket for phi1");
  }
  double hi = 2 * phi_plus;
  while (potential_derivatives(hi, p).d1 <= 0) {
    hi *= 2;
    if (hi > 1e300) throw RootNotConverged("no upper bracket for phi2");
  }

  CriticalPair cp{};
  cp.phi1 = newton_bisect(fdf, lo, phi_plus, 1e-13);
  cp.phi2 = newton_bisect(fdf, phi_plus, hi, 1e-13);
  cp.near_degenerate = cp.phi2 - cp.phi1 < 1e-6;
  return cp;
}

std::pair<double, double> energy_range(const WaveParams& p) {
  const auto cp = critical_points(p);
  if (!cp) throw RegionError("a >= zeta(c): no potential well");
  return {effective_potential(cp->phi2, p), effective_potential(cp->phi1, p)};
}

bool in_region(const WaveParams& p) {
  if (!(p.c > 0) || !(p.a < zeta(p.c))) return false;
  const auto [emin, emax] = energy_range(p);
  return p.E > emin && p.E < emax;
}

}  // namespace conduit
