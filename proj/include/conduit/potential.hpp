#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "conduit/errors.hpp"

namespace conduit {

/// Traveling-wave parameters: integration constant a, energy E, speed c > 0.
template <typename Scalar>
struct WaveParamsT {
  Scalar a{};
  Scalar E{};
  Scalar c{1};
};
using WaveParams = WaveParamsT<double>;

template <typename Scalar>
struct PotentialDerivatives {
  Scalar d1, d2, d3;
};

/// Interior maximum phi1 < phi2 interior minimum of V.
struct CriticalPair {
  double phi1;
  double phi2;
  bool near_degenerate = false;  ///< phi2 - phi1 < 1e-6
};

namespace detail {
template <typename Scalar>
void check_phi_c(Scalar phi, Scalar c) {
  if (!(phi > 0)) throw DomainError("potential requires phi > 0");
  if (!(c > 0)) throw DomainError("potential requires c > 0");
}
}  // namespace detail

template <typename Scalar>
Scalar effective_potential(Scalar phi, const WaveParamsT<Scalar>& p) {
  using std::log;
  detail::check_phi_c(phi, p.c);
  return phi * phi * log(phi) / p.c + p.a * phi * phi + phi;
}

template <typename Scalar>
PotentialDerivatives<Scalar> potential_derivatives(Scalar phi, const WaveParamsT<Scalar>& p) {
  using std::log;
  detail::check_phi_c(phi, p.c);
  const Scalar l = log(phi);
  return {2 * phi * l / p.c + phi / p.c + 2 * p.a * phi + 1,
          2 * (l + Scalar(1.5) + p.a * p.c) / p.c,
          2 / (p.c * phi)};
}

/// Existence threshold in a: wells exist iff a < zeta(c).
template <typename Scalar>
Scalar zeta(Scalar c) {
  using std::log;
  if (!(c > 0)) throw DomainError("zeta requires c > 0");
  return log(2 / c) / c - Scalar(1.5) / c;
}

/// Stable first divided difference (V(y + d) - V(y)) / d, equal to V'(y) at d == 0.
template <typename Scalar>
Scalar potential_divided_difference_delta(Scalar y, Scalar d, const WaveParamsT<Scalar>& p) {
  using std::log;
  using std::log1p;
  const Scalar t = d / y;
  const Scalar r = t == Scalar(0) ? Scalar(1) : log1p(t) / t;
  const Scalar w = y * ((2 + t) * log(y) + (1 + t) * (1 + t) * r);
  return w / p.c + p.a * (2 * y + d) + 1;
}

/// (V(x) - V(y)) / (x - y) without cancellation in the logarithms.
template <typename Scalar>
Scalar potential_divided_difference(Scalar y, Scalar x, const WaveParamsT<Scalar>& p) {
  return potential_divided_difference_delta(y, x - y, p);
}

std::optional<CriticalPair> critical_points(const WaveParams& p);

/// (E_min, E_max) = (V(phi2), V(phi1)); RegionError when no well exists.
std::pair<double, double> energy_range(const WaveParams& p);

/// True when a < zeta(c) and E_min < E < E_max.
bool in_region(const WaveParams& p);

}  // namespace conduit
