#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "conduit/errors.hpp"

namespace conduit {

/// Newton iteration safeguarded by a sign-changing bracket [lo, hi].
/// `fdf(x)` returns the pair (f(x), f'(x)). Stops when |f| <= ftol or the
/// bracket has collapsed to a few ulps.
template <typename Scalar, typename FDF>
Scalar newton_bisect(FDF&& fdf, Scalar lo, Scalar hi, Scalar ftol, int max_iter = 200) {
  auto [flo, dlo] = fdf(lo);
  auto [fhi, dhi] = fdf(hi);
  (void)dlo;
  (void)dhi;
  if (flo == Scalar(0)) return lo;
  if (fhi == Scalar(0)) return hi;
  if ((flo > 0) == (fhi > 0))
    throw RootNotConverged("bracket does not change sign");
  const bool rising = flo < 0;
  Scalar x = (lo + hi) / 2;
  for (int it = 0; it < max_iter; ++it) {
    auto [f, df] = fdf(x);
    if (std::abs(f) <= ftol) return x;
    if ((f < 0) == rising)
      lo = x;
    else
      hi = x;
    const Scalar width = hi - lo;
    if (width <= 4 * std::numeric_limits<Scalar>::epsilon() * std::abs(x)) return x;
    Scalar next = x - f / df;
    if (!(next > lo && next < hi) || !std::isfinite(next)) {
      next = (lo + hi) / 2;
    } else if (std::abs(next - x) <= 2 * std::numeric_limits<Scalar>::epsilon() * std::abs(x)) {
      return next;
    }
    x = next;
  }
  throw RootNotConverged("no convergence after " + std::to_string(max_iter) + " iterations");
}

}  // namespace conduit
