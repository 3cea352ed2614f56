#include <doctest.h>

#include <cmath>
#include <numbers>

#include "conduit/reparam.hpp"
#include "conduit/smallamp.hpp"

using namespace conduit;
using std::numbers::pi;

TEST_CASE("expansion at k = 1/(2 pi), M = 1") {
  const double k = 1 / (2 * pi);
  const auto o = omega_expansion(k, 1.0);
  CHECK(o.omega0 == doctest::Approx(1 / (2 * pi)).epsilon(1e-15));
  CHECK(std::abs(o.d_omega0) < 1e-15);
  CHECK(o.omega2 == doctest::Approx(-7 / (48 * pi)).epsilon(1e-14));
  CHECK(o.d2_omega0 == doctest::Approx(-2 * pi).epsilon(1e-14));
  const auto s = asymptotic_speeds(k, 1.0, 0.01);
  CHECK(s.n_coef == doctest::Approx(1 / (12 * pi)).epsilon(1e-14));
  CHECK(s.lambda1 == 2.0);
  CHECK(s.lambda_plus.real() == doctest::Approx(0.01 * std::sqrt(1.0 / 6)).epsilon(1e-13));
  CHECK(s.lambda_minus.real() == doctest::Approx(-0.01 * std::sqrt(1.0 / 6)).epsilon(1e-13));
  CHECK(s.lambda_plus.imag() == 0.0);
}

TEST_CASE("k-derivatives of omega0 match differences") {
  for (double M : {0.5, 1.0, 2.5})
    for (double k : {0.05, 0.2, 0.4}) {
      const double h = 1e-5;
      const double fd1 = (omega_expansion(k + h, M).omega0 - omega_expansion(k - h, M).omega0) / (2 * h);
      const double fd2 = (omega_expansion(k + h, M).d_omega0 - omega_expansion(k - h, M).d_omega0) / (2 * h);
      CHECK(omega_expansion(k, M).d_omega0 == doctest::Approx(fd1).epsilon(1e-8));
      CHECK(omega_expansion(k, M).d2_omega0 == doctest::Approx(fd2).epsilon(1e-7));
    }
}

TEST_CASE("threshold is where omega0'' changes sign") {
  for (double M : {0.5, 1.0, 3.0}) {
    const double kc = mi_threshold(M);
    CHECK(std::abs(omega_expansion(kc, M).d2_omega0) < 1e-12);
    CHECK(omega_expansion(0.99 * kc, M).d2_omega0 < 0);
    CHECK(omega_expansion(1.01 * kc, M).d2_omega0 > 0);
    CHECK_FALSE(stokes_data(0.99 * kc, M, 0.01).elliptic);
    CHECK(stokes_data(1.01 * kc, M, 0.01).elliptic);
  }
  CHECK(mi_threshold(1.0) == doctest::Approx(std::sqrt(3.0) / (2 * pi)));
  const auto s = asymptotic_speeds(1.2 * mi_threshold(1.0), 1.0, 0.01);
  CHECK(s.lambda_plus.imag() > 0);
  CHECK(s.lambda_minus == std::conj(s.lambda_plus));
}

TEST_CASE("stokes profile basics") {
  const auto w = stokes_profile(0.2, 1.3, 0.05, 64);
  CHECK(w.values.mean() == doctest::Approx(1.3).epsilon(1e-15));
  CHECK(w.mass == 1.3);
  CHECK_THROWS_AS(stokes_profile(0.2, 1.0, 0.1, 64), AmplitudeTooLarge);
  CHECK_THROWS_AS(stokes_profile(0.2, 1.0, 0.01, 15), DomainError);
  CHECK_THROWS_AS(stokes_profile(-0.2, 1.0, 0.01, 64), DomainError);
}

TEST_CASE("stokes profile and frequency against the exact wave") {
  for (double x : {1.0, 6.0})
    for (double A : {1e-2, 5e-3}) {
      const double M = 1.0;
      const double k = std::sqrt(x / M) / (2 * pi);
      const auto p = match_amplitude(k, M, A);
      const auto exact = reconstruct_profile(p, 64);
      const auto approx = stokes_profile(k, M, A, 64);
      CAPTURE(x);
      CAPTURE(A);
      CHECK((exact.values - approx.values).cwiseAbs().maxCoeff() < A * A * A);
      CHECK(std::abs(p.c * k - approx.omega) < 10 * A * A * A * A);
      CHECK(approx.params.c == doctest::Approx(p.c).epsilon(1e-3));
    }
}
