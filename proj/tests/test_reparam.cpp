#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "conduit/reparam.hpp"
#include "conduit/spectral.hpp"

using namespace conduit;
using Eigen::Matrix3d;
using Eigen::Vector3d;
using Eigen::VectorXd;
using std::numbers::pi;

namespace {

Vector3d tmq(const WaveParams& p) {
  const Orbit o(p);
  return {o.period(), o.period() * o.mean_mass(), o.period() * o.mean_qinv()};
}

// Plain central differences directly in (a, E, c).
Matrix3d direct_jacobian(const WaveParams& p, double h) {
  Matrix3d J;
  for (int j = 0; j < 3; ++j) {
    WaveParams up = p, dn = p;
    double* u = j == 0 ? &up.a : j == 1 ? &up.E : &up.c;
    double* d = j == 0 ? &dn.a : j == 1 ? &dn.E : &dn.c;
    *u += h;
    *d -= h;
    J.col(j) = (tmq(up) - tmq(dn)) / (2 * h);
  }
  return J;
}

double phi2_oracle(double a, double c) {
  const WaveParams p{a, 0, c};
  double lo = std::exp(-(a * c + 1.5)), hi = 10;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (potential_derivatives(mid, p).d1 < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Constant-state (k, M, Q) per wavelength as closed forms of (a, c).
Vector3d constant_state(double a, double c) {
  const double phi2 = phi2_oracle(a, c);
  const double k0 = std::sqrt(potential_derivatives(phi2, WaveParams{a, 0, c}).d2) / (2 * pi);
  return {k0, phi2 / k0, 1 / (phi2 * k0)};
}

WaveParams interior(std::mt19937& rng) {
  std::uniform_real_distribution<double> uc(0.5, 2), ua(0.1, 1), uf(0.05, 0.8);
  const double c = uc(rng);
  WaveParams p{zeta(c) - ua(rng), 0, c};
  const auto [emin, emax] = energy_range(p);
  p.E = emin + uf(rng) * (emax - emin);
  return p;
}

}  // namespace

TEST_CASE("kmq_map in the harmonic limit") {
  const auto m = kmq_map(WaveParams{-1, 1e-8, 1});
  CHECK(std::abs(m.k - 1 / (2 * pi)) < 1e-4);
  CHECK(std::abs(m.M - 2 * pi) < 1e-4);
  CHECK(std::abs(m.Q - 2 * pi) < 1e-4);
  const auto w = whitham_coords(WaveParams{-1, 1e-8, 1});
  CHECK(w.M == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(w.Q == doctest::Approx(1.0).epsilon(1e-6));
  const auto back = to_mod_params(to_whitham(m));
  CHECK(back.M == doctest::Approx(m.M).epsilon(1e-15));
}

TEST_CASE("chart round trip") {
  WaveParams p{-0.9, 0, 1.1};
  const auto [emin, emax] = energy_range(p);
  p.E = emin + 0.3 * (emax - emin);
  const auto q = from_chart(to_chart(p));
  CHECK(q.E == doctest::Approx(p.E).epsilon(1e-14));
}

TEST_CASE("mass increases with E at a=-1, c=1") {
  double prev = 0;
  for (double E = 0.005; E < 0.1; E += 0.01) {
    const double M = kmq_map(WaveParams{-1, E, 1}).M;
    CHECK(M > prev);
    prev = M;
  }
}

TEST_CASE("determinant relation against direct differences of T") {
  std::mt19937 rng(17);
  for (int i = 0; i < 6; ++i) {
    const WaveParams p = interior(rng);
    const auto J = jacobian_kmq(p);
    const double T = period(p);
    const double bracket = direct_jacobian(p, 1e-5).determinant();
    CAPTURE(p.a);
    CAPTURE(p.E);
    CAPTURE(p.c);
    CHECK(J.value.determinant() == doctest::Approx(-bracket / (T * T)).epsilon(1e-6));
    const auto nd = nondegeneracy(p);
    CHECK(nd.TMQ_aEc == doctest::Approx(-T * T * J.value.determinant()).epsilon(1e-6));
    CHECK_FALSE(nd.any());
  }
}

TEST_CASE("Richardson error estimate is honest") {
  const WaveParams p{-1, 0.03, 1};
  const auto J1 = jacobian_kmq(p, 1e-3);
  const auto J2 = jacobian_kmq(p, 5e-4);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      CHECK(std::abs(J1.value(r, c) - J2.value(r, c)) <=
            10 * J1.error(r, c) + 1e-9 * std::abs(J1.value(r, c)));
  CHECK((J1.error.array() < 1e-3 * J1.value.cwiseAbs().maxCoeff()).all());
}

TEST_CASE("near E_min the Jacobian tends to the constant-state derivatives") {
  const double a = -1.1, c = 0.9;
  const WaveParams base{a, 0, c};
  const auto [emin, emax] = energy_range(base);
  const WaveParams p{a, emin + 1e-8, c};
  const auto J = jacobian_kmq(p).value;
  const double phi2 = phi2_oracle(a, c);
  const double h = 1e-5;
  const Vector3d da = (constant_state(a + h, c) - constant_state(a - h, c)) / (2 * h);
  const Vector3d dc = (constant_state(a, c + h) - constant_state(a, c - h)) / (2 * h);
  const double emin_c = -phi2 * phi2 * std::log(phi2) / (c * c);
  const Vector3d along_a = J.col(0) + phi2 * phi2 * J.col(1);
  const Vector3d along_c = J.col(2) + emin_c * J.col(1);
  CHECK(J.allFinite());
  for (int i = 0; i < 3; ++i) {
    CHECK(along_a[i] == doctest::Approx(da[i]).epsilon(1e-5));
    CHECK(along_c[i] == doctest::Approx(dc[i]).epsilon(1e-5));
  }
}

TEST_CASE("nondegeneracy flag logic") {
  const auto n = classify_nondegeneracy(Vector3d(0, 1, 1), Vector3d(1e-14, 1e-14, 1e-14));
  CHECK(n.T_a_degenerate);
  CHECK_FALSE(n.TM_degenerate);
  CHECK(n.any());
  const auto m = classify_nondegeneracy(Vector3d(1e-3, 1, 1), Vector3d(1e-3, 0, 0));
  CHECK(m.T_a_degenerate);
  CHECK_FALSE(classify_nondegeneracy(Vector3d(1, 1, 1), Vector3d::Zero()).any());
}

TEST_CASE("nondegenerate over a sample of the region") {
  std::mt19937 rng(23);
  for (int i = 0; i < 8; ++i) {
    const WaveParams p = interior(rng);
    const auto nd = nondegeneracy(p);
    CHECK(std::isfinite(nd.T_a));
    CHECK_FALSE(nd.any());
  }
}

TEST_CASE("invert_to_aEc: fixed point and quadratic convergence") {
  const WaveParams p{-1, 0.02, 1};
  const auto m = kmq_map(p);
  const auto fixed = invert_to_aEc_report(m, p);
  CHECK(fixed.iterations == 0);

  const WaveParams guess{p.a * (1 + 1e-3), p.E * (1 + 1e-3), p.c * (1 - 1e-3)};
  const auto rep = invert_to_aEc_report(m, guess);
  CHECK(rep.iterations <= 5);
  CHECK(rep.residual < 1e-10);
  CHECK(rep.params.a == doctest::Approx(p.a).epsilon(1e-9));
  CHECK(rep.params.E == doctest::Approx(p.E).epsilon(1e-9));
  CHECK(rep.params.c == doctest::Approx(p.c).epsilon(1e-9));
}

TEST_CASE("round trip over random points") {
  std::mt19937 rng(29);
  for (int i = 0; i < 5; ++i) {
    const WaveParams p = interior(rng);
    const WaveParams guess{p.a + 2e-3, p.E, p.c * 1.002};
    const WaveParams guess_in = in_region(guess) ? guess : p;
    const auto q = invert_to_aEc(kmq_map(p), guess_in);
    const auto mp = kmq_map(p), mq = kmq_map(q);
    CHECK(mq.k == doctest::Approx(mp.k).epsilon(1e-9));
    CHECK(mq.M == doctest::Approx(mp.M).epsilon(1e-9));
    CHECK(mq.Q == doctest::Approx(mp.Q).epsilon(1e-9));
  }
}

TEST_CASE("invert_whitham works in mean coordinates") {
  const WaveParams p{-1, 0.02, 1};
  const auto w = whitham_coords(p);
  const auto q = invert_whitham(w, WaveParams{-1.001, 0.0202, 1.001});
  CHECK(q.c == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("invalid inversion inputs") {
  CHECK_THROWS_AS(invert_to_aEc(ModParams{-1, 1, 1}, WaveParams{-1, 0.01, 1}), DomainError);
  CHECK_THROWS_AS(invert_to_aEc(ModParams{0.1, 6, 6}, WaveParams{-1, 0.5, 1}), RegionError);
}

TEST_CASE("amplitude matching") {
  for (double x : {0.5, 2.0, 6.0}) {
    const double M = 1.3, A = 0.02;
    const double k = std::sqrt(x / M) / (2 * pi);
    const auto p = match_amplitude(k, M, A);
    const auto w = whitham_coords(p);
    CAPTURE(x);
    CHECK(w.k == doctest::Approx(k).epsilon(1e-11));
    CHECK(w.M == doctest::Approx(M).epsilon(1e-11));
    CHECK(wave_amplitude(p) == doctest::Approx(A).epsilon(1e-11));
  }
}

TEST_CASE("profile partial identities") {
  const WaveParams p{-1, 0.01, 1};
  const int n = 128;
  const auto w = reconstruct_profile(p, n);
  const auto pp = profile_partials(p, n);
  const VectorXd& phi = w.values;
  const VectorXd d1 = w.deriv, d2 = spectral_derivative(phi, 2);
  const double k = w.k;
  // G^dagger f = (1 + k^2 phi'') f - k^2 (phi f)''
  const VectorXd inv2 = phi.array().inverse().square();
  const VectorXd gd = ((1 + k * k * d2.array()) * inv2.array()).matrix() -
                      k * k * spectral_derivative(VectorXd(phi.cwiseProduct(inv2)), 2);
  CHECK(std::abs(pp.phi_M.mean() - 1) < 1e-6);
  CHECK(std::abs(pp.phi_Q.mean()) < 1e-6);
  CHECK(std::abs(pp.phi_k.mean()) < 1e-6);
  CHECK(std::abs(gd.cwiseProduct(pp.phi_Q).mean() + 1) < 1e-6);
  CHECK(std::abs(gd.cwiseProduct(pp.phi_M).mean()) < 1e-6);
  const double rhs = 2 * k * inv2.cwiseProduct(d1.cwiseAbs2()).mean();
  CHECK(std::abs(gd.cwiseProduct(pp.phi_k).mean() - rhs) < 1e-6);
  CHECK(pp.error.maxCoeff() < 1e-4);
  // partials are even like the profile
  for (int i = 1; i < n; ++i) CHECK(pp.phi_M[i] == doctest::Approx(pp.phi_M[n - i]).epsilon(1e-9));
}
