#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "conduit/smallamp.hpp"
#include "conduit/whitham.hpp"

using namespace conduit;
using std::numbers::pi;
using cd = std::complex<double>;

namespace {

// Max distance after pairing each target with its nearest unused value.
double matched_error(const Eigen::Vector3cd& got, const std::vector<cd>& want) {
  std::vector<int> idx{0, 1, 2};
  double best = 1e300;
  do {
    double e = 0;
    for (int i = 0; i < 3; ++i) e = std::max(e, std::abs(got[idx[i]] - want[i]));
    best = std::min(best, e);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return best;
}

}  // namespace

TEST_CASE("companion-matrix roots match a general eigensolver") {
  std::mt19937 rng(1);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    Eigen::Matrix3d m;
    for (int i = 0; i < 9; ++i) m(i) = g(rng);
    const auto roots = cubic_eigenvalues(m);
    const Eigen::Vector3cd ref = Eigen::EigenSolver<Eigen::Matrix3d>(m).eigenvalues();
    CHECK(matched_error(roots, {ref[0], ref[1], ref[2]}) < 1e-9);
    CHECK(roots[0].real() <= roots[1].real());
    CHECK(roots[1].real() <= roots[2].real());
  }
}

TEST_CASE("classification thresholds") {
  CHECK(classify(Eigen::Vector3cd(1, 2, 3)) == Classification::Hyperbolic);
  CHECK(classify(Eigen::Vector3cd(1, cd(2, 1e-3), cd(2, -1e-3))) == Classification::Elliptic);
  CHECK(classify(Eigen::Vector3cd(1, cd(2, 5e-7), cd(2, -5e-7))) == Classification::Marginal);
  CHECK(to_string(Classification::Elliptic) == "elliptic");
}

TEST_CASE("flux averages: grid and orbit agree") {
  const WaveParams p{-1, 0.03, 1};
  const auto a = flux_averages(Orbit(p));
  const auto b = flux_averages(reconstruct_profile(p, 128));
  CHECK(a.F2 == doctest::Approx(b.F2).epsilon(1e-10));
  CHECK(a.F3 == doctest::Approx(b.F3).epsilon(1e-10));
}

TEST_CASE("first row carries the phase speed gradient") {
  const auto wm = whitham_matrix(WaveParams{-1, 0.02, 1});
  const double k = wm.coords.k, c = wm.params.c;
  CHECK(wm.entries(0, 0) == doctest::Approx(-(c + k * wm.c_grad[0])).epsilon(1e-14));
  CHECK(wm.entries(0, 1) == doctest::Approx(-k * wm.c_grad[1]).epsilon(1e-14));
  CHECK(wm.entries(0, 2) == doctest::Approx(-k * wm.c_grad[2]).epsilon(1e-14));
  CHECK(wm.classification == Classification::Hyperbolic);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(wm.speeds_lab[i] + wm.speeds[2 - i]) < 1e-10);
  CHECK((wm.error.array() < 1e-7 * wm.entries.cwiseAbs().maxCoeff()).all());
  const auto half = whitham_matrix(WaveParams{-1, 0.02, 1}, 5e-4);
  CHECK(((wm.entries - half.entries).array().abs() <= 10 * wm.error.array() + 1e-12).all());
}

TEST_CASE("small-amplitude limit of the lab-frame speeds") {
  const double M = 1.0;
  for (double x : {0.5, 1.0, 2.0, 6.0}) {
    const double k = std::sqrt(x / M) / (2 * pi);
    double prev = 0;
    for (double A : {1e-2, 5e-3}) {
      const auto wm = whitham_matrix(match_amplitude(k, M, A));
      const auto s = asymptotic_speeds(k, M, A);
      const double err = matched_error(wm.speeds_lab, {s.lambda1, s.lambda_plus, s.lambda_minus});
      CAPTURE(x);
      CAPTURE(A);
      CHECK(err < 5e-3);
      CHECK(err < 3 * A * A);
      if (prev > 0) CHECK(err < 0.5 * prev);
      prev = err;
      CHECK(wm.classification == (x > 3 ? Classification::Elliptic : Classification::Hyperbolic));
    }
  }
}

TEST_CASE("sweep keeps input order and records failures") {
  std::vector<SweepPoint> pts;
  pts.push_back(WaveParams{-1, 0.01, 1});
  pts.push_back(WaveParams{1, 0.01, 1});
  pts.push_back(AmplitudePoint{std::sqrt(6.0) / (2 * pi), 1.0, 0.01});
  pts.push_back(WaveParams{-1, 0.04, 1});
  const auto res = classify_sweep(pts, 3);
  REQUIRE(res.size() == 4);
  CHECK(res[0].ok);
  CHECK_FALSE(res[1].ok);
  CHECK(res[1].failure.find("RegionError") != std::string::npos);
  CHECK(res[2].ok);
  CHECK(res[2].classification == Classification::Elliptic);
  CHECK(res[3].params.E == 0.04);
  const auto serial = classify_sweep(pts, 1);
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (res[i].ok) CHECK((res[i].speeds - serial[i].speeds).norm() == 0.0);
}
