#include "conduit/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "conduit/reparam.hpp"
#include "conduit/spectral.hpp"

namespace conduit {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cd = std::complex<double>;
constexpr double two_pi = 2 * std::numbers::pi;

namespace {

// Coefficients of a grid function on the modes -N..N (index m + N).
VectorXcd galerkin(const VectorXd& f, int N) {
  const int n = static_cast<int>(f.size());
  const VectorXcd c = fourier_coefficients(f);
  VectorXcd v(2 * N + 1);
  for (int m = -N; m <= N; ++m) v[m + N] = c[(m + n) % n];
  return v;
}

// Multiplication by the grid function with FFT coefficients `c`, |m| < n/2 kept.
MatrixXcd multiplication(const VectorXcd& c, int N) {
  const int n = static_cast<int>(c.size());
  MatrixXcd t = MatrixXcd::Zero(2 * N + 1, 2 * N + 1);
  for (int i = -N; i <= N; ++i)
    for (int j = -N; j <= N; ++j) {
      const int d = i - j;
      if (2 * std::abs(d) < n) t(i + N, j + N) = c[(d + n) % n];
    }
  return t;
}

struct Assembled {
  OperatorStack ops;
  Eigen::PartialPivLU<MatrixXcd> lu;
  VectorXcd kappa;  ///< i (2 pi m + xi)
};

Assembled assemble(const WaveProfile& w, double xi) {
  if (w.n < 32 || w.n % 2 != 0) throw DomainError("Bloch operators need an even grid with n >= 32");
  if (!(std::abs(xi) <= std::numbers::pi)) throw DomainError("Bloch parameter must satisfy |xi| <= pi");
  const int n = w.n, N = n / 2 - 1, S = 2 * N + 1;
  const double k = w.k, c = w.c, kk = k * k;

  const VectorXcd ph = fourier_coefficients(w.values);
  VectorXcd p1(n), p2(n);
  for (int j = 0; j < n; ++j) {
    const cd ik(0, two_pi * fft_index(j, n));
    p1[j] = 2 * j == n ? cd(0) : ik * ph[j];
    p2[j] = 2 * j == n ? cd(0) : ik * ik * ph[j];
  }
  const MatrixXcd T0 = multiplication(ph, N), T1 = multiplication(p1, N), T2 = multiplication(p2, N);

  Assembled a;
  a.kappa.resize(S);
  for (int m = -N; m <= N; ++m) a.kappa[m + N] = cd(0, two_pi * m + xi);
  const auto K = a.kappa.asDiagonal();
  const VectorXcd kappa2 = a.kappa.cwiseProduct(a.kappa);
  const auto K2 = kappa2.asDiagonal();

  OperatorStack& o = a.ops;
  o.xi = xi;
  o.k = k;
  o.c = c;
  o.modes = Eigen::VectorXi::LinSpaced(S, -N, N);
  o.G = MatrixXcd::Identity(S, S) + kk * T2 - kk * (T0 * K2);
  o.L = c * MatrixXcd::Identity(S, S) - 2 * T0 - kk * c * T2 + 2 * kk * c * (T1 * K) -
        kk * c * (T0 * K2);
  a.lu.compute(o.G);
  const double rc = a.lu.rcond();
  o.cond_G = rc > 0 ? 1 / rc : INFINITY;
  if (!(o.cond_G <= 1e12)) throw IllConditioned("cond(G) above 1e12");
  o.A = a.lu.solve(MatrixXcd(k * (K * o.L)));
  return a;
}

}  // namespace

OperatorStack assemble_operators(const WaveProfile& w, double xi) { return assemble(w, xi).ops; }

VectorXcd bloch_spectrum(const WaveProfile& w, double xi) {
  const auto ops = assemble_operators(w, xi);
  Eigen::ComplexEigenSolver<MatrixXcd> es(ops.A, false);
  if (es.info() != Eigen::Success) throw EigenSolveError("Bloch eigenvalue solve failed");
  VectorXcd ev = es.eigenvalues();
  std::sort(ev.begin(), ev.end(), [](cd a, cd b) { return std::abs(a) < std::abs(b); });
  return ev;
}

BlochResult origin_slopes(const WaveProfile& w, const std::vector<double>& xis) {
  if (xis.size() < 2) throw DomainError("origin_slopes needs at least two xi values");
  BlochResult r;
  r.xis = xis;
  std::array<cd, 3> ref{};
  std::vector<std::array<cd, 3>> tracked;
  for (std::size_t q = 0; q < xis.size(); ++q) {
    const double xi = xis[q];
    if (xi == 0) throw DomainError("xi = 0 is not a valid sample for slopes");
    const VectorXcd ev = bloch_spectrum(w, xi);
    std::array<cd, 3> mu;
    for (int j = 0; j < 3; ++j) mu[j] = ev[j] / cd(0, w.k * xi);
    if (q == 0) {
      std::sort(mu.begin(), mu.end(), [](cd a, cd b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
      });
      ref = mu;
      tracked.push_back(mu);
      continue;
    }
    std::array<int, 3> perm{0, 1, 2};
    std::vector<std::pair<double, std::array<int, 3>>> costs;
    do {
      double s = 0;
      for (int j = 0; j < 3; ++j) s += std::abs(mu[perm[j]] - ref[j]);
      costs.emplace_back(s, perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::sort(costs.begin(), costs.end(), [](auto& a, auto& b) { return a.first < b.first; });
    if (costs[1].first - costs[0].first < 1e-9)
      throw TrackingAmbiguous("two assignments of origin eigenvalues tie at xi = " + std::to_string(xi));
    std::array<cd, 3> next;
    for (int j = 0; j < 3; ++j) next[j] = mu[costs[0].second[j]];
    tracked.push_back(next);
  }
  for (std::size_t q = 0; q < xis.size(); ++q) {
    std::array<cd, 3> lam;
    for (int j = 0; j < 3; ++j) lam[j] = tracked[q][j] * cd(0, w.k * xis[q]);
    r.triples.push_back(lam);
  }

  const int m = static_cast<int>(xis.size());
  Eigen::MatrixXd X(m, 2);
  for (int q = 0; q < m; ++q) X.row(q) << 1, xis[q];
  const auto qr = X.colPivHouseholderQr();
  double ss = 0;
  for (int j = 0; j < 3; ++j) {
    VectorXd re(m), im(m);
    for (int q = 0; q < m; ++q) {
      re[q] = tracked[q][j].real();
      im[q] = tracked[q][j].imag();
    }
    const Eigen::Vector2d cr = qr.solve(re), ci = qr.solve(im);
    r.slopes[j] = cd(cr[0], ci[0]);
    ss += (X * cr - re).squaredNorm() + (X * ci - im).squaredNorm();
  }
  r.residual = std::sqrt(ss / (3 * m));
  std::sort(r.slopes.begin(), r.slopes.end(), [](cd a, cd b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return r;
}

MatrixXcd to_physical(const MatrixXcd& m) {
  const int S = static_cast<int>(m.rows()), N = (S - 1) / 2;
  MatrixXcd F(S, S);
  for (int j = 0; j < S; ++j)
    for (int q = -N; q <= N; ++q) F(j, q + N) = std::polar(1.0, two_pi * q * j / S);
  return F * m * F.adjoint() / static_cast<double>(S);
}

cd constant_state_symbol(double k, double M, double c, int m, double xi) {
  const double kappa = two_pi * m + xi;
  return cd(0, k * kappa) * (c - 2 * M / (1 + k * k * M * kappa * kappa));
}

KernelDiagnostics kernel_diagnostics(const WaveParams& p, int n) {
  const auto w = reconstruct_profile(p, n);
  const auto pp = profile_partials(p, n);
  const auto a = assemble(w, 0.0);
  const MatrixXcd& A = a.ops.A;
  const int N = n / 2 - 1, S = 2 * N + 1;
  const double k = w.k, c = w.c;
  const double ck = pp.c_grad[0], cM = pp.c_grad[1], cQ = pp.c_grad[2];

  const VectorXcd d1 = galerkin(w.deriv, N);
  const VectorXcd fM = galerkin(pp.phi_M, N), fQ = galerkin(pp.phi_Q, N), fk = galerkin(pp.phi_k, N);
  const VectorXd dd = spectral_derivative(w.values, 2);
  const VectorXd flux = w.deriv.cwiseAbs2() - w.values.cwiseProduct(dd);
  const VectorXcd dflux = a.kappa.cwiseProduct(galerkin(flux, N));
  const VectorXcd ginv = a.lu.solve(dflux);

  const VectorXcd one = VectorXcd::Unit(S, N);
  const VectorXd inv2 = w.values.array().inverse().square();
  const VectorXcd adjG = a.ops.G.adjoint() * galerkin(inv2, N);

  KernelDiagnostics kd{};
  kd.res_phi_prime = (A * d1).norm();
  kd.res_phi_M = (A * fM + k * cM * d1).norm();
  kd.res_phi_Q = (A * fQ + k * cQ * d1).norm();
  kd.res_phi_k = (A * fk + k * ck * d1 + 2 * k * k * c * ginv).norm();
  kd.res_adj_one = (A.adjoint() * one).norm();
  kd.res_adj_G = (A.adjoint() * adjG).norm();
  const std::array<const VectorXcd*, 3> cols{&d1, &fM, &fQ};
  for (int j = 0; j < 3; ++j) {
    kd.gram(0, j) = one.dot(*cols[j]).real();
    kd.gram(1, j) = adjG.dot(*cols[j]).real();
  }
  kd.mean_phi_k = one.dot(fk).real();
  kd.weighted_phi_k = adjG.dot(fk).real();
  kd.weighted_phi_k_expected = 2 * k * inv2.cwiseProduct(w.deriv.cwiseAbs2()).mean();
  return kd;
}

}  // namespace conduit
