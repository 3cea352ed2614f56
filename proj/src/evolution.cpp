#include "conduit/evolution.hpp"

#include <algorithm>
#include <numbers>
#include <random>

#include "conduit/errors.hpp"
#include "conduit/ode.hpp"
#include "conduit/spectral.hpp"

namespace conduit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

const MatrixXd& diff_matrix(int n, double L) {
  thread_local int cached_n = 0;
  thread_local double cached_L = 0;
  thread_local MatrixXd D;
  if (n != cached_n || L != cached_L) {
    D = differentiation_matrix(n, 1, L);
    cached_n = n;
    cached_L = L;
  }
  return D;
}

std::vector<int> sideband_modes(int n, int wavelengths, int harmonics) {
  std::vector<int> m;
  for (int j = 0; j <= harmonics && j * wavelengths - 1 < n / 2; ++j)
    for (int s : {-1, 1}) {
      const int q = j * wavelengths + s;
      if (q > 0 && 2 * q < n && std::find(m.begin(), m.end(), q) == m.end()) m.push_back(q);
    }
  std::sort(m.begin(), m.end());
  return m;
}

}  // namespace

double mass_mean(const VectorXd& u) { return u.mean(); }

double q_mean(const VectorXd& u, double L) {
  const VectorXd ux = spectral_derivative(u, 1, L);
  return (u.array().inverse() + ux.array().square() / u.array().square()).mean();
}

EvolutionState make_state(const VectorXd& u, double L, double dt) {
  if (u.size() < 8 || u.size() % 2 != 0) throw DomainError("evolution grid must be even with n >= 8");
  if (!(L > 0)) throw DomainError("domain length must be positive");
  if (!(dt > 0)) throw DomainError("time step must be positive");
  if (!(u.minCoeff() > 0)) throw PositivityLost("initial data is not positive");
  EvolutionState s;
  s.n = static_cast<int>(u.size());
  s.L = L;
  s.u = u;
  s.dt = dt;
  s.M = mass_mean(u);
  s.Q = q_mean(u, L);
  return s;
}

VectorXd conduit_rate(const VectorXd& u, double L, double keep) {
  const int n = static_cast<int>(u.size());
  if (!(u.minCoeff() > 0) || !u.allFinite()) return VectorXd::Constant(n, NAN);
  const MatrixXd& D = diff_matrix(n, L);
  const MatrixXd W = u.asDiagonal() * D;
  MatrixXd B = u.asDiagonal();
  B.selfadjointView<Eigen::Lower>().rankUpdate(W.transpose());
  const Eigen::LLT<MatrixXd, Eigen::Lower> llt(B);
  if (llt.info() != Eigen::Success) throw SolveError("H[u] is not positive definite");
  const VectorXd b = -(D * dealias(u.cwiseAbs2(), keep));
  const VectorXd g = llt.solve(b);
  return dealias(u.cwiseProduct(g), keep);
}

EvolutionState step(const EvolutionState& s, const EvolutionOptions& opt, double max_dt) {
  using DP = DormandPrince45<VectorXd>;
  auto f = [&](double, const VectorXd& u) { return conduit_rate(u, s.L, opt.dealias); };
  const VectorXd k1 = s.rate.size() == s.n ? s.rate : f(s.t, s.u);
  double h = s.dt;
  for (;;) {
    const bool clipped = h >= max_dt;
    const double hs = clipped ? max_dt : h;
    if (hs < opt.min_step * std::max(1.0, std::abs(s.t)))
      throw SolveError("step size fell below the minimum");
    auto trial = DP::attempt(f, s.t, s.u, k1, hs, opt.atol, opt.rtol);
    if (!std::isfinite(trial.err)) {
      h = hs / 4;
      continue;
    }
    if (trial.err > 1) {
      h = DP::next_step(hs, trial.err);
      continue;
    }
    if (!(trial.y.minCoeff() > 0)) throw PositivityLost("u reached zero at t = " + std::to_string(s.t + hs));
    EvolutionState r;
    r.n = s.n;
    r.L = s.L;
    r.u = std::move(trial.y);
    r.rate = std::move(trial.f_end);
    r.t = s.t + hs;
    r.dt = clipped ? std::max(h, DP::next_step(hs, trial.err)) : DP::next_step(hs, trial.err);
    r.M = mass_mean(r.u);
    r.Q = q_mean(r.u, r.L);
    return r;
  }
}

double sideband_energy(const VectorXd& u, int wavelengths) {
  const Eigen::VectorXcd c = fourier_coefficients(u);
  double e = 0;
  const int n = static_cast<int>(u.size());
  for (int m : sideband_modes(n, wavelengths, n)) e += 2 * std::norm(c[m]);
  return e;
}

bool is_resolved(const VectorXd& u, double tol, double keep) {
  const int n = static_cast<int>(u.size());
  const Eigen::VectorXcd c = fourier_coefficients(u);
  const int kmax = static_cast<int>(keep * n / 2);
  double peak = 0, tail = 0;
  for (int m = 1; m <= kmax && 2 * m < n; ++m) {
    peak = std::max(peak, std::abs(c[m]));
    if (3 * m > 2 * kmax) tail = std::max(tail, std::abs(c[m]));
  }
  return tail <= tol * std::max(peak, std::abs(c[0]));
}

Trajectory evolve(const EvolutionState& s0, double t_max, double record_every, int wavelengths,
                  bool keep_u, const EvolutionOptions& opt) {
  if (!(t_max >= s0.t)) throw DomainError("t_max precedes the initial time");
  if (!(record_every > 0)) throw DomainError("record interval must be positive");
  if (wavelengths < 1) throw DomainError("wavelength count must be positive");
  Trajectory tr;
  auto record = [&](const EvolutionState& s) {
    tr.snapshots.push_back({s.t, s.M, s.Q, sideband_energy(s.u, wavelengths),
                            keep_u ? std::optional<VectorXd>(s.u) : std::nullopt});
    if (tr.warnings.empty() && !is_resolved(s.u, opt.resolution_tol, opt.dealias))
      tr.warnings.push_back("spectrum no longer decays at t = " + std::to_string(s.t) +
                            "; increase n");
  };
  EvolutionState s = s0;
  record(s);
  long next = 1;
  while (s.t < t_max) {
    const double target = std::min(t_max, s0.t + next * record_every);
    while (s.t < target) {
      s = step(s, opt, target - s.t);
      ++tr.steps;
      if (target - s.t <= 1e-13 * std::max(1.0, std::abs(target))) s.t = target;
    }
    record(s);
    ++next;
  }
  tr.final = std::move(s);
  return tr;
}

SeededWave seeded_wave(const VectorXd& profile, double k, int wavelengths, double noise, unsigned seed) {
  if (!(k > 0) || wavelengths < 1) throw DomainError("need k > 0 and at least one wavelength");
  const int per = static_cast<int>(profile.size());
  const int n = per * wavelengths;
  SeededWave w{VectorXd(n), wavelengths / k};
  for (int j = 0; j < n; ++j) w.u[j] = profile[j % per];
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0, 2 * std::numbers::pi);
  for (int m : sideband_modes(n, wavelengths, 1)) {
    const double ph = phase(rng);
    for (int j = 0; j < n; ++j) w.u[j] += noise * std::cos(2 * std::numbers::pi * m * j / n + ph);
  }
  return w;
}

}  // namespace conduit
