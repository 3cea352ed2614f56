#include "conduit/spectral.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <unsupported/Eigen/FFT>

namespace conduit {

using Eigen::VectorXcd;
using Eigen::VectorXd;

VectorXcd fourier_coefficients(const VectorXd& f) {
  Eigen::FFT<double> fft;
  VectorXcd out;
  VectorXd in = f;
  fft.fwd(out, in);
  return out / static_cast<double>(f.size());
}

VectorXd from_fourier(const VectorXcd& coeffs) {
  Eigen::FFT<double> fft;
  VectorXcd full = coeffs * static_cast<double>(coeffs.size());
  VectorXcd out;
  fft.inv(out, full);
  return out.real();
}

VectorXd spectral_derivative(const VectorXd& f, int order, double length) {
  const int n = static_cast<int>(f.size());
  VectorXcd c = fourier_coefficients(f);
  const std::complex<double> i1(0, 1);
  for (int j = 0; j < n; ++j) {
    const int m = fft_index(j, n);
    if (order % 2 == 1 && n % 2 == 0 && j == n / 2) {
      c[j] = 0;
      continue;
    }
    const std::complex<double> ik = i1 * (2 * std::numbers::pi * m / length);
    for (int o = 0; o < order; ++o) c[j] *= ik;
  }
  return from_fourier(c);
}

Eigen::MatrixXd differentiation_matrix(int n, int order, double length) {
  Eigen::MatrixXd d(n, n);
  for (int j = 0; j < n; ++j) d.col(j) = spectral_derivative(VectorXd::Unit(n, j), order, length);
  return d;
}

VectorXd dealias(const VectorXd& f, double keep_fraction) {
  const int n = static_cast<int>(f.size());
  VectorXcd c = fourier_coefficients(f);
  const double cutoff = keep_fraction * n / 2;
  for (int j = 0; j < n; ++j)
    if (std::abs(fft_index(j, n)) > cutoff) c[j] = 0;
  return from_fourier(c);
}

}  // namespace conduit
