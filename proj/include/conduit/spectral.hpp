#pragma once

#include <Eigen/Dense>

namespace conduit {

/// Signed wavenumber index of FFT slot j on an n-point grid, in [-n/2, n/2).
inline int fft_index(int j, int n) { return j < (n + 1) / 2 ? j : j - n; }

/// Normalized Fourier coefficients f_j = (1/n) sum_i f(x_i) e^{-2 pi i j i / n}, FFT order.
Eigen::VectorXcd fourier_coefficients(const Eigen::VectorXd& f);
Eigen::VectorXd from_fourier(const Eigen::VectorXcd& coeffs);

/// d^order f / dx^order on a uniform periodic grid of the given length.
/// The Nyquist mode is dropped for odd orders.
Eigen::VectorXd spectral_derivative(const Eigen::VectorXd& f, int order, double length = 1.0);

/// Dense matrix of spectral_derivative.
Eigen::MatrixXd differentiation_matrix(int n, int order, double length = 1.0);

/// Zero every mode with |m| > keep_fraction * n / 2.
Eigen::VectorXd dealias(const Eigen::VectorXd& f, double keep_fraction = 2.0 / 3.0);

/// Trapezoid mean (1/n) sum f_i, the exact phase average for band-limited f.
template <typename Derived>
typename Derived::Scalar grid_mean(const Eigen::MatrixBase<Derived>& f) {
  return f.mean();
}

}  // namespace conduit
