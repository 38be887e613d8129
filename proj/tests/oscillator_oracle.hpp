#pragma once

// Independent check on the ix^3 spectrum: diagonalise H = p^2 + i x^3 in the
// harmonic-oscillator basis, where H = h - X^2 + i X^3 with h = p^2 + x^2.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

inline std::vector<double> ix3_levels(int basis_size, int count) {
  const int big = basis_size + 3;
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(big, big);
  for (int n = 0; n + 1 < big; ++n) X(n, n + 1) = X(n + 1, n) = std::sqrt((n + 1) / 2.0);
  const Eigen::MatrixXd X2 = X * X;
  const Eigen::MatrixXd X3 = X2 * X;
  Eigen::MatrixXcd H(basis_size, basis_size);
  for (int m = 0; m < basis_size; ++m) {
    for (int n = 0; n < basis_size; ++n) {
      const double h = m == n ? 2.0 * n + 1.0 : 0.0;
      H(m, n) = std::complex<double>(h - X2(m, n), X3(m, n));
    }
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(H, false);
  std::vector<double> e;
  // Truncation adds complex-conjugate pairs; the converged levels are real.
  for (int i = 0; i < basis_size; ++i) {
    const std::complex<double> v = solver.eigenvalues()[i];
    if (std::abs(v.imag()) < 1e-6 * std::abs(v.real())) e.push_back(v.real());
  }
  std::sort(e.begin(), e.end());
  e.resize(std::min<std::size_t>(e.size(), count));
  return e;
}

}  // namespace oracle
