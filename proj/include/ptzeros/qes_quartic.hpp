#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "ptzeros/common.hpp"

namespace ptzeros {

/// Matrix of the polynomial-coefficient recursion for the solvable sector
/// of the QES quartic. Row m couples c_{m-1}, c_m, c_{m+1}, c_{m+2}.
struct QESMatrix {
  int J = 0;
  Eigen::MatrixXcd entries;
};

QESMatrix build_qes_matrix(double a, double b, int J);

/// psi(x) = P(x) exp(phi(x)), phi(x) = -i x^3/3 - a x^2/2 - i b x.
struct QESEigenfunction {
  int k = 0;                    // 1..J in ascending energy
  Complex energy;               // as returned by the eigensolver
  double E = 0.0;               // real part
  std::vector<Complex> coeffs;  // c_0..c_{J-1}, leading coefficient 1
  double a = 0.0;
  double b = 0.0;
  double k_criterion = 0.0;     // a^2 + 4b
  double recursion_residual = 0.0;
  /// Zeros of P, computed in extended precision (see qes_spectrum).
  std::vector<Complex> zeros;
  std::vector<double> zero_residuals;  // |P(z)| / max|c_n|

  Complex psi(Complex x) const;
  /// -psi'' + V psi - E psi, evaluated without the recursion.
  Complex ode_residual(Complex x) const;
  /// |ode_residual| / (|psi''| + |V psi| + |E psi|).
  double relative_ode_residual(Complex x) const;
};

struct QESSpectrum {
  std::vector<QESEigenfunction> levels;
  bool complex_spectrum = false;
  std::vector<std::pair<Complex, Complex>> conjugate_pairs;
};

/// The J solvable levels, sorted by ascending Re E. PT symmetry makes
/// c_n = i^{J-1-n} r_n with r real, so the recursion is solved as a real
/// banded eigenproblem and the zeros as roots of the real polynomial
/// sum r_n y^n (x = i y), both in 60-digit arithmetic: the J-k zeros that
/// cluster on the positive imaginary axis are too ill-conditioned for
/// double precision.
QESSpectrum qes_spectrum(double a, double b, int J);

/// Largest normalised recursion-row residual for (E, c).
double recursion_residual(double a, double b, int J, Complex energy, std::span<const Complex> coeffs);

struct ZeroClassification {
  std::vector<Complex> relevant;
  std::vector<Complex> irrelevant;  // on the positive imaginary axis
};

/// axis_tol <= 0 selects 1e-6 * max|zero|.
ZeroClassification classify_zeros(std::span<const Complex> zeros, double axis_tol = 0.0);

}  // namespace ptzeros
