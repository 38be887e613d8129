#include "ptzeros/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace ptzeros {

PolyValue polyval(std::span<const Complex> coeffs, Complex x) {
  Complex p{0.0, 0.0};
  Complex dp{0.0, 0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    dp = dp * x + p;
    p = p * x + *it;
  }
  return {p, dp};
}

PolynomialRoots polynomial_zeros(std::span<const Complex> coeffs) {
  const int degree = static_cast<int>(coeffs.size()) - 1;
  if (degree < 1) throw Error(ErrorKind::InvalidArgument, "polynomial_zeros: degree must be >= 1");
  const Complex lead = coeffs[degree];
  if (lead == Complex{0.0, 0.0}) {
    throw Error(ErrorKind::InvalidArgument, "polynomial_zeros: leading coefficient is zero");
  }

  // Substitute x = s*y with s chosen from the geometric mean of the
  // coefficient ratios so the companion matrix is roughly balanced.
  double log_scale = 0.0;
  int terms = 0;
  for (int n = 0; n < degree; ++n) {
    if (std::abs(coeffs[n]) > 0.0) {
      log_scale += std::log(std::abs(coeffs[n]) / std::abs(lead)) / (degree - n);
      ++terms;
    }
  }
  const double scale = terms > 0 ? std::exp(log_scale / terms) : 1.0;

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int n = 0; n < degree; ++n) {
    companion(n, degree - 1) = -coeffs[n] / lead * std::pow(scale, n - degree);
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "polynomial_zeros: companion eigenvalue solve failed");
  }

  double max_coeff = 0.0;
  for (const auto& c : coeffs) max_coeff = std::max(max_coeff, std::abs(c));

  PolynomialRoots out;
  out.roots.reserve(degree);
  out.residuals.reserve(degree);
  for (int i = 0; i < degree; ++i) {
    Complex r = solver.eigenvalues()[i] * scale;
    const PolyValue pv = polyval(coeffs, r);
    if (std::abs(pv.derivative) > 0.0) {
      const Complex polished = r - pv.value / pv.derivative;
      if (is_finite(polished) && std::abs(polyval(coeffs, polished).value) <= std::abs(pv.value)) {
        r = polished;
      }
    }
    const double residual = std::abs(polyval(coeffs, r).value);
    const double bound = 1e-9 * max_coeff * std::pow(std::max(1.0, std::abs(r)), degree);
    if (!(residual <= bound)) out.ill_conditioned = true;
    out.roots.push_back(r);
    out.residuals.push_back(residual);
  }
  return out;
}

}  // namespace ptzeros
