#pragma once

#include <span>
#include <vector>

#include "ptzeros/common.hpp"

namespace ptzeros {

struct PolyValue {
  Complex value;
  Complex derivative;
};

/// Horner evaluation; coefficients in ascending order.
PolyValue polyval(std::span<const Complex> coeffs, Complex x);

struct PolynomialRoots {
  std::vector<Complex> roots;
  std::vector<double> residuals;  // |P(r)| after refinement
  bool ill_conditioned = false;   // some residual exceeded the acceptance bound
};

/// All roots of sum c_n x^n via eigenvalues of the (scaled) companion
/// matrix, each polished by a Newton step. Leading coefficient must be
/// nonzero; degree >= 1.
PolynomialRoots polynomial_zeros(std::span<const Complex> coeffs);

}  // namespace ptzeros
