#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "ptzeros/common.hpp"

namespace ptzeros {

/// V(x) = -(ix)^N, N >= 2.
struct Monomial {
  int N = 2;
};

/// V(x) = -x^4 + 2iax^3 + (a^2 - 2b)x^2 + 2i(ab - J)x.
struct QESQuartic {
  double a = 10.0;
  double b = 2.0;
  int J = 1;
};

using PotentialSpec = std::variant<Monomial, QESQuartic>;

void validate(const PotentialSpec& spec);

Complex evaluate_potential(const PotentialSpec& spec, Complex x);
Complex potential_derivative(const PotentialSpec& spec, Complex x);

/// Coefficients of V in ascending powers of x.
std::vector<Complex> potential_coefficients(const PotentialSpec& spec);

/// Which PT-mirror pair of quartic turning points anchors the scaling.
enum class PairChoice { Outermost, Innermost };

struct TurningPointOptions {
  double residual_tol = 1e-10;
  double mirror_tol = 1e-8;
  PairChoice choice = PairChoice::Outermost;
};

struct TurningPointSet {
  double energy = 0.0;
  std::vector<Complex> all_roots;
  Complex x_minus;
  Complex x_plus;
  /// PT pairs that were not selected, kept for diagnostics.
  std::vector<std::pair<Complex, Complex>> other_pairs;

  double magnitude() const { return std::abs(x_plus); }
};

TurningPointSet turning_points(const PotentialSpec& spec, double energy,
                               const TurningPointOptions& options = {});

std::string describe(const PotentialSpec& spec);

}  // namespace ptzeros
