#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ptzeros/potentials.hpp"

namespace ptzeros {

/// Real WKB phase integral of sqrt(E - V) between the PT turning-point pair.
struct ActionIntegral {
  double energy = 0.0;
  double value = 0.0;
  double imag_residual = 0.0;  // imaginary part left by the quadrature
};

ActionIntegral action_integral(const PotentialSpec& spec, double energy, int order = 64,
                               const TurningPointOptions& tp_options = {});

/// Solves action(E) = (k + 1/2) pi for E.
double wkb_eigenvalue(const Monomial& spec, int k);

struct StokesPath {
  std::vector<Complex> samples;  // from near x_plus to near x_minus
  Complex phase;                 // accumulated integral of sqrt(E - V) dx
  Complex x_plus;
  Complex x_minus;
};

struct StokesOptions {
  double step = 0.0;       // 0 selects 0.01 |x_TP|
  int max_steps = 200000;
  TurningPointOptions turning_points{};
};

/// Follows the curve from x_plus on which the WKB phase stays real until it
/// reaches x_minus.
StokesPath trace_stokes_line(const PotentialSpec& spec, double energy,
                             const StokesOptions& options = {});

struct PowerLawFit {
  double C = 0.0;
  double p = 0.0;
  double rms_residual = 0.0;  // in log space
  double k_first = 0.0;
  double k_last = 0.0;
  std::size_t count = 0;
};

/// Least squares of ln y against ln k; y = C k^p.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points);

struct RichardsonResult {
  std::vector<std::vector<double>> table;  // table[level][i]
  double value = 0.0;
  double stability = 0.0;
  int level = 0;
  bool unstable = false;
};

/// Richardson table for a sequence with error expansion in powers of 1/k.
RichardsonResult richardson_extrapolate(std::span<const double> values, std::span<const double> ks);

/// Local exponent estimates ln(s_k / s_{k+1}) / ln(k / (k+1)).
std::vector<double> local_exponents(std::span<const double> values, std::span<const double> ks);

struct DriftResult {
  PowerLawFit energy;     // E_k ~ C k^{6/5}
  PowerLawFit drift;      // |x_TP(k+1) - x_TP(k)| ~ k^{-3/5}
  PowerLawFit magnitude;  // |x_TP(k)| ~ k^{2/5}
  double predicted_drift_amplitude = 0.0;  // (2/5)|C|^{1/3}
};

DriftResult turning_point_drift(const Monomial& spec, int k_max, int k_min = 10);

}  // namespace ptzeros
