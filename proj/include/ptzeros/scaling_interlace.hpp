#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ptzeros/common.hpp"
#include "ptzeros/wkb.hpp"

namespace ptzeros {

/// z = (x E^{-1/N} + i) N / pi.
struct LargeN {
  int N = 2;
  double E = 1.0;
};

/// z = x / r with r = |x_TP|.
struct TurningMagnitude {
  double r = 1.0;
};

/// z = x E^{-1/3}.
struct CubicScale {
  double E = 1.0;
};

using ScalingMap = std::variant<LargeN, TurningMagnitude, CubicScale>;

void validate(const ScalingMap& map);
Complex apply_scaling(const ScalingMap& map, Complex x);
std::vector<Complex> apply_scaling(const ScalingMap& map, std::span<const Complex> zeros);
std::string describe(const ScalingMap& map);

/// Orders by Re, ties by Im.
std::vector<Complex> order_by_real(std::span<const Complex> zeros);

struct InterlaceReport {
  int k = 0;
  int k1 = 1;
  std::vector<int> gap_counts;  // zeros of Psi_k strictly inside each interior gap of Psi_{k+1}
  int outside = 0;              // zeros of Psi_k not in any interior gap
  bool count_mismatch = false;  // |zeros_k1| != |zeros_k| + 1
  bool pass = false;
  std::optional<double> shift;  // mean Im(zeros_k) - mean Im(zeros_k1); empty if either set is empty
};

InterlaceReport check_interlacing(std::span<const Complex> zeros_k, std::span<const Complex> zeros_k1, int k = 0);

struct ShiftMetric {
  std::vector<int> ks;
  std::vector<double> mean_im;
  bool strictly_decreasing = false;
};

/// Mean Im per set; empty sets are skipped.
ShiftMetric shift_metric(std::span<const std::vector<Complex>> zero_sets, std::span<const int> ks);

struct BandMetric {
  double alpha = 0.0;  // Im = alpha + beta Re + gamma Re^2
  double beta = 0.0;
  double gamma = 0.0;
  double rms_deviation = 0.0;
  double max_deviation = 0.0;
  double band_width = 0.0;  // max - min signed vertical deviation
  std::size_t count = 0;
};

BandMetric band_metric(std::span<const Complex> pooled);

/// Im-axis intercept of one eigenfunction's zero arch: Im = alpha + gamma Re^2
/// fitted when at least two distinct |Re| occur, otherwise the mean Im.
double arch_intercept(std::span<const Complex> zeros);

struct DivergenceResult {
  PowerLawFit gap_fit;               // gap_k ~ C k^p
  double cumulative_exponent = 0.0;  // q in S_n - g_n/2 = A (n^q - 1)/q + c
  double cumulative_amplitude = 0.0;
  double cumulative_offset = 0.0;
  bool divergent = false;            // p > -1 and q > 0 with A > 0
};

/// gaps[i] belongs to index ks[i].
DivergenceResult divergence_check(std::span<const double> gaps, std::span<const double> ks);
DivergenceResult divergence_check(std::span<const double> gaps);

}  // namespace ptzeros
