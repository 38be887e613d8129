#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptzeros/complex_ode.hpp"
#include "ptzeros/scaling_interlace.hpp"
#include "ptzeros/wkb.hpp"
#include "ptzeros/zero_locator.hpp"

namespace ptzeros {

enum class ProblemKind { Monomial, QES, LargeN };
enum class ScalingChoice { Auto, Cubic, TurningMagnitude, LargeN };

struct GridSettings {
  int nx = 201;
  int ny = 101;
  double re_pad = 0.2;   // fraction of the turning-point Re span
  double im_pad = 0.2;   // fraction of the Stokes-path Im extent
};

struct FitSettings {
  int wkb_k_min = 10;
  int wkb_k_max = 40;
};

struct RunConfig {
  std::string name;  // empty: derived from the problem
  ProblemKind problem = ProblemKind::Monomial;
  int N = 3;
  double a = 10.0;
  double b = 2.0;
  int J = 21;
  int k_max = 6;  // eigenpairs for Monomial / LargeN; cap on levels for QES (0 = all J)
  Tolerances tol;
  GridSettings grid;
  FitSettings fits;
  ScalingChoice scaling = ScalingChoice::Auto;
  std::string output_dir = "out";
  int threads = 1;

  std::string example_name() const;
  PotentialSpec potential() const;
  ScalingChoice effective_scaling() const;
  void validate() const;
};

/// Parses the JSON config format (comments allowed, unknown keys rejected).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

struct LevelResult {
  int k = 0;
  double energy = 0.0;
  std::optional<double> energy_wkb;
  double residual = 0.0;
  ScalingMap scaling;
  std::vector<Complex> zeros;     // ordered by Re, then Im
  std::vector<Complex> scaled;
  std::vector<bool> relevant;
  std::vector<double> zero_residuals;
  int candidates = 0;
  int masked_rows = 0;
  double max_shift_cells = 0.0;
  int outside_arch = 0;  // refined zeros dropped for Re beyond the turning points

  std::vector<Complex> relevant_zeros() const;
  std::vector<Complex> relevant_scaled() const;
};

struct GapAnalysis {
  std::vector<double> ks;          // midpoints of consecutive k
  std::vector<double> intercepts;  // arch intercept per k with zeros
  std::vector<double> gaps;
  std::vector<double> local_exponents;
  std::optional<RichardsonResult> richardson;
  bool in_asymptopia = false;      // Richardson value within 0.05 of -0.6
  std::optional<DivergenceResult> divergence;
};

struct RunReport {
  RunConfig config;
  std::string example;
  std::vector<LevelResult> levels;
  std::vector<InterlaceReport> interlace_scaled;
  std::vector<InterlaceReport> interlace_unscaled;
  bool interlace_pass = true;
  bool affine_invariant = true;
  std::optional<ShiftMetric> shift_unscaled;
  std::optional<ShiftMetric> shift_scaled;
  std::optional<BandMetric> band_unscaled;
  std::optional<BandMetric> band_scaled;
  std::optional<PowerLawFit> wkb_energy_fit;
  std::optional<PowerLawFit> shooting_energy_fit;
  std::optional<DriftResult> drift;
  std::optional<GapAnalysis> gap_analysis;
  bool missed_level = false;
  std::vector<std::string> warnings;
};

/// Stokes-path bounding box, padded by the grid fractions.
GridRegion arch_region(const PotentialSpec& spec, double energy, const GridSettings& grid);

RunReport run_pipeline(const RunConfig& config);

/// Monomial-only stages, exposed for the CLI subcommands.
std::vector<LevelResult> monomial_levels(const RunConfig& config);
/// Zeros in the arch region: the padded grid is searched, then zeros with Re
/// outside the turning-point span are dropped.
void attach_zeros(const RunConfig& config, std::vector<LevelResult>& levels);
std::vector<LevelResult> qes_levels(const RunConfig& config);
void analyse(RunReport& report);

}  // namespace ptzeros
