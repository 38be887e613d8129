#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "ptzeros/complex_ode.hpp"

namespace ptzeros {

struct GridRegion {
  double re_min = -1.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 1.0;
  int nx = 201;
  int ny = 101;

  void validate() const;
  double dx() const { return (re_max - re_min) / (nx - 1); }
  double dy() const { return (im_max - im_min) / (ny - 1); }
  Complex point(int i, int j) const { return {re_min + i * dx(), im_min + j * dy()}; }
  bool contains(Complex z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
};

/// psi and psi' on a rectangular grid, row-major (j * nx + i).
struct FieldSample {
  GridRegion region;
  std::vector<Complex> psi;
  std::vector<Complex> dpsi;
  std::vector<bool> row_masked;  // rows lost to Overflow

  Complex value(int i, int j) const { return psi[j * region.nx + i]; }
  Complex derivative(int i, int j) const { return dpsi[j * region.nx + i]; }
  int masked_rows() const;
};

/// Integrates from `anchor` down a vertical spine through anchor.x, then
/// outward along each grid row.
FieldSample evaluate_on_grid(const PotentialSpec& spec, double energy, const GridRegion& region,
                             const Tolerances& tol, const ODEState& anchor);

using AnalyticFunction = std::function<std::pair<Complex, Complex>(Complex)>;

/// Samples a closed-form function (value and derivative) on the grid.
FieldSample sample_function(const GridRegion& region, const AnalyticFunction& f);

/// One candidate per cell where the Re psi = 0 and Im psi = 0 level curves
/// of the bilinear interpolant cross inside the cell.
std::vector<Complex> locate_zeros(const FieldSample& field);

struct RefinedZero {
  Complex z;
  double residual = 0.0;  // |psi(z)|
  int iterations = 0;
};

/// Complex Newton iteration z <- z - psi/psi'.
RefinedZero refine_zero(const AnalyticFunction& f, Complex x0, double tol = 1e-12, int max_iter = 30);

/// psi, psi' anywhere near the grid by short re-integration from the
/// nearest unmasked node.
AnalyticFunction field_evaluator(const PotentialSpec& spec, double energy, const FieldSample& field,
                                 const Tolerances& tol);

RefinedZero refine_zero(const PotentialSpec& spec, double energy, const FieldSample& field, Complex x0,
                        const Tolerances& tol);

struct ZeroSet {
  int k = 0;
  std::vector<Complex> zeros;  // ordered by Re, then Im
  std::vector<double> newton_residuals;
  int candidates = 0;
  double max_shift_cells = 0.0;  // largest candidate -> refined move, in cells
  int masked_rows = 0;
};

/// Grid evaluation, cell detection, Newton refinement, de-duplication.
ZeroSet find_zeros(const PotentialSpec& spec, double energy, const GridRegion& region, const Tolerances& tol,
                   const ODEState& anchor, int k = 0);

/// Same pipeline for a closed-form function.
ZeroSet find_zeros(const AnalyticFunction& f, const GridRegion& region);

}  // namespace ptzeros
