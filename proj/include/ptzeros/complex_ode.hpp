#pragma once

#include <vector>

#include "ptzeros/potentials.hpp"

namespace ptzeros {

/// Piecewise-linear oriented path through the complex x-plane.
class Contour {
 public:
  explicit Contour(std::vector<Complex> anchors);

  const std::vector<Complex>& anchors() const { return anchors_; }
  Complex start() const { return anchors_.front(); }
  Complex end() const { return anchors_.back(); }
  double length() const;

 private:
  std::vector<Complex> anchors_;
};

/// Solution value and x-derivative at a point.
struct ODEState {
  Complex x;
  Complex psi;
  Complex dpsi;
};

struct Tolerances {
  double rel = 1e-11;
  double abs = 1e-14;
  double max_step = 0.05;
  double min_step = 1e-12;

  void validate() const;
};

inline constexpr double kOverflowCeiling = 1e150;

/// Integrates psi'' = (V - E) psi along `contour` with an adaptive
/// Dormand-Prince 5(4) pair. The result holds the initial state, every
/// accepted step, and the state at each anchor.
std::vector<ODEState> integrate_schrodinger(const PotentialSpec& spec, double energy,
                                            const Contour& contour, const ODEState& init,
                                            const Tolerances& tol);

/// Straight-line transport of `init` to `target`; returns only the end state.
ODEState propagate(const PotentialSpec& spec, double energy, const ODEState& init, Complex target,
                   const Tolerances& tol);

/// Leading-order WKB initial data psi = Q^{-1/4}, psi' = -sqrt(Q) psi with
/// Q = V(x0) - E and the branch of sqrt(Q) for which psi grows along the
/// inward direction (so the solution decays outward).
ODEState wkb_seed(const PotentialSpec& spec, double energy, Complex x0, Complex inward_direction);

}  // namespace ptzeros
