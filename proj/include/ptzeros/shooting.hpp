#pragma once

#include <vector>

#include "ptzeros/complex_ode.hpp"

namespace ptzeros {

/// Stokes wedges in which Monomial eigenfunctions decay, plus the radius at
/// which shooting starts. Left wedge is the PT mirror of the right.
struct WedgePair {
  int N = 2;
  double theta_right = 0.0;
  double theta_left = 0.0;
  double opening = 0.0;
  double start_radius = 0.0;
};

WedgePair make_wedges(int N, double start_radius);

/// Radius on the right wedge center beyond which the decaying solution has
/// lost `decay_action` e-folds relative to the turning-point circle at E.
double default_start_radius(int N, double energy, double decay_action = 35.0);

struct Mismatch {
  double value = 0.0;    // Re W / (kappa |(psi_L, psi_L'/kappa)| |(psi_R, psi_R'/kappa)|)
  double imag = 0.0;     // Im of the same normalised Wronskian
  Complex wronskian;     // raw psi_L psi_R' - psi_L' psi_R
  ODEState right;        // right-wedge solution at the matching point
  ODEState left;
};

Complex matching_point(const Monomial& spec, double energy);

/// Wronskian of the right-wedge solution and its PT conjugate at the
/// matching point (midpoint of the turning-point chord). Throws PTViolation when the imaginary part
/// is not negligible.
Mismatch mismatch(const Monomial& spec, double energy, const WedgePair& wedges, const Tolerances& tol);

struct Eigenpair {
  int k = 0;
  double E = 0.0;
  double residual = 0.0;         // |normalised W| at E
  std::vector<ODEState> samples; // right seed -> matching point, scaled as normalized_matching_state
};

struct Spectrum {
  std::vector<Eigenpair> levels;
  int wkb_count = 0;        // WKB levels below E_max
  bool missed_level = false;
};

Spectrum find_eigenvalues(const Monomial& spec, double E_max, const WedgePair& wedges,
                          const Tolerances& tol);

/// First `count` eigenpairs; E_max chosen from the WKB ladder.
Spectrum lowest_eigenvalues(const Monomial& spec, int count, const Tolerances& tol);

/// Right-wedge solution at the matching point, scaled so psi(x_m) = 1, or
/// psi'(x_m) = sqrt|V - E| when psi(x_m) is negligible.
ODEState normalized_matching_state(const Monomial& spec, double energy, const WedgePair& wedges,
                                   const Tolerances& tol);

std::vector<ODEState> eigenfunction_samples(const Monomial& spec, const Eigenpair& pair,
                                            const Contour& contour, const WedgePair& wedges,
                                            const Tolerances& tol);

}  // namespace ptzeros
