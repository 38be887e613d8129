#include "ptzeros/shooting.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>

#include "ptzeros/wkb.hpp"

namespace ptzeros {

namespace {

constexpr double kPi = std::numbers::pi;

ODEState right_seed(const Monomial& spec, double energy, const WedgePair& wedges) {
  const Complex x_r = std::polar(wedges.start_radius, wedges.theta_right);
  return wkb_seed(spec, energy, x_r, -x_r);
}

// PT conjugate of a solution: psi~(x) = conj(psi(-conj x)).
ODEState pt_conjugate(const ODEState& s) { return {pt_mirror(s.x), std::conj(s.psi), -std::conj(s.dpsi)}; }

// 1/psi(x_m), or kappa/psi'(x_m) when psi vanishes there (odd states).
Complex matching_scale(const Monomial& spec, double energy, const ODEState& at_m) {
  const double kappa = std::sqrt(std::abs(evaluate_potential(spec, at_m.x) - energy));
  return std::abs(at_m.psi) * kappa >= 1e-6 * std::abs(at_m.dpsi) ? 1.0 / at_m.psi : kappa / at_m.dpsi;
}

}  // namespace

WedgePair make_wedges(int N, double start_radius) {
  if (N < 2) throw Error(ErrorKind::InvalidArgument, "make_wedges: N must be >= 2");
  if (!(start_radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "make_wedges: start_radius must be > 0");
  WedgePair w;
  w.N = N;
  w.opening = 2.0 * kPi / (N + 2);
  w.theta_right = -kPi / 2 + w.opening;
  w.theta_left = -kPi / 2 - w.opening;
  w.start_radius = start_radius;
  return w;
}

double default_start_radius(int N, double energy, double decay_action) {
  const PotentialSpec spec = Monomial{N};
  const double theta = make_wedges(N, 1.0).theta_right;
  const double r0 = std::pow(std::max(energy, 1e-12), 1.0 / N);
  const double dr = 1e-3 * std::max(r0, 0.1);
  double action = 0.0;
  double r = r0;
  while (action < decay_action) {
    const Complex x = std::polar(r + 0.5 * dr, theta);
    action += std::abs(std::sqrt(evaluate_potential(spec, x) - energy)) * dr;
    r += dr;
  }
  return r;
}

Complex matching_point(const Monomial& spec, double energy) {
  // Midpoint of the PT turning-point chord: on the imaginary axis and inside
  // the oscillatory region.
  return Complex(0.0, -std::pow(energy, 1.0 / spec.N) * std::cos(kPi / spec.N));
}

Mismatch mismatch(const Monomial& spec, double energy, const WedgePair& wedges, const Tolerances& tol) {
  if (wedges.N != spec.N) throw Error(ErrorKind::InvalidArgument, "mismatch: wedge N differs from potential N");
  if (!(energy > 0.0)) throw Error(ErrorKind::InvalidArgument, "mismatch: E must be > 0");
  const Complex x_m = matching_point(spec, energy);
  const ODEState seed = right_seed(spec, energy, wedges);

  Mismatch out;
  out.right = propagate(spec, energy, seed, x_m, tol);
  out.left = propagate(spec, energy, pt_conjugate(seed), x_m, tol);
  out.wronskian = out.left.psi * out.right.dpsi - out.left.dpsi * out.right.psi;
  // Sine of the angle between the two (psi, psi'/kappa) state vectors.
  const double kappa = std::sqrt(std::abs(evaluate_potential(spec, x_m) - energy)) + 1e-300;
  const auto state_norm = [kappa](const ODEState& s) { return std::hypot(std::abs(s.psi), std::abs(s.dpsi) / kappa); };
  const double norm = kappa * state_norm(out.left) * state_norm(out.right);
  out.value = out.wronskian.real() / norm;
  out.imag = out.wronskian.imag() / norm;
  if (!(std::abs(out.imag) < 1e-6 * (std::abs(out.value) + 1.0))) {
    throw Error(ErrorKind::PTViolation, "mismatch: Wronskian not real at E = " + std::to_string(energy));
  }
  return out;
}

ODEState normalized_matching_state(const Monomial& spec, double energy, const WedgePair& wedges,
                                   const Tolerances& tol) {
  const ODEState at_m = propagate(spec, energy, right_seed(spec, energy, wedges), matching_point(spec, energy), tol);
  const Complex scale = matching_scale(spec, energy, at_m);
  return {at_m.x, at_m.psi * scale, at_m.dpsi * scale};
}

Spectrum find_eigenvalues(const Monomial& spec, double E_max, const WedgePair& wedges, const Tolerances& tol) {
  if (!(E_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "find_eigenvalues: E_max must be > 0");

  std::vector<double> ladder;  // WKB levels, last one beyond E_max
  for (int k = 0;; ++k) {
    ladder.push_back(wkb_eigenvalue(spec, k));
    if (ladder.back() > E_max) break;
  }

  // Eight scan points per WKB level spacing.
  std::vector<double> grid;
  double lo = 0.25 * ladder.front();
  for (double hi : ladder) {
    for (int i = 0; i < 8; ++i) {
      const double e = lo + (hi - lo) * i / 8.0;
      if (e <= E_max) grid.push_back(e);
    }
    lo = hi;
  }
  grid.push_back(E_max);

  const auto f = [&](double e) { return mismatch(spec, e, wedges, tol).value; };
  std::vector<double> values;
  values.reserve(grid.size());
  for (double e : grid) values.push_back(f(e));

  Spectrum out;
  out.wkb_count = static_cast<int>(ladder.size()) - 1;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double f_lo = values[i];
    const double f_hi = values[i + 1];
    double root = 0.0;
    if (f_lo == 0.0) {
      root = grid[i];
    } else if (f_lo * f_hi < 0.0) {
      boost::uintmax_t max_iter = 200;
      const auto tolerance = [](double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)); };
      const auto [a, b] = boost::math::tools::toms748_solve(f, grid[i], grid[i + 1], f_lo, f_hi, tolerance, max_iter);
      root = 0.5 * (a + b);
    } else {
      continue;
    }
    Eigenpair pair;
    pair.k = static_cast<int>(out.levels.size());
    pair.E = root;
    pair.residual = std::abs(f(root));
    const ODEState seed = right_seed(spec, root, wedges);
    const Complex x_m = matching_point(spec, root);
    pair.samples = integrate_schrodinger(spec, root, Contour({seed.x, x_m}), seed, tol);
    const Complex scale = matching_scale(spec, root, pair.samples.back());
    for (auto& s : pair.samples) {
      s.psi *= scale;
      s.dpsi *= scale;
    }
    out.levels.push_back(std::move(pair));
  }
  out.missed_level = std::abs(static_cast<int>(out.levels.size()) - out.wkb_count) > 1;
  return out;
}

Spectrum lowest_eigenvalues(const Monomial& spec, int count, const Tolerances& tol) {
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "lowest_eigenvalues: count must be >= 1");
  const double e_last = wkb_eigenvalue(spec, count - 1);
  const double e_next = wkb_eigenvalue(spec, count);
  const double e_max = 0.5 * (e_last + e_next);
  const WedgePair wedges = make_wedges(spec.N, default_start_radius(spec.N, e_max));
  Spectrum s = find_eigenvalues(spec, e_max, wedges, tol);
  if (static_cast<int>(s.levels.size()) > count) s.levels.resize(count);
  if (static_cast<int>(s.levels.size()) != count) s.missed_level = true;
  return s;
}

std::vector<ODEState> eigenfunction_samples(const Monomial& spec, const Eigenpair& pair,
                                            const Contour& contour, const WedgePair& wedges,
                                            const Tolerances& tol) {
  const ODEState anchor = normalized_matching_state(spec, pair.E, wedges, tol);
  const ODEState start = propagate(spec, pair.E, anchor, contour.start(), tol);
  return integrate_schrodinger(spec, pair.E, contour, start, tol);
}

}  // namespace ptzeros
