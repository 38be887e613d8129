#include "ptzeros/complex_ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ptzeros {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Vec2 {
  Complex psi;
  Complex dpsi;
};

Vec2 operator+(Vec2 u, Vec2 v) { return {u.psi + v.psi, u.dpsi + v.dpsi}; }
Vec2 operator*(double s, Vec2 v) { return {s * v.psi, s * v.dpsi}; }

class SegmentStepper {
 public:
  SegmentStepper(const PotentialSpec& spec, double energy, Complex origin, Complex direction)
      : spec_(spec), energy_(energy), origin_(origin), dir_(direction) {}

  // d/ds (psi, psi') along x = origin + s * dir.
  Vec2 rhs(double s, const Vec2& y) const {
    const Complex x = origin_ + s * dir_;
    return {dir_ * y.dpsi, dir_ * (evaluate_potential(spec_, x) - energy_) * y.psi};
  }

  Complex point(double s) const { return origin_ + s * dir_; }

  Complex local_rate(double s) const {
    return std::sqrt(evaluate_potential(spec_, point(s)) - energy_);
  }

 private:
  const PotentialSpec& spec_;
  double energy_;
  Complex origin_;
  Complex dir_;
};

double component_error(Complex err, Complex y0, Complex y1, const Tolerances& tol) {
  return std::abs(err) / (tol.abs + tol.rel * std::max(std::abs(y0), std::abs(y1)));
}

template <class Sink>
Vec2 integrate_segment(const PotentialSpec& spec, double energy, Complex from, Complex to,
                       Vec2 y, const Tolerances& tol, Sink&& sink) {
  const double length = std::abs(to - from);
  if (length == 0.0) return y;
  const SegmentStepper stepper(spec, energy, from, (to - from) / length);

  double s = 0.0;
  double h = std::min({tol.max_step, length, 0.1 / (1.0 + std::abs(stepper.local_rate(0.0)))});
  double prev_err = 1e-4;
  Vec2 k1 = stepper.rhs(s, y);

  while (s < length) {
    bool last = false;
    if (s + h >= length) {
      h = length - s;
      last = true;
    }
    const Vec2 k2 = stepper.rhs(s + c2 * h, y + (h * a21) * k1);
    const Vec2 k3 = stepper.rhs(s + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Vec2 k4 = stepper.rhs(s + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec2 k5 = stepper.rhs(s + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec2 k6 =
        stepper.rhs(s + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec2 y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec2 k7 = stepper.rhs(s + h, y_new);
    const Vec2 err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err_norm = std::max(component_error(err.psi, y.psi, y_new.psi, tol),
                               component_error(err.dpsi, y.dpsi, y_new.dpsi, tol));
    if (!std::isfinite(err_norm)) err_norm = 1e10;

    if (err_norm <= 1.0) {
      s = last ? length : s + h;
      y = y_new;
      k1 = k7;
      if (!(std::abs(y.psi) <= kOverflowCeiling) || !is_finite(y.dpsi)) {
        std::ostringstream os;
        os << "|psi| exceeded " << kOverflowCeiling << " at x = " << stepper.point(s) << " (E = "
           << energy << ", " << describe(spec) << ")";
        throw Error(ErrorKind::Overflow, os.str());
      }
      sink(ODEState{last ? to : stepper.point(s), y.psi, y.dpsi});
      // PI step-size controller.
      const double e = std::max(err_norm, 1e-10);
      double factor = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(prev_err, 0.4 / 5.0);
      factor = std::clamp(factor, 0.2, 5.0);
      prev_err = e;
      h = std::min(h * factor, tol.max_step);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err_norm, -1.0 / 5.0));
    }
    if (h < tol.min_step && length - s > tol.min_step) {
      std::ostringstream os;
      os << "step " << h << " below min_step at x = " << stepper.point(s) << " (E = " << energy
         << ", " << describe(spec) << ")";
      throw Error(ErrorKind::StepUnderflow, os.str());
    }
  }
  return y;
}

}  // namespace

Contour::Contour(std::vector<Complex> anchors) : anchors_(std::move(anchors)) {
  if (anchors_.size() < 2) throw Error(ErrorKind::InvalidArgument, "Contour needs at least 2 anchors");
  for (std::size_t i = 0; i < anchors_.size(); ++i) {
    if (!is_finite(anchors_[i])) throw Error(ErrorKind::InvalidArgument, "Contour anchor not finite");
    if (i > 0 && anchors_[i] == anchors_[i - 1]) {
      throw Error(ErrorKind::InvalidArgument, "Contour has repeated consecutive anchors");
    }
  }
}

double Contour::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < anchors_.size(); ++i) total += std::abs(anchors_[i] - anchors_[i - 1]);
  return total;
}

void Tolerances::validate() const {
  if (!(rel > 0.0) || !(abs > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerances must be positive");
  if (!(min_step > 0.0) || !(min_step <= max_step)) {
    throw Error(ErrorKind::InvalidArgument, "require 0 < min_step <= max_step");
  }
}

std::vector<ODEState> integrate_schrodinger(const PotentialSpec& spec, double energy,
                                            const Contour& contour, const ODEState& init,
                                            const Tolerances& tol) {
  tol.validate();
  if (std::abs(init.x - contour.start()) > 1e-12 * (1.0 + std::abs(init.x))) {
    throw Error(ErrorKind::InvalidArgument, "initial state is not at the contour start");
  }
  std::vector<ODEState> samples{init};
  Vec2 y{init.psi, init.dpsi};
  const auto& anchors = contour.anchors();
  for (std::size_t i = 1; i < anchors.size(); ++i) {
    y = integrate_segment(spec, energy, anchors[i - 1], anchors[i], y, tol,
                          [&](const ODEState& st) { samples.push_back(st); });
  }
  return samples;
}

ODEState propagate(const PotentialSpec& spec, double energy, const ODEState& init, Complex target,
                   const Tolerances& tol) {
  const Vec2 y =
      integrate_segment(spec, energy, init.x, target, Vec2{init.psi, init.dpsi}, tol, [](const ODEState&) {});
  return {target, y.psi, y.dpsi};
}

ODEState wkb_seed(const PotentialSpec& spec, double energy, Complex x0, Complex inward_direction) {
  if (std::abs(inward_direction) == 0.0) {
    throw Error(ErrorKind::InvalidArgument, "wkb_seed: zero inward direction");
  }
  const Complex d = inward_direction / std::abs(inward_direction);
  const Complex q = evaluate_potential(spec, x0) - energy;
  Complex root = std::sqrt(q);
  const double growth = (-root * d).real();
  if (std::abs(growth) <= 1e-8 * std::abs(root)) {
    throw Error(ErrorKind::BranchAmbiguity, "wkb_seed: seed point lies on an anti-Stokes direction");
  }
  if (growth < 0.0) root = -root;
  const Complex psi = 1.0 / std::sqrt(root);
  return {x0, psi, -root * psi};
}

}  // namespace ptzeros
