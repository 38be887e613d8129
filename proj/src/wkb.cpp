#include "ptzeros/wkb.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <map>
#include <numbers>

namespace ptzeros {

namespace {

constexpr double kPi = std::numbers::pi;

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Golub-Welsch on [-1, 1].
const GaussRule& gauss_legendre(int order) {
  thread_local std::map<int, GaussRule> cache;
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  GaussRule rule;
  for (int i = 0; i < order; ++i) {
    rule.nodes.push_back(solver.eigenvalues()[i]);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights.push_back(2.0 * v0 * v0);
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

// Branch of sqrt(z) nearest to `reference`.
Complex sqrt_near(Complex z, Complex reference) {
  const Complex r = std::sqrt(z);
  return std::abs(r - reference) <= std::abs(r + reference) ? r : -r;
}

// Integral of sqrt(E - V) over the straight segment [from, to] with a
// three-point Gauss rule; branch kept next to `branch`.
Complex segment_phase(const PotentialSpec& spec, double energy, Complex from, Complex to,
                      Complex branch) {
  static constexpr double nodes[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  static constexpr double weights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const Complex mid = 0.5 * (from + to);
  const Complex half = 0.5 * (to - from);
  Complex sum{};
  for (int i = 0; i < 3; ++i) {
    const Complex x = mid + nodes[i] * half;
    sum += weights[i] * sqrt_near(energy - evaluate_potential(spec, x), branch);
  }
  return sum * half;
}

}  // namespace

ActionIntegral action_integral(const PotentialSpec& spec, double energy, int order,
                               const TurningPointOptions& tp_options) {
  const TurningPointSet tps = turning_points(spec, energy, tp_options);
  const Complex xp = tps.x_plus;
  const Complex xm = tps.x_minus;
  const Complex center = 0.5 * (xp + xm);
  const Complex half = 0.5 * (xp - xm);
  const GaussRule& rule = gauss_legendre(order);

  // x = center + half sin(theta); E - V = -(half cos theta)^2 G(x) with G
  // analytic and nonvanishing on the segment.
  std::vector<Complex> root_g(order);
  std::vector<double> cos2(order);
  for (int j = 0; j < order; ++j) {
    const double theta = 0.5 * kPi * rule.nodes[j];
    const Complex x = center + half * std::sin(theta);
    const Complex g = (energy - evaluate_potential(spec, x)) / ((x - xp) * (x - xm));
    root_g[j] = std::sqrt(g);
    cos2[j] = std::cos(theta) * std::cos(theta);
  }
  // Make the branch of sqrt(G) continuous, walking out from the middle node.
  const int mid = order / 2;
  for (int j = mid + 1; j < order; ++j) {
    if (std::abs(root_g[j] - root_g[j - 1]) > std::abs(root_g[j] + root_g[j - 1])) root_g[j] = -root_g[j];
  }
  for (int j = mid - 1; j >= 0; --j) {
    if (std::abs(root_g[j] - root_g[j + 1]) > std::abs(root_g[j] + root_g[j + 1])) root_g[j] = -root_g[j];
  }
  Complex sum{};
  for (int j = 0; j < order; ++j) sum += rule.weights[j] * cos2[j] * root_g[j];
  Complex value = 0.5 * kPi * kI * half * half * sum;
  if (value.real() < 0.0) value = -value;

  if (!(std::abs(value.imag()) <= 1e-6 * std::abs(value.real()))) {
    throw Error(ErrorKind::BranchFailure, "action_integral: no real branch for " + describe(spec));
  }
  return {energy, value.real(), value.imag()};
}

double wkb_eigenvalue(const Monomial& spec, int k) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "wkb_eigenvalue: k must be >= 0");
  const double target = (k + 0.5) * kPi;
  const auto f = [&](double e) { return action_integral(spec, e).value - target; };

  double lo = 1.0;
  double hi = 1.0;
  double f_lo = f(lo);
  double f_hi = f_lo;
  while (f_lo > 0.0) {
    hi = lo;
    f_hi = f_lo;
    lo *= 0.5;
    f_lo = f(lo);
  }
  while (f_hi < 0.0) {
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    f_hi = f(hi);
  }
  boost::uintmax_t max_iter = 200;
  const auto tolerance = [](double a, double b) { return std::abs(a - b) <= 1e-13 * std::abs(b); };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tolerance, max_iter);
  return 0.5 * (a + b);
}

StokesPath trace_stokes_line(const PotentialSpec& spec, double energy, const StokesOptions& options) {
  const TurningPointSet tps = turning_points(spec, energy, options.turning_points);
  const Complex xp = tps.x_plus;
  const Complex xm = tps.x_minus;
  const double scale = std::max(std::abs(xp), std::abs(xp - xm) / 2);
  const double step = options.step > 0.0 ? options.step : 0.01 * scale;
  const double stop_distance = 1e-3 * scale;
  const double start_offset = 1e-6 * scale;

  const auto rate = [&](Complex x) { return energy - evaluate_potential(spec, x); };

  // Near x_plus, phase ~ (2/3) w (x - x_plus)^{3/2}: three rays keep it real.
  const Complex w = std::sqrt(-potential_derivative(spec, xp));
  for (int m = 0; m < 3; ++m) {
    const double alpha = (m * kPi - std::arg(w)) / 1.5;
    Complex dir = std::polar(1.0, alpha);
    Complex x = xp + start_offset * dir;
    Complex branch = sqrt_near(rate(x), std::conj(dir));
    Complex phase = (2.0 / 3.0) * std::abs(w) * std::pow(start_offset, 1.5);

    StokesPath path;
    path.x_plus = xp;
    path.x_minus = xm;
    path.samples.push_back(x);
    bool reached = false;
    for (int n = 0; n < options.max_steps; ++n) {
      const double to_end = std::abs(x - xm);
      if (to_end < stop_distance) {
        reached = true;
        break;
      }
      if (std::abs(x) > 20.0 * scale) break;
      double h = std::min({step, std::max(std::abs(x - xp), start_offset), 0.5 * to_end});

      // Tangent u = conj(r)/|r| with r sqrt(E - V) kept continuous with `dir`.
      const auto tangent = [&](Complex at, Complex& r) {
        r = sqrt_near(rate(at), branch);
        Complex u = std::conj(r) / std::abs(r);
        if ((u * std::conj(dir)).real() < 0.0) {
          r = -r;
          u = -u;
        }
        return u;
      };
      Complex r0;
      const Complex u0 = tangent(x, r0);
      Complex r_mid;
      const Complex u_mid = tangent(x + 0.5 * h * u0, r_mid);
      Complex x_new = x + h * u_mid;
      Complex r_new;
      Complex phase_new = phase + segment_phase(spec, energy, x, x_new, r_mid);
      for (int it = 0; it < 3; ++it) {
        const Complex u_new = tangent(x_new, r_new);
        const double shift = -phase_new.imag() / std::abs(r_new);
        x_new += shift * kI * u_new;
        phase_new = phase + segment_phase(spec, energy, x, x_new, r_mid);
      }
      dir = (x_new - x) / std::abs(x_new - x);
      branch = sqrt_near(rate(x_new), r_mid);
      x = x_new;
      phase = phase_new;
      path.samples.push_back(x);
    }
    if (reached) {
      path.phase = phase;
      return path;
    }
  }
  throw Error(ErrorKind::LostPath, "trace_stokes_line: no real-phase path from x_plus to x_minus for " +
                                       describe(spec));
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 5) throw Error(ErrorKind::InvalidArgument, "fit_power_law needs at least 5 points");
  double sx = 0, sy = 0;
  for (const auto& [k, y] : points) {
    if (!(k > 0.0) || !(y > 0.0)) throw Error(ErrorKind::InvalidArgument, "fit_power_law needs k, y > 0");
    sx += std::log(k);
    sy += std::log(y);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [k, y] : points) {
    sxx += (std::log(k) - mx) * (std::log(k) - mx);
    sxy += (std::log(k) - mx) * (std::log(y) - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::DegenerateFit, "fit_power_law: all k equal");
  PowerLawFit fit;
  fit.p = sxy / sxx;
  const double intercept = my - fit.p * mx;
  fit.C = std::exp(intercept);
  double rss = 0.0;
  for (const auto& [k, y] : points) {
    const double r = std::log(y) - intercept - fit.p * std::log(k);
    rss += r * r;
  }
  fit.rms_residual = std::sqrt(rss / n);
  fit.k_first = points.front().first;
  fit.k_last = points.back().first;
  fit.count = points.size();
  return fit;
}

RichardsonResult richardson_extrapolate(std::span<const double> values, std::span<const double> ks) {
  if (values.size() < 3 || values.size() != ks.size()) {
    throw Error(ErrorKind::InvalidArgument, "richardson_extrapolate needs >= 3 values with matching k");
  }
  RichardsonResult out;
  out.table.emplace_back(values.begin(), values.end());
  const std::size_t n = values.size();
  for (std::size_t j = 1; j < n; ++j) {
    const auto& prev = out.table.back();
    std::vector<double> row;
    for (std::size_t i = 0; i + j < n; ++i) {
      row.push_back((ks[i + j] * prev[i + 1] - ks[i] * prev[i]) / (ks[i + j] - ks[i]));
    }
    out.table.push_back(std::move(row));
  }
  // Spread between the most advanced entries of successive levels.
  std::vector<double> spread(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) spread[j] = std::abs(out.table[j].back() - out.table[j - 1].back());

  std::size_t level = 1;
  while (level + 1 < n && spread[level + 1] <= spread[level]) ++level;
  out.level = static_cast<int>(level);
  out.value = out.table[level].back();
  out.stability = spread[level];
  out.unstable = n > 2 && spread[n - 1] > spread[n - 2];
  return out;
}

std::vector<double> local_exponents(std::span<const double> values, std::span<const double> ks) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    out.push_back(std::log(values[i] / values[i + 1]) / std::log(ks[i] / ks[i + 1]));
  }
  return out;
}

DriftResult turning_point_drift(const Monomial& spec, int k_max, int k_min) {
  if (k_max < 12 || k_min < 1 || k_max - k_min < 5) {
    throw Error(ErrorKind::InvalidArgument, "turning_point_drift needs k_max >= 12 and a window of >= 6 levels");
  }
  std::vector<std::pair<double, double>> energies;
  std::vector<std::pair<double, double>> drift;
  std::vector<std::pair<double, double>> magnitude;
  Complex previous{};
  for (int k = k_min; k <= k_max; ++k) {
    const double e = wkb_eigenvalue(spec, k);
    const Complex x = turning_points(spec, e).x_plus;
    energies.emplace_back(k, e);
    magnitude.emplace_back(k, std::abs(x));
    if (k > k_min) drift.emplace_back(k - 1, std::abs(x - previous));
    previous = x;
  }
  DriftResult out;
  out.energy = fit_power_law(energies);
  out.drift = fit_power_law(drift);
  out.magnitude = fit_power_law(magnitude);
  out.predicted_drift_amplitude = out.energy.p / spec.N * std::pow(out.energy.C, 1.0 / spec.N);
  return out;
}

}  // namespace ptzeros
