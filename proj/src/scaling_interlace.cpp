#include "ptzeros/scaling_interlace.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>

namespace ptzeros {

namespace {

double mean_imag(std::span<const Complex> zs) {
  double s = 0.0;
  for (const Complex& z : zs) s += z.imag();
  return s / static_cast<double>(zs.size());
}

// (n^q - 1)/q, continuous through q = 0.
double box_cox(double n, double q) {
  const double l = std::log(n);
  return std::abs(q * l) < 1e-8 ? l * (1.0 + 0.5 * q * l) : std::expm1(q * l) / q;
}

struct OffsetFit {
  double A = 0.0;
  double c = 0.0;
  double rss = 0.0;
};

OffsetFit offset_fit(std::span<const double> ns, std::span<const double> sums, double q) {
  Eigen::MatrixXd M(ns.size(), 2);
  Eigen::VectorXd y(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    M(i, 0) = box_cox(ns[i], q);
    M(i, 1) = 1.0;
    y(i) = sums[i];
  }
  const Eigen::Vector2d sol = M.colPivHouseholderQr().solve(y);
  return {sol(0), sol(1), (M * sol - y).squaredNorm()};
}

}  // namespace

void validate(const ScalingMap& map) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LargeN>) {
          if (m.N < 2 || !(m.E > 0.0)) throw Error(ErrorKind::InvalidArgument, "LargeN needs N >= 2, E > 0");
        } else if constexpr (std::is_same_v<T, TurningMagnitude>) {
          if (!(m.r > 0.0)) throw Error(ErrorKind::InvalidArgument, "TurningMagnitude needs r > 0");
        } else {
          if (!(m.E > 0.0)) throw Error(ErrorKind::InvalidArgument, "CubicScale needs E > 0");
        }
      },
      map);
}

Complex apply_scaling(const ScalingMap& map, Complex x) {
  validate(map);
  return std::visit(
      [x](const auto& m) -> Complex {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LargeN>) {
          return (x * std::pow(m.E, -1.0 / m.N) + kI) * (m.N / std::numbers::pi);
        } else if constexpr (std::is_same_v<T, TurningMagnitude>) {
          return x / m.r;
        } else {
          return x * std::pow(m.E, -1.0 / 3.0);
        }
      },
      map);
}

std::vector<Complex> apply_scaling(const ScalingMap& map, std::span<const Complex> zeros) {
  std::vector<Complex> out;
  out.reserve(zeros.size());
  for (const Complex& z : zeros) out.push_back(apply_scaling(map, z));
  return out;
}

std::string describe(const ScalingMap& map) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LargeN>) return "large-n: z = (x E^(-1/N) + i) N / pi";
        else if constexpr (std::is_same_v<T, TurningMagnitude>) return "turning-magnitude: z = x / |x_TP|";
        else return "cubic: z = x E^(-1/3)";
      },
      map);
}

std::vector<Complex> order_by_real(std::span<const Complex> zeros) {
  std::vector<Complex> out(zeros.begin(), zeros.end());
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

InterlaceReport check_interlacing(std::span<const Complex> zeros_k, std::span<const Complex> zeros_k1, int k) {
  InterlaceReport r;
  r.k = k;
  r.k1 = k + 1;
  const std::vector<Complex> a = order_by_real(zeros_k);
  const std::vector<Complex> b = order_by_real(zeros_k1);
  r.count_mismatch = b.size() != a.size() + 1;
  int inside = 0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const double lo = b[i].real();
    const double hi = b[i + 1].real();
    const int c = static_cast<int>(
        std::count_if(a.begin(), a.end(), [&](Complex z) { return z.real() > lo && z.real() < hi; }));
    r.gap_counts.push_back(c);
    inside += c;
  }
  r.outside = static_cast<int>(a.size()) - inside;
  r.pass = !r.count_mismatch && std::all_of(r.gap_counts.begin(), r.gap_counts.end(), [](int c) { return c == 1; });
  if (!a.empty() && !b.empty()) r.shift = mean_imag(a) - mean_imag(b);
  return r;
}

ShiftMetric shift_metric(std::span<const std::vector<Complex>> zero_sets, std::span<const int> ks) {
  if (zero_sets.size() != ks.size()) throw Error(ErrorKind::InvalidArgument, "shift_metric: sets and ks differ in size");
  if (zero_sets.size() < 2) throw Error(ErrorKind::InvalidArgument, "shift_metric needs at least 2 sets");
  ShiftMetric m;
  for (std::size_t i = 0; i < zero_sets.size(); ++i) {
    if (zero_sets[i].empty()) continue;
    m.ks.push_back(ks[i]);
    m.mean_im.push_back(mean_imag(zero_sets[i]));
  }
  m.strictly_decreasing = m.mean_im.size() >= 2;
  for (std::size_t i = 1; i < m.mean_im.size(); ++i) {
    if (!(m.mean_im[i] < m.mean_im[i - 1])) m.strictly_decreasing = false;
  }
  return m;
}

BandMetric band_metric(std::span<const Complex> pooled) {
  if (pooled.size() < 10) throw Error(ErrorKind::InvalidArgument, "band_metric needs at least 10 zeros");
  Eigen::MatrixXd M(pooled.size(), 3);
  Eigen::VectorXd y(pooled.size());
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    const double re = pooled[i].real();
    M(i, 0) = 1.0;
    M(i, 1) = re;
    M(i, 2) = re * re;
    y(i) = pooled[i].imag();
  }
  const auto qr = M.colPivHouseholderQr();
  if (qr.rank() < 3) throw Error(ErrorKind::DegenerateFit, "band_metric: fewer than 3 distinct Re values");
  const Eigen::Vector3d c = qr.solve(y);
  const Eigen::VectorXd dev = y - M * c;
  BandMetric b;
  b.alpha = c(0);
  b.beta = c(1);
  b.gamma = c(2);
  b.rms_deviation = std::sqrt(dev.squaredNorm() / static_cast<double>(dev.size()));
  b.max_deviation = dev.cwiseAbs().maxCoeff();
  b.band_width = dev.maxCoeff() - dev.minCoeff();
  b.count = pooled.size();
  return b;
}

double arch_intercept(std::span<const Complex> zeros) {
  if (zeros.empty()) throw Error(ErrorKind::InvalidArgument, "arch_intercept: no zeros");
  std::vector<double> abs_re;
  for (const Complex& z : zeros) abs_re.push_back(std::abs(z.real()));
  std::sort(abs_re.begin(), abs_re.end());
  const double scale = abs_re.back() + 1e-300;
  const bool distinct = abs_re.back() - abs_re.front() > 1e-6 * scale;
  if (!distinct) return mean_imag(zeros);
  Eigen::MatrixXd M(zeros.size(), 2);
  Eigen::VectorXd y(zeros.size());
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    M(i, 0) = 1.0;
    M(i, 1) = zeros[i].real() * zeros[i].real();
    y(i) = zeros[i].imag();
  }
  return M.colPivHouseholderQr().solve(y)(0);
}

DivergenceResult divergence_check(std::span<const double> gaps, std::span<const double> ks) {
  if (gaps.size() != ks.size()) throw Error(ErrorKind::InvalidArgument, "divergence_check: gaps and ks differ in size");
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (!(gaps[i] > 0.0)) throw Error(ErrorKind::InvalidArgument, "divergence_check: gaps must be > 0");
    points.emplace_back(ks[i], gaps[i]);
  }
  DivergenceResult out;
  out.gap_fit = fit_power_law(points);

  std::vector<double> sums(gaps.size());
  double s = 0.0;
  // Trapezoid correction: S_n - g_n / 2 tracks the integral of the gap law.
  for (std::size_t i = 0; i < gaps.size(); ++i) sums[i] = (s += gaps[i]) - 0.5 * gaps[i];
  const auto objective = [&](double q) { return offset_fit(ks, sums, q).rss; };
  const auto [q, rss] = boost::math::tools::brent_find_minima(objective, -3.0, 2.0, 52);
  (void)rss;
  const OffsetFit f = offset_fit(ks, sums, q);
  out.cumulative_exponent = q;
  out.cumulative_amplitude = f.A;
  out.cumulative_offset = f.c;
  out.divergent = out.gap_fit.p > -1.0 && q > 0.0 && f.A > 0.0;
  return out;
}

DivergenceResult divergence_check(std::span<const double> gaps) {
  std::vector<double> ks(gaps.size());
  for (std::size_t i = 0; i < ks.size(); ++i) ks[i] = static_cast<double>(i + 1);
  return divergence_check(gaps, ks);
}

}  // namespace ptzeros
