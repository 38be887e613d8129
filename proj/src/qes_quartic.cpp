#include "ptzeros/qes_quartic.hpp"

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <algorithm>
#include <cmath>

#include "ptzeros/polynomial.hpp"
#include "ptzeros/potentials.hpp"

namespace ptzeros {

namespace {

using HighReal =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<60>, boost::multiprecision::et_off>;

}  // namespace

QESMatrix build_qes_matrix(double a, double b, int J) {
  if (J < 1) throw Error(ErrorKind::InvalidArgument, "build_qes_matrix: J must be >= 1");
  QESMatrix m;
  m.J = J;
  m.entries = Eigen::MatrixXcd::Zero(J, J);
  for (int row = 0; row < J; ++row) {
    m.entries(row, row) = a + b * b + 2.0 * a * row;
    if (row + 1 < J) m.entries(row, row + 1) = Complex(0.0, 2.0 * b * (row + 1));
    if (row + 2 < J) m.entries(row, row + 2) = -double((row + 2) * (row + 1));
    if (row >= 1) m.entries(row, row - 1) = Complex(0.0, -2.0 * (J - row));
  }
  return m;
}

double recursion_residual(double a, double b, int J, Complex energy, std::span<const Complex> coeffs) {
  const auto c = [&](int n) { return (n >= 0 && n < J) ? coeffs[n] : Complex{}; };
  double worst = 0.0;
  for (int m = 0; m < J; ++m) {
    const Complex t0 = double((m + 2) * (m + 1)) * c(m + 2);
    const Complex t1 = Complex(0.0, -2.0 * b * (m + 1)) * c(m + 1);
    const Complex t2 = (energy - a - b * b - 2.0 * a * m) * c(m);
    const Complex t3 = Complex(0.0, 2.0 * (J - m)) * c(m - 1);
    const double scale = std::abs(t0) + std::abs(t1) + std::abs(t2) + std::abs(t3);
    if (scale > 0.0) worst = std::max(worst, std::abs(t0 + t1 + t2 + t3) / scale);
  }
  return worst;
}

QESSpectrum qes_spectrum(double a, double b, int J) {
  if (J < 1 || J > 64) throw Error(ErrorKind::InvalidArgument, "qes_spectrum: J must be in 1..64");
  using RealMatrix = Eigen::Matrix<HighReal, Eigen::Dynamic, Eigen::Dynamic>;
  using RealVector = Eigen::Matrix<HighReal, Eigen::Dynamic, 1>;

  // Similarity transform of QESMatrix by diag(i^{J-1-m}).
  RealMatrix reduced = RealMatrix::Zero(J, J);
  for (int m = 0; m < J; ++m) {
    reduced(m, m) = HighReal(a) + HighReal(b) * HighReal(b) + 2 * HighReal(a) * m;
    if (m + 1 < J) reduced(m, m + 1) = 2 * HighReal(b) * (m + 1);
    if (m + 2 < J) reduced(m, m + 2) = HighReal((m + 2) * (m + 1));
    if (m >= 1) reduced(m, m - 1) = HighReal(2 * (J - m));
  }
  Eigen::EigenSolver<RealMatrix> solver(reduced, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "qes_spectrum: eigenvalue solve failed");
  }
  std::vector<std::complex<HighReal>> energies(solver.eigenvalues().data(), solver.eigenvalues().data() + J);
  std::sort(energies.begin(), energies.end(), [](const auto& p, const auto& q) { return p.real() < q.real(); });

  QESSpectrum out;
  for (int rank = 0; rank < J; ++rank) {
    const Complex energy(static_cast<double>(energies[rank].real()), static_cast<double>(energies[rank].imag()));
    QESEigenfunction f;
    f.k = rank + 1;
    f.energy = energy;
    f.E = energy.real();
    f.a = a;
    f.b = b;
    f.k_criterion = a * a + 4.0 * b;

    if (energies[rank].imag() != 0) {
      out.complex_spectrum = true;
      if (energies[rank].imag() > 0) out.conjugate_pairs.emplace_back(energy, std::conj(energy));
      // No real eigenvector; fall back to the complex matrix in double.
      const QESMatrix m = build_qes_matrix(a, b, J);
      const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m.entries - energy * Eigen::MatrixXcd::Identity(J, J) +
                                                    1e-12 * Eigen::MatrixXcd::Identity(J, J));
      Eigen::VectorXcd v = Eigen::VectorXcd::Ones(J);
      for (int it = 0; it < 3; ++it) {
        v = lu.solve(v);
        v /= v.norm();
      }
      v /= v[J - 1];
      f.coeffs.assign(v.data(), v.data() + J);
      if (J > 1) {
        const PolynomialRoots roots = polynomial_zeros(f.coeffs);
        f.zeros = roots.roots;
        f.zero_residuals = roots.residuals;
      }
      f.recursion_residual = recursion_residual(a, b, J, energy, f.coeffs);
      out.levels.push_back(std::move(f));
      continue;
    }

    // Inverse iteration for the real null vector.
    const HighReal e = energies[rank].real();
    const HighReal shift = e + HighReal(1e-40) * (1 + abs(e));
    const Eigen::PartialPivLU<RealMatrix> lu(reduced - shift * RealMatrix::Identity(J, J));
    RealVector r = RealVector::Ones(J);
    for (int it = 0; it < 3; ++it) {
      r = lu.solve(r);
      r /= r.norm();
    }
    r /= r[J - 1];

    f.coeffs.resize(J);
    for (int n = 0; n < J; ++n) {
      // c_n = i^{J-1-n} r_n
      static const Complex powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      f.coeffs[n] = powers[(J - 1 - n) % 4] * static_cast<double>(r[n]);
    }
    f.recursion_residual = recursion_residual(a, b, J, energy, f.coeffs);

    if (J > 1) {
      const int degree = J - 1;
      RealMatrix companion = RealMatrix::Zero(degree, degree);
      for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1;
      for (int n = 0; n < degree; ++n) companion(n, degree - 1) = -r[n];
      Eigen::EigenSolver<RealMatrix> roots(companion, false);
      HighReal max_coeff = 0;
      for (int n = 0; n < J; ++n) max_coeff = std::max<HighReal>(max_coeff, abs(r[n]));
      std::vector<std::pair<Complex, double>> found;
      for (int i = 0; i < degree; ++i) {
        const std::complex<HighReal> y = roots.eigenvalues()[i];
        // P(i y) = i^{J-1} sum r_n y^n
        std::complex<HighReal> value(HighReal(0), HighReal(0));
        for (int n = J - 1; n >= 0; --n) value = value * y + std::complex<HighReal>(r[n]);
        found.emplace_back(Complex(-static_cast<double>(y.imag()), static_cast<double>(y.real())),
                           static_cast<double>(abs(value) / max_coeff));
      }
      std::sort(found.begin(), found.end(), [](const auto& p, const auto& q) {
        return p.first.real() != q.first.real() ? p.first.real() < q.first.real() : p.first.imag() < q.first.imag();
      });
      for (const auto& [z, res] : found) {
        f.zeros.push_back(z);
        f.zero_residuals.push_back(res);
      }
    }
    out.levels.push_back(std::move(f));
  }
  return out;
}

Complex QESEigenfunction::psi(Complex x) const {
  const Complex phi = -kI * x * x * x / 3.0 - 0.5 * a * x * x - kI * b * x;
  return polyval(coeffs, x).value * std::exp(phi);
}

namespace {

struct PsiParts {
  Complex psi;
  Complex d2psi;
};

PsiParts psi_and_second_derivative(const QESEigenfunction& f, Complex x) {
  Complex p{}, dp{}, d2p{};
  for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) {
    d2p = d2p * x + 2.0 * dp;
    dp = dp * x + p;
    p = p * x + *it;
  }
  const Complex phi = -kI * x * x * x / 3.0 - 0.5 * f.a * x * x - kI * f.b * x;
  const Complex dphi = -kI * x * x - f.a * x - kI * f.b;
  const Complex d2phi = -2.0 * kI * x - f.a;
  const Complex e = std::exp(phi);
  return {p * e, (d2p + 2.0 * dp * dphi + p * (d2phi + dphi * dphi)) * e};
}

}  // namespace

Complex QESEigenfunction::ode_residual(Complex x) const {
  const int J = static_cast<int>(coeffs.size());
  const PsiParts parts = psi_and_second_derivative(*this, x);
  const Complex v = evaluate_potential(QESQuartic{a, b, J}, x);
  return -parts.d2psi + v * parts.psi - E * parts.psi;
}

double QESEigenfunction::relative_ode_residual(Complex x) const {
  const int J = static_cast<int>(coeffs.size());
  const PsiParts parts = psi_and_second_derivative(*this, x);
  const Complex v = evaluate_potential(QESQuartic{a, b, J}, x);
  const Complex r = -parts.d2psi + v * parts.psi - E * parts.psi;
  const double scale = std::abs(parts.d2psi) + std::abs(v * parts.psi) + std::abs(E * parts.psi);
  return scale > 0.0 ? std::abs(r) / scale : std::abs(r);
}

ZeroClassification classify_zeros(std::span<const Complex> zeros, double axis_tol) {
  if (axis_tol <= 0.0) {
    double scale = 0.0;
    for (const Complex& z : zeros) scale = std::max(scale, std::abs(z));
    axis_tol = 1e-6 * std::max(scale, 1e-300);
  }
  ZeroClassification out;
  for (const Complex& z : zeros) {
    if (std::abs(z.real()) < axis_tol && z.imag() > 0.0) {
      out.irrelevant.push_back(z);
    } else {
      out.relevant.push_back(z);
    }
  }
  return out;
}

}  // namespace ptzeros
