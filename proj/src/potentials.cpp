#include "ptzeros/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ptzeros/polynomial.hpp"

namespace ptzeros {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Complex ipow(Complex z, int n) {
  Complex result{1.0, 0.0};
  while (n > 0) {
    if (n & 1) result *= z;
    z *= z;
    n >>= 1;
  }
  return result;
}

}  // namespace

void validate(const PotentialSpec& spec) {
  std::visit(Overloaded{
                 [](const Monomial& m) {
                   if (m.N < 2) throw Error(ErrorKind::InvalidArgument, "Monomial requires N >= 2");
                 },
                 [](const QESQuartic& q) {
                   if (q.J < 1) throw Error(ErrorKind::InvalidArgument, "QESQuartic requires J >= 1");
                   if (!(q.a > 0.0) || !std::isfinite(q.b)) {
                     throw Error(ErrorKind::InvalidArgument, "QESQuartic requires a > 0 and finite b");
                   }
                 },
             },
             spec);
}

Complex evaluate_potential(const PotentialSpec& spec, Complex x) {
  return std::visit(Overloaded{
                        [x](const Monomial& m) { return -ipow(kI * x, m.N); },
                        [x](const QESQuartic& q) {
                          const double a = q.a;
                          const double b = q.b;
                          // Horner in x for -x^4 + 2ia x^3 + (a^2-2b) x^2 + 2i(ab-J) x.
                          Complex v = -x + Complex(0.0, 2.0 * a);
                          v = v * x + (a * a - 2.0 * b);
                          v = v * x + Complex(0.0, 2.0 * (a * b - q.J));
                          return v * x;
                        },
                    },
                    spec);
}

Complex potential_derivative(const PotentialSpec& spec, Complex x) {
  return std::visit(Overloaded{
                        [x](const Monomial& m) { return -kI * double(m.N) * ipow(kI * x, m.N - 1); },
                        [x](const QESQuartic& q) {
                          const double a = q.a;
                          const double b = q.b;
                          Complex v = -4.0 * x + Complex(0.0, 6.0 * a);
                          v = v * x + 2.0 * (a * a - 2.0 * b);
                          return v * x + Complex(0.0, 2.0 * (a * b - q.J));
                        },
                    },
                    spec);
}

std::vector<Complex> potential_coefficients(const PotentialSpec& spec) {
  return std::visit(Overloaded{
                        [](const Monomial& m) {
                          std::vector<Complex> c(m.N + 1, Complex{});
                          c[m.N] = -ipow(kI, m.N);
                          return c;
                        },
                        [](const QESQuartic& q) {
                          return std::vector<Complex>{
                              Complex{}, Complex(0.0, 2.0 * (q.a * q.b - q.J)),
                              Complex(q.a * q.a - 2.0 * q.b), Complex(0.0, 2.0 * q.a), Complex(-1.0)};
                        },
                    },
                    spec);
}

std::string describe(const PotentialSpec& spec) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Monomial& m) { os << "monomial(N=" << m.N << ")"; },
                 [&](const QESQuartic& q) { os << "qes(a=" << q.a << ",b=" << q.b << ",J=" << q.J << ")"; },
             },
             spec);
  return os.str();
}

TurningPointSet turning_points(const PotentialSpec& spec, double energy,
                               const TurningPointOptions& options) {
  validate(spec);
  TurningPointSet out;
  out.energy = energy;

  if (const auto* m = std::get_if<Monomial>(&spec)) {
    if (!(energy > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "turning_points: Monomial requires E > 0");
    }
    const double radius = std::pow(energy, 1.0 / m->N);
    const double pi = std::numbers::pi;
    for (int k = 0; k < m->N; ++k) {
      out.all_roots.push_back(std::polar(radius, pi * (2 * k + 1) / m->N - pi / 2));
    }
    out.x_plus = std::polar(radius, -pi / 2 + pi / m->N);
    out.x_minus = std::polar(radius, -pi / 2 - pi / m->N);
    if (m->N == 2) {
      out.x_plus = Complex(radius, 0.0);
      out.x_minus = Complex(-radius, 0.0);
    }
  } else {
    auto coeffs = potential_coefficients(spec);
    coeffs[0] -= energy;
    out.all_roots = polynomial_zeros(coeffs).roots;

    std::vector<std::pair<Complex, Complex>> pairs;
    for (const Complex& r : out.all_roots) {
      if (!(r.real() > options.mirror_tol * (1.0 + std::abs(r)))) continue;
      const auto mirror = std::min_element(out.all_roots.begin(), out.all_roots.end(),
                                           [&](Complex p, Complex q) {
                                             return std::abs(p - pt_mirror(r)) < std::abs(q - pt_mirror(r));
                                           });
      if (std::abs(*mirror - pt_mirror(r)) <= options.mirror_tol * (1.0 + std::abs(r))) {
        pairs.emplace_back(*mirror, r);
      }
    }
    if (pairs.empty()) {
      throw Error(ErrorKind::DegeneratePair, "turning_points: no PT-mirror pair of quartic roots");
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& p, const auto& q) {
      return p.second.real() > q.second.real();
    });
    const std::size_t pick = options.choice == PairChoice::Outermost ? 0 : pairs.size() - 1;
    out.x_minus = pairs[pick].first;
    out.x_plus = pairs[pick].second;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (i != pick) out.other_pairs.push_back(pairs[i]);
    }
  }

  for (const Complex& r : out.all_roots) {
    if (std::abs(evaluate_potential(spec, r) - energy) > options.residual_tol * (1.0 + std::abs(energy))) {
      throw Error(ErrorKind::DegeneratePair, "turning_points: root residual exceeds tolerance");
    }
  }
  return out;
}

}  // namespace ptzeros
