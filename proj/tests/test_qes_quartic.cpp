#include <doctest.h>

#include <cmath>
#include <random>

#include "ptzeros/qes_quartic.hpp"

using namespace ptzeros;

TEST_SUITE("qes_quartic") {
  TEST_CASE("matrix entries") {
    const QESMatrix m1 = build_qes_matrix(10, 2, 1);
    REQUIRE(m1.entries.rows() == 1);
    CHECK(std::abs(m1.entries(0, 0) - Complex(14)) < 1e-14);

    const QESMatrix m2 = build_qes_matrix(10, 2, 2);
    CHECK(std::abs(m2.entries(0, 0) - Complex(14)) < 1e-14);
    CHECK(std::abs(m2.entries(0, 1) - Complex(0, 4)) < 1e-14);
    CHECK(std::abs(m2.entries(1, 0) - Complex(0, -2)) < 1e-14);
    CHECK(std::abs(m2.entries(1, 1) - Complex(34)) < 1e-14);

    CHECK(std::abs(build_qes_matrix(3.0, -1.0, 3).entries(1, 0) - Complex(0, -4)) < 1e-14);
  }

  TEST_CASE("trace equals the sum of energies") {
    const int J = 9;
    const QESMatrix m = build_qes_matrix(10, 2, J);
    const QESSpectrum s = qes_spectrum(10, 2, J);
    double sum = 0.0;
    for (const auto& l : s.levels) sum += l.E;
    CHECK(std::abs(m.entries.trace() - Complex(sum)) < 1e-9 * std::abs(sum));
  }

  TEST_CASE("J = 1 and J = 2 closed forms") {
    const QESSpectrum s1 = qes_spectrum(10, 2, 1);
    REQUIRE(s1.levels.size() == 1);
    CHECK(std::abs(s1.levels[0].E - 14.0) < 1e-12);
    CHECK(s1.levels[0].coeffs.size() == 1);
    CHECK(s1.levels[0].zeros.empty());

    const QESSpectrum s2 = qes_spectrum(10, 2, 2);
    REQUIRE(s2.levels.size() == 2);
    CHECK(std::abs(s2.levels[0].E - (24.0 - std::sqrt(108.0))) < 1e-10);
    CHECK(std::abs(s2.levels[1].E - (24.0 + std::sqrt(108.0))) < 1e-10);
  }

  TEST_CASE("J = 2 reality boundary follows a^2 + 4b") {
    const double a = 2.0;
    for (double b : {-2.0, -1.1, -0.9, 0.0, 1.0}) {
      const QESSpectrum s = qes_spectrum(a, b, 2);
      CHECK(s.complex_spectrum == (a * a + 4 * b < 0));
    }
  }

  TEST_CASE("J = 21: real spectrum, residuals, count law") {
    const int J = 21;
    const QESSpectrum s = qes_spectrum(10, 2, J);
    REQUIRE(s.levels.size() == static_cast<std::size_t>(J));
    CHECK_FALSE(s.complex_spectrum);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < J; ++i) {
      const QESEigenfunction& f = s.levels[i];
      CHECK(f.k == i + 1);
      if (i > 0) CHECK(f.E > s.levels[i - 1].E);
      CHECK(f.recursion_residual < 1e-9);
      REQUIRE(f.zeros.size() == static_cast<std::size_t>(J - 1));
      const ZeroClassification cls = classify_zeros(f.zeros);
      CHECK(cls.irrelevant.size() == static_cast<std::size_t>(J - f.k));
      CHECK(cls.relevant.size() + cls.irrelevant.size() == static_cast<std::size_t>(J - 1));
      for (double r : f.zero_residuals) CHECK(r < 1e-9);
      for (int p = 0; p < 50; ++p) CHECK(f.relative_ode_residual(Complex(u(rng), u(rng))) < 1e-6);
    }
  }

  TEST_CASE("QES zeros pair under PT reflection") {
    const QESSpectrum s = qes_spectrum(10, 2, 12);
    for (const auto& f : s.levels) {
      for (const Complex& z : f.zeros) {
        double best = 1e300;
        for (const Complex& w : f.zeros) best = std::min(best, std::abs(w - pt_mirror(z)));
        CHECK(best < 1e-8 * (1.0 + std::abs(z)));
      }
    }
  }

  TEST_CASE("classification examples") {
    const std::vector<Complex> zs{Complex(1e-12, 5.0), Complex(1.0, -0.5)};
    const ZeroClassification c = classify_zeros(zs);
    REQUIRE(c.irrelevant.size() == 1);
    CHECK(c.irrelevant[0] == zs[0]);
    REQUIRE(c.relevant.size() == 1);
    CHECK(c.relevant[0] == zs[1]);
  }

  TEST_CASE("recursion residual detects a wrong energy") {
    const QESSpectrum s = qes_spectrum(10, 2, 4);
    const auto& f = s.levels[1];
    CHECK(recursion_residual(10, 2, 4, f.energy, f.coeffs) < 1e-9);
    CHECK(recursion_residual(10, 2, 4, f.energy + 0.5, f.coeffs) > 1e-3);
  }

  TEST_CASE("J out of range") {
    CHECK_THROWS_AS(qes_spectrum(10, 2, 0), Error);
    CHECK_THROWS_AS(build_qes_matrix(10, 2, 0), Error);
  }
}
