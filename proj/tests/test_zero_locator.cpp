#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ptzeros/pipeline.hpp"
#include "ptzeros/shooting.hpp"
#include "ptzeros/zero_locator.hpp"

using namespace ptzeros;

namespace {

constexpr double kPi = std::numbers::pi;

std::pair<Complex, Complex> sine(Complex z) { return {std::sin(kPi * z), kPi * std::cos(kPi * z)}; }
std::pair<Complex, Complex> quadratic(Complex z) { return {z * z + 1.0, 2.0 * z}; }

struct Ix3Level {
  double E;
  ODEState anchor;
  GridRegion region;
};

Ix3Level ix3_level(int k) {
  const Monomial m{3};
  const double E = lowest_eigenvalues(m, k + 1, Tolerances{}).levels[k].E;
  const WedgePair w = make_wedges(3, default_start_radius(3, E));
  return {E, normalized_matching_state(m, E, w, Tolerances{}), arch_region(m, E, GridSettings{})};
}

}  // namespace

TEST_SUITE("zero_locator") {
  TEST_CASE("sin(pi z) candidates") {
    const GridRegion r{-2.5, 2.5, -2.5, 2.5, 100, 100};
    const auto c = locate_zeros(sample_function(r, sine));
    REQUIRE(c.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(c[i] - Complex(i - 2)) < r.dx());
  }

  TEST_CASE("z^2 + 1 candidates") {
    const GridRegion r{-2.0, 2.0, -2.0, 2.0, 40, 40};
    const ZeroSet zs = find_zeros(quadratic, r);
    REQUIRE(zs.zeros.size() == 2);
    CHECK(std::abs(zs.zeros[0] - Complex(0, -1)) < 1e-12);
    CHECK(std::abs(zs.zeros[1] - Complex(0, 1)) < 1e-12);
  }

  TEST_CASE("Newton refinement") {
    CHECK(std::abs(refine_zero(sine, Complex(0.9, 0.1)).z - 1.0) < 1e-12);
    CHECK(std::abs(refine_zero(quadratic, Complex(0.1, 0.9)).z - kI) < 1e-12);
    const auto flat = [](Complex) { return std::make_pair(Complex(1.0), Complex(0.0)); };
    CHECK_THROWS_AS(refine_zero(flat, 0.0), Error);
  }

  TEST_CASE("grid field matches the continued Gaussian") {
    const GridRegion r{-2.0, 2.0, -0.5, 0.5, 33, 9};
    const FieldSample f = evaluate_on_grid(Monomial{2}, 1.0, r, Tolerances{}, ODEState{0.0, 1.0, 0.0});
    CHECK(f.masked_rows() == 0);
    for (int j = 0; j < r.ny; ++j) {
      for (int i = 0; i < r.nx; ++i) {
        const Complex x = r.point(i, j);
        const Complex want = std::exp(-0.5 * x * x);
        CHECK(std::abs(f.value(i, j) - want) < 1e-6 * std::abs(want));
      }
    }
  }

  TEST_CASE("grid value is contour independent") {
    const Monomial m{3};
    const Ix3Level l = ix3_level(2);
    const FieldSample f = evaluate_on_grid(m, l.E, l.region, Tolerances{}, l.anchor);
    const int i = l.region.nx / 5, j = l.region.ny - 3;
    const ODEState direct = propagate(m, l.E, l.anchor, l.region.point(i, j), Tolerances{});
    CHECK(std::abs(direct.psi - f.value(i, j)) < 10.0 * Tolerances{}.rel * (std::abs(direct.psi) + std::abs(l.anchor.psi)));
  }

  TEST_CASE("ix^3: k zeros in the arch region, PT paired") {
    const Monomial m{3};
    for (int k = 0; k <= 5; ++k) {
      const Ix3Level l = ix3_level(k);
      const ZeroSet zs = find_zeros(m, l.E, l.region, Tolerances{}, l.anchor, k);
      CHECK(zs.masked_rows == 0);
      REQUIRE(zs.zeros.size() == static_cast<std::size_t>(k));
      CHECK(zs.candidates == k);
      CHECK(zs.max_shift_cells < 0.5);
      for (const Complex& z : zs.zeros) {
        double best = 1e300;
        for (const Complex& w : zs.zeros) best = std::min(best, std::abs(w - pt_mirror(z)));
        CHECK(best < 1e-8);
      }
    }
  }

  TEST_CASE("refined zeros do not depend on the grid spacing") {
    const Monomial m{3};
    const Ix3Level l = ix3_level(4);
    GridRegion fine = l.region;
    fine.nx = 2 * l.region.nx - 1;
    fine.ny = 2 * l.region.ny - 1;
    const ZeroSet a = find_zeros(m, l.E, l.region, Tolerances{}, l.anchor, 4);
    const ZeroSet b = find_zeros(m, l.E, fine, Tolerances{}, l.anchor, 4);
    REQUIRE(a.zeros.size() == b.zeros.size());
    for (std::size_t i = 0; i < a.zeros.size(); ++i) CHECK(std::abs(a.zeros[i] - b.zeros[i]) < 1e-8);
  }

  TEST_CASE("region validation") {
    GridRegion r{1.0, -1.0, 0.0, 1.0, 20, 20};
    CHECK_THROWS_AS(r.validate(), Error);
    r = GridRegion{-1, 1, -1, 1, 4, 20};
    CHECK_THROWS_AS(r.validate(), Error);
  }
}
