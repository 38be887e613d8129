#include "ptzeros/zero_locator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ptzeros {

namespace {

const Complex kMissing(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());

bool changes_sign(double a, double b, double c, double d) {
  const bool pa = a >= 0, pb = b >= 0, pc = c >= 0, pd = d >= 0;
  return !(pa == pb && pb == pc && pc == pd);
}

// Real (u, v) in the unit square with A + B u + C v + D u v = 0.
bool bilinear_root(Complex A, Complex B, Complex C, Complex D, double& u, double& v) {
  constexpr double slack = 1e-9;
  const double q0 = (A * std::conj(B)).imag();
  const double q1 = (C * std::conj(B) + A * std::conj(D)).imag();
  const double q2 = (C * std::conj(D)).imag();
  double roots[2];
  int count = 0;
  const double scale = std::abs(q0) + std::abs(q1) + std::abs(q2);
  if (scale == 0.0) return false;
  if (std::abs(q2) <= 1e-14 * scale) {
    if (q1 == 0.0) return false;
    roots[count++] = -q0 / q1;
  } else {
    const double disc = q1 * q1 - 4.0 * q2 * q0;
    if (disc < 0.0) return false;
    const double sq = std::sqrt(disc);
    const double t = -0.5 * (q1 + std::copysign(sq, q1));
    if (t != 0.0) roots[count++] = t / q2;
    if (t != 0.0) roots[count++] = q0 / t;
    if (t == 0.0) roots[count++] = 0.0;
  }
  for (int r = 0; r < count; ++r) {
    const double vv = roots[r];
    if (vv < -slack || vv > 1.0 + slack) continue;
    const Complex den = B + D * vv;
    if (std::abs(den) == 0.0) continue;
    const double uu = (-(A + C * vv) / den).real();
    if (uu < -slack || uu > 1.0 + slack) continue;
    u = std::clamp(uu, 0.0, 1.0);
    v = std::clamp(vv, 0.0, 1.0);
    return true;
  }
  return false;
}

void sort_zeros(std::vector<Complex>& zeros, std::vector<double>& residuals) {
  std::vector<std::size_t> idx(zeros.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t p, std::size_t q) {
    return zeros[p].real() != zeros[q].real() ? zeros[p].real() < zeros[q].real()
                                              : zeros[p].imag() < zeros[q].imag();
  });
  std::vector<Complex> z;
  std::vector<double> r;
  for (std::size_t i : idx) {
    z.push_back(zeros[i]);
    r.push_back(residuals[i]);
  }
  zeros = std::move(z);
  residuals = std::move(r);
}

ZeroSet refine_candidates(const AnalyticFunction& f, const FieldSample& field, int k) {
  const GridRegion& region = field.region;
  const double cell = std::hypot(region.dx(), region.dy());
  ZeroSet out;
  out.k = k;
  out.masked_rows = field.masked_rows();
  const std::vector<Complex> candidates = locate_zeros(field);
  out.candidates = static_cast<int>(candidates.size());
  for (const Complex& c : candidates) {
    RefinedZero r;
    try {
      r = refine_zero(f, c);
    } catch (const Error&) {
      continue;
    }
    if (!region.contains(r.z)) continue;
    const bool duplicate = std::any_of(out.zeros.begin(), out.zeros.end(),
                                       [&](Complex z) { return std::abs(z - r.z) < 0.25 * cell; });
    if (duplicate) continue;
    out.max_shift_cells = std::max(out.max_shift_cells, std::abs(r.z - c) / cell);
    out.zeros.push_back(r.z);
    out.newton_residuals.push_back(r.residual);
  }
  sort_zeros(out.zeros, out.newton_residuals);
  return out;
}

}  // namespace

void GridRegion::validate() const {
  if (!(re_min < re_max) || !(im_min < im_max)) throw Error(ErrorKind::InvalidArgument, "GridRegion: empty extent");
  if (nx < 8 || ny < 8) throw Error(ErrorKind::InvalidArgument, "GridRegion: nx, ny must be >= 8");
}

int FieldSample::masked_rows() const {
  return static_cast<int>(std::count(row_masked.begin(), row_masked.end(), true));
}

FieldSample evaluate_on_grid(const PotentialSpec& spec, double energy, const GridRegion& region,
                             const Tolerances& tol, const ODEState& anchor) {
  region.validate();
  tol.validate();
  const int nx = region.nx;
  const int ny = region.ny;
  FieldSample field;
  field.region = region;
  field.psi.assign(static_cast<std::size_t>(nx) * ny, kMissing);
  field.dpsi.assign(static_cast<std::size_t>(nx) * ny, kMissing);
  field.row_masked.assign(ny, false);

  const double spine = anchor.x.real();
  // First row at or above the anchor.
  int j_up = 0;
  while (j_up < ny && region.point(0, j_up).imag() < anchor.x.imag()) ++j_up;

  const auto sweep_row = [&](int j, const ODEState& on_spine) {
    try {
      ODEState s = on_spine;
      for (int i = 0; i < nx; ++i) {
        if (region.point(i, j).real() < spine) continue;
        s = propagate(spec, energy, s, region.point(i, j), tol);
        field.psi[j * nx + i] = s.psi;
        field.dpsi[j * nx + i] = s.dpsi;
      }
      s = on_spine;
      for (int i = nx - 1; i >= 0; --i) {
        if (region.point(i, j).real() >= spine) continue;
        s = propagate(spec, energy, s, region.point(i, j), tol);
        field.psi[j * nx + i] = s.psi;
        field.dpsi[j * nx + i] = s.dpsi;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Overflow && e.kind() != ErrorKind::StepUnderflow) throw;
      field.row_masked[j] = true;
      for (int i = 0; i < nx; ++i) field.psi[j * nx + i] = field.dpsi[j * nx + i] = kMissing;
    }
  };

  const auto walk_spine = [&](int j_begin, int j_end, int step) {
    ODEState s = anchor;
    for (int j = j_begin; j != j_end; j += step) {
      try {
        s = propagate(spec, energy, s, Complex(spine, region.point(0, j).imag()), tol);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Overflow && e.kind() != ErrorKind::StepUnderflow) throw;
        for (int jj = j; jj != j_end; jj += step) field.row_masked[jj] = true;
        return;
      }
      sweep_row(j, s);
    }
  };
  walk_spine(j_up, ny, 1);
  walk_spine(j_up - 1, -1, -1);
  return field;
}

FieldSample sample_function(const GridRegion& region, const AnalyticFunction& f) {
  region.validate();
  FieldSample field;
  field.region = region;
  field.row_masked.assign(region.ny, false);
  for (int j = 0; j < region.ny; ++j) {
    for (int i = 0; i < region.nx; ++i) {
      const auto [v, d] = f(region.point(i, j));
      field.psi.push_back(v);
      field.dpsi.push_back(d);
    }
  }
  return field;
}

std::vector<Complex> locate_zeros(const FieldSample& field) {
  const GridRegion& region = field.region;
  std::vector<Complex> out;
  for (int j = 0; j + 1 < region.ny; ++j) {
    if (field.row_masked[j] || field.row_masked[j + 1]) continue;
    for (int i = 0; i + 1 < region.nx; ++i) {
      const Complex f00 = field.value(i, j);
      const Complex f10 = field.value(i + 1, j);
      const Complex f01 = field.value(i, j + 1);
      const Complex f11 = field.value(i + 1, j + 1);
      if (!is_finite(f00) || !is_finite(f10) || !is_finite(f01) || !is_finite(f11)) continue;
      if (!changes_sign(f00.real(), f10.real(), f01.real(), f11.real())) continue;
      if (!changes_sign(f00.imag(), f10.imag(), f01.imag(), f11.imag())) continue;
      double u = 0.0, v = 0.0;
      if (!bilinear_root(f00, f10 - f00, f01 - f00, f11 - f10 - f01 + f00, u, v)) continue;
      const Complex corner = region.point(i, j);
      out.emplace_back(corner.real() + u * region.dx(), corner.imag() + v * region.dy());
    }
  }
  return out;
}

RefinedZero refine_zero(const AnalyticFunction& f, Complex x0, double tol, int max_iter) {
  Complex z = x0;
  for (int it = 1; it <= max_iter; ++it) {
    const auto [v, d] = f(z);
    if (v == Complex{}) return {z, 0.0, it};
    if (std::abs(d) < 1e-14) throw Error(ErrorKind::DerivativeVanishes, "refine_zero: |psi'| < 1e-14");
    const Complex step = v / d;
    z -= step;
    if (!is_finite(z)) throw Error(ErrorKind::NoConvergence, "refine_zero: iterate diverged");
    if (std::abs(step) <= tol * std::max(1.0, std::abs(z))) return {z, std::abs(f(z).first), it};
  }
  throw Error(ErrorKind::NoConvergence, "refine_zero: no convergence after max iterations");
}

AnalyticFunction field_evaluator(const PotentialSpec& spec, double energy, const FieldSample& field,
                                 const Tolerances& tol) {
  return [&spec, energy, &field, tol](Complex x) {
    const GridRegion& r = field.region;
    int best_i = -1, best_j = -1;
    double best = std::numeric_limits<double>::infinity();
    const int ci = std::clamp(static_cast<int>(std::lround((x.real() - r.re_min) / r.dx())), 0, r.nx - 1);
    const int cj = std::clamp(static_cast<int>(std::lround((x.imag() - r.im_min) / r.dy())), 0, r.ny - 1);
    for (int radius = 0; radius < std::max(r.nx, r.ny) && best_i < 0; ++radius) {
      for (int j = std::max(0, cj - radius); j <= std::min(r.ny - 1, cj + radius); ++j) {
        if (field.row_masked[j]) continue;
        for (int i = std::max(0, ci - radius); i <= std::min(r.nx - 1, ci + radius); ++i) {
          if (!is_finite(field.value(i, j))) continue;
          const double d = std::abs(r.point(i, j) - x);
          if (d < best) {
            best = d;
            best_i = i;
            best_j = j;
          }
        }
      }
    }
    if (best_i < 0) throw Error(ErrorKind::InvalidArgument, "field_evaluator: no unmasked grid node");
    const ODEState node{r.point(best_i, best_j), field.value(best_i, best_j), field.derivative(best_i, best_j)};
    const ODEState s = propagate(spec, energy, node, x, tol);
    return std::make_pair(s.psi, s.dpsi);
  };
}

RefinedZero refine_zero(const PotentialSpec& spec, double energy, const FieldSample& field, Complex x0,
                        const Tolerances& tol) {
  return refine_zero(field_evaluator(spec, energy, field, tol), x0);
}

ZeroSet find_zeros(const PotentialSpec& spec, double energy, const GridRegion& region, const Tolerances& tol,
                   const ODEState& anchor, int k) {
  const FieldSample field = evaluate_on_grid(spec, energy, region, tol, anchor);
  return refine_candidates(field_evaluator(spec, energy, field, tol), field, k);
}

ZeroSet find_zeros(const AnalyticFunction& f, const GridRegion& region) {
  return refine_candidates(f, sample_function(region, f), 0);
}

}  // namespace ptzeros
