#include "ptzeros/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ptzeros/qes_quartic.hpp"
#include "ptzeros/shooting.hpp"

namespace ptzeros {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorKind::Config, where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw Error(ErrorKind::Config, where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, where + "." + key + ": " + e.what());
  }
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

Monomial monomial_of(const RunConfig& config) { return Monomial{config.N}; }

ScalingMap scaling_for(const RunConfig& config, double energy) {
  switch (config.effective_scaling()) {
    case ScalingChoice::Cubic:
      return CubicScale{energy};
    case ScalingChoice::LargeN:
      return LargeN{config.N, energy};
    default:
      return TurningMagnitude{turning_points(config.potential(), energy).magnitude()};
  }
}

// Runs f(i) for i in [0, n) on up to `threads` workers; results land by index.
template <typename F>
void for_each_index(int n, int threads, F f) {
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  for (int start = 0; start < n; start += threads) {
    std::vector<std::future<void>> batch;
    for (int i = start; i < std::min(n, start + threads); ++i) batch.push_back(std::async(std::launch::async, f, i));
    for (auto& b : batch) b.get();
  }
}

bool same_verdict(const InterlaceReport& a, const InterlaceReport& b) {
  return a.pass == b.pass && a.gap_counts == b.gap_counts && a.count_mismatch == b.count_mismatch;
}

}  // namespace

std::string RunConfig::example_name() const {
  if (!name.empty()) return name;
  switch (problem) {
    case ProblemKind::Monomial:
      return "monomial-N" + std::to_string(N);
    case ProblemKind::QES:
      return "qes-a" + format_number(a) + "-b" + format_number(b) + "-J" + std::to_string(J);
    case ProblemKind::LargeN:
      return "large-n-N" + std::to_string(N);
  }
  return "run";
}

PotentialSpec RunConfig::potential() const {
  if (problem == ProblemKind::QES) return QESQuartic{a, b, J};
  return Monomial{N};
}

ScalingChoice RunConfig::effective_scaling() const {
  if (scaling != ScalingChoice::Auto) return scaling;
  switch (problem) {
    case ProblemKind::Monomial:
      return N == 3 ? ScalingChoice::Cubic : ScalingChoice::TurningMagnitude;
    case ProblemKind::QES:
      return ScalingChoice::TurningMagnitude;
    case ProblemKind::LargeN:
      return ScalingChoice::LargeN;
  }
  return ScalingChoice::TurningMagnitude;
}

void RunConfig::validate() const {
  try {
    ptzeros::validate(potential());
    tol.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, e.what());
  }
  if (problem == ProblemKind::QES && (J < 1 || J > 64)) throw Error(ErrorKind::Config, "qes: J must be in 1..64");
  if (problem == ProblemKind::QES && scaling == ScalingChoice::LargeN) {
    throw Error(ErrorKind::Config, "scaling 'large-n' needs a monomial potential");
  }
  if (k_max < 0 || (problem != ProblemKind::QES && k_max < 1)) throw Error(ErrorKind::Config, "k_max must be >= 1");
  if (grid.nx < 8 || grid.ny < 8) throw Error(ErrorKind::Config, "grid: nx, ny must be >= 8");
  if (!(grid.re_pad >= 0.0) || !(grid.im_pad >= 0.0)) throw Error(ErrorKind::Config, "grid: pads must be >= 0");
  if (fits.wkb_k_min < 1 || fits.wkb_k_max < fits.wkb_k_min + 4) {
    throw Error(ErrorKind::Config, "fits: need 1 <= wkb_k_min and wkb_k_max >= wkb_k_min + 4");
  }
  if (threads < 1) throw Error(ErrorKind::Config, "threads must be >= 1");
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text, nullptr, true, true);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("config: ") + e.what());
  }
  reject_unknown(root, {"name", "problem", "k_max", "tolerances", "grid", "fits", "scaling", "output_dir", "threads"},
                 "config");
  RunConfig c;
  read(root, "name", c.name, "config");
  if (!root.contains("problem")) throw Error(ErrorKind::Config, "config: missing 'problem'");
  const json& p = root.at("problem");
  std::string type;
  read(p, "type", type, "problem");
  if (type == "monomial" || type == "large-n-surrogate") {
    reject_unknown(p, {"type", "N"}, "problem");
    c.problem = type == "monomial" ? ProblemKind::Monomial : ProblemKind::LargeN;
    c.N = type == "monomial" ? 3 : 20;
    read(p, "N", c.N, "problem");
    c.k_max = type == "monomial" ? 6 : 16;
  } else if (type == "qes") {
    reject_unknown(p, {"type", "a", "b", "J"}, "problem");
    c.problem = ProblemKind::QES;
    read(p, "a", c.a, "problem");
    read(p, "b", c.b, "problem");
    read(p, "J", c.J, "problem");
    c.k_max = 0;
  } else {
    throw Error(ErrorKind::Config, "problem.type must be monomial, qes or large-n-surrogate");
  }
  read(root, "k_max", c.k_max, "config");
  if (root.contains("tolerances")) {
    const json& t = root.at("tolerances");
    reject_unknown(t, {"rel", "abs", "max_step", "min_step"}, "tolerances");
    read(t, "rel", c.tol.rel, "tolerances");
    read(t, "abs", c.tol.abs, "tolerances");
    read(t, "max_step", c.tol.max_step, "tolerances");
    read(t, "min_step", c.tol.min_step, "tolerances");
  }
  if (root.contains("grid")) {
    const json& g = root.at("grid");
    reject_unknown(g, {"nx", "ny", "re_pad", "im_pad"}, "grid");
    read(g, "nx", c.grid.nx, "grid");
    read(g, "ny", c.grid.ny, "grid");
    read(g, "re_pad", c.grid.re_pad, "grid");
    read(g, "im_pad", c.grid.im_pad, "grid");
  }
  if (root.contains("fits")) {
    const json& f = root.at("fits");
    reject_unknown(f, {"wkb_k_min", "wkb_k_max"}, "fits");
    read(f, "wkb_k_min", c.fits.wkb_k_min, "fits");
    read(f, "wkb_k_max", c.fits.wkb_k_max, "fits");
  }
  std::string scaling = "auto";
  read(root, "scaling", scaling, "config");
  if (scaling == "auto") c.scaling = ScalingChoice::Auto;
  else if (scaling == "cubic") c.scaling = ScalingChoice::Cubic;
  else if (scaling == "turning-magnitude") c.scaling = ScalingChoice::TurningMagnitude;
  else if (scaling == "large-n") c.scaling = ScalingChoice::LargeN;
  else throw Error(ErrorKind::Config, "scaling must be auto, cubic, turning-magnitude or large-n");
  read(root, "output_dir", c.output_dir, "config");
  read(root, "threads", c.threads, "config");
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<Complex> LevelResult::relevant_zeros() const {
  std::vector<Complex> out;
  for (std::size_t i = 0; i < zeros.size(); ++i)
    if (relevant[i]) out.push_back(zeros[i]);
  return out;
}

std::vector<Complex> LevelResult::relevant_scaled() const {
  std::vector<Complex> out;
  for (std::size_t i = 0; i < scaled.size(); ++i)
    if (relevant[i]) out.push_back(scaled[i]);
  return out;
}

GridRegion arch_region(const PotentialSpec& spec, double energy, const GridSettings& grid) {
  const StokesPath path = trace_stokes_line(spec, energy);
  double im_lo = std::min(path.x_plus.imag(), path.x_minus.imag());
  double im_hi = std::max(path.x_plus.imag(), path.x_minus.imag());
  for (const Complex& z : path.samples) {
    im_lo = std::min(im_lo, z.imag());
    im_hi = std::max(im_hi, z.imag());
  }
  const double re_lo = std::min(path.x_plus.real(), path.x_minus.real());
  const double re_hi = std::max(path.x_plus.real(), path.x_minus.real());
  const double re_pad = grid.re_pad * (re_hi - re_lo);
  const double im_pad = grid.im_pad * std::max(im_hi - im_lo, 0.1 * (re_hi - re_lo));
  GridRegion r{re_lo - re_pad, re_hi + re_pad, im_lo - im_pad, im_hi + im_pad, grid.nx, grid.ny};
  r.validate();
  return r;
}

std::vector<LevelResult> monomial_levels(const RunConfig& config) {
  const Monomial m = monomial_of(config);
  const Spectrum s = lowest_eigenvalues(m, config.k_max, config.tol);
  if (s.missed_level || static_cast<int>(s.levels.size()) != config.k_max) {
    throw Error(ErrorKind::NoConvergence, "shooting: found " + std::to_string(s.levels.size()) + " of " +
                                              std::to_string(config.k_max) + " levels");
  }
  std::vector<LevelResult> out;
  for (const Eigenpair& p : s.levels) {
    LevelResult l;
    l.k = p.k;
    l.energy = p.E;
    l.residual = p.residual;
    try {
      l.energy_wkb = wkb_eigenvalue(m, p.k);
    } catch (const Error&) {
      l.energy_wkb.reset();
    }
    l.scaling = scaling_for(config, p.E);
    out.push_back(std::move(l));
  }
  return out;
}

void attach_zeros(const RunConfig& config, std::vector<LevelResult>& levels) {
  const Monomial m = monomial_of(config);
  const PotentialSpec spec = m;
  for_each_index(static_cast<int>(levels.size()), config.threads, [&](int i) {
    LevelResult& l = levels[i];
    const GridRegion region = arch_region(spec, l.energy, config.grid);
    const WedgePair wedges = make_wedges(m.N, default_start_radius(m.N, l.energy));
    const ODEState anchor = normalized_matching_state(m, l.energy, wedges, config.tol);
    const ZeroSet zs = find_zeros(spec, l.energy, region, config.tol, anchor, l.k);
    const TurningPointSet tp = turning_points(spec, l.energy);
    const double re_lo = std::min(tp.x_minus.real(), tp.x_plus.real());
    const double re_hi = std::max(tp.x_minus.real(), tp.x_plus.real());
    for (std::size_t j = 0; j < zs.zeros.size(); ++j) {
      if (zs.zeros[j].real() <= re_lo || zs.zeros[j].real() >= re_hi) {
        ++l.outside_arch;
        continue;
      }
      l.zeros.push_back(zs.zeros[j]);
      l.zero_residuals.push_back(zs.newton_residuals[j]);
    }
    l.relevant.assign(l.zeros.size(), true);
    l.scaled = apply_scaling(l.scaling, l.zeros);
    l.candidates = zs.candidates;
    l.masked_rows = zs.masked_rows;
    l.max_shift_cells = zs.max_shift_cells;
  });
}

std::vector<LevelResult> qes_levels(const RunConfig& config) {
  const QESSpectrum s = qes_spectrum(config.a, config.b, config.J);
  const int count = config.k_max > 0 ? std::min(config.k_max, config.J) : config.J;
  std::vector<LevelResult> out;
  for (int i = 0; i < count; ++i) {
    const QESEigenfunction& f = s.levels[i];
    LevelResult l;
    l.k = f.k;
    l.energy = f.E;
    l.residual = f.recursion_residual;
    l.zeros = f.zeros;
    l.zero_residuals = f.zero_residuals;
    const ZeroClassification cls = classify_zeros(f.zeros);
    for (const Complex& z : l.zeros) {
      l.relevant.push_back(std::find(cls.irrelevant.begin(), cls.irrelevant.end(), z) == cls.irrelevant.end());
    }
    l.scaling = scaling_for(config, f.E);
    l.scaled = apply_scaling(l.scaling, l.zeros);
    out.push_back(std::move(l));
  }
  if (s.complex_spectrum) throw Error(ErrorKind::PTViolation, "qes: spectrum has complex-conjugate pairs");
  return out;
}

void analyse(RunReport& report) {
  auto& levels = report.levels;
  std::sort(levels.begin(), levels.end(), [](const LevelResult& x, const LevelResult& y) { return x.k < y.k; });

  std::vector<std::vector<Complex>> unscaled, scaled;
  std::vector<int> ks;
  std::vector<Complex> pooled_unscaled, pooled_scaled;
  for (const LevelResult& l : levels) {
    unscaled.push_back(l.relevant_zeros());
    scaled.push_back(l.relevant_scaled());
    ks.push_back(l.k);
    pooled_unscaled.insert(pooled_unscaled.end(), unscaled.back().begin(), unscaled.back().end());
    pooled_scaled.insert(pooled_scaled.end(), scaled.back().begin(), scaled.back().end());
  }

  report.interlace_pass = true;
  report.affine_invariant = true;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    if (levels[i + 1].k != levels[i].k + 1) continue;
    report.interlace_scaled.push_back(check_interlacing(scaled[i], scaled[i + 1], levels[i].k));
    report.interlace_unscaled.push_back(check_interlacing(unscaled[i], unscaled[i + 1], levels[i].k));
    report.interlace_pass = report.interlace_pass && report.interlace_scaled.back().pass;
    report.affine_invariant =
        report.affine_invariant && same_verdict(report.interlace_scaled.back(), report.interlace_unscaled.back());
  }

  if (levels.size() >= 2) {
    report.shift_unscaled = shift_metric(unscaled, ks);
    report.shift_scaled = shift_metric(scaled, ks);
  }
  if (pooled_unscaled.size() >= 10) {
    try {
      report.band_unscaled = band_metric(pooled_unscaled);
      report.band_scaled = band_metric(pooled_scaled);
    } catch (const Error& e) {
      report.warnings.push_back(std::string("band_metric: ") + e.what());
    }
  }

  const RunConfig& config = report.config;
  if (config.problem == ProblemKind::QES) return;

  const Monomial m = monomial_of(config);
  std::vector<std::pair<double, double>> wkb;
  for (int k = config.fits.wkb_k_min; k <= config.fits.wkb_k_max; ++k) wkb.emplace_back(k, wkb_eigenvalue(m, k));
  report.wkb_energy_fit = fit_power_law(wkb);
  if (config.fits.wkb_k_max >= 12) report.drift = turning_point_drift(m, config.fits.wkb_k_max, config.fits.wkb_k_min);

  std::vector<std::pair<double, double>> shooting;
  for (const LevelResult& l : levels)
    if (l.k >= 1) shooting.emplace_back(l.k, l.energy);
  if (shooting.size() >= 5) report.shooting_energy_fit = fit_power_law(shooting);

  if (config.problem != ProblemKind::Monomial) return;
  GapAnalysis g;
  std::vector<double> level_k;
  for (const LevelResult& l : levels) {
    if (l.zeros.empty()) continue;
    g.intercepts.push_back(arch_intercept(l.zeros));
    level_k.push_back(l.k);
  }
  for (std::size_t i = 1; i < g.intercepts.size(); ++i) {
    g.gaps.push_back(std::abs(g.intercepts[i] - g.intercepts[i - 1]));
    g.ks.push_back(0.5 * (level_k[i] + level_k[i - 1]));
  }
  if (g.gaps.size() >= 2) g.local_exponents = local_exponents(g.gaps, g.ks);
  if (g.local_exponents.size() >= 3) {
    std::vector<double> mid;
    for (std::size_t i = 0; i < g.local_exponents.size(); ++i) mid.push_back(0.5 * (g.ks[i] + g.ks[i + 1]));
    g.richardson = richardson_extrapolate(g.local_exponents, mid);
    g.in_asymptopia = !g.richardson->unstable && std::abs(g.richardson->value + 0.6) <= 0.05;
  }
  if (g.gaps.size() >= 5) g.divergence = divergence_check(g.gaps, g.ks);
  report.gap_analysis = std::move(g);
}

RunReport run_pipeline(const RunConfig& config) {
  config.validate();
  RunReport report;
  report.config = config;
  report.example = config.example_name();
  if (config.problem == ProblemKind::QES) {
    report.levels = qes_levels(config);
  } else {
    report.levels = monomial_levels(config);
    attach_zeros(config, report.levels);
    for (const LevelResult& l : report.levels) {
      if (static_cast<int>(l.zeros.size()) != l.k) {
        report.warnings.push_back("k=" + std::to_string(l.k) + ": found " + std::to_string(l.zeros.size()) +
                                  " arch zeros, expected " + std::to_string(l.k));
      }
      if (l.outside_arch > 0) {
        report.warnings.push_back("k=" + std::to_string(l.k) + ": dropped " + std::to_string(l.outside_arch) +
                                  " zeros beyond the turning points");
      }
    }
  }
  analyse(report);
  return report;
}

}  // namespace ptzeros
