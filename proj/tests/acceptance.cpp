// Acceptance run: one PASS/FAIL line per criterion, tolerances as pinned.
// Exit status: 0 all pass, 2 only the interlacing conjecture (7) failed,
// 1 any correctness criterion failed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oscillator_oracle.hpp"
#include "ptzeros/pipeline.hpp"
#include "ptzeros/qes_quartic.hpp"
#include "ptzeros/report_io.hpp"
#include "ptzeros/shooting.hpp"
#include "ptzeros/wkb.hpp"

using namespace ptzeros;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunConfig ix3_config() { return parse_config(R"({"problem": {"type": "monomial", "N": 3}, "k_max": 6})"); }
RunConfig qes_config() { return parse_config(R"({"problem": {"type": "qes", "a": 10, "b": 2, "J": 21}})"); }
RunConfig large_n_config() {
  return parse_config(R"({"problem": {"type": "large-n-surrogate", "N": 20}, "k_max": 16})");
}

struct Runs {
  RunReport ix3, qes, large_n;
};

const Runs& runs() {
  static const Runs r{run_pipeline(ix3_config()), run_pipeline(qes_config()), run_pipeline(large_n_config())};
  return r;
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const Spectrum s = find_eigenvalues(Monomial{2}, 10.0, make_wedges(2, default_start_radius(2, 10.0)), Tolerances{});
  double e_err = s.levels.size() == 5 ? 0.0 : INFINITY;
  for (std::size_t k = 0; k < s.levels.size() && k < 5; ++k) e_err = std::max(e_err, std::abs(s.levels[k].E - (2.0 * k + 1)));
  double a_err = 0.0;
  for (double E : {1.0, 3.0, 5.0, 7.0, 9.0, 2.5}) {
    a_err = std::max(a_err, std::abs(action_integral(Monomial{2}, E).value - std::numbers::pi * E / 2));
  }
  const double t = seconds_since(t0);
  return {s.levels.size() == 5 && e_err < 1e-8 && a_err < 1e-10 && t < 5.0,
          "levels=" + std::to_string(s.levels.size()) + " max|E_k-(2k+1)|=" + fmt("%.2e", e_err) + " (tol 1e-8)" +
              " max|S-piE/2|=" + fmt("%.2e", a_err) + " (tol 1e-10) time=" + fmt("%.2f", t) + "s (limit 5s)"};
}

Outcome criterion2() {
  const QESSpectrum s1 = qes_spectrum(10, 2, 1);
  const QESSpectrum s2 = qes_spectrum(10, 2, 2);
  const double e1 = std::abs(s1.levels[0].E - 14.0);
  const double e2 = std::max(std::abs(s2.levels[0].E - (24.0 - std::sqrt(108.0))),
                             std::abs(s2.levels[1].E - (24.0 + std::sqrt(108.0))));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  int functions = 0;
  for (int J : {1, 2, 3, 5, 8, 13, 21}) {
    for (const QESEigenfunction& f : qes_spectrum(10, 2, J).levels) {
      ++functions;
      for (int i = 0; i < 50; ++i) worst = std::max(worst, f.relative_ode_residual(Complex(u(rng), u(rng))));
    }
  }
  return {e1 < 1e-12 && e2 < 1e-10 && worst < 1e-6,
          "|E(J=1)-14|=" + fmt("%.2e", e1) + " (tol 1e-12) J=2 err=" + fmt("%.2e", e2) + " (tol 1e-10) max relative ODE residual=" +
              fmt("%.2e", worst) + " over " + std::to_string(functions) + " eigenfunctions x 50 points (tol 1e-6)"};
}

Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  const int J = 21;
  const QESSpectrum s = qes_spectrum(10, 2, J);
  int good = 0;
  std::string counts;
  for (const QESEigenfunction& f : s.levels) {
    const int irrelevant = static_cast<int>(classify_zeros(f.zeros).irrelevant.size());
    if (irrelevant == J - f.k) ++good;
    counts += (counts.empty() ? "" : ",") + std::to_string(irrelevant);
  }
  const double t = seconds_since(t0);
  return {good == J && static_cast<int>(s.levels.size()) == J && t < 10.0,
          std::to_string(good) + "/21 levels with J-k irrelevant zeros [" + counts + "] time=" + fmt("%.2f", t) +
              "s (limit 10s)"};
}

Outcome criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const Spectrum s = lowest_eigenvalues(Monomial{3}, 6, Tolerances{});
  const std::vector<double> oracle = oracle::ix3_levels(200, 6);
  double rel = s.levels.size() == 6 ? 0.0 : INFINITY;
  double wkb = 0.0;
  for (std::size_t k = 0; k < s.levels.size() && k < 6; ++k) {
    rel = std::max(rel, std::abs(s.levels[k].E - oracle[k]) / oracle[k]);
    if (k >= 3) wkb = std::max(wkb, std::abs(wkb_eigenvalue(Monomial{3}, static_cast<int>(k)) - s.levels[k].E) / s.levels[k].E);
  }
  const double t = seconds_since(t0);
  return {rel < 1e-6 && wkb < 0.02 && t < 60.0,
          "max rel |E_shoot-E_oracle|=" + fmt("%.2e", rel) + " (tol 1e-6) max WKB rel err k>=3=" + fmt("%.4f", wkb) +
              " (tol 0.02) E_0=" + fmt("%.12f", s.levels.empty() ? NAN : s.levels[0].E) + " time=" + fmt("%.2f", t) +
              "s (limit 60s)"};
}

Outcome criterion5() {
  std::vector<std::pair<double, double>> pts, shifted;
  for (int k = 10; k <= 40; ++k) {
    const double e = wkb_eigenvalue(Monomial{3}, k);
    pts.emplace_back(k, e);
    shifted.emplace_back(k + 0.5, e);
  }
  const PowerLawFit f = fit_power_law(pts);
  const PowerLawFit g = fit_power_law(shifted);
  return {std::abs(f.p - 1.2) <= 0.010,
          "p=" + fmt("%.6f", f.p) + " C=" + fmt("%.6f", f.C) + " (want 1.200 +- 0.010); diagnostic: same levels against k+1/2 give p=" +
              fmt("%.6f", g.p)};
}

Outcome criterion6() {
  const DriftResult d = turning_point_drift(Monomial{3}, 40, 10);
  const RunReport& r = runs().ix3;
  const bool drift_ok = std::abs(d.drift.p + 0.6) <= 0.03;
  const bool mag_ok = std::abs(d.magnitude.p - 0.4) <= 0.02;
  std::string gap = "no gap analysis";
  bool gap_ok = false;
  if (r.gap_analysis && r.gap_analysis->richardson) {
    const GapAnalysis& g = *r.gap_analysis;
    gap_ok = true;  // within tolerance, or reported as out-of-asymptopia with the value
    gap = std::string(g.in_asymptopia ? "in-asymptopia" : "out-of-asymptopia") + " Richardson exponent=" +
          fmt("%.4f", g.richardson->value) + (g.richardson->unstable ? " (unstable table)" : "") + " from " +
          std::to_string(g.gaps.size()) + " gaps, last local exponent=" + fmt("%.4f", g.local_exponents.back());
  }
  return {drift_ok && mag_ok && gap_ok, "drift p=" + fmt("%.4f", d.drift.p) + " (want -0.60 +- 0.03) |x_TP| p=" +
                                            fmt("%.4f", d.magnitude.p) + " (want 0.40 +- 0.02); Im-axis gaps k<=6: " + gap};
}

std::string pairs_summary(const RunReport& r, bool& ok, std::size_t expected) {
  int pass = 0;
  for (const InterlaceReport& i : r.interlace_scaled) pass += i.pass ? 1 : 0;
  ok = ok && r.interlace_pass && r.interlace_scaled.size() == expected;
  return r.example + " " + std::to_string(pass) + "/" + std::to_string(r.interlace_scaled.size());
}

Outcome criterion7() {
  bool ok = true;
  const std::string a = pairs_summary(runs().ix3, ok, 5);
  const std::string b = pairs_summary(runs().qes, ok, 20);
  const std::string c = pairs_summary(runs().large_n, ok, 15);
  return {ok, "(a) " + a + " (b) " + b + " (c) " + c + " consecutive pairs interlace in the scaled plane"};
}

Outcome criterion8() {
  const auto ratio = [](const RunReport& r) {
    return r.band_scaled && r.band_unscaled ? r.band_scaled->band_width / r.band_unscaled->band_width : INFINITY;
  };
  const double a = ratio(runs().ix3), b = ratio(runs().qes);
  return {a < 0.5 && b < 0.5, "band_width scaled/unscaled: ix3=" + fmt("%.4f", a) + " qes=" + fmt("%.4f", b) + " (want < 0.5)"};
}

double pt_pairing_error(const RunReport& r) {
  double worst = 0.0;
  for (const LevelResult& l : r.levels) {
    for (const Complex& z : l.zeros) {
      double best = INFINITY;
      for (const Complex& w : l.zeros) best = std::min(best, std::abs(w - pt_mirror(z)));
      worst = std::max(worst, best);
    }
  }
  return worst;
}

std::map<std::string, std::string> emitted(const std::vector<RunReport>& reports, const fs::path& dir) {
  fs::remove_all(dir);
  std::map<std::string, std::string> out;
  for (const std::string& f : emit_outputs(reports, dir.string())) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out[fs::path(f).filename().string()] = ss.str();
  }
  return out;
}

Outcome criterion9(const fs::path& scratch) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  double pt_v = 0.0;
  for (const PotentialSpec& spec : {PotentialSpec{Monomial{2}}, PotentialSpec{Monomial{3}}, PotentialSpec{Monomial{20}},
                                    PotentialSpec{QESQuartic{10, 2, 21}}}) {
    for (int i = 0; i < 500; ++i) {
      const Complex x(u(rng), u(rng));
      const Complex v = evaluate_potential(spec, x);
      pt_v = std::max(pt_v, std::abs(evaluate_potential(spec, pt_mirror(x)) - std::conj(v)) / (1.0 + std::abs(v)));
    }
  }
  const double pairing = std::max({pt_pairing_error(runs().ix3), pt_pairing_error(runs().qes), pt_pairing_error(runs().large_n)});

  double w_ratio = 0.0;
  for (int N : {2, 3, 4, 20}) {
    const WedgePair w = make_wedges(N, default_start_radius(N, 30.0));
    for (double E = 0.5; E <= 30.0; E += 1.7) {
      const Mismatch m = mismatch(Monomial{N}, E, w, Tolerances{});
      w_ratio = std::max(w_ratio, std::abs(m.imag) / (std::abs(m.value) + 1.0));
    }
  }

  const Tolerances tol;
  double path = 0.0;
  for (const PotentialSpec& spec : {PotentialSpec{Monomial{3}}, PotentialSpec{QESQuartic{10, 2, 4}}}) {
    const ODEState init{0.0, 1.0, Complex(0.2, 0.1)};
    const ODEState a = integrate_schrodinger(spec, 2.0, Contour({0.0, 1.0}), init, tol).back();
    const ODEState b = integrate_schrodinger(spec, 2.0, Contour({0.0, Complex(0, 0.5), 1.0}), init, tol).back();
    path = std::max(path, std::abs(a.psi - b.psi) / (tol.rel * (std::abs(a.psi) + std::abs(a.dpsi))));
  }

  std::vector<RunConfig> configs{ix3_config(), qes_config(), large_n_config()};
  std::vector<RunReport> first, second;
  for (const RunConfig& c : configs) first.push_back(run_pipeline(c));
  for (RunConfig c : configs) {
    c.threads = 2;
    second.push_back(run_pipeline(c));
  }
  const auto f1 = emitted(first, scratch / "run1");
  const auto f2 = emitted(second, scratch / "run2");
  const bool identical = !f1.empty() && f1 == f2;

  const bool ok = pt_v < 1e-13 && pairing < 1e-8 && w_ratio < 1e-6 && path < 10.0 && identical;
  return {ok, "PT(V) err=" + fmt("%.1e", pt_v) + " zero pairing=" + fmt("%.1e", pairing) + " (tol 1e-8) max|Im W|/(|W|+1)=" +
                  fmt("%.1e", w_ratio) + " (tol 1e-6) path diff/tol=" + fmt("%.2f", path) + " (limit 10) rerun " +
                  std::to_string(f1.size()) + " files " + (identical ? "byte-identical" : "DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
  fs::path scratch = fs::temp_directory_path() / "ptzeros_acceptance";
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--scratch") scratch = argv[i + 1];
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"harmonic-oscillator exactness", criterion1},
      {"QES closed forms and ODE residual", criterion2},
      {"branch-cut count law", criterion3},
      {"ix^3 spectrum vs oscillator-basis oracle", criterion4},
      {"WKB growth exponent", criterion5},
      {"turning-point drift exponent", criterion6},
      {"interlacing (conjecture suite)", criterion7},
      {"band narrowing", criterion8},
      {"property suites", [&] { return criterion9(scratch); }},
  };
  bool correctness_ok = true;
  bool conjecture_ok = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) (i == 6 ? conjecture_ok : correctness_ok) = false;
  }
  if (!correctness_ok) return 1;
  return conjecture_ok ? 0 : 2;
}
