#include "ptzeros/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace ptzeros {

namespace {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const std::vector<double>& vs) {
  json a = json::array();
  for (double v : vs) a.push_back(number(v));
  return a;
}

json fit_json(const PowerLawFit& f) {
  return {{"C", number(f.C)},           {"p", number(f.p)},          {"rms_log_residual", number(f.rms_residual)},
          {"k_first", number(f.k_first)}, {"k_last", number(f.k_last)}, {"count", f.count},
          {"provenance", "computed"}};
}

json shift_json(const ShiftMetric& s) {
  return {{"k", s.ks}, {"mean_im", numbers(s.mean_im)}, {"strictly_decreasing", s.strictly_decreasing}};
}

json band_json(const BandMetric& b) {
  return {{"alpha", number(b.alpha)},
          {"beta", number(b.beta)},
          {"gamma", number(b.gamma)},
          {"rms_deviation", number(b.rms_deviation)},
          {"max_deviation", number(b.max_deviation)},
          {"band_width", number(b.band_width)},
          {"count", b.count}};
}

json interlace_pairs(const std::vector<InterlaceReport>& reports) {
  json a = json::array();
  for (const InterlaceReport& r : reports) {
    a.push_back({{"k", r.k},
                 {"k1", r.k1},
                 {"gap_counts", r.gap_counts},
                 {"outside", r.outside},
                 {"count_mismatch", r.count_mismatch},
                 {"pass", r.pass},
                 {"shift", r.shift ? number(*r.shift) : json(nullptr)}});
  }
  return a;
}

const char* problem_type(ProblemKind p) {
  switch (p) {
    case ProblemKind::Monomial: return "monomial";
    case ProblemKind::QES: return "qes";
    case ProblemKind::LargeN: return "large-n-surrogate";
  }
  return "unknown";
}

json problem_json(const RunConfig& c) {
  if (c.problem == ProblemKind::QES) return {{"type", "qes"}, {"a", number(c.a)}, {"b", number(c.b)}, {"J", c.J}};
  return {{"type", problem_type(c.problem)}, {"N", c.N}};
}

json conventions_json(const RunReport& r) {
  const bool qes = r.config.problem == ProblemKind::QES;
  json c;
  c["scaling"] = r.levels.empty() ? json("none") : json(describe(r.levels.front().scaling));
  if (qes) {
    c["index_origin"] = "k = 1..J in ascending energy";
    c["normalization"] = "psi = P(x) exp(-i x^3/3 - a x^2/2 - i b x), P monic";
    c["zero_sets"] = "relevant = not on the positive imaginary axis (|Re x| < 1e-6 max|x|, Im x > 0)";
    c["residual"] = "largest normalised row residual of the coefficient recursion";
  } else {
    c["index_origin"] = "k = 0 for the ground state; Psi_k has k zeros";
    c["normalization"] =
        "right-wedge solution with psi(x_m) = 1 at x_m = -i E^(1/N) cos(pi/N); psi'(x_m) = sqrt|V - E| when psi(x_m) "
        "vanishes";
    c["zero_sets"] = "zeros with Re x inside the turning-point span (arch region)";
    c["residual"] = "|Re W| / (kappa |(psi_L, psi_L'/kappa)| |(psi_R, psi_R'/kappa)|) at the eigenvalue";
    c["energy_wkb"] = "leading-order WKB, action = (k + 1/2) pi";
  }
  return c;
}

json tolerances_json(const RunConfig& c) {
  return {{"ode_rel", number(c.tol.rel)},
          {"ode_abs", number(c.tol.abs)},
          {"ode_max_step", number(c.tol.max_step)},
          {"ode_min_step", number(c.tol.min_step)},
          {"eigenvalue_bracket_rel", number(1e-12)},
          {"newton_step_rel", number(1e-12)},
          {"grid", {{"nx", c.grid.nx}, {"ny", c.grid.ny}, {"re_pad", number(c.grid.re_pad)}, {"im_pad", number(c.grid.im_pad)}}},
          {"provenance", "configured"}};
}

void write_value(std::ostream& out, const json& v, int indent) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out << ",\n";
        first = false;
        out << inner << json(key).dump() << ": ";
        write_value(out, item, indent + 2);
      }
      out << "\n" << pad << "}";
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      const bool flat = std::none_of(v.begin(), v.end(), [](const json& e) { return e.is_structured(); });
      if (flat) {
        out << "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out << ", ";
          write_value(out, v[i], indent + 2);
        }
        out << "]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ",\n";
        out << inner;
        write_value(out, v[i], indent + 2);
      }
      out << "\n" << pad << "]";
      return;
    }
    case json::value_t::number_float: {
      const double d = v.get<double>();
      if (std::isfinite(d)) out << format_double(d);
      else out << "null";
      return;
    }
    default:
      out << v.dump();
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) fields.push_back(f);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string svg_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_eigenvalues_csv(std::ostream& out, const std::vector<RunReport>& reports) {
  out << kEigenvaluesHeader << "\n";
  for (const RunReport& r : reports) {
    for (const LevelResult& l : r.levels) {
      out << r.example << "," << l.k << "," << format_double(l.energy) << ","
          << (l.energy_wkb ? format_double(*l.energy_wkb) : std::string()) << "," << format_double(l.residual) << "\n";
    }
  }
}

void write_zeros_csv(std::ostream& out, const std::vector<RunReport>& reports) {
  out << kZerosHeader << "\n";
  for (const RunReport& r : reports) {
    for (const LevelResult& l : r.levels) {
      for (std::size_t i = 0; i < l.zeros.size(); ++i) {
        out << r.example << "," << l.k << "," << i << "," << format_double(l.zeros[i].real()) << ","
            << format_double(l.zeros[i].imag()) << "," << format_double(l.scaled[i].real()) << ","
            << format_double(l.scaled[i].imag()) << "," << (l.relevant[i] ? "true" : "false") << "\n";
      }
    }
  }
}

json interlace_json(const std::vector<RunReport>& reports) {
  json root;
  root["schema_version"] = kSchemaVersion;
  root["convention"] = {{"ordering", "Re(z), ties broken by Im(z)"},
                        {"gaps", "interior gaps of Psi_{k+1} must each hold one zero of Psi_k; others counted as outside"},
                        {"zero_sets", "relevant zeros (qes) or arch-region zeros (monomial)"}};
  json examples = json::array();
  for (const RunReport& r : reports) {
    examples.push_back({{"example", r.example},
                        {"scaling", conventions_json(r)["scaling"]},
                        {"all_pass", r.interlace_pass},
                        {"affine_invariant", r.affine_invariant},
                        {"pairs", interlace_pairs(r.interlace_scaled)},
                        {"pairs_unscaled", interlace_pairs(r.interlace_unscaled)}});
  }
  root["examples"] = examples;
  return root;
}

json fits_json(const std::vector<RunReport>& reports) {
  json root;
  root["schema_version"] = kSchemaVersion;
  json examples = json::array();
  for (const RunReport& r : reports) {
    json e;
    e["example"] = r.example;
    e["problem"] = problem_json(r.config);
    e["levels"] = r.levels.size();
    e["conventions"] = conventions_json(r);
    e["tolerances"] = tolerances_json(r.config);
    if (r.wkb_energy_fit) {
      json f = fit_json(*r.wkb_energy_fit);
      f["source"] = "wkb energies";
      f["expected_p"] = number(2.0 * r.config.N / (r.config.N + 2.0));
      e["energy_fit"] = f;
    }
    if (r.shooting_energy_fit) {
      json f = fit_json(*r.shooting_energy_fit);
      f["source"] = "shooting energies, k >= 1 (pre-asymptotic)";
      e["shooting_energy_fit"] = f;
    }
    if (r.drift) {
      e["turning_point_drift"] = {{"drift", fit_json(r.drift->drift)},
                                  {"magnitude", fit_json(r.drift->magnitude)},
                                  {"predicted_drift_amplitude", number(r.drift->predicted_drift_amplitude)},
                                  {"expected_drift_p", number(2.0 / (r.config.N + 2.0) - 1.0)},
                                  {"expected_magnitude_p", number(2.0 / (r.config.N + 2.0))}};
    }
    if (r.gap_analysis) {
      const GapAnalysis& g = *r.gap_analysis;
      json j;
      j["convention"] =
          "Im-axis intercept of each eigenfunction's zero arch (Im = alpha + gamma Re^2, or mean Im when all |Re| agree); "
          "gaps are differences of consecutive intercepts, labelled by the mean k";
      j["k"] = numbers(g.ks);
      j["intercepts"] = numbers(g.intercepts);
      j["gaps"] = numbers(g.gaps);
      j["local_exponents"] = numbers(g.local_exponents);
      if (g.richardson) {
        j["richardson"] = {{"value", number(g.richardson->value)},
                           {"level", g.richardson->level},
                           {"stability", number(g.richardson->stability)},
                           {"unstable", g.richardson->unstable}};
      }
      j["expected_exponent"] = number(-0.6);
      j["in_asymptopia"] = g.in_asymptopia;
      j["asymptopia_tolerance"] = number(0.05);
      if (g.divergence) {
        j["divergence"] = {{"gap_fit", fit_json(g.divergence->gap_fit)},
                           {"cumulative_exponent", number(g.divergence->cumulative_exponent)},
                           {"cumulative_amplitude", number(g.divergence->cumulative_amplitude)},
                           {"cumulative_offset", number(g.divergence->cumulative_offset)},
                           {"verdict", g.divergence->divergent ? "divergent-trend" : "convergent"}};
      }
      e["im_axis_gaps"] = j;
    }
    if (r.shift_unscaled) e["shift_metric"] = {{"unscaled", shift_json(*r.shift_unscaled)}, {"scaled", shift_json(*r.shift_scaled)}};
    if (r.band_unscaled) {
      e["band_metric"] = {{"artifact_defined", true},
                          {"definition", "vertical deviation from a least-squares quadratic Im = alpha + beta Re + gamma Re^2 "
                                         "over the pooled relevant zeros; band_width = max - min deviation"},
                          {"unscaled", band_json(*r.band_unscaled)},
                          {"scaled", band_json(*r.band_scaled)},
                          {"ratio", number(r.band_scaled->band_width / r.band_unscaled->band_width)}};
    }
    e["warnings"] = r.warnings;
    examples.push_back(e);
  }
  root["examples"] = examples;
  return root;
}

void write_json(std::ostream& out, const json& value) {
  write_value(out, value, 0);
  out << "\n";
}

std::vector<ZeroRow> read_zeros_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != kZerosHeader) throw Error(ErrorKind::Io, path + ": unexpected header");
  std::vector<ZeroRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != 8) throw Error(ErrorKind::Io, path + ":" + std::to_string(line_no) + ": expected 8 fields");
    try {
      ZeroRow r;
      r.example = f[0];
      r.k = std::stoi(f[1]);
      r.zero_index = std::stoi(f[2]);
      r.x = {std::stod(f[3]), std::stod(f[4])};
      r.z = {std::stod(f[5]), std::stod(f[6])};
      r.relevant = f[7] == "true";
      rows.push_back(r);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Io, path + ":" + std::to_string(line_no) + ": malformed row");
    }
  }
  return rows;
}

std::string scatter_svg(const std::vector<ZeroRow>& rows, const std::string& example, bool scaled) {
  constexpr double W = 640, H = 480, L = 70, R = 20, T = 40, B = 50;
  std::vector<const ZeroRow*> pts;
  for (const ZeroRow& r : rows)
    if (r.example == example) pts.push_back(&r);
  double x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  if (!pts.empty()) {
    x0 = y0 = std::numeric_limits<double>::infinity();
    x1 = y1 = -std::numeric_limits<double>::infinity();
    for (const ZeroRow* p : pts) {
      const Complex v = scaled ? p->z : p->x;
      x0 = std::min(x0, v.real());
      x1 = std::max(x1, v.real());
      y0 = std::min(y0, v.imag());
      y1 = std::max(y1, v.imag());
    }
    const double px = std::max(0.05 * (x1 - x0), 1e-3), py = std::max(0.05 * (y1 - y0), 1e-3);
    x0 -= px;
    x1 += px;
    y0 -= py;
    y1 += py;
  }
  const auto sx = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
  const auto sy = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };
  const std::string axis = scaled ? "z" : "x";

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << " " << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
    << example << " zeros, " << axis << "-plane</text>\n";
  s << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double vx = x0 + (x1 - x0) * i / 4.0, vy = y0 + (y1 - y0) * i / 4.0;
    s << "<text x=\"" << svg_number(sx(vx)) << "\" y=\"" << H - B + 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << svg_number(vx) << "</text>\n";
    s << "<text x=\"" << L - 6 << "\" y=\"" << svg_number(sy(vy) + 3)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << svg_number(vy) << "</text>\n";
  }
  s << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">Re "
    << axis << "</text>\n";
  s << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
    << H / 2 << ")\">Im " << axis << "</text>\n";
  for (const ZeroRow* p : pts) {
    const Complex v = scaled ? p->z : p->x;
    const double cx = sx(v.real()), cy = sy(v.imag());
    char color[32];
    std::snprintf(color, sizeof color, "hsl(%d,70%%,40%%)", (p->k * 137) % 360);
    const std::string fill = p->relevant ? color : "none";
    const std::string style = " fill=\"" + fill + "\" stroke=\"" + color + "\"";
    switch (p->k % 4) {
      case 0:
        s << "<circle cx=\"" << svg_number(cx) << "\" cy=\"" << svg_number(cy) << "\" r=\"3.5\"" << style << "/>\n";
        break;
      case 1:
        s << "<rect x=\"" << svg_number(cx - 3) << "\" y=\"" << svg_number(cy - 3) << "\" width=\"6\" height=\"6\"" << style
          << "/>\n";
        break;
      case 2:
        s << "<polygon points=\"" << svg_number(cx) << "," << svg_number(cy - 4) << " " << svg_number(cx - 4) << ","
          << svg_number(cy + 3) << " " << svg_number(cx + 4) << "," << svg_number(cy + 3) << "\"" << style << "/>\n";
        break;
      default:
        s << "<polygon points=\"" << svg_number(cx) << "," << svg_number(cy - 4) << " " << svg_number(cx + 4) << ","
          << svg_number(cy) << " " << svg_number(cx) << "," << svg_number(cy + 4) << " " << svg_number(cx - 4) << ","
          << svg_number(cy) << "\"" << style << "/>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

std::vector<std::string> emit_outputs(const std::vector<RunReport>& reports, const std::string& dir,
                                      const OutputSelection& selection) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir + ": " + ec.message());
  std::vector<std::string> written;
  const auto emit = [&](const std::string& name, const std::string& content) {
    const fs::path p = fs::path(dir) / name;
    write_file(p, content);
    written.push_back(p.string());
  };
  if (selection.eigenvalues) {
    std::ostringstream s;
    write_eigenvalues_csv(s, reports);
    emit("eigenvalues.csv", s.str());
  }
  if (selection.zeros || selection.figures) {
    std::ostringstream s;
    write_zeros_csv(s, reports);
    emit("zeros.csv", s.str());
  }
  if (selection.interlace) {
    std::ostringstream s;
    write_json(s, interlace_json(reports));
    emit("interlace.json", s.str());
  }
  if (selection.fits) {
    std::ostringstream s;
    write_json(s, fits_json(reports));
    emit("fits.json", s.str());
  }
  if (selection.figures) {
    const std::vector<ZeroRow> rows = read_zeros_csv((fs::path(dir) / "zeros.csv").string());
    for (const RunReport& r : reports) {
      emit(r.example + "-x.svg", scatter_svg(rows, r.example, false));
      emit(r.example + "-z.svg", scatter_svg(rows, r.example, true));
    }
  }
  return written;
}

}  // namespace ptzeros
