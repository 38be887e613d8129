// Command-line front end: spectrum, zeros, qes, wkb, interlace, report.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "ptzeros/pipeline.hpp"
#include "ptzeros/report_io.hpp"

using namespace ptzeros;

namespace {

struct Options {
  std::vector<std::string> configs;
  std::string out;
  int k_max = -1;
  int threads = -1;
};

RunConfig default_config(const std::string& which) {
  if (which == "qes") return parse_config(R"({"problem": {"type": "qes", "a": 10, "b": 2, "J": 21}})");
  if (which == "large-n") return parse_config(R"({"problem": {"type": "large-n-surrogate", "N": 20}})");
  return parse_config(R"({"problem": {"type": "monomial", "N": 3}})");
}

std::vector<RunConfig> resolve(const Options& o, const std::vector<std::string>& defaults) {
  std::vector<RunConfig> out;
  for (const std::string& path : o.configs) out.push_back(load_config(path));
  if (out.empty())
    for (const std::string& d : defaults) out.push_back(default_config(d));
  for (RunConfig& c : out) {
    if (o.k_max >= 0) c.k_max = o.k_max;
    if (o.threads > 0) c.threads = o.threads;
    c.validate();
  }
  return out;
}

std::string output_dir(const Options& o, const std::vector<RunConfig>& configs) {
  if (!o.out.empty()) return o.out;
  return configs.empty() ? "out" : configs.front().output_dir;
}

void print_written(const std::vector<std::string>& files) {
  for (const std::string& f : files) std::printf("wrote %s\n", f.c_str());
}

int interlace_status(const std::vector<RunReport>& reports) {
  int status = 0;
  for (const RunReport& r : reports) {
    int passed = 0;
    for (const InterlaceReport& i : r.interlace_scaled) passed += i.pass ? 1 : 0;
    std::printf("%s: interlacing %d/%zu pairs pass\n", r.example.c_str(), passed, r.interlace_scaled.size());
    for (const std::string& w : r.warnings) std::printf("%s: warning: %s\n", r.example.c_str(), w.c_str());
    if (!r.interlace_pass) status = 2;
  }
  return status;
}

std::vector<RunReport> spectra(const std::vector<RunConfig>& configs, bool with_fits) {
  std::vector<RunReport> reports;
  for (const RunConfig& c : configs) {
    RunReport r;
    r.config = c;
    r.example = c.example_name();
    r.levels = c.problem == ProblemKind::QES ? qes_levels(c) : monomial_levels(c);
    if (with_fits) analyse(r);
    for (const LevelResult& l : r.levels) std::printf("%s k=%d E=%s\n", r.example.c_str(), l.k, format_double(l.energy).c_str());
    reports.push_back(std::move(r));
  }
  return reports;
}

std::vector<RunReport> pipelines(const std::vector<RunConfig>& configs) {
  std::vector<RunReport> reports;
  for (const RunConfig& c : configs) reports.push_back(run_pipeline(c));
  return reports;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.configs, "JSON run configuration (repeatable)")->check(CLI::ExistingFile);
  sub->add_option("--out", o.out, "output directory (default: config output_dir)");
  sub->add_option("--k-max", o.k_max, "number of levels (monomial) or cap on QES levels")->check(CLI::NonNegativeNumber);
  sub->add_option("--threads", o.threads, "worker threads for per-level work")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zeros of PT-symmetric eigenfunctions: spectra, zeros, scaling and interlacing"};
  app.require_subcommand(1);
  Options o;
  auto* spectrum = app.add_subcommand("spectrum", "shooting (or QES) eigenvalues -> eigenvalues.csv");
  auto* zeros = app.add_subcommand("zeros", "eigenfunction zeros -> zeros.csv, eigenvalues.csv");
  auto* qes = app.add_subcommand("qes", "QES quartic pipeline -> all outputs");
  auto* wkb = app.add_subcommand("wkb", "WKB energies, growth and drift fits -> fits.json, eigenvalues.csv");
  auto* interlace = app.add_subcommand("interlace", "interlacing checks -> interlace.json, zeros.csv");
  auto* report = app.add_subcommand("report", "full pipeline -> CSV, JSON and SVG outputs");
  for (auto* sub : {spectrum, zeros, qes, wkb, interlace, report}) add_common(sub, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (spectrum->parsed()) {
      const auto configs = resolve(o, {"monomial"});
      print_written(emit_outputs(spectra(configs, false), output_dir(o, configs), {true, false, false, false, false}));
      return 0;
    }
    if (wkb->parsed()) {
      const auto configs = resolve(o, {"monomial"});
      for (const RunConfig& c : configs) {
        if (c.problem == ProblemKind::QES) throw Error(ErrorKind::Config, "wkb: needs a monomial or large-n config");
      }
      print_written(emit_outputs(spectra(configs, true), output_dir(o, configs), {true, false, false, true, false}));
      return 0;
    }
    if (zeros->parsed()) {
      const auto configs = resolve(o, {"monomial"});
      const auto reports = pipelines(configs);
      print_written(emit_outputs(reports, output_dir(o, configs), {true, true, false, false, false}));
      return 0;
    }
    if (qes->parsed()) {
      const auto configs = resolve(o, {"qes"});
      for (const RunConfig& c : configs) {
        if (c.problem != ProblemKind::QES) throw Error(ErrorKind::Config, "qes: config problem.type must be qes");
      }
      const auto reports = pipelines(configs);
      print_written(emit_outputs(reports, output_dir(o, configs)));
      return interlace_status(reports);
    }
    if (interlace->parsed()) {
      const auto configs = resolve(o, {"monomial"});
      const auto reports = pipelines(configs);
      print_written(emit_outputs(reports, output_dir(o, configs), {false, true, true, false, false}));
      return interlace_status(reports);
    }
    const auto configs = resolve(o, {"monomial", "qes", "large-n"});
    const auto reports = pipelines(configs);
    print_written(emit_outputs(reports, output_dir(o, configs)));
    return interlace_status(reports);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
