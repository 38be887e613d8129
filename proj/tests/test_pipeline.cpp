#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ptzeros/pipeline.hpp"
#include "ptzeros/report_io.hpp"

using namespace ptzeros;

namespace {

std::string csv_of(const std::vector<RunReport>& r, bool zeros) {
  std::ostringstream s;
  if (zeros) write_zeros_csv(s, r);
  else write_eigenvalues_csv(s, r);
  return s.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig small_ix3() {
  return parse_config(R"({
    // four levels keep this quick
    "problem": {"type": "monomial", "N": 3},
    "k_max": 4,
    "grid": {"nx": 101, "ny": 51}
  })");
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("config defaults and names") {
    const RunConfig m = parse_config(R"({"problem": {"type": "monomial", "N": 3}})");
    CHECK(m.k_max == 6);
    CHECK(m.example_name() == "monomial-N3");
    CHECK(m.effective_scaling() == ScalingChoice::Cubic);

    const RunConfig q = parse_config(R"({"problem": {"type": "qes", "a": 10, "b": 2, "J": 21}})");
    CHECK(q.example_name() == "qes-a10-b2-J21");
    CHECK(q.effective_scaling() == ScalingChoice::TurningMagnitude);

    const RunConfig l = parse_config(R"({"problem": {"type": "large-n-surrogate", "N": 20}, "threads": 2})");
    CHECK(l.example_name() == "large-n-N20");
    CHECK(l.k_max == 16);
    CHECK(l.threads == 2);
    CHECK(l.effective_scaling() == ScalingChoice::LargeN);
  }

  TEST_CASE("config rejects bad input") {
    CHECK_THROWS_AS(parse_config(R"({"problem": {"type": "monomial"}, "bogus": 1})"), Error);
    CHECK_THROWS_AS(parse_config(R"({"problem": {"type": "monomial", "M": 3}})"), Error);
    CHECK_THROWS_AS(parse_config(R"({"problem": {"type": "cubic"}})"), Error);
    CHECK_THROWS_AS(parse_config(R"({"k_max": 3})"), Error);
    CHECK_THROWS_AS(parse_config(R"({"problem": {"type": "monomial"}, "k_max": "six"})"), Error);
    CHECK_THROWS_AS(parse_config(R"({"problem": {"type": "qes", "J": 21}, "scaling": "large-n"})"), Error);
    CHECK_THROWS_AS(parse_config("{not json"), Error);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
  }

  TEST_CASE("annotated example configs parse") {
    for (const char* name : {"ix3.json", "qes.json", "large_n.json", "annotated.json"}) {
      const std::filesystem::path p = std::filesystem::path(PTZEROS_SOURCE_DIR) / "configs" / name;
      CHECK_NOTHROW(load_config(p.string()));
    }
  }

  TEST_CASE("number formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  }

  TEST_CASE("monomial run: headers, counts, determinism across thread counts") {
    RunConfig c = small_ix3();
    const RunReport a = run_pipeline(c);
    c.threads = 3;
    const RunReport b = run_pipeline(c);

    REQUIRE(a.levels.size() == 4);
    for (const LevelResult& l : a.levels) CHECK(l.zeros.size() == static_cast<std::size_t>(l.k));
    CHECK(a.interlace_scaled.size() == 3);
    CHECK(a.interlace_pass);
    CHECK(a.affine_invariant);

    const std::string za = csv_of({a}, true), zb = csv_of({b}, true);
    const std::string ea = csv_of({a}, false), eb = csv_of({b}, false);
    CHECK(first_line(za) == "example,k,zero_index,re_x,im_x,re_z,im_z,relevant");
    CHECK(first_line(ea) == "example,k,energy,energy_wkb,residual");
    CHECK(za == zb);
    CHECK(ea == eb);
    CHECK(za == csv_of({run_pipeline(small_ix3())}, true));
  }

  TEST_CASE("QES run: count law carried into the relevant flags") {
    const RunReport r = run_pipeline(parse_config(R"({"problem": {"type": "qes", "a": 10, "b": 2, "J": 21}})"));
    REQUIRE(r.levels.size() == 21);
    for (const LevelResult& l : r.levels) {
      CHECK(l.zeros.size() == 20);
      const auto irrelevant = std::count(l.relevant.begin(), l.relevant.end(), false);
      CHECK(irrelevant == 21 - l.k);
      CHECK_FALSE(l.energy_wkb.has_value());
    }
  }

  TEST_CASE("emitted files: schema versions and figures from the CSV") {
    const RunReport r = run_pipeline(small_ix3());
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "ptzeros_pipeline_test";
    std::filesystem::remove_all(dir);
    const auto files = emit_outputs({r}, dir.string());
    CHECK(files.size() == 6);

    for (const char* name : {"interlace.json", "fits.json"}) {
      const auto j = nlohmann::json::parse(slurp(dir / name));
      CHECK(j.at("schema_version") == kSchemaVersion);
    }
    const auto fits = nlohmann::json::parse(slurp(dir / "fits.json"));
    CHECK_FALSE(fits["examples"][0].contains("band_metric"));  // 6 zeros < 10
    CHECK(fits["examples"][0]["conventions"].contains("normalization"));

    const auto rows = read_zeros_csv((dir / "zeros.csv").string());
    CHECK(rows.size() == 6);
    const std::string svg = slurp(dir / "monomial-N3-z.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    std::size_t markers = 0;
    for (const char* tag : {"<circle", "<rect x=\"", "<polygon"}) {
      for (std::size_t pos = svg.find(tag); pos != std::string::npos; pos = svg.find(tag, pos + 1)) ++markers;
    }
    CHECK(markers == rows.size() + 1);  // plus the frame rect
    CHECK(scatter_svg(rows, "monomial-N3", true) == svg);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("unwritable output directory is an IO error") {
    try {
      emit_outputs({}, "/proc/ptzeros-no-such-dir");
      FAIL("expected Io");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Io);
    }
  }
}
