#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptzeros/pipeline.hpp"

namespace ptzeros {

inline constexpr int kSchemaVersion = 1;

inline constexpr const char* kZerosHeader = "example,k,zero_index,re_x,im_x,re_z,im_z,relevant";
inline constexpr const char* kEigenvaluesHeader = "example,k,energy,energy_wkb,residual";

/// %.17g; non-finite values become "nan" / "inf" / "-inf".
std::string format_double(double v);

void write_eigenvalues_csv(std::ostream& out, const std::vector<RunReport>& reports);
void write_zeros_csv(std::ostream& out, const std::vector<RunReport>& reports);

nlohmann::json interlace_json(const std::vector<RunReport>& reports);
nlohmann::json fits_json(const std::vector<RunReport>& reports);

/// Pretty-prints with every floating-point number at 17 significant digits.
void write_json(std::ostream& out, const nlohmann::json& value);

struct ZeroRow {
  std::string example;
  int k = 0;
  int zero_index = 0;
  Complex x;
  Complex z;
  bool relevant = true;
};

std::vector<ZeroRow> read_zeros_csv(const std::string& path);

/// Scatter of one example's zeros, one marker style per k.
std::string scatter_svg(const std::vector<ZeroRow>& rows, const std::string& example, bool scaled);

struct OutputSelection {
  bool eigenvalues = true;
  bool zeros = true;
  bool interlace = true;
  bool fits = true;
  bool figures = true;
};

/// Writes the selected files into `dir` (created if needed) and returns
/// their paths. Figures are rendered from the written zeros.csv.
std::vector<std::string> emit_outputs(const std::vector<RunReport>& reports, const std::string& dir,
                                      const OutputSelection& selection = {});

}  // namespace ptzeros
