#pragma once
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vbsim/constants.hpp"

namespace vbsim {

// --- scenario configuration -------------------------------------------------
// One JSON object configures every scenario; unknown keys and wrong types are
// rejected with the offending field named. CLI flags override the file values.
struct Config {
  std::string scenario;

  // model / protocol parameters
  double field_mT = 0.0; // > 0 overrides the field derived from (phi, n_periods)
  int n_periods = 50;    // CPMG periods N
  int p_harmonic = 5;    // filter harmonic p (odd)
  double phi = kPi / 2;  // target collective rotation angle
  int grid_samples = 600;
  double grid_factor = 1.2;
  std::string terms = "all"; // all | eff | eff-avg | rw-odd | crw
  bool quadrupole = false;
  double step_ns = 0.0; // 0 = automatic
  int m_i = 1;          // initial nuclear projection for ghz, +1 or -1

  // scenario-specific lists
  std::vector<double> gamma_inv_us{2.0, 4.0};              // dephasing times 1/Gamma, us
  std::vector<double> fields_mT{0.0, 100.0, 500.0, 700.0}; // gate-z field scan
  std::vector<int> p_scan{1, 3, 5, 7};                // hadamard harmonic scan
  int sweep_n_min = 1;
  int sweep_n_max = 100;
  std::vector<int> sweep_p{1, 3, 5, 7, 9, 11, 13, 15};
  bool write_read_check = true; // include collective write/read checks in ghz

  // execution / output
  std::uint64_t seed = 12345;
  int jobs = 1;
  bool svg = false;
  std::string out_dir = ".";

  // render verb
  std::string input_csv;
  std::string plot_kind = "lines"; // lines | heatmap
  std::string output_svg;          // default: input path with .svg suffix
};

// Parses and validates a JSON config. Throws std::runtime_error with a
// message naming the bad field.
Config config_from_json(const std::string& json_text);
Config config_from_file(const std::string& path);
// Canonical serialization (sorted keys); embedded into CSV headers and hashed.
std::string config_to_json(const Config& cfg);

std::uint64_t fnv1a64(std::string_view s);

// --- CSV --------------------------------------------------------------------
// Deterministic CSV: '#'-prefixed header lines (tool version, scenario,
// resolved config and its hash), one comma-separated column-name line, then
// rows. Numbers are %.9g with '.' decimal point, line ending '\n'.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);
  void add_header(const std::string& line);
  void add_standard_headers(const std::string& scenario, const Config& cfg);
  void add_row(const std::vector<std::string>& cells);
  void add_numeric_row(const std::vector<double>& values);
  static std::string num(double v);
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> headers_;
  std::vector<std::string> rows_;
};

// Minimal CSV reader for the render verb: skips '#' lines, reads a column-name
// line, then data rows. `rows` holds the numeric view (non-numeric cells become
// NaN); `raw` keeps the original cell text for label-based grouping.
struct CsvData {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<std::string>> raw;
};
CsvData read_csv(const std::string& path);

// --- SVG --------------------------------------------------------------------
struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};
std::string svg_lines(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<Series>& series);

// Heatmap over a small integer-labeled grid; values are clamped to the fixed
// [0, 1] fidelity color scale, NaN cells are hatched gray.
struct Heatmap {
  std::string title;
  std::string row_label; // vertical axis
  std::string col_label; // horizontal axis
  std::vector<double> row_ticks;
  std::vector<double> col_ticks;
  std::vector<std::vector<double>> cells; // [row][col]
};
std::string svg_heatmap(const Heatmap& h);

void write_text_file(const std::string& path, const std::string& content);

} // namespace vbsim
