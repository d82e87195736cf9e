#include "vbsim/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "vbsim/spin_model.hpp"

namespace vbsim {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& key, const std::string& what) {
  throw std::runtime_error("config field '" + key + "': " + what);
}

double need_number(const json& v, const std::string& key) {
  if (!v.is_number()) bad_field(key, "expected a number");
  return v.get<double>();
}

int need_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) bad_field(key, "expected an integer");
  return v.get<int>();
}

std::uint64_t need_uint64(const json& v, const std::string& key) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
    bad_field(key, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

bool need_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) bad_field(key, "expected true or false");
  return v.get<bool>();
}

std::string need_string(const json& v, const std::string& key) {
  if (!v.is_string()) bad_field(key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> need_number_array(const json& v, const std::string& key) {
  if (!v.is_array()) bad_field(key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) bad_field(key, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> need_int_array(const json& v, const std::string& key) {
  if (!v.is_array()) bad_field(key, "expected an array of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) bad_field(key, "expected an array of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

void validate(const Config& cfg) {
  if (cfg.field_mT < 0) bad_field("field_mT", "must be non-negative");
  if (cfg.n_periods < 1) bad_field("n_periods", "must be at least 1");
  if (cfg.p_harmonic < 1 || cfg.p_harmonic % 2 == 0)
    bad_field("p_harmonic", "must be a positive odd integer");
  if (!(cfg.phi > 0)) bad_field("phi", "must be positive");
  if (cfg.grid_samples < 2) bad_field("grid_samples", "must be at least 2");
  if (cfg.grid_factor < 1.0) bad_field("grid_factor", "must be at least 1");
  try {
    term_selector_from_string(cfg.terms);
  } catch (const std::exception&) {
    bad_field("terms", "expected one of all, eff, eff-avg, rw-odd, crw");
  }
  if (cfg.step_ns < 0) bad_field("step_ns", "must be non-negative");
  if (cfg.m_i != 1 && cfg.m_i != -1) bad_field("m_i", "must be +1 or -1");
  for (double g : cfg.gamma_inv_us)
    if (!(g > 0)) bad_field("gamma_inv_us", "entries must be positive");
  for (double b : cfg.fields_mT)
    if (b < 0) bad_field("fields_mT", "entries must be non-negative");
  for (int p : cfg.p_scan)
    if (p < 1 || p % 2 == 0) bad_field("p_scan", "entries must be positive odd integers");
  if (cfg.sweep_n_min < 1) bad_field("sweep_n_min", "must be at least 1");
  if (cfg.sweep_n_max < cfg.sweep_n_min) bad_field("sweep_n_max", "must be >= sweep_n_min");
  for (int p : cfg.sweep_p)
    if (p < 1 || p % 2 == 0) bad_field("sweep_p", "entries must be positive odd integers");
  if (cfg.jobs < 1) bad_field("jobs", "must be at least 1");
  if (cfg.plot_kind != "lines" && cfg.plot_kind != "heatmap")
    bad_field("plot_kind", "expected lines or heatmap");
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

// five-stop blue-to-yellow ramp for the fixed [0, 1] fidelity scale
void ramp_color(double v, int& r, int& g, int& b) {
  static const int stops[5][3] = {
      {13, 8, 135}, {126, 3, 168}, {204, 71, 120}, {248, 149, 64}, {240, 249, 33}};
  if (std::isnan(v)) { r = g = b = 187; return; }
  v = std::min(1.0, std::max(0.0, v));
  const double x = v * 4.0;
  const int i = std::min(3, static_cast<int>(x));
  const double t = x - i;
  r = static_cast<int>(std::lround(stops[i][0] + t * (stops[i + 1][0] - stops[i][0])));
  g = static_cast<int>(std::lround(stops[i][1] + t * (stops[i + 1][1] - stops[i][1])));
  b = static_cast<int>(std::lround(stops[i][2] + t * (stops[i + 1][2] - stops[i][2])));
}

} // namespace

Config config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("config must be a JSON object");

  Config cfg;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    if (key == "scenario") cfg.scenario = need_string(v, key);
    else if (key == "field_mT") cfg.field_mT = need_number(v, key);
    else if (key == "n_periods") cfg.n_periods = need_int(v, key);
    else if (key == "p_harmonic") cfg.p_harmonic = need_int(v, key);
    else if (key == "phi") cfg.phi = need_number(v, key);
    else if (key == "grid_samples") cfg.grid_samples = need_int(v, key);
    else if (key == "grid_factor") cfg.grid_factor = need_number(v, key);
    else if (key == "terms") cfg.terms = need_string(v, key);
    else if (key == "quadrupole") cfg.quadrupole = need_bool(v, key);
    else if (key == "step_ns") cfg.step_ns = need_number(v, key);
    else if (key == "m_i") cfg.m_i = need_int(v, key);
    else if (key == "gamma_inv_us") cfg.gamma_inv_us = need_number_array(v, key);
    else if (key == "fields_mT") cfg.fields_mT = need_number_array(v, key);
    else if (key == "p_scan") cfg.p_scan = need_int_array(v, key);
    else if (key == "sweep_n_min") cfg.sweep_n_min = need_int(v, key);
    else if (key == "sweep_n_max") cfg.sweep_n_max = need_int(v, key);
    else if (key == "sweep_p") cfg.sweep_p = need_int_array(v, key);
    else if (key == "write_read_check") cfg.write_read_check = need_bool(v, key);
    else if (key == "seed") cfg.seed = need_uint64(v, key);
    else if (key == "jobs") cfg.jobs = need_int(v, key);
    else if (key == "svg") cfg.svg = need_bool(v, key);
    else if (key == "out_dir") cfg.out_dir = need_string(v, key);
    else if (key == "input_csv") cfg.input_csv = need_string(v, key);
    else if (key == "plot_kind") cfg.plot_kind = need_string(v, key);
    else if (key == "output_svg") cfg.output_svg = need_string(v, key);
    else throw std::runtime_error("unknown config field '" + key + "'");
  }
  validate(cfg);
  return cfg;
}

Config config_from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_to_json(const Config& cfg) {
  json j;
  j["scenario"] = cfg.scenario;
  j["field_mT"] = cfg.field_mT;
  j["n_periods"] = cfg.n_periods;
  j["p_harmonic"] = cfg.p_harmonic;
  j["phi"] = cfg.phi;
  j["grid_samples"] = cfg.grid_samples;
  j["grid_factor"] = cfg.grid_factor;
  j["terms"] = cfg.terms;
  j["quadrupole"] = cfg.quadrupole;
  j["step_ns"] = cfg.step_ns;
  j["m_i"] = cfg.m_i;
  j["gamma_inv_us"] = cfg.gamma_inv_us;
  j["fields_mT"] = cfg.fields_mT;
  j["p_scan"] = cfg.p_scan;
  j["sweep_n_min"] = cfg.sweep_n_min;
  j["sweep_n_max"] = cfg.sweep_n_max;
  j["sweep_p"] = cfg.sweep_p;
  j["write_read_check"] = cfg.write_read_check;
  j["seed"] = cfg.seed;
  j["jobs"] = cfg.jobs;
  j["svg"] = cfg.svg;
  j["out_dir"] = cfg.out_dir;
  j["input_csv"] = cfg.input_csv;
  j["plot_kind"] = cfg.plot_kind;
  j["output_svg"] = cfg.output_svg;
  return j.dump(); // nlohmann::json keeps object keys sorted
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvWriter::add_header(const std::string& line) { headers_.push_back(line); }

void CsvWriter::add_standard_headers(const std::string& scenario, const Config& cfg) {
  const std::string resolved = config_to_json(cfg);
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a64(resolved)));
  add_header(std::string("vbsim ") + std::string(kVersion));
  add_header("scenario: " + scenario);
  add_header("config: " + resolved);
  add_header(std::string("config_hash: ") + hash);
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument("CsvWriter: row width does not match the column count");
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  rows_.push_back(std::move(line));
}

void CsvWriter::add_numeric_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(num(v));
  add_row(cells);
}

std::string CsvWriter::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string CsvWriter::str() const {
  std::string out;
  for (const auto& h : headers_) out += "# " + h + "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& r : rows_) out += r + "\n";
  return out;
}

void CsvWriter::write(const std::string& path) const { write_text_file(path, str()); }

CsvData read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open CSV file: " + path);
  CsvData data;
  std::string line;
  bool have_columns = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    if (!have_columns) {
      data.columns = cells;
      have_columns = true;
      continue;
    }
    std::vector<double> nums;
    nums.reserve(cells.size());
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      nums.push_back((end && *end == '\0' && end != c.c_str())
                         ? v
                         : std::numeric_limits<double>::quiet_NaN());
    }
    data.rows.push_back(std::move(nums));
    data.raw.push_back(std::move(cells));
  }
  return data;
}

std::string svg_lines(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<Series>& series) {
  const double W = 860, H = 520, L = 70, R = 700, T = 50, B = 460;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  s << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  s << "<text x=\"" << (L + R) / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
       "font-family=\"sans-serif\">" << xml_escape(title) << "</text>\n";

  bool any = false;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  for (const auto& sr : series) {
    for (std::size_t i = 0; i < sr.x.size() && i < sr.y.size(); ++i) {
      if (std::isnan(sr.x[i]) || std::isnan(sr.y[i])) continue;
      if (!any) { xmin = xmax = sr.x[i]; ymin = ymax = sr.y[i]; any = true; }
      xmin = std::min(xmin, sr.x[i]); xmax = std::max(xmax, sr.x[i]);
      ymin = std::min(ymin, sr.y[i]); ymax = std::max(ymax, sr.y[i]);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad; ymax += ypad;

  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (R - L); };
  auto py = [&](double y) { return B - (y - ymin) / (ymax - ymin) * (B - T); };

  // axes and ticks
  s << "<line x1=\"" << L << "\" y1=\"" << B << "\" x2=\"" << R << "\" y2=\"" << B
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << B
    << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + i * (xmax - xmin) / 5, xp = px(xv);
    s << "<line x1=\"" << xp << "\" y1=\"" << B << "\" x2=\"" << xp << "\" y2=\"" << B + 5
      << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << xp << "\" y=\"" << B + 20
      << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
      << fmt("%.6g", xv) << "</text>\n";
    const double yv = ymin + i * (ymax - ymin) / 5, yp = py(yv);
    s << "<line x1=\"" << L - 5 << "\" y1=\"" << yp << "\" x2=\"" << L << "\" y2=\"" << yp
      << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << L - 8 << "\" y=\"" << yp + 4
      << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
      << fmt("%.6g", yv) << "</text>\n";
  }
  s << "<text x=\"" << (L + R) / 2 << "\" y=\"" << B + 42
    << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">"
    << xml_escape(x_label) << "</text>\n";
  s << "<text x=\"18\" y=\"" << (T + B) / 2
    << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
       "transform=\"rotate(-90 18 " << (T + B) / 2 << ")\">"
    << xml_escape(y_label) << "</text>\n";

  // polylines and legend
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % 8];
    std::ostringstream pts;
    for (std::size_t i = 0; i < series[k].x.size() && i < series[k].y.size(); ++i) {
      if (std::isnan(series[k].x[i]) || std::isnan(series[k].y[i])) continue;
      pts << fmt("%.2f", px(series[k].x[i])) << ',' << fmt("%.2f", py(series[k].y[i])) << ' ';
    }
    s << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\"/>\n";
    const double ly = T + 18.0 * static_cast<double>(k);
    s << "<line x1=\"" << R + 14 << "\" y1=\"" << ly << "\" x2=\"" << R + 38 << "\" y2=\"" << ly
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << R + 44 << "\" y=\"" << ly + 4
      << "\" font-size=\"12\" font-family=\"sans-serif\">" << xml_escape(series[k].name)
      << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string svg_heatmap(const Heatmap& h) {
  const std::size_t nr = h.cells.size();
  const std::size_t nc = nr ? h.cells[0].size() : 0;
  const double cw = nc ? std::min(46.0, 640.0 / static_cast<double>(nc)) : 46.0;
  const double ch = nr ? std::min(46.0, 380.0 / static_cast<double>(nr)) : 46.0;
  const double L = 80, T = 50;
  const double W = L + static_cast<double>(nc) * cw + 140;
  const double H = T + static_cast<double>(nr) * ch + 70;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  s << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
       "font-family=\"sans-serif\">" << xml_escape(h.title) << "</text>\n";

  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c < h.cells[r].size(); ++c) {
      int cr, cg, cb;
      ramp_color(h.cells[r][c], cr, cg, cb);
      const double x = L + static_cast<double>(c) * cw;
      const double y = T + static_cast<double>(r) * ch;
      s << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw << "\" height=\"" << ch
        << "\" fill=\"rgb(" << cr << ',' << cg << ',' << cb << ")\"/>\n";
      if (std::isnan(h.cells[r][c]))
        s << "<line x1=\"" << x << "\" y1=\"" << y + ch << "\" x2=\"" << x + cw << "\" y2=\"" << y
          << "\" stroke=\"white\"/>\n";
    }
  }
  for (std::size_t r = 0; r < nr && r < h.row_ticks.size(); ++r)
    s << "<text x=\"" << L - 8 << "\" y=\"" << T + (static_cast<double>(r) + 0.5) * ch + 4
      << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
      << fmt("%.6g", h.row_ticks[r]) << "</text>\n";
  for (std::size_t c = 0; c < nc && c < h.col_ticks.size(); ++c)
    s << "<text x=\"" << L + (static_cast<double>(c) + 0.5) * cw << "\" y=\""
      << T + static_cast<double>(nr) * ch + 16
      << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
      << fmt("%.6g", h.col_ticks[c]) << "</text>\n";
  s << "<text x=\"" << L + static_cast<double>(nc) * cw / 2 << "\" y=\""
    << T + static_cast<double>(nr) * ch + 40
    << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">"
    << xml_escape(h.col_label) << "</text>\n";
  s << "<text x=\"24\" y=\"" << T + static_cast<double>(nr) * ch / 2
    << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
       "transform=\"rotate(-90 24 " << T + static_cast<double>(nr) * ch / 2 << ")\">"
    << xml_escape(h.row_label) << "</text>\n";

  // colorbar, fixed 0 to 1
  const double bx = L + static_cast<double>(nc) * cw + 30, bw = 18;
  const double bh = std::max(120.0, static_cast<double>(nr) * ch);
  for (int i = 0; i < 64; ++i) {
    int cr, cg, cb;
    ramp_color(1.0 - i / 63.0, cr, cg, cb);
    s << "<rect x=\"" << bx << "\" y=\"" << T + i * bh / 64 << "\" width=\"" << bw
      << "\" height=\"" << bh / 64 + 0.5 << "\" fill=\"rgb(" << cr << ',' << cg << ',' << cb
      << ")\"/>\n";
  }
  for (int i = 0; i <= 2; ++i)
    s << "<text x=\"" << bx + bw + 6 << "\" y=\"" << T + bh - i * bh / 2 + 4
      << "\" font-size=\"11\" font-family=\"sans-serif\">" << fmt("%.1f", i * 0.5)
      << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace vbsim
