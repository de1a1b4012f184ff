#include "degmap/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "degmap/convexify.hpp"
#include "degmap/error.hpp"

namespace degmap::io {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::string format_double_sci(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific);
  return std::string(buf, r.ptr);
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (*(last - 1) == ' ' || *(last - 1) == '\t' || *(last - 1) == '\r'))
    --last;
  auto r = std::from_chars(first, last, v);
  require(r.ec == std::errc() && r.ptr == last, ErrorKind::ParseError,
          "not a number: '" + text + "'");
  return v;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

/// Data lines of a CSV document: comments (#...) and blank lines dropped,
/// the first remaining line checked against the expected header.
std::vector<std::vector<std::string>> csv_rows(const std::string& text,
                                               const std::string& header) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  bool header_seen = false;
  while (std::getline(in, line)) {
    std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    if (!header_seen) {
      require(s == header, ErrorKind::ParseError,
              "expected CSV header '" + header + "', got '" + s + "'");
      header_seen = true;
      continue;
    }
    rows.push_back(split(s, ','));
  }
  require(header_seen, ErrorKind::ParseError, "missing CSV header '" + header + "'");
  return rows;
}

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  require(!j.is_discarded(), ErrorKind::ParseError, "malformed JSON");
  return j;
}

std::vector<double> number_array(const json& j, const std::string& key) {
  require(j.contains(key) && j[key].is_array(), ErrorKind::ParseError,
          "missing array '" + key + "'");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    require(v.is_number(), ErrorKind::ParseError, "non-numeric entry in '" + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

linalg::Matrix number_matrix(const json& j, const std::string& key) {
  require(j.contains(key) && j[key].is_array() && !j[key].empty(),
          ErrorKind::ParseError, "missing matrix '" + key + "'");
  const auto& rows = j[key];
  int n_cols = -1;
  linalg::Matrix m;
  for (size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].is_array(), ErrorKind::ParseError, "matrix rows must be arrays");
    if (n_cols < 0) {
      n_cols = static_cast<int>(rows[i].size());
      m = linalg::Matrix(static_cast<int>(rows.size()), n_cols);
    }
    require(static_cast<int>(rows[i].size()) == n_cols, ErrorKind::ParseError,
            "ragged matrix in '" + key + "'");
    for (int c = 0; c < n_cols; ++c) {
      require(rows[i][c].is_number(), ErrorKind::ParseError, "non-numeric matrix entry");
      m(static_cast<int>(i), c) = rows[i][c].get<double>();
    }
  }
  return m;
}

json matrix_to_json(const linalg::Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

double number_field(const json& j, const std::string& key) {
  require(j.contains(key) && j[key].is_number(), ErrorKind::ParseError,
          "missing numeric field '" + key + "'");
  return j[key].get<double>();
}

}  // namespace

// ---- PWA CSV ---------------------------------------------------------------

PwaMap pwa_from_csv(const std::string& text) {
  auto rows = csv_rows(text, "a1,a2_per_h,a3_per_h");
  std::vector<Plane> planes;
  for (const auto& row : rows) {
    require(row.size() == 3, ErrorKind::ParseError, "PWA rows need 3 columns");
    planes.push_back(Plane{parse_double(row[0]), parse_double(row[1]),
                           parse_double(row[2])});
  }
  return PwaMap(std::move(planes));
}

std::string pwa_to_csv(const PwaMap& pwa) {
  std::string out = "# degmap pwa-csv 1\na1,a2_per_h,a3_per_h\n";
  for (const Plane& p : pwa.planes()) {
    out += format_double_sci(p.a1);
    out += ',';
    out += format_double_sci(p.a2);
    out += ',';
    out += format_double_sci(p.a3);
    out += '\n';
  }
  return out;
}

PwaMap read_pwa_csv(const std::string& path) { return pwa_from_csv(read_file(path)); }

void write_pwa_csv(const std::string& path, const PwaMap& pwa) {
  write_file(path, pwa_to_csv(pwa));
}

// ---- Map JSON ----------------------------------------------------------------

DegradationMap map_from_json(const std::string& text) {
  json j = parse_json(text);
  return DegradationMap(SocGrid(number_array(j, "soc_bands")),
                        CurrentGrid(number_array(j, "current_rates_a")),
                        number_matrix(j, "side_current_ah_per_h"),
                        number_field(j, "cell_capacity_ah"));
}

std::string map_to_json(const DegradationMap& map) {
  json j;
  j["format"] = "degmap-map/1";
  j["cell_capacity_ah"] = map.cell_capacity_ah();
  j["soc_bands"] = map.soc_grid().band_centers();
  j["current_rates_a"] = map.current_grid().rates();
  j["side_current_ah_per_h"] = matrix_to_json(map.side_current());
  return j.dump(2) + "\n";
}

DegradationMap read_map_json(const std::string& path) {
  return map_from_json(read_file(path));
}

void write_map_json(const std::string& path, const DegradationMap& map) {
  write_file(path, map_to_json(map));
}

NormalizedMap nmap_from_json(const std::string& text) {
  json j = parse_json(text);
  return NormalizedMap(number_array(j, "soe_axis"),
                       number_array(j, "power_axis_per_h"),
                       number_matrix(j, "values_per_h"));
}

std::string nmap_to_json(const NormalizedMap& nmap) {
  json j;
  j["format"] = "degmap-nmap/1";
  j["soe_axis"] = nmap.soe_axis();
  j["power_axis_per_h"] = nmap.power_axis();
  j["values_per_h"] = matrix_to_json(nmap.values());
  return j.dump(2) + "\n";
}

NormalizedMap read_nmap_json(const std::string& path) {
  return nmap_from_json(read_file(path));
}

void write_nmap_json(const std::string& path, const NormalizedMap& nmap) {
  write_file(path, nmap_to_json(nmap));
}

BatteryConfig config_from_json(const std::string& text) {
  json j = parse_json(text);
  BatteryConfig c;
  c.n_parallel = static_cast<int>(number_field(j, "n_parallel"));
  c.n_series = static_cast<int>(number_field(j, "n_series"));
  c.mean_ocv_v = number_field(j, "mean_ocv_v");
  c.cell_capacity_ah = number_field(j, "cell_capacity_ah");
  c.validate();
  return c;
}

std::string config_to_json(const BatteryConfig& config) {
  json j;
  j["n_parallel"] = config.n_parallel;
  j["n_series"] = config.n_series;
  j["mean_ocv_v"] = config.mean_ocv_v;
  j["cell_capacity_ah"] = config.cell_capacity_ah;
  return j.dump(2) + "\n";
}

BatteryConfig read_config_json(const std::string& path) {
  return config_from_json(read_file(path));
}

// ---- Cycle-test CSV ----------------------------------------------------------

std::vector<RawCycleGroup> cycles_from_csv(const std::string& text) {
  auto rows = csv_rows(text, "i_bat_a,c_q_ah,dod,n_cyc,q_s_ah");
  std::vector<RawCycleGroup> groups;
  for (const auto& row : rows) {
    require(row.size() == 5, ErrorKind::ParseError, "cycle rows need 5 columns");
    double i_bat = parse_double(row[0]);
    double c_q = parse_double(row[1]);
    CycleTestRecord rec{parse_double(row[2]), parse_double(row[3]), parse_double(row[4])};
    RawCycleGroup* group = nullptr;
    for (RawCycleGroup& g : groups)
      if (g.i_bat_a == i_bat) group = &g;
    if (!group) {
      groups.push_back(RawCycleGroup{i_bat, c_q, {}});
      group = &groups.back();
    }
    require(group->cell_capacity_ah == c_q, ErrorKind::ParseError,
            "inconsistent cell capacity within one current group");
    group->records.push_back(rec);
  }
  require(!groups.empty(), ErrorKind::ParseError, "no cycle-test rows found");
  return groups;
}

std::vector<RawCycleGroup> read_cycles_csv(const std::string& path) {
  return cycles_from_csv(read_file(path));
}

// ---- Analytic inputs -----------------------------------------------------------

std::array<double, 7> betas_from_json(const std::string& text) {
  json j = parse_json(text);
  std::vector<double> b = number_array(j, "betas");
  require(b.size() == 7, ErrorKind::ParseError, "'betas' must hold exactly 7 values");
  std::array<double, 7> out{};
  for (size_t i = 0; i < 7; ++i) out[i] = b[i];
  return out;
}

std::array<double, 7> read_betas_json(const std::string& path) {
  return betas_from_json(read_file(path));
}

std::pair<std::vector<double>, std::vector<double>> ocv_from_csv(const std::string& text) {
  auto rows = csv_rows(text, "soc,v_oc");
  std::vector<double> soc, v;
  for (const auto& row : rows) {
    require(row.size() == 2, ErrorKind::ParseError, "OCV rows need 2 columns");
    soc.push_back(parse_double(row[0]));
    v.push_back(parse_double(row[1]));
  }
  return {std::move(soc), std::move(v)};
}

std::pair<std::vector<double>, std::vector<double>> read_ocv_csv(const std::string& path) {
  return ocv_from_csv(read_file(path));
}

// ---- Trajectories ----------------------------------------------------------------

std::vector<PricePoint> prices_from_csv(const std::string& text) {
  auto rows = csv_rows(text, "t_h,price");
  std::vector<PricePoint> out;
  for (const auto& row : rows) {
    require(row.size() == 2, ErrorKind::ParseError, "price rows need 2 columns");
    out.push_back(PricePoint{parse_double(row[0]), parse_double(row[1])});
  }
  return out;
}

std::vector<PricePoint> read_prices_csv(const std::string& path) {
  return prices_from_csv(read_file(path));
}

std::vector<SchedulePoint> schedule_from_csv(const std::string& text) {
  auto rows = csv_rows(text, "t_h,p_bat_kw,e_kwh");
  std::vector<SchedulePoint> out;
  for (const auto& row : rows) {
    require(row.size() == 3, ErrorKind::ParseError, "schedule rows need 3 columns");
    out.push_back(SchedulePoint{parse_double(row[0]), parse_double(row[1]),
                                parse_double(row[2])});
  }
  return out;
}

std::vector<SchedulePoint> read_schedule_csv(const std::string& path) {
  return schedule_from_csv(read_file(path));
}

// ---- Surface dumps -----------------------------------------------------------------

PlotSurfaceDump dump_surface(const NormalizedMap& nmap) {
  PlotSurfaceDump d;
  d.x = nmap.power_axis();
  d.y = nmap.soe_axis();
  d.z = nmap.values();
  d.x_label = "p_bat_over_ce_per_h";
  d.y_label = "soe_normalized";
  d.z_label = "degradation_per_h";
  return d;
}

PlotSurfaceDump dump_surface(const PwaMap& pwa, double x_min, double x_max, int nx,
                             double y_min, double y_max, int ny) {
  require(nx >= 1 && ny >= 1, ErrorKind::InvalidArgument,
          "surface grid needs at least one sample per axis");
  require(x_min <= x_max && y_min <= y_max, ErrorKind::InvalidArgument,
          "surface grid bounds are reversed");
  PlotSurfaceDump d;
  for (int i = 0; i < nx; ++i)
    d.x.push_back(nx == 1 ? x_min : x_min + (x_max - x_min) * i / (nx - 1));
  for (int j = 0; j < ny; ++j)
    d.y.push_back(ny == 1 ? y_min : y_min + (y_max - y_min) * j / (ny - 1));
  d.z = linalg::Matrix(ny, nx);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      d.z(j, i) = eval_pwa(pwa, d.x[i], d.y[j], 1.0).value;
  d.x_label = "p_bat_over_ce_per_h";
  d.y_label = "soe_normalized";
  d.z_label = "degradation_per_h";
  return d;
}

std::string surface_to_csv(const PlotSurfaceDump& dump) {
  std::string out = "# degmap surface-csv 1\n";
  out += "# x: " + dump.x_label + "\n";
  out += "# y: " + dump.y_label + "\n";
  out += "# z: " + dump.z_label + "\n";
  out += "x,y,z\n";
  for (size_t i = 0; i < dump.x.size(); ++i)
    for (size_t j = 0; j < dump.y.size(); ++j) {
      out += format_double(dump.x[i]);
      out += ',';
      out += format_double(dump.y[j]);
      out += ',';
      out += format_double(dump.z(static_cast<int>(j), static_cast<int>(i)));
      out += '\n';
    }
  return out;
}

// ---- Files ----------------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::IoError, "cannot write '" + path + "'");
  out << content;
  require(out.good(), ErrorKind::IoError, "write failed for '" + path + "'");
}

}  // namespace degmap::io
