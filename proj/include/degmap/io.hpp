#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "degmap/linalg.hpp"
#include "degmap/pattern.hpp"
#include "degmap/types.hpp"

namespace degmap::io {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);
/// Same, forced to scientific notation (the plane-table convention).
std::string format_double_sci(double v);

double parse_double(const std::string& text);

// ---- PWA plane tables: CSV with header a1,a2_per_h,a3_per_h -------------

PwaMap pwa_from_csv(const std::string& text);
std::string pwa_to_csv(const PwaMap& pwa);
PwaMap read_pwa_csv(const std::string& path);
void write_pwa_csv(const std::string& path, const PwaMap& pwa);

// ---- Degradation / normalized map and config JSON ------------------------

DegradationMap map_from_json(const std::string& text);
std::string map_to_json(const DegradationMap& map);
DegradationMap read_map_json(const std::string& path);
void write_map_json(const std::string& path, const DegradationMap& map);

NormalizedMap nmap_from_json(const std::string& text);
std::string nmap_to_json(const NormalizedMap& nmap);
NormalizedMap read_nmap_json(const std::string& path);
void write_nmap_json(const std::string& path, const NormalizedMap& nmap);

BatteryConfig config_from_json(const std::string& text);
std::string config_to_json(const BatteryConfig& config);
BatteryConfig read_config_json(const std::string& path);

// ---- Cycle-test CSV: i_bat_a,c_q_ah,dod,n_cyc,q_s_ah ---------------------

/// Raw rows grouped by current rate (one group per distinct i_bat_a, in
/// order of first appearance); grids are attached by the caller.
struct RawCycleGroup {
  double i_bat_a = 0.0;
  double cell_capacity_ah = 0.0;
  std::vector<CycleTestRecord> records;
};

std::vector<RawCycleGroup> cycles_from_csv(const std::string& text);
std::vector<RawCycleGroup> read_cycles_csv(const std::string& path);

// ---- Analytic-model inputs ------------------------------------------------

std::array<double, 7> betas_from_json(const std::string& text);
std::array<double, 7> read_betas_json(const std::string& path);

/// OCV curve CSV with header soc,v_oc.
std::pair<std::vector<double>, std::vector<double>> ocv_from_csv(const std::string& text);
std::pair<std::vector<double>, std::vector<double>> read_ocv_csv(const std::string& path);

// ---- Trajectories ---------------------------------------------------------

struct PricePoint {
  double t_h = 0.0;
  double price = 0.0;
};
std::vector<PricePoint> prices_from_csv(const std::string& text);
std::vector<PricePoint> read_prices_csv(const std::string& path);

struct SchedulePoint {
  double t_h = 0.0;
  double p_bat_kw = 0.0;
  double e_kwh = 0.0;
};
std::vector<SchedulePoint> schedule_from_csv(const std::string& text);
std::vector<SchedulePoint> read_schedule_csv(const std::string& path);

// ---- Grid dumps of map / PWA surfaces ------------------------------------

struct PlotSurfaceDump {
  std::vector<double> x;
  std::vector<double> y;
  linalg::Matrix z;  // rows = y, cols = x
  std::string x_label;
  std::string y_label;
  std::string z_label;
};

PlotSurfaceDump dump_surface(const NormalizedMap& nmap);
PlotSurfaceDump dump_surface(const PwaMap& pwa, double x_min, double x_max, int nx,
                             double y_min, double y_max, int ny);
std::string surface_to_csv(const PlotSurfaceDump& dump);

// ---- Files ----------------------------------------------------------------

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace degmap::io
