#include "degmap/reference.hpp"

#include <cmath>
#include <cstdlib>
#include <random>

#include "degmap/convexify.hpp"
#include "degmap/error.hpp"

#ifndef DEGMAP_DEFAULT_DATA_DIR
#define DEGMAP_DEFAULT_DATA_DIR "data"
#endif

namespace degmap {

namespace {

std::string& override_dir() {
  static std::string dir;
  return dir;
}

struct ChemistryInfo {
  Chemistry id;
  const char* key;
  const char* file;
  const char* cathode;
  int plane_count;
  const char* provenance;
};

const ChemistryInfo kChemistries[] = {
    {Chemistry::LFP, "lfp", "lfp.csv", "LiFePO4", 18,
     "Plane parameters derived from the empirical capacity-fade model of "
     "Forman et al. (2012) for a LiFePO4 cell."},
    {Chemistry::NMC_LMO, "nmc_lmo", "nmc_lmo.csv", "LiMnNiCo/LiMn2O4", 12,
     "Plane parameters derived from the cycle-test data of Wang et al. (2014) "
     "for a LiMnNiCo/LiMn2O4 cell."},
    {Chemistry::LCO, "lco", "lco.csv", "LiCoO2", 13,
     "Plane parameters derived from DUALFOIL (Fuller, Doyle, Newman, 1994) "
     "simulations of a LiCoO2 cell."},
};

const ChemistryInfo& info_for(Chemistry id) {
  for (const ChemistryInfo& c : kChemistries)
    if (c.id == id) return c;
  fail(ErrorKind::NotFound, "unknown chemistry id");
}

// Midpoint convexity spot check; max-of-planes surfaces satisfy it up to
// rounding, so a violation means a corrupted table.
void check_convexity(const PwaMap& pwa, const std::string& name) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> px(-1.0, 1.0), ex(0.0, 1.0);
  for (int trial = 0; trial < 256; ++trial) {
    double p1 = px(rng), e1 = ex(rng), p2 = px(rng), e2 = ex(rng);
    double mid = eval_pwa(pwa, 0.5 * (p1 + p2), 0.5 * (e1 + e2), 1.0).value;
    double avg = 0.5 * (eval_pwa(pwa, p1, e1, 1.0).value +
                        eval_pwa(pwa, p2, e2, 1.0).value);
    require(mid <= avg + 1e-12, ErrorKind::ParseError,
            "reference table '" + name + "' violates convexity");
  }
}

}  // namespace

Chemistry chemistry_from_string(const std::string& id) {
  for (const ChemistryInfo& c : kChemistries)
    if (id == c.key) return c.id;
  fail(ErrorKind::NotFound, "unknown chemistry '" + id + "' (expected lfp, nmc_lmo, lco)");
}

std::string chemistry_to_string(Chemistry id) { return info_for(id).key; }

std::string reference_data_dir() {
  if (const char* env = std::getenv("DEGMAP_DATA_DIR"); env && *env) return env;
  if (!override_dir().empty()) return override_dir();
  return DEGMAP_DEFAULT_DATA_DIR;
}

void set_reference_data_dir(const std::string& dir) { override_dir() = dir; }

ReferenceChemistry load_reference(Chemistry id) {
  const ChemistryInfo& info = info_for(id);
  const std::string path = reference_data_dir() + "/" + info.file;
  PwaMap pwa = io::read_pwa_csv(path);
  require(pwa.plane_count() == info.plane_count, ErrorKind::ParseError,
          "reference table '" + path + "' has " + std::to_string(pwa.plane_count()) +
              " planes, expected " + std::to_string(info.plane_count));
  check_convexity(pwa, info.key);
  return ReferenceChemistry{id, info.cathode, std::move(pwa), info.provenance};
}

ReferenceChemistry load_reference(const std::string& id) {
  return load_reference(chemistry_from_string(id));
}

std::vector<ChemistryFade> compare_chemistries(
    const std::vector<std::pair<ReferenceChemistry, BatteryConfig>>& systems,
    const std::vector<io::SchedulePoint>& schedule) {
  std::vector<ChemistryFade> out;

  double dt = 0.0;
  if (schedule.size() >= 2) {
    dt = schedule[1].t_h - schedule[0].t_h;
    require(dt > 0.0, ErrorKind::InvalidTrajectory, "schedule times must increase");
    for (size_t i = 1; i < schedule.size(); ++i) {
      double step = schedule[i].t_h - schedule[i - 1].t_h;
      require(std::abs(step - dt) <= 1e-9 * std::max(1.0, dt),
              ErrorKind::InvalidTrajectory, "schedule timesteps must be uniform");
    }
  } else if (schedule.size() == 1) {
    fail(ErrorKind::InvalidTrajectory,
         "single-point schedule has no timestep; provide at least two points");
  }

  for (const auto& [chem, config] : systems) {
    const double c_e = energy_capacity_kwh(config);
    ChemistryFade fade{chem.id, 0.0, 0};
    for (const io::SchedulePoint& pt : schedule) {
      require(pt.e_kwh >= 0.0 && pt.e_kwh <= c_e, ErrorKind::InvalidTrajectory,
              "schedule SoE outside [0, C_E]");
      double j = eval_pwa(chem.pwa, pt.p_bat_kw, pt.e_kwh, c_e).value;
      if (j < 0.0) ++fade.negative_steps;
      fade.fade_kwh += j * dt;
    }
    out.push_back(fade);
  }
  return out;
}

AxisSensitivity pwa_axis_sensitivity(const PwaMap& pwa, int samples_per_axis) {
  require(samples_per_axis >= 2, ErrorKind::InvalidArgument,
          "need at least 2 samples per axis");
  AxisSensitivity s;
  int count = 0;
  for (int i = 0; i < samples_per_axis; ++i)
    for (int j = 0; j < samples_per_axis; ++j) {
      double p = -1.0 + 2.0 * i / (samples_per_axis - 1);
      double e = static_cast<double>(j) / (samples_per_axis - 1);
      const Plane& active = pwa.planes()[eval_pwa(pwa, p, e, 1.0).plane];
      s.mean_abs_power_slope += std::abs(active.a1);
      s.mean_abs_soe_slope += std::abs(active.a2);
      ++count;
    }
  s.mean_abs_power_slope /= count;
  s.mean_abs_soe_slope /= count;
  return s;
}

}  // namespace degmap
