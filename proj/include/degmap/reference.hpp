#pragma once

#include <string>
#include <vector>

#include "degmap/io.hpp"
#include "degmap/types.hpp"

namespace degmap {

enum class Chemistry { LFP, NMC_LMO, LCO };

Chemistry chemistry_from_string(const std::string& id);  // "lfp" | "nmc_lmo" | "lco"
std::string chemistry_to_string(Chemistry id);

/// One bundled plane table with its lineage.
struct ReferenceChemistry {
  Chemistry id = Chemistry::LFP;
  std::string cathode;
  PwaMap pwa;
  std::string provenance;
};

/// Directory holding the bundled plane tables. The DEGMAP_DATA_DIR
/// environment variable overrides everything; otherwise a directory set via
/// set_reference_data_dir(), falling back to the build-time default.
std::string reference_data_dir();
void set_reference_data_dir(const std::string& dir);

/// Loads a bundled table verbatim (duplicated rows preserved) and validates
/// plane count and convexity of the induced surface.
ReferenceChemistry load_reference(Chemistry id);
ReferenceChemistry load_reference(const std::string& id);

struct ChemistryFade {
  Chemistry id = Chemistry::LFP;
  double fade_kwh = 0.0;
  int negative_steps = 0;  // steps where the PWA surface evaluated negative
};

/// Cumulative capacity fade of each (chemistry, system) pair over a uniform
/// power/SoE trajectory, rectangle rule with the schedule's timestep.
std::vector<ChemistryFade> compare_chemistries(
    const std::vector<std::pair<ReferenceChemistry, BatteryConfig>>& systems,
    const std::vector<io::SchedulePoint>& schedule);

/// Mean absolute slope of the PWA surface along each normalized axis
/// (power spans [-1,1] 1/h, SoE spans [0,1]), sampled on a regular grid.
/// A diagnostic for whether current or SoE drives degradation.
struct AxisSensitivity {
  double mean_abs_power_slope = 0.0;  // |d/dx|, active-plane a1
  double mean_abs_soe_slope = 0.0;    // |d/dy|, active-plane a2
};

AxisSensitivity pwa_axis_sensitivity(const PwaMap& pwa, int samples_per_axis = 21);

}  // namespace degmap
