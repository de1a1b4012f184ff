#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <iostream>

#include "degmap/convexify.hpp"
#include "degmap/error.hpp"
#include "degmap/io.hpp"
#include "degmap/reference.hpp"
#include "test_util.hpp"

using namespace degmap;

namespace {

struct DataDirGuard {
  DataDirGuard() { set_reference_data_dir(testutil::source_path("data")); }
  ~DataDirGuard() { set_reference_data_dir(""); }
};

bool has_plane(const PwaMap& pwa, double a1, double a2, double a3) {
  for (const Plane& pl : pwa.planes())
    if (pl.a1 == a1 && pl.a2 == a2 && pl.a3 == a3) return true;
  return false;
}

}  // namespace

TEST_CASE("bundled tables load verbatim") {
  DataDirGuard guard;

  ReferenceChemistry lfp = load_reference(Chemistry::LFP);
  REQUIRE(lfp.pwa.plane_count() == 18);
  CHECK(lfp.cathode == "LiFePO4");
  CHECK(lfp.pwa.planes()[0].a1 == -3.452e-05);
  CHECK(lfp.pwa.planes()[0].a2 == -7.058e-04);
  CHECK(lfp.pwa.planes()[0].a3 == -3.291e-07);
  CHECK(lfp.pwa.planes()[17].a1 == 1.064e-05);
  CHECK(lfp.pwa.planes()[17].a2 == 2.010e-05);
  CHECK(lfp.pwa.planes()[17].a3 == -1.760e-05);
  CHECK_FALSE(lfp.provenance.empty());

  ReferenceChemistry nmc = load_reference("nmc_lmo");
  REQUIRE(nmc.pwa.plane_count() == 12);
  CHECK(nmc.pwa.planes()[0].a1 == -1.608e-04);
  CHECK(nmc.pwa.planes()[11].a1 == 2.083e-04);
  CHECK(nmc.pwa.planes()[11].a2 == 1.150e-03);
  CHECK(nmc.pwa.planes()[11].a3 == -1.265e-03);

  ReferenceChemistry lco = load_reference("lco");
  REQUIRE(lco.pwa.plane_count() == 13);
  CHECK(has_plane(lco.pwa, -1.156e-04, -1.231e-03, 1.354e-04));
  CHECK(lco.pwa.planes()[12].a1 == 3.081e-07);
  CHECK(lco.pwa.planes()[12].a2 == -9.033e-07);
  CHECK(lco.pwa.planes()[12].a3 == 1.946e-07);

  CHECK_THROWS_AS(load_reference("nca"), Error);
}

TEST_CASE("duplicated rows in the source tables survive loading") {
  DataDirGuard guard;
  ReferenceChemistry lfp = load_reference(Chemistry::LFP);
  // Three duplicate pairs as printed; dedup is a separate, explicit step.
  CHECK(lfp.pwa.duplicate_count() == 3);
  CHECK(lfp.pwa.deduplicated().plane_count() == 15);
  ReferenceChemistry nmc = load_reference(Chemistry::NMC_LMO);
  CHECK(nmc.pwa.duplicate_count() == 2);
}

TEST_CASE("power-sign symmetry of the LFP and NMC/LMO tables") {
  DataDirGuard guard;
  for (const char* id : {"lfp", "nmc_lmo"}) {
    ReferenceChemistry chem = load_reference(id);
    for (const Plane& pl : chem.pwa.planes()) {
      if (pl.a1 == 0.0) continue;
      CHECK(has_plane(chem.pwa, -pl.a1, pl.a2, pl.a3));
    }
  }
}

TEST_CASE("data directory resolution") {
  set_reference_data_dir("");
  CHECK_FALSE(reference_data_dir().empty());  // compiled default

  set_reference_data_dir("/tmp/degmap-override");
  CHECK(reference_data_dir() == "/tmp/degmap-override");

  setenv("DEGMAP_DATA_DIR", "/tmp/degmap-env", 1);
  CHECK(reference_data_dir() == "/tmp/degmap-env");  // env wins
  unsetenv("DEGMAP_DATA_DIR");
  set_reference_data_dir("");
}

TEST_CASE("malformed tables are rejected") {
  std::string dir = "/tmp/degmap-bad-data";
  std::system(("mkdir -p " + dir).c_str());
  io::write_file(dir + "/lfp.csv",
                 "a1,a2_per_h,a3_per_h\n1e-5,2e-5,3e-5\n");  // wrong count
  set_reference_data_dir(dir);
  CHECK_THROWS_AS(load_reference(Chemistry::LFP), Error);
  set_reference_data_dir("");
}

TEST_CASE("chemistry comparison over a schedule") {
  DataDirGuard guard;
  ReferenceChemistry lfp = load_reference(Chemistry::LFP);
  BatteryConfig tiny{1, 1, 1.0, 1.0};  // C_E = 0.001 kWh
  const double c_e = energy_capacity_kwh(tiny);

  // One hour at rest with E = 0: constant integrand.
  std::vector<io::SchedulePoint> rest;
  for (int k = 0; k < 4; ++k) rest.push_back({0.25 * k, 0.0, 0.0});
  auto fades = compare_chemistries({{lfp, tiny}}, rest);
  REQUIRE(fades.size() == 1);
  CHECK(fades[0].fade_kwh == doctest::Approx(3.049e-07 * c_e).epsilon(1e-12));
  CHECK(fades[0].negative_steps == 0);

  // Mid-SoE rest sits on the negative part of the LFP surface.
  std::vector<io::SchedulePoint> mid;
  for (int k = 0; k < 4; ++k) mid.push_back({0.25 * k, 0.0, 0.5 * c_e});
  auto neg = compare_chemistries({{lfp, tiny}}, mid);
  CHECK(neg[0].negative_steps == 4);
  CHECK(neg[0].fade_kwh < 0.0);

  // Empty schedule integrates to zero.
  auto none = compare_chemistries({{lfp, tiny}}, {});
  CHECK(none[0].fade_kwh == 0.0);
}

TEST_CASE("pointwise dominance orders cumulative fade") {
  BatteryConfig tiny{1, 1, 1.0, 1.0};
  ReferenceChemistry low{Chemistry::LFP, "A", PwaMap({Plane{0, 0, 1e-6}}), ""};
  ReferenceChemistry high{Chemistry::LCO, "B", PwaMap({Plane{0, 0, 2e-6}}), ""};
  std::vector<io::SchedulePoint> sched;
  for (int k = 0; k < 5; ++k)
    sched.push_back({0.5 * k, 0.2 * k - 0.4, 0.0005});
  auto fades = compare_chemistries({{low, tiny}, {high, tiny}}, sched);
  CHECK(fades[0].fade_kwh < fades[1].fade_kwh);
}

TEST_CASE("schedule validation") {
  BatteryConfig tiny{1, 1, 1.0, 1.0};
  ReferenceChemistry flat{Chemistry::LFP, "A", PwaMap({Plane{0, 0, 1e-6}}), ""};

  std::vector<io::SchedulePoint> bad_soe{{0.0, 0.0, 0.002}, {1.0, 0.0, 0.002}};
  CHECK_THROWS_AS(compare_chemistries({{flat, tiny}}, bad_soe), Error);

  std::vector<io::SchedulePoint> ragged{{0.0, 0, 0}, {1.0, 0, 0}, {1.5, 0, 0}};
  CHECK_THROWS_AS(compare_chemistries({{flat, tiny}}, ragged), Error);

  std::vector<io::SchedulePoint> lone{{0.0, 0, 0}};
  CHECK_THROWS_AS(compare_chemistries({{flat, tiny}}, lone), Error);
}

TEST_CASE("axis-sensitivity diagnostic") {
  DataDirGuard guard;
  for (const char* id : {"lfp", "nmc_lmo", "lco"}) {
    ReferenceChemistry chem = load_reference(id);
    AxisSensitivity s = pwa_axis_sensitivity(chem.pwa);
    CHECK(s.mean_abs_power_slope >= 0.0);
    CHECK(s.mean_abs_soe_slope >= 0.0);
    CHECK(std::isfinite(s.mean_abs_power_slope));
    CHECK(std::isfinite(s.mean_abs_soe_slope));
    // Informational: relative axis sensitivities of the bundled surfaces.
    std::cout << id << " mean |d/d(P/CE)| = " << s.mean_abs_power_slope
              << ", mean |d/dE_n| = " << s.mean_abs_soe_slope << "\n";
  }
}
