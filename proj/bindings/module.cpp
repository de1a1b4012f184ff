#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "degmap/analytic.hpp"
#include "degmap/cli.hpp"
#include "degmap/convexify.hpp"
#include "degmap/dispatch.hpp"
#include "degmap/error.hpp"
#include "degmap/io.hpp"
#include "degmap/nnls.hpp"
#include "degmap/pattern.hpp"
#include "degmap/reference.hpp"
#include "degmap/scaling.hpp"
#include "degmap/types.hpp"

namespace py = pybind11;
using namespace degmap;

namespace {

linalg::Matrix matrix_from_lists(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  linalg::Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      fail(ErrorKind::InvalidArgument, "ragged matrix");
    for (size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  }
  return m;
}

std::vector<std::vector<double>> matrix_to_lists(const linalg::Matrix& m) {
  std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Battery degradation maps, convex PWA cost surfaces, dispatch demo";

  py::register_exception<Error>(m, "DegmapError");

  // ---- core types ----
  py::class_<SocGrid>(m, "SocGrid")
      .def(py::init<std::vector<double>>(), py::arg("band_centers"))
      .def_property_readonly("band_centers", &SocGrid::band_centers)
      .def_property_readonly("band_count", &SocGrid::band_count);

  py::class_<CurrentGrid>(m, "CurrentGrid")
      .def(py::init<std::vector<double>>(), py::arg("rates_a"))
      .def_property_readonly("rates", &CurrentGrid::rates)
      .def_property_readonly("rate_count", &CurrentGrid::rate_count);

  py::class_<DegradationMap>(m, "DegradationMap")
      .def(py::init([](const SocGrid& soc, const CurrentGrid& rates,
                       const std::vector<std::vector<double>>& values, double cq) {
             return DegradationMap(soc, rates, matrix_from_lists(values), cq);
           }),
           py::arg("soc_grid"), py::arg("current_grid"), py::arg("side_current"),
           py::arg("cell_capacity_ah"))
      .def_property_readonly("soc_grid", &DegradationMap::soc_grid)
      .def_property_readonly("current_grid", &DegradationMap::current_grid)
      .def_property_readonly("cell_capacity_ah", &DegradationMap::cell_capacity_ah)
      .def_property_readonly("side_current", [](const DegradationMap& map) {
        return matrix_to_lists(map.side_current());
      });

  py::class_<NormalizedMap>(m, "NormalizedMap")
      .def(py::init([](const std::vector<double>& soe, const std::vector<double>& power,
                       const std::vector<std::vector<double>>& values) {
             return NormalizedMap(soe, power, matrix_from_lists(values));
           }),
           py::arg("soe_axis"), py::arg("power_axis"), py::arg("values"))
      .def_property_readonly("soe_axis", &NormalizedMap::soe_axis)
      .def_property_readonly("power_axis", &NormalizedMap::power_axis)
      .def_property_readonly("values", [](const NormalizedMap& nmap) {
        return matrix_to_lists(nmap.values());
      });

  py::class_<Plane>(m, "Plane")
      .def(py::init<double, double, double>(), py::arg("a1"), py::arg("a2"),
           py::arg("a3"))
      .def_readonly("a1", &Plane::a1)
      .def_readonly("a2", &Plane::a2)
      .def_readonly("a3", &Plane::a3)
      .def("__repr__", [](const Plane& p) {
        return "Plane(" + io::format_double(p.a1) + ", " + io::format_double(p.a2) +
               ", " + io::format_double(p.a3) + ")";
      });

  py::class_<PwaMap>(m, "PwaMap")
      .def(py::init<std::vector<Plane>>(), py::arg("planes"))
      .def_property_readonly("planes", &PwaMap::planes)
      .def_property_readonly("plane_count", &PwaMap::plane_count)
      .def("deduplicated", &PwaMap::deduplicated, py::arg("tol") = 1e-14);

  py::class_<BatteryConfig>(m, "BatteryConfig")
      .def(py::init([](int n_parallel, int n_series, double mean_ocv_v,
                       double cell_capacity_ah) {
             BatteryConfig c{n_parallel, n_series, mean_ocv_v, cell_capacity_ah};
             c.validate();
             return c;
           }),
           py::arg("n_parallel"), py::arg("n_series"), py::arg("mean_ocv_v"),
           py::arg("cell_capacity_ah"))
      .def_readonly("n_parallel", &BatteryConfig::n_parallel)
      .def_readonly("n_series", &BatteryConfig::n_series)
      .def_readonly("mean_ocv_v", &BatteryConfig::mean_ocv_v)
      .def_readonly("cell_capacity_ah", &BatteryConfig::cell_capacity_ah);

  m.def("uniform_soc_grid", &uniform_soc_grid, py::arg("band_count"));
  m.def("energy_capacity_kwh", &energy_capacity_kwh, py::arg("config"));

  // ---- pattern reconstruction ----
  py::class_<CycleTestRecord>(m, "CycleTestRecord")
      .def(py::init([](double dod, double n_cyc, double q_s_ah) {
             return CycleTestRecord{dod, n_cyc, q_s_ah};
           }),
           py::arg("dod"), py::arg("n_cyc"), py::arg("q_s_ah"))
      .def_readonly("dod", &CycleTestRecord::dod)
      .def_readonly("n_cyc", &CycleTestRecord::n_cyc)
      .def_readonly("q_s_ah", &CycleTestRecord::q_s_ah);

  py::class_<CycleTestSet>(m, "CycleTestSet")
      .def(py::init<double, double, std::vector<CycleTestRecord>, SocGrid>(),
           py::arg("i_bat_a"), py::arg("cell_capacity_ah"), py::arg("records"),
           py::arg("soc_grid"))
      .def_property_readonly("i_bat_a", &CycleTestSet::i_bat_a)
      .def_property_readonly("records", &CycleTestSet::records);

  py::class_<ColumnLabel>(m, "ColumnLabel")
      .def_readonly("soc_band_center", &ColumnLabel::soc_band_center)
      .def_readonly("current_rate_a", &ColumnLabel::current_rate_a);

  py::class_<PatternSystem>(m, "PatternSystem")
      .def_property_readonly("matrix", [](const PatternSystem& s) {
        return matrix_to_lists(s.matrix);
      })
      .def_readonly("rhs_ah", &PatternSystem::rhs_ah)
      .def_readonly("column_labels", &PatternSystem::column_labels)
      .def_readonly("cell_capacity_ah", &PatternSystem::cell_capacity_ah)
      .def_readonly("coverage_divergences", &PatternSystem::coverage_divergences);

  m.def("pattern_count", &pattern_count, py::arg("record"));
  m.def("band_traverse_time_h", &band_traverse_time_h, py::arg("cell_capacity_ah"),
        py::arg("i_bat_a"), py::arg("band_count"));
  m.def("covered_bands", &covered_bands, py::arg("dod"), py::arg("soc_grid"));
  m.def("centered_band_span", &centered_band_span, py::arg("dod"),
        py::arg("band_count"));
  m.def("build_pattern_system", &build_pattern_system, py::arg("test"));
  m.def("assemble_multirate", &assemble_multirate, py::arg("systems"));

  // ---- NNLS / identification ----
  py::class_<NnlsSolution>(m, "NnlsSolution")
      .def_readonly("x", &NnlsSolution::x)
      .def_readonly("residual_norm", &NnlsSolution::residual_norm)
      .def_readonly("active_set", &NnlsSolution::active_set)
      .def_readonly("iterations", &NnlsSolution::iterations);

  py::class_<MapSlice>(m, "MapSlice")
      .def_readonly("current_rate_a", &MapSlice::current_rate_a)
      .def_readonly("soc_centers", &MapSlice::soc_centers)
      .def_readonly("side_current", &MapSlice::side_current);

  py::class_<IdentifiedMap>(m, "IdentifiedMap")
      .def_readonly("map", &IdentifiedMap::map)
      .def_readonly("slices", &IdentifiedMap::slices)
      .def_readonly("solution", &IdentifiedMap::solution);

  m.def(
      "solve_nnls",
      [](const std::vector<std::vector<double>>& matrix, const std::vector<double>& rhs,
         double tol) { return solve_nnls(matrix_from_lists(matrix), rhs, tol); },
      py::arg("matrix"), py::arg("rhs"), py::arg("tol") = 1e-10);
  m.def(
      "solve_nnls_system",
      [](const PatternSystem& s, double tol) { return solve_nnls(s, tol); },
      py::arg("system"), py::arg("tol") = 1e-10);
  m.def("solve_map", &solve_map, py::arg("system"), py::arg("tol") = 1e-10);

  // ---- analytic discretization ----
  py::class_<AnalyticDegradationFn>(m, "AnalyticDegradationFn")
      .def(py::init([](const std::vector<double>& betas) {
             if (betas.size() != 7)
               fail(ErrorKind::InvalidArgument, "need exactly 7 coefficients");
             AnalyticDegradationFn fn;
             for (size_t i = 0; i < 7; ++i) fn.betas[i] = betas[i];
             return fn;
           }),
           py::arg("betas"))
      .def_property_readonly("betas", [](const AnalyticDegradationFn& fn) {
        return std::vector<double>(fn.betas.begin(), fn.betas.end());
      });

  py::class_<OcvCurve>(m, "OcvCurve")
      .def(py::init<std::vector<double>, std::vector<double>>(),
           py::arg("soc_points"), py::arg("voltage_points"))
      .def("voltage_at", &OcvCurve::voltage_at, py::arg("soc"));

  py::class_<DiscretizeResult>(m, "DiscretizeResult")
      .def_readonly("map", &DiscretizeResult::map)
      .def_readonly("clamped_count", &DiscretizeResult::clamped_count);

  m.def("eval_side_current", &eval_side_current, py::arg("fn"), py::arg("i_bat_a"),
        py::arg("v_oc"));
  m.def("discretize", &discretize, py::arg("fn"), py::arg("curve"),
        py::arg("soc_grid"), py::arg("current_grid"), py::arg("cell_capacity_ah"));

  // ---- scaling ----
  py::class_<MapSample>(m, "MapSample")
      .def_readonly("value", &MapSample::value)
      .def_readonly("clamped", &MapSample::clamped);

  py::class_<EnergyRate>(m, "EnergyRate")
      .def_readonly("kwh_per_h", &EnergyRate::kwh_per_h)
      .def_readonly("clamped", &EnergyRate::clamped);

  m.def("sample_side_current", &sample_side_current, py::arg("map"), py::arg("q_ah"),
        py::arg("i_a"));
  m.def("cell_degradation_energy", &cell_degradation_energy, py::arg("map"),
        py::arg("q_c_ah"), py::arg("i_c_a"), py::arg("v_oc_mean"));
  m.def("system_degradation", &system_degradation, py::arg("map"), py::arg("config"),
        py::arg("q_abs_ah"), py::arg("i_bat_a"));
  m.def("normalize_map", &normalize_map, py::arg("map"), py::arg("v_oc_mean"),
        py::arg("soe_samples") = 21, py::arg("power_samples") = 21);
  m.def("replicate_parallel", &replicate_parallel, py::arg("map"), py::arg("n"));

  // ---- convexify ----
  py::class_<PwaValue>(m, "PwaValue")
      .def_readonly("value", &PwaValue::value)
      .def_readonly("plane", &PwaValue::plane);

  py::class_<PwaFitError>(m, "PwaFitError")
      .def_readonly("rmse_per_h", &PwaFitError::rmse_per_h)
      .def_readonly("nrmse", &PwaFitError::nrmse)
      .def_readonly("nrmse_defined", &PwaFitError::nrmse_defined);

  m.def("lower_convex_hull_pwa", &lower_convex_hull_pwa, py::arg("nmap"));
  m.def("eval_pwa", &eval_pwa, py::arg("pwa"), py::arg("p_bat_kw"), py::arg("e_kwh"),
        py::arg("c_e_kwh"));
  m.def("pwa_fit_error", &pwa_fit_error, py::arg("nmap"), py::arg("pwa"));

  // ---- reference data ----
  py::enum_<Chemistry>(m, "Chemistry")
      .value("LFP", Chemistry::LFP)
      .value("NMC_LMO", Chemistry::NMC_LMO)
      .value("LCO", Chemistry::LCO);

  py::class_<ReferenceChemistry>(m, "ReferenceChemistry")
      .def_readonly("id", &ReferenceChemistry::id)
      .def_readonly("cathode", &ReferenceChemistry::cathode)
      .def_readonly("pwa", &ReferenceChemistry::pwa)
      .def_readonly("provenance", &ReferenceChemistry::provenance);

  py::class_<io::SchedulePoint>(m, "SchedulePoint")
      .def(py::init([](double t_h, double p_bat_kw, double e_kwh) {
             return io::SchedulePoint{t_h, p_bat_kw, e_kwh};
           }),
           py::arg("t_h"), py::arg("p_bat_kw"), py::arg("e_kwh"))
      .def_readonly("t_h", &io::SchedulePoint::t_h)
      .def_readonly("p_bat_kw", &io::SchedulePoint::p_bat_kw)
      .def_readonly("e_kwh", &io::SchedulePoint::e_kwh);

  py::class_<ChemistryFade>(m, "ChemistryFade")
      .def_readonly("id", &ChemistryFade::id)
      .def_readonly("fade_kwh", &ChemistryFade::fade_kwh)
      .def_readonly("negative_steps", &ChemistryFade::negative_steps);

  m.def("set_reference_data_dir", &set_reference_data_dir, py::arg("dir"));
  m.def("reference_data_dir", &reference_data_dir);
  m.def("load_reference",
        py::overload_cast<const std::string&>(&load_reference), py::arg("id"));
  m.def("compare_chemistries", &compare_chemistries, py::arg("systems"),
        py::arg("schedule"));

  // ---- dispatch ----
  py::class_<DispatchProblem>(m, "DispatchProblem")
      .def(py::init([](int horizon, double dt_h, const std::vector<double>& prices,
                       double p_min_kw, double p_max_kw, double e0_kwh, double c_e_kwh,
                       double eta_charge, double eta_discharge, const PwaMap& pwa,
                       double degradation_price) {
             DispatchProblem p{horizon, dt_h,       prices,        p_min_kw,
                               p_max_kw, e0_kwh,    c_e_kwh,       eta_charge,
                               eta_discharge, pwa, degradation_price};
             p.validate();
             return p;
           }),
           py::arg("horizon"), py::arg("dt_h"), py::arg("prices"), py::arg("p_min_kw"),
           py::arg("p_max_kw"), py::arg("e0_kwh"), py::arg("c_e_kwh"),
           py::arg("eta_charge"), py::arg("eta_discharge"), py::arg("pwa"),
           py::arg("degradation_price"));

  py::class_<DispatchSolution>(m, "DispatchSolution")
      .def_readonly("power_kw", &DispatchSolution::power_kw)
      .def_readonly("soe_kwh", &DispatchSolution::soe_kwh)
      .def_readonly("deg_cost_rate", &DispatchSolution::deg_cost_rate)
      .def_readonly("objective", &DispatchSolution::objective)
      .def_readonly("duality_gap", &DispatchSolution::duality_gap)
      .def_readonly("iterations", &DispatchSolution::iterations)
      .def_readonly("simultaneous_steps", &DispatchSolution::simultaneous_steps);

  m.def("solve_dispatch", &solve_dispatch, py::arg("problem"));

  // ---- io ----
  m.def("read_pwa_csv", &io::read_pwa_csv, py::arg("path"));
  m.def("write_pwa_csv", &io::write_pwa_csv, py::arg("path"), py::arg("pwa"));
  m.def("read_map_json", &io::read_map_json, py::arg("path"));
  m.def("write_map_json", &io::write_map_json, py::arg("path"), py::arg("map"));
  m.def("read_nmap_json", &io::read_nmap_json, py::arg("path"));
  m.def("write_nmap_json", &io::write_nmap_json, py::arg("path"), py::arg("nmap"));

  m.def("run_cli", [](const std::vector<std::string>& args) {
    return run_cli(args, std::cout, std::cerr);
  });

#ifdef VERSION_INFO
#define DEGMAP_STR_INNER(x) #x
#define DEGMAP_STR(x) DEGMAP_STR_INNER(x)
  m.attr("__version__") = DEGMAP_STR(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
