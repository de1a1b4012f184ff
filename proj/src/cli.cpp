#include "degmap/cli.hpp"

#include <cmath>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "degmap/analytic.hpp"
#include "degmap/convexify.hpp"
#include "degmap/dispatch.hpp"
#include "degmap/error.hpp"
#include "degmap/io.hpp"
#include "degmap/nnls.hpp"
#include "degmap/pattern.hpp"
#include "degmap/reference.hpp"
#include "degmap/scaling.hpp"
#include "degmap/types.hpp"

namespace degmap {

namespace {

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ',')) out.push_back(io::parse_double(cur));
  require(!out.empty(), ErrorKind::InvalidArgument, "empty number list");
  return out;
}

// ---- build: cycle-test CSV -> identified degradation map -------------------

int cmd_build(const std::string& cycles_path, const std::string& bands,
              const std::string& out_path, std::ostream& out) {
  std::vector<io::RawCycleGroup> groups = io::read_cycles_csv(cycles_path);
  std::vector<double> band_counts = parse_number_list(bands);
  require(band_counts.size() == 1 || band_counts.size() == groups.size(),
          ErrorKind::InvalidArgument,
          "--bands needs one count or one per current rate in the file");

  std::vector<PatternSystem> systems;
  for (size_t g = 0; g < groups.size(); ++g) {
    double n = band_counts.size() == 1 ? band_counts[0] : band_counts[g];
    require(n >= 1.0 && n == std::floor(n), ErrorKind::InvalidArgument,
            "band counts must be positive integers");
    CycleTestSet set(groups[g].i_bat_a, groups[g].cell_capacity_ah,
                     groups[g].records, uniform_soc_grid(static_cast<int>(n)));
    systems.push_back(build_pattern_system(set));
  }
  PatternSystem system = assemble_multirate(systems);
  IdentifiedMap identified = solve_map(system);

  io::write_map_json(out_path, identified.map);
  out << "rates: " << identified.slices.size()
      << ", unknowns: " << system.column_labels.size()
      << ", residual_ah: " << io::format_double(identified.solution.residual_norm)
      << ", coverage_divergences: " << system.coverage_divergences.size() << "\n";
  out << "wrote " << out_path << "\n";
  return 0;
}

// ---- discretize: analytic model -> degradation map -------------------------

int cmd_discretize(const std::string& fn_path, const std::string& ocv_path,
                   int soc_bands, const std::string& currents, double cq,
                   const std::string& out_path, std::ostream& out) {
  AnalyticDegradationFn fn{io::read_betas_json(fn_path)};
  auto [soc_pts, v_pts] = io::read_ocv_csv(ocv_path);
  OcvCurve curve(std::move(soc_pts), std::move(v_pts));
  CurrentGrid rates(parse_number_list(currents));
  DiscretizeResult result =
      discretize(fn, curve, uniform_soc_grid(soc_bands), rates, cq);
  io::write_map_json(out_path, result.map);
  if (result.clamped_count > 0)
    out << "clamped " << result.clamped_count << " negative node(s) to zero\n";
  out << "wrote " << out_path << "\n";
  return 0;
}

// ---- normalize --------------------------------------------------------------

int cmd_normalize(const std::string& map_path, double ocv_mean, int soe_samples,
                  int power_samples, const std::string& out_path, std::ostream& out) {
  DegradationMap map = io::read_map_json(map_path);
  NormalizedMap nmap = normalize_map(map, ocv_mean, soe_samples, power_samples);
  io::write_nmap_json(out_path, nmap);
  out << "wrote " << out_path << "\n";
  return 0;
}

// ---- convexify ----------------------------------------------------------------

int cmd_convexify(const std::string& nmap_path, const std::string& out_path,
                  std::ostream& out) {
  NormalizedMap nmap = io::read_nmap_json(nmap_path);
  PwaMap pwa = lower_convex_hull_pwa(nmap);
  io::write_pwa_csv(out_path, pwa);
  PwaFitError err = pwa_fit_error(nmap, pwa);
  out << "planes: " << pwa.plane_count()
      << ", rmse_per_h: " << io::format_double(err.rmse_per_h) << ", nrmse: "
      << (err.nrmse_defined ? io::format_double(err.nrmse) : std::string("nan"))
      << "\n";
  out << "wrote " << out_path << "\n";
  return 0;
}

// ---- eval -----------------------------------------------------------------------

int cmd_eval(const std::string& pwa_path, double p, double e, double ce,
             std::ostream& out) {
  PwaMap pwa = io::read_pwa_csv(pwa_path);
  out << io::format_double_sci(eval_pwa(pwa, p, e, ce).value) << "\n";
  return 0;
}

// ---- validate ---------------------------------------------------------------------

int cmd_validate(const std::optional<std::string>& pwa_path,
                 const std::optional<std::string>& map_path,
                 const std::optional<std::string>& config_path, std::ostream& out) {
  require(pwa_path || map_path || config_path, ErrorKind::InvalidArgument,
          "nothing to validate; pass --pwa, --map or --config");
  if (pwa_path) {
    PwaMap pwa = io::read_pwa_csv(*pwa_path);
    // Constructing the map already proves well-formedness; convexity of a
    // max-of-planes surface is structural, spot-checked here.
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> px(-1.0, 1.0), ex(0.0, 1.0);
    bool convex = true;
    for (int trial = 0; trial < 1000 && convex; ++trial) {
      double p1 = px(rng), e1 = ex(rng), p2 = px(rng), e2 = ex(rng);
      double mid = eval_pwa(pwa, 0.5 * (p1 + p2), 0.5 * (e1 + e2), 1.0).value;
      double avg = 0.5 * (eval_pwa(pwa, p1, e1, 1.0).value +
                          eval_pwa(pwa, p2, e2, 1.0).value);
      convex = mid <= avg + 1e-12;
    }
    out << "convex: " << (convex ? "yes" : "no") << ", planes: " << pwa.plane_count()
        << " (" << pwa.deduplicated().plane_count() << " after dedup)\n";
    require(convex, ErrorKind::InvalidArgument, "PWA table is not convex");
  }
  if (map_path) {
    DegradationMap map = io::read_map_json(*map_path);
    out << "map ok: " << map.soc_grid().band_count() << " bands x "
        << map.current_grid().rate_count() << " rates\n";
  }
  if (config_path) {
    BatteryConfig config = io::read_config_json(*config_path);
    out << "config ok: C_E = " << io::format_double(energy_capacity_kwh(config))
        << " kWh\n";
  }
  return 0;
}

// ---- bench ----------------------------------------------------------------------------

int cmd_bench(const std::string& chems, const std::string& schedule_path,
              const std::string& config_path, std::ostream& out) {
  BatteryConfig config = io::read_config_json(config_path);
  std::vector<io::SchedulePoint> schedule = io::read_schedule_csv(schedule_path);

  std::vector<std::pair<ReferenceChemistry, BatteryConfig>> systems;
  std::istringstream in(chems);
  std::string id;
  while (std::getline(in, id, ','))
    systems.emplace_back(load_reference(id), config);
  require(!systems.empty(), ErrorKind::InvalidArgument, "no chemistries given");

  std::vector<ChemistryFade> fades = compare_chemistries(systems, schedule);
  out << "chem,fade_kwh,negative_steps\n";
  for (const ChemistryFade& f : fades)
    out << chemistry_to_string(f.id) << "," << io::format_double(f.fade_kwh) << ","
        << f.negative_steps << "\n";
  return 0;
}

// ---- dispatch ----------------------------------------------------------------------------

int cmd_dispatch(const std::string& pwa_path, const std::string& prices_path,
                 const std::string& config_path, double deg_price,
                 std::optional<double> e0, std::optional<double> p_min,
                 std::optional<double> p_max, double eta_c, double eta_d,
                 const std::string& out_path, std::ostream& out) {
  DispatchProblem prob;
  prob.pwa = io::read_pwa_csv(pwa_path);
  BatteryConfig config = io::read_config_json(config_path);
  prob.c_e_kwh = energy_capacity_kwh(config);

  std::vector<io::PricePoint> prices = io::read_prices_csv(prices_path);
  require(prices.size() >= 1, ErrorKind::InvalidArgument, "empty price series");
  prob.horizon = static_cast<int>(prices.size());
  prob.dt_h = prices.size() >= 2 ? prices[1].t_h - prices[0].t_h : 1.0;
  require(prob.dt_h > 0.0, ErrorKind::InvalidArgument, "price times must increase");
  for (size_t i = 1; i < prices.size(); ++i)
    require(std::abs((prices[i].t_h - prices[i - 1].t_h) - prob.dt_h) <=
                1e-9 * std::max(1.0, prob.dt_h),
            ErrorKind::InvalidArgument, "price timesteps must be uniform");
  for (const io::PricePoint& p : prices) prob.prices.push_back(p.price);

  // Defaults: 1C power limits, half-full start.
  prob.p_max_kw = p_max.value_or(prob.c_e_kwh);
  prob.p_min_kw = p_min.value_or(-prob.p_max_kw);
  prob.e0_kwh = e0.value_or(0.5 * prob.c_e_kwh);
  prob.eta_charge = eta_c;
  prob.eta_discharge = eta_d;
  prob.degradation_price = deg_price;

  DispatchSolution sol = solve_dispatch(prob);

  std::string csv = "# degmap dispatch-csv 1\nt_h,p_kw,e_kwh,j_kwh_per_h\n";
  for (int t = 0; t < prob.horizon; ++t) {
    csv += io::format_double(prices[t].t_h);
    csv += ',';
    csv += io::format_double(sol.power_kw[t]);
    csv += ',';
    csv += io::format_double(sol.soe_kwh[t]);
    csv += ',';
    csv += io::format_double(sol.deg_cost_rate[t]);
    csv += '\n';
  }
  io::write_file(out_path, csv);

  out << "objective: " << io::format_double(sol.objective)
      << ", iterations: " << sol.iterations
      << ", duality_gap: " << io::format_double(sol.duality_gap) << "\n";
  if (!sol.simultaneous_steps.empty())
    out << "warning: simultaneous charge/discharge at " << sol.simultaneous_steps.size()
        << " step(s)\n";
  out << "wrote " << out_path << "\n";
  return 0;
}

// ---- dump-surface ---------------------------------------------------------------------------

int cmd_dump_surface(const std::optional<std::string>& pwa_path,
                     const std::optional<std::string>& nmap_path, int nx, int ny,
                     double x_min, double x_max, double y_min, double y_max,
                     const std::string& out_path, std::ostream& out) {
  require(static_cast<bool>(pwa_path) != static_cast<bool>(nmap_path),
          ErrorKind::InvalidArgument, "pass exactly one of --pwa or --nmap");
  io::PlotSurfaceDump dump;
  if (pwa_path) {
    dump = io::dump_surface(io::read_pwa_csv(*pwa_path), x_min, x_max, nx, y_min,
                            y_max, ny);
  } else {
    dump = io::dump_surface(io::read_nmap_json(*nmap_path));
  }
  io::write_file(out_path, io::surface_to_csv(dump));
  out << "wrote " << out_path << " (" << dump.x.size() * dump.y.size() << " rows)\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"degmap: battery degradation maps, PWA cost surfaces, dispatch demo"};
  app.require_subcommand(1);

  // build
  std::string cycles_path, bands = "5", out_path;
  CLI::App* build = app.add_subcommand(
      "build", "identify a degradation map from cycle-test data");
  build->add_option("--cycles", cycles_path, "cycle-test CSV")->required();
  build->add_option("--bands", bands, "SoC band count, or one per current rate");
  build->add_option("--out", out_path, "output map JSON")->required();

  // discretize
  std::string fn_path, ocv_path, currents;
  int soc_bands = 20;
  double cq = 1.0;
  CLI::App* disc = app.add_subcommand(
      "discretize", "sample an analytic degradation function onto a grid");
  disc->add_option("--fn", fn_path, "betas JSON")->required();
  disc->add_option("--ocv", ocv_path, "OCV curve CSV")->required();
  disc->add_option("--soc-bands", soc_bands, "number of SoC bands");
  disc->add_option("--currents", currents, "comma list of current rates, A")->required();
  disc->add_option("--cq", cq, "cell charge capacity, Ah")->required();
  disc->add_option("--out", out_path, "output map JSON")->required();

  // normalize
  std::string map_path;
  double ocv_mean = 0.0;
  int soe_samples = 21, power_samples = 21;
  CLI::App* norm = app.add_subcommand(
      "normalize", "scale a cell map to the size-independent form");
  norm->add_option("--map", map_path, "map JSON")->required();
  norm->add_option("--ocv-mean", ocv_mean, "mean open-circuit voltage, V")->required();
  norm->add_option("--soe-samples", soe_samples, "SoE axis samples");
  norm->add_option("--power-samples", power_samples, "power axis samples");
  norm->add_option("--out", out_path, "output normalized-map JSON")->required();

  // convexify
  std::string nmap_path;
  CLI::App* conv = app.add_subcommand(
      "convexify", "lower convex hull of a normalized map as a PWA table");
  conv->add_option("--nmap", nmap_path, "normalized-map JSON")->required();
  conv->add_option("--out", out_path, "output PWA CSV")->required();

  // eval
  std::string pwa_path;
  double eval_p = 0.0, eval_e = 0.0, eval_ce = 1.0;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a PWA degradation surface");
  eval->add_option("--pwa", pwa_path, "PWA CSV")->required();
  eval->add_option("--p", eval_p, "battery power, kW")->required();
  eval->add_option("--e", eval_e, "absolute SoE, kWh")->required();
  eval->add_option("--ce", eval_ce, "energy capacity, kWh")->required();

  // validate
  std::optional<std::string> v_pwa, v_map, v_config;
  CLI::App* validate = app.add_subcommand("validate", "check artifact files");
  validate->add_option("--pwa", v_pwa, "PWA CSV");
  validate->add_option("--map", v_map, "map JSON");
  validate->add_option("--config", v_config, "battery config JSON");

  // bench
  std::string chems, schedule_path, config_path;
  CLI::App* bench = app.add_subcommand(
      "bench", "cumulative fade of reference chemistries over a schedule");
  bench->add_option("--chem", chems, "comma list: lfp,nmc_lmo,lco")->required();
  bench->add_option("--schedule", schedule_path, "schedule CSV")->required();
  bench->add_option("--config", config_path, "battery config JSON")->required();

  // dispatch
  std::string prices_path;
  double deg_price = 0.0, eta_c = 0.95, eta_d = 0.95;
  std::optional<double> e0, p_min, p_max;
  CLI::App* dispatch = app.add_subcommand(
      "dispatch", "price-arbitrage LP with epigraph degradation cost");
  dispatch->add_option("--pwa", pwa_path, "PWA CSV")->required();
  dispatch->add_option("--prices", prices_path, "prices CSV")->required();
  dispatch->add_option("--config", config_path, "battery config JSON")->required();
  dispatch->add_option("--deg-price", deg_price, "price per kWh of lost capacity");
  dispatch->add_option("--e0", e0, "initial SoE, kWh (default C_E/2)");
  dispatch->add_option("--p-min", p_min, "discharge power bound, kW (default -C_E)");
  dispatch->add_option("--p-max", p_max, "charge power bound, kW (default C_E)");
  dispatch->add_option("--eta-c", eta_c, "charge efficiency");
  dispatch->add_option("--eta-d", eta_d, "discharge efficiency");
  dispatch->add_option("--out", out_path, "output solution CSV")->required();

  // dump-surface
  std::optional<std::string> d_pwa, d_nmap;
  int nx = 11, ny = 11;
  double x_min = -1.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  CLI::App* dump = app.add_subcommand(
      "dump-surface", "sample a surface onto a plot-friendly grid CSV");
  dump->add_option("--pwa", d_pwa, "PWA CSV");
  dump->add_option("--nmap", d_nmap, "normalized-map JSON");
  dump->add_option("--nx", nx, "power-axis samples");
  dump->add_option("--ny", ny, "SoE-axis samples");
  dump->add_option("--x-min", x_min, "power axis lower bound");
  dump->add_option("--x-max", x_max, "power axis upper bound");
  dump->add_option("--y-min", y_min, "SoE axis lower bound");
  dump->add_option("--y-max", y_max, "SoE axis upper bound");
  dump->add_option("--out", out_path, "output CSV")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (*build) return cmd_build(cycles_path, bands, out_path, out);
    if (*disc)
      return cmd_discretize(fn_path, ocv_path, soc_bands, currents, cq, out_path, out);
    if (*norm)
      return cmd_normalize(map_path, ocv_mean, soe_samples, power_samples, out_path, out);
    if (*conv) return cmd_convexify(nmap_path, out_path, out);
    if (*eval) return cmd_eval(pwa_path, eval_p, eval_e, eval_ce, out);
    if (*validate) return cmd_validate(v_pwa, v_map, v_config, out);
    if (*bench) return cmd_bench(chems, schedule_path, config_path, out);
    if (*dispatch)
      return cmd_dispatch(pwa_path, prices_path, config_path, deg_price, e0, p_min,
                          p_max, eta_c, eta_d, out_path, out);
    if (*dump)
      return cmd_dump_surface(d_pwa, d_nmap, nx, ny, x_min, x_max, y_min, y_max,
                              out_path, out);
  } catch (const Error& e) {
    nlohmann::json j;
    j["error"] = e.kind_name();
    j["message"] = e.what();
    err << j.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json j;
    j["error"] = "internal";
    j["message"] = e.what();
    err << j.dump() << "\n";
    return 1;
  }
  return 2;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace degmap
