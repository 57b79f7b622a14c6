// emfnet command-line front end: scenario generation, single pipeline runs,
// architecture sweeps, heuristic-vs-oracle reports, and figure-style data
// emission. All numeric output is plot-ready CSV/JSON; see README.md.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emfnet/config.hpp"
#include "emfnet/figures.hpp"
#include "emfnet/harness.hpp"
#include "emfnet/results.hpp"
#include "emfnet/scenario.hpp"
#include "emfnet/units.hpp"

namespace fs = std::filesystem;
using namespace emfnet;

namespace {

struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 1;
  int iters = 100;
  std::string out_dir = "out";
  std::string objective = "emf";
  double sar_limit = 0.08;  // ICNIRP whole-body limit, dual mode
};

Config load_or_default(const std::string& path) {
  if (path.empty()) {
    Config cfg;
    cfg.validate();
    return cfg;
  }
  return load_config(path);
}

Objective parse_objective(const std::string& s) {
  if (s == "emf") return Objective::MinExposure;
  if (s == "rate") return Objective::MaxRate;
  throw config_error("unknown objective '" + s + "' (expected emf or rate)");
}

PowerPolicy policy_for(const std::string& objective, double sar_limit) {
  return objective == "rate" ? PowerPolicy::dual(sar_limit) : PowerPolicy::primal();
}

std::vector<Architecture> parse_arch_list(const std::string& list) {
  std::vector<Architecture> archs;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) archs.push_back(architecture_from_string(item));
  if (archs.empty()) throw config_error("empty --arch list");
  return archs;
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> values;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
  if (values.empty()) throw config_error("empty --values list");
  return values;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_iters = true) {
  cmd->add_option("--config", o.config_path, "config file (JSON)");
  cmd->add_option("--seed", o.seed, "master seed");
  if (with_iters) cmd->add_option("--iters", o.iters, "Monte Carlo iterations");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--objective", o.objective, "emf (minimize exposure) or rate (maximize UL rate)");
  cmd->add_option("--sar-limit", o.sar_limit, "per-user SAR cap in W/kg (rate objective)");
}

int cmd_gen(const CommonOpts& o) {
  const Config cfg = load_or_default(o.config_path);
  fs::create_directories(o.out_dir);
  const Scenario sc = generate_scenario(cfg, o.seed);
  const std::string path = (fs::path(o.out_dir) / "scenario.json").string();
  save_scenario(sc, path);
  std::cout << "wrote " << path << " (" << sc.residents.size() << " residents, "
            << sc.active_indices().size() << " active users, " << sc.tuav_count() << " tUAVs)\n";
  return 0;
}

int cmd_run(const CommonOpts& o, const std::string& arch, const std::string& scenario_path) {
  Config cfg = load_or_default(o.config_path);
  if (!arch.empty()) cfg.scenario.architecture = architecture_from_string(arch);
  const Objective objective = parse_objective(o.objective);
  const PowerPolicy policy = policy_for(o.objective, o.sar_limit);

  const Scenario sc =
      scenario_path.empty() ? generate_scenario(cfg, o.seed) : load_scenario(scenario_path);
  const PipelineResult r = run_pipeline(sc, PipelineStrategy{}, objective, policy);

  fs::create_directories(o.out_dir);
  json out;
  out["meta"] = make_sidecar(cfg, o.seed, 1, objective, policy);
  out["report"] = {{"ei_ul", r.report.ei_ul},
                   {"ei_dl", r.report.ei_dl},
                   {"ei_total", r.report.ei_total()},
                   {"satisfied_ratio", r.report.satisfied_ratio},
                   {"sum_rate_ul", r.report.sum_rate_ul},
                   {"per_user_power", r.report.per_user_power},
                   {"per_user_rate", r.report.per_user_rate}};
  json placements = json::array();
  for (const TuavPlacement& p : r.placements)
    placements.push_back({{"gs_index", p.gs_index},
                          {"tether_T", p.tether_T},
                          {"elevation_theta", p.elevation_theta},
                          {"azimuth_phi", p.azimuth_phi}});
  out["placements"] = placements;
  const std::string path = (fs::path(o.out_dir) / "report.json").string();
  std::ofstream f(path, std::ios::binary);
  f << out.dump(2) << '\n';

  const int K = static_cast<int>(r.report.per_user_rate.size());
  double mean_power = 0.0;
  for (double p : r.report.per_user_power) mean_power += p;
  if (K > 0) mean_power /= K;
  std::cout << "architecture " << to_string(sc.architecture) << ", K=" << K << "\n"
            << "  EI_UL " << r.report.ei_ul << " W/kg, EI_DL " << r.report.ei_dl << " W/kg\n"
            << "  satisfied " << 100.0 * r.report.satisfied_ratio << "%, sum UL rate "
            << r.report.sum_rate_ul / 1e6 << " Mbps\n"
            << "  mean UE power " << mean_power << " W ("
            << (mean_power > 0 ? watt_to_dbm(mean_power) : -INFINITY) << " dBm)\n"
            << "wrote " << path << "\n";
  return 0;
}

int cmd_sweep(const CommonOpts& o, const std::string& arch_list, const std::string& sweep_name,
              const std::string& values_list) {
  const Config cfg = load_or_default(o.config_path);
  const auto archs = parse_arch_list(arch_list);
  const SweepKind kind = sweep_kind_from_string(sweep_name);
  const auto values = parse_values(values_list);
  const Objective objective = parse_objective(o.objective);
  const PowerPolicy policy = policy_for(o.objective, o.sar_limit);

  const ResultTable table = compare_architectures(cfg, archs, kind, values, o.iters, objective,
                                                  policy, PipelineStrategy{}, o.seed);
  fs::create_directories(o.out_dir);
  const std::string csv = (fs::path(o.out_dir) / "results.csv").string();
  write_results_csv(table, csv);
  write_sidecar(make_sidecar(cfg, o.seed, o.iters, objective, policy),
                (fs::path(o.out_dir) / "results.json").string());
  std::cout << "wrote " << csv << " (" << table.size() << " rows)\n";
  return 0;
}

int cmd_figure(const CommonOpts& o, const std::string& name, int iters_override) {
  FigurePreset preset = figure_preset(name);
  const int iters = iters_override > 0 ? iters_override : preset.default_iters;
  const ResultTable table = run_figure(preset, iters, o.seed);

  fs::create_directories(o.out_dir);
  const std::string csv = (fs::path(o.out_dir) / (name + ".csv")).string();
  write_results_csv(table, csv);
  json meta = make_sidecar(preset.base, o.seed, iters, Objective::MinExposure, PowerPolicy::primal());
  meta["figure"] = name;
  meta["description"] = preset.description;
  write_sidecar(meta, (fs::path(o.out_dir) / (name + ".json")).string());
  std::cout << "wrote " << csv << " (" << table.size() << " rows, " << iters << " iters)\n";
  return 0;
}

double mean_ei(const Config& cfg, int n, Objective obj, const PowerPolicy& pol,
               const PipelineStrategy& strat, std::uint64_t seed, Architecture arch) {
  Config c = cfg;
  c.scenario.architecture = arch;
  const MonteCarloResult mc = monte_carlo(c, n, obj, pol, strat, seed);
  return mc.stats[0].mean;  // ei_ul
}

int cmd_oracle_check(const CommonOpts& o) {
  Config cfg = load_or_default(o.config_path);
  if (o.config_path.empty()) {
    cfg = figure_preset("fig3").base;  // small desk-scale family
    cfg.scenario.n_users = 6;
  }
  const int n = o.iters;
  const PowerPolicy pol = PowerPolicy::primal();
  const Objective obj = Objective::MinExposure;
  using AS = AssocStrategy;
  using DS = DeployStrategy;
  using PS = PositionStrategy;
  auto strat = [](AS a, DS d, PS p) {
    PipelineStrategy s;
    s.assoc = a;
    s.deploy = d;
    s.position = p;
    return s;
  };

  std::cout << "oracle-check: " << n << " seeds, K=" << cfg.scenario.n_users
            << ", M=" << cfg.scenario.n_tuavs << ", N=" << cfg.scenario.n_gs << "\n";

  const double assoc_greedy = mean_ei(cfg, n, obj, pol, strat(AS::Greedy, DS::UniformGrid, PS::None),
                                      o.seed, Architecture::GreenTuav);
  const double assoc_brute = mean_ei(cfg, n, obj, pol, strat(AS::BruteForce, DS::UniformGrid, PS::None),
                                     o.seed, Architecture::GreenTuav);
  std::cout << "association  greedy " << assoc_greedy << "  brute " << assoc_brute << "  ratio "
            << assoc_greedy / assoc_brute << "\n";

  const double dep_km = mean_ei(cfg, n, obj, pol, strat(AS::Greedy, DS::KMeans, PS::None), o.seed,
                                Architecture::GreenTuav);
  const double dep_sr = mean_ei(cfg, n, obj, pol, strat(AS::Greedy, DS::Sr2d, PS::None), o.seed,
                                Architecture::GreenTuav);
  const double dep_rand = mean_ei(cfg, n, obj, pol, strat(AS::Greedy, DS::RandomGs, PS::None), o.seed,
                                  Architecture::GreenTuav);
  const double dep_brute = mean_ei(cfg, n, obj, pol, strat(AS::Greedy, DS::BruteForce, PS::None),
                                   o.seed, Architecture::GreenTuav);
  std::cout << "deployment   kmeans " << dep_km << "  sr2d " << dep_sr << "  random " << dep_rand
            << "  brute " << dep_brute << "  kmeans/brute " << dep_km / dep_brute << "\n";

  const double pos_golden = mean_ei(cfg, n, obj, pol, strat(AS::Greedy, DS::KMeans, PS::Golden),
                                    o.seed, Architecture::GreenTuav);
  const double pos_sr = mean_ei(cfg, n, obj, pol, strat(AS::Greedy, DS::KMeans, PS::Sr3d), o.seed,
                                Architecture::GreenTuav);
  const double pos_grid = mean_ei(cfg, n, obj, pol, strat(AS::Greedy, DS::KMeans, PS::GridOracle),
                                  o.seed, Architecture::GreenTuav);
  std::cout << "positioning  golden " << pos_golden << "  sr3d " << pos_sr << "  grid-oracle "
            << pos_grid << "  sr3d/oracle " << pos_sr / pos_grid << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EMF-aware tethered-UAV network planning toolkit"};
  app.require_subcommand(1);

  CommonOpts gen_o, run_o, sweep_o, fig_o, oracle_o;
  std::string run_arch, run_scenario;
  std::string sweep_archs = "bs_only,fixed_sc,green_tuav", sweep_name = "K", sweep_values;
  std::string figure_name;
  int figure_iters = 0;

  CLI::App* gen = app.add_subcommand("gen", "generate and write one scenario file");
  add_common(gen, gen_o, false);

  CLI::App* run = app.add_subcommand("run", "run the three-stage pipeline on one scenario");
  add_common(run, run_o, false);
  run->add_option("--arch", run_arch, "architecture override");
  run->add_option("--scenario", run_scenario, "replay a scenario file instead of generating one");

  CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over architectures");
  add_common(sweep, sweep_o);
  sweep->add_option("--arch", sweep_archs, "comma-separated architecture list");
  sweep->add_option("--sweep", sweep_name, "sweep parameter: K, rate_req, sar_limit, p_max, N");
  sweep->add_option("--values", sweep_values, "comma-separated sweep values")->required();

  CLI::App* fig = app.add_subcommand("figure", "emit plot-ready data for a named figure");
  fig->add_option("name", figure_name, "fig3..fig10")->required();
  add_common(fig, fig_o, false);
  fig->add_option("--iters", figure_iters, "Monte Carlo iterations (0 = preset default)");

  CLI::App* oracle = app.add_subcommand("oracle-check", "heuristics vs brute-force report");
  add_common(oracle, oracle_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(gen_o);
    if (run->parsed()) return cmd_run(run_o, run_arch, run_scenario);
    if (sweep->parsed()) return cmd_sweep(sweep_o, sweep_archs, sweep_name, sweep_values);
    if (fig->parsed()) return cmd_figure(fig_o, figure_name, figure_iters);
    if (oracle->parsed()) return cmd_oracle_check(oracle_o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
