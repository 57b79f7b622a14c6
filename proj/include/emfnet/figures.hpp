#pragma once

#include <functional>
#include <string>
#include <vector>

#include "emfnet/config.hpp"
#include "emfnet/harness.hpp"

namespace emfnet {

// One curve of a figure: a labelled architecture/strategy/objective variant.
struct FigureRowSpec {
  std::string label;
  Architecture arch = Architecture::GreenTuav;
  PipelineStrategy strategy;
  Objective objective = Objective::MinExposure;
  PowerPolicy policy = PowerPolicy::primal();
  std::function<void(Config&)> tweak;  // optional per-row config override
};

struct FigurePreset {
  std::string id;
  std::string description;
  Config base;
  SweepKind sweep = SweepKind::ActiveUsers;
  std::vector<double> values;
  std::vector<FigureRowSpec> rows;
  int default_iters = 200;
};

inline std::vector<std::string> figure_ids() {
  return {"fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10"};
}

namespace detail {

// Small desk-scale family: two 2-RB tUAVs, 9 ground stations, data users at
// 50 Mbps. Used by the association/deployment/positioning comparisons.
inline Config small_family_config() {
  Config cfg;
  cfg.params.w_tuav_max = 2;
  cfg.scenario.n_residents = 60;
  cfg.scenario.n_users = 8;
  cfg.scenario.n_tuavs = 2;
  cfg.scenario.n_gs = 9;
  cfg.scenario.voice_fraction = 0.0;
  cfg.scenario.rate_data_ul = 50e6;
  return cfg;
}

// Mixed-usage family on the 6x6 ground-station grid with 240 residents.
inline Config large_family_config() {
  Config cfg;
  cfg.params.w_tuav_max = 6;
  cfg.scenario.n_residents = 240;
  cfg.scenario.n_users = 60;
  cfg.scenario.n_tuavs = 4;
  cfg.scenario.n_gs = 36;
  cfg.scenario.voice_fraction = 0.2;
  cfg.scenario.rate_voice_ul = 5e6;
  cfg.scenario.rate_data_ul = 50e6;
  cfg.scenario.rate_voice_dl = 5e6;
  cfg.scenario.rate_data_dl = 100e6;
  return cfg;
}

inline PipelineStrategy strategy(AssocStrategy a, DeployStrategy d, PositionStrategy p) {
  PipelineStrategy s;
  s.assoc = a;
  s.deploy = d;
  s.position = p;
  return s;
}

inline FigureRowSpec row(std::string label, Architecture arch, PipelineStrategy strategy = {}) {
  FigureRowSpec r;
  r.label = std::move(label);
  r.arch = arch;
  r.strategy = strategy;
  return r;
}

}  // namespace detail

inline FigurePreset figure_preset(const std::string& id) {
  using AS = AssocStrategy;
  using DS = DeployStrategy;
  using PS = PositionStrategy;
  FigurePreset f;
  f.id = id;

  if (id == "fig3") {
    // Association strategies at two fixed evenly-placed tUAVs. The
    // brute-force curve caps the user sweep through its enumeration budget.
    f.description = "UL exposure vs users for association strategies";
    f.base = detail::small_family_config();
    f.sweep = SweepKind::ActiveUsers;
    f.values = {4, 6, 8, 10, 12};
    f.rows = {
        detail::row("tuav_random_assoc", Architecture::GreenTuav, detail::strategy(AS::Random, DS::UniformGrid, PS::None)),
        detail::row("bs_only", Architecture::BsOnly, detail::strategy(AS::Greedy, DS::UniformGrid, PS::None)),
        detail::row("tuav_greedy", Architecture::GreenTuav, detail::strategy(AS::Greedy, DS::UniformGrid, PS::None)),
        detail::row("tuav_brute_force", Architecture::GreenTuav, detail::strategy(AS::BruteForce, DS::UniformGrid, PS::None)),
    };
    return f;
  }
  if (id == "fig4") {
    f.description = "UL exposure vs users for tUAV-to-GS deployment methods";
    f.base = detail::small_family_config();
    f.sweep = SweepKind::ActiveUsers;
    f.values = {4, 8, 12, 16, 20};
    f.rows = {
        detail::row("bs_only", Architecture::BsOnly, detail::strategy(AS::Greedy, DS::KMeans, PS::None)),
        detail::row("tuav_random_deploy", Architecture::GreenTuav, detail::strategy(AS::Greedy, DS::RandomGs, PS::None)),
        detail::row("tuav_kmeans", Architecture::GreenTuav, detail::strategy(AS::Greedy, DS::KMeans, PS::None)),
        detail::row("tuav_sr2d", Architecture::GreenTuav, detail::strategy(AS::Greedy, DS::Sr2d, PS::None)),
        detail::row("tuav_brute_force", Architecture::GreenTuav, detail::strategy(AS::Greedy, DS::BruteForce, PS::None)),
    };
    return f;
  }
  if (id == "fig5") {
    f.description = "UL exposure vs users for hovering-area positioning methods";
    f.base = detail::small_family_config();
    f.sweep = SweepKind::ActiveUsers;
    f.values = {4, 8, 12, 16, 20};
    f.rows = {
        detail::row("bs_only", Architecture::BsOnly, detail::strategy(AS::Greedy, DS::KMeans, PS::None)),
        detail::row("tuav_random_hover", Architecture::GreenTuav, detail::strategy(AS::Greedy, DS::KMeans, PS::RandomHover)),
        detail::row("tuav_golden", Architecture::GreenTuav, detail::strategy(AS::Greedy, DS::KMeans, PS::Golden)),
        detail::row("tuav_sr3d", Architecture::GreenTuav, detail::strategy(AS::Greedy, DS::KMeans, PS::Sr3d)),
        detail::row("tuav_grid_oracle", Architecture::GreenTuav, detail::strategy(AS::Greedy, DS::KMeans, PS::GridOracle)),
    };
    return f;
  }
  if (id == "fig6") {
    f.description = "Total, UL and DL exposure vs users for tUAV decoupling variants";
    Config cfg;
    cfg.params.w_tuav_max = 6;
    cfg.scenario.n_residents = 120;
    cfg.scenario.n_tuavs = 4;
    cfg.scenario.n_gs = 25;
    cfg.scenario.voice_fraction = 0.2;
    f.base = cfg;
    f.sweep = SweepKind::ActiveUsers;
    f.values = {6, 12, 24, 36, 48};
    f.rows = {
        detail::row("bs_only", Architecture::BsOnly),
        detail::row("special_tuav_dl", Architecture::SpecialTuav),
        detail::row("regular_tuav_ul_dl", Architecture::RegularTuav),
        detail::row("green_tuav_ul", Architecture::GreenTuav),
    };
    return f;
  }
  if (id == "fig7") {
    f.description = "Satisfied-users ratio and UL exposure vs required UL rate";
    Config cfg = detail::large_family_config();
    cfg.scenario.voice_fraction = 0.0;  // all data users
    f.base = cfg;
    f.sweep = SweepKind::RateReq;
    f.values = {10e6, 25e6, 50e6, 75e6, 100e6, 125e6, 150e6, 160e6, 170e6, 180e6};
    f.rows = {
        detail::row("green_tuav", Architecture::GreenTuav),
        detail::row("fixed_sc", Architecture::FixedSc),
        detail::row("bs_only", Architecture::BsOnly),
    };
    return f;
  }
  if (id == "fig8") {
    f.description = "UL exposure vs number of active users per architecture";
    f.base = detail::large_family_config();
    f.sweep = SweepKind::ActiveUsers;
    f.values = {5, 10, 20, 30, 40, 50, 60, 70, 80, 90};
    f.rows = {
        detail::row("bs_only", Architecture::BsOnly),
        detail::row("fixed_sc", Architecture::FixedSc),
        detail::row("green_tuav", Architecture::GreenTuav),
    };
    return f;
  }
  if (id == "fig9") {
    f.description = "Average UL rate vs whole-body SAR threshold (dual problem)";
    f.base = detail::large_family_config();
    f.sweep = SweepKind::SarLimit;
    f.values = {2e-8, 2e-7, 2e-6, 2e-5, 2e-4, 1e-3, 1.6e-3, 4e-3, 2e-2, 8e-2, 2e-1};
    auto row = [](std::string label, Architecture arch, double alpha_n) {
      FigureRowSpec r;
      r.label = std::move(label);
      r.arch = arch;
      r.objective = Objective::MaxRate;
      r.policy = PowerPolicy::dual(2e-8);  // sweep overwrites the limit
      if (alpha_n != 2.0) r.tweak = [alpha_n](Config& c) { c.params.alpha_nlos = alpha_n; };
      return r;
    };
    f.rows = {row("green_tuav", Architecture::GreenTuav, 2.0),
              row("fixed_sc", Architecture::FixedSc, 2.0),
              row("bs_only", Architecture::BsOnly, 2.0),
              row("green_tuav@alpha_n=3.5", Architecture::GreenTuav, 3.5),
              row("fixed_sc@alpha_n=3.5", Architecture::FixedSc, 3.5),
              row("bs_only@alpha_n=3.5", Architecture::BsOnly, 3.5)};
    return f;
  }
  if (id == "fig10") {
    f.description = "Average UL rate vs transmit power threshold (dual problem)";
    f.base = detail::large_family_config();
    f.sweep = SweepKind::PMaxDbm;
    f.values = {20, 22, 24, 26, 28, 30, 32, 34, 36};
    auto row = [](std::string label, Architecture arch, double sar_limit) {
      FigureRowSpec r;
      r.label = std::move(label);
      r.arch = arch;
      r.objective = Objective::MaxRate;
      r.policy = PowerPolicy::dual(sar_limit);
      return r;
    };
    f.rows = {row("green_tuav@icnirp", Architecture::GreenTuav, 0.08),
              row("green_tuav@strict", Architecture::GreenTuav, 0.0016),
              row("fixed_sc@icnirp", Architecture::FixedSc, 0.08),
              row("fixed_sc@strict", Architecture::FixedSc, 0.0016),
              row("bs_only@icnirp", Architecture::BsOnly, 0.08),
              row("bs_only@strict", Architecture::BsOnly, 0.0016)};
    return f;
  }
  throw config_error("unknown figure '" + id + "' (expected fig3..fig10)");
}

inline ResultTable run_figure(const FigurePreset& preset, int n_iters, std::uint64_t master_seed) {
  ResultTable table;
  for (const FigureRowSpec& row : preset.rows) {
    for (const double v : preset.values) {
      Config cfg = preset.base;
      PowerPolicy policy = row.policy;
      cfg.scenario.architecture = row.arch;
      if (row.tweak) row.tweak(cfg);
      apply_sweep(cfg, policy, preset.sweep, v);
      const MonteCarloResult mc =
          monte_carlo(cfg, n_iters, row.objective, policy, row.strategy, master_seed);
      append_mc_rows(table, row.label, to_string(preset.sweep), v, mc);
    }
  }
  return table;
}

}  // namespace emfnet
