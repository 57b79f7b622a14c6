#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "emfnet/association.hpp"
#include "emfnet/config.hpp"
#include "emfnet/deployment.hpp"
#include "emfnet/exposure.hpp"
#include "emfnet/params.hpp"
#include "emfnet/positioning.hpp"
#include "emfnet/rng.hpp"
#include "emfnet/scenario.hpp"

namespace emfnet {

enum class AssocStrategy { Greedy, BruteForce, Random };
enum class DeployStrategy { KMeans, Sr2d, RandomGs, UniformGrid, BruteForce };
enum class PositionStrategy { None, Golden, Sr3d, GridOracle, RandomHover };

struct PipelineStrategy {
  AssocStrategy assoc = AssocStrategy::Greedy;
  DeployStrategy deploy = DeployStrategy::KMeans;
  PositionStrategy position = PositionStrategy::Sr3d;
  int oracle_resolution = 21;  // position_grid_oracle points per axis
};

struct PipelineResult {
  EvaluationReport report;
  std::vector<Vec3> gnb_positions;        // final gNB positions used for the report
  Association ul_assoc;                   // final UL association
  Association dl_assoc;                   // DL association (SpecialTuav only)
  std::vector<int> dl_serving;            // per active ordinal
  std::vector<TuavPlacement> placements;  // per tUAV; empty when not GS-attached
  DeploymentResult deployment;            // pre-positioning snapshot
  double pre_positioning_cost = 0.0;      // deployment objective
  double frozen_positioned_cost = 0.0;    // frozen-association cost after positioning
};

namespace detail {

inline Association random_associate(const CostMatrix& cost, std::span<const int> capacity,
                                    std::mt19937_64& rng) {
  std::int64_t total_cap = 0;
  for (int c : capacity) total_cap += c;
  if (total_cap < cost.n_users) throw infeasible_error("random_associate: capacity below user count");

  Association a;
  a.per_link_cost = cost;
  a.serving.assign(cost.n_users, 0);
  a.load.assign(cost.n_gnbs, 0);
  std::vector<int> open;
  for (int k = 0; k < cost.n_users; ++k) {
    open.clear();
    for (int j = 0; j < cost.n_gnbs; ++j)
      if (a.load[j] < capacity[j]) open.push_back(j);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(open.size()) - 1);
    a.serving[k] = open[pick(rng)];
    a.load[a.serving[k]]++;
  }
  finalize_association(a);
  return a;
}

inline Association associate(const CostMatrix& cost, std::span<const int> capacity,
                             AssocStrategy strategy, std::mt19937_64& rng) {
  switch (strategy) {
    case AssocStrategy::Greedy: return greedy_associate(cost, capacity);
    case AssocStrategy::BruteForce: return brute_force_associate(cost, capacity);
    case AssocStrategy::Random: return random_associate(cost, capacity, rng);
  }
  throw config_error("unknown association strategy");
}

inline DeploymentResult deploy(const Scenario& sc, const LinkCostModel& model,
                               DeployStrategy strategy, std::mt19937_64& rng) {
  switch (strategy) {
    case DeployStrategy::KMeans: return deploy_kmeans(sc, model, rng);
    case DeployStrategy::Sr2d: return deploy_sr2d(sc, model, rng);
    case DeployStrategy::RandomGs: return deploy_baseline(sc, model, BaselineDeploy::RandomGs, rng);
    case DeployStrategy::UniformGrid:
      return deploy_baseline(sc, model, BaselineDeploy::UniformGrid, rng);
    case DeployStrategy::BruteForce: return brute_force_deploy(sc, model);
  }
  throw config_error("unknown deployment strategy");
}

// Frozen users of one tUAV for the positioning stage. Caches the population
// loss factor per candidate position so DL costs stay O(residents) per
// candidate rather than per user.
class TuavUsers {
 public:
  TuavUsers(const LinkCostModel& model, std::vector<int> ordinals)
      : model_(model), ordinals_(std::move(ordinals)) {}

  int user_count() const { return static_cast<int>(ordinals_.size()); }
  Vec2 user_xy(int i) const {
    return model_.scenario().residents[model_.active()[ordinals_[i]]].position.xy();
  }
  double cost(int i, const Vec3& pos) const {
    if (!model_.uses_population_factor()) return model_.user_cost_with_phi(ordinals_[i], pos, 0.0);
    if (!phi_valid_ || pos.x != phi_pos_.x || pos.y != phi_pos_.y || pos.z != phi_pos_.z) {
      phi_ = model_.population_loss_factor(pos);
      phi_pos_ = pos;
      phi_valid_ = true;
    }
    return model_.user_cost_with_phi(ordinals_[i], pos, phi_);
  }

 private:
  const LinkCostModel& model_;
  std::vector<int> ordinals_;
  mutable Vec3 phi_pos_;
  mutable double phi_ = 0.0;
  mutable bool phi_valid_ = false;
};

inline TuavPlacement position_one(const Scenario& sc, const LinkCostModel& model,
                                  const Association& assoc, int tuav, int gs_index,
                                  PositionStrategy strategy, int oracle_resolution,
                                  std::mt19937_64& rng) {
  const Vec3& gs = sc.ground_stations[gs_index];
  std::vector<int> ordinals;
  for (int k = 0; k < assoc.per_link_cost.n_users; ++k)
    if (assoc.serving[k] == tuav + 1) ordinals.push_back(k);
  if (ordinals.empty() || strategy == PositionStrategy::None)
    return default_placement(sc.params, gs_index);

  TuavUsers users(model, std::move(ordinals));
  switch (strategy) {
    case PositionStrategy::Golden: return position_golden(gs, users, sc.params, gs_index);
    case PositionStrategy::Sr3d:
      return position_sr3d(gs, default_placement(sc.params, gs_index), users, sc.params, gs_index);
    case PositionStrategy::GridOracle:
      return position_grid_oracle(gs, users, sc.params, oracle_resolution, gs_index);
    case PositionStrategy::RandomHover: return position_random(sc.params, rng, gs_index);
    case PositionStrategy::None: break;
  }
  return default_placement(sc.params, gs_index);
}

inline EvaluationReport evaluate(const Scenario& sc, std::span<const Vec3> positions,
                                 std::span<const int> active, const Association& ul_assoc,
                                 std::span<const int> dl_serving, const PowerPolicy& policy) {
  EvaluationReport rep;
  const int K = static_cast<int>(active.size());
  rep.per_user_power.resize(K);
  rep.per_user_rate.resize(K);
  std::vector<double> required(K);
  for (int i = 0; i < K; ++i) {
    const User& u = sc.residents[active[i]];
    const double loss = avg_path_loss(u.position, positions[ul_assoc.serving[i]], sc.params);
    rep.per_user_power[i] = allocate_power(u, loss, policy, sc.params);
    rep.per_user_rate[i] = ul_rate(rep.per_user_power[i], loss, sc.params);
    required[i] = u.rate_req_ul;
    rep.sum_rate_ul += rep.per_user_rate[i];
  }
  rep.ei_ul = exposure_index_ul(sc, active, rep.per_user_power);
  rep.ei_dl = exposure_index_dl(sc, positions, active, dl_serving);
  rep.satisfied_ratio = K == 0 ? 1.0 : satisfied_ratio(rep.per_user_rate, required);
  return rep;
}

}  // namespace detail

// Hard-constraint audit of a pipeline result: single server per user, every
// gNB within capacity, placements inside the hovering cone, and the per-user
// SAR cap in dual mode. Field-level checks, no tolerance.
struct ConstraintAudit {
  int serving_violations = 0;
  int capacity_violations = 0;
  int placement_violations = 0;
  int sar_violations = 0;
  bool ok() const {
    return serving_violations == 0 && capacity_violations == 0 && placement_violations == 0 &&
           sar_violations == 0;
  }
};

inline ConstraintAudit audit_constraints(const Scenario& sc, const PipelineResult& r,
                                         const PowerPolicy& policy) {
  ConstraintAudit audit;
  const auto caps = gnb_capacities(sc);

  auto check_assoc = [&](const Association& a, int n_gnbs) {
    if (a.serving.empty() && a.load.empty()) return;
    std::vector<int> load(n_gnbs, 0);
    for (int j : a.serving) {
      if (j < 0 || j >= n_gnbs) {
        audit.serving_violations++;
        continue;
      }
      load[j]++;
    }
    if (static_cast<int>(a.load.size()) != n_gnbs) audit.serving_violations++;
    for (int j = 0; j < n_gnbs; ++j) {
      if (load[j] > caps[j]) audit.capacity_violations++;
      if (j < static_cast<int>(a.load.size()) && load[j] != a.load[j])
        audit.capacity_violations++;
    }
  };
  check_assoc(r.ul_assoc, static_cast<int>(sc.gnbs.size()));
  if (sc.architecture == Architecture::SpecialTuav)
    check_assoc(r.dl_assoc, static_cast<int>(sc.gnbs.size()));

  for (const TuavPlacement& p : r.placements)
    if (!placement_feasible(p, sc.params)) audit.placement_violations++;

  if (policy.mode == PowerMode::DualSarCap) {
    const auto active = sc.active_indices();
    for (std::size_t i = 0; i < r.report.per_user_power.size(); ++i)
      if (sc.residents[active[i]].sar_ul * r.report.per_user_power[i] > policy.sar_limit)
        audit.sar_violations++;
  }
  return audit;
}

// Three-stage pipeline: 2D deployment (association inside), per-tUAV fine
// positioning with the association frozen, then a final association and the
// power/exposure/rate evaluation. The architecture decides which directions
// tUAVs assist and with what capacity.
inline PipelineResult run_pipeline(const Scenario& sc, const PipelineStrategy& strategy,
                                   Objective objective, const PowerPolicy& policy) {
  sc.validate();
  std::mt19937_64 rng = make_engine(derive_seed(sc.seed, 0x9a7e11e5u));
  const auto active = sc.active_indices();
  const auto caps = gnb_capacities(sc);
  const Architecture arch = sc.architecture;

  PipelineResult out;

  // The association that drives deployment and positioning: uplink costs for
  // UL-assisting architectures, the downlink radiated-power proxy for
  // DL-only tUAVs, and the combined cost when one association carries both.
  LinkDirection dir = LinkDirection::Uplink;
  if (arch == Architecture::SpecialTuav) dir = LinkDirection::Downlink;
  if (arch == Architecture::RegularTuav) dir = LinkDirection::UplinkAndDownlink;
  LinkCostModel model(sc, objective, policy, dir);

  if (arch == Architecture::BsOnly) {
    out.gnb_positions = {sc.gnbs[0].position};
    out.ul_assoc = detail::associate(build_cost_matrix(model, out.gnb_positions), caps,
                                     strategy.assoc, rng);
    out.deployment.gnb_positions = out.gnb_positions;
    out.deployment.assoc = out.ul_assoc;
    out.pre_positioning_cost = out.ul_assoc.total_cost;
    out.frozen_positioned_cost = out.ul_assoc.total_cost;
  } else {
    DeployStrategy deploy_strategy =
        arch == Architecture::FixedSc ? DeployStrategy::UniformGrid : strategy.deploy;
    out.deployment = detail::deploy(sc, model, deploy_strategy, rng);
    out.gnb_positions = out.deployment.gnb_positions;
    out.pre_positioning_cost = out.deployment.objective;
    out.frozen_positioned_cost = out.deployment.objective;

    // Fine positioning only applies to GS-attached tUAVs.
    if (!out.deployment.gs_assignment.empty()) {
      out.placements.resize(out.deployment.gs_assignment.size());
      for (std::size_t m = 0; m < out.placements.size(); ++m) {
        out.placements[m] = detail::position_one(
            sc, model, out.deployment.assoc, static_cast<int>(m),
            out.deployment.gs_assignment[m], strategy.position, strategy.oracle_resolution, rng);
        out.gnb_positions[m + 1] =
            from_spherical(sc.ground_stations[out.placements[m].gs_index], out.placements[m]);
      }
      out.frozen_positioned_cost = 0.0;
      for (int k = 0; k < out.deployment.assoc.per_link_cost.n_users; ++k)
        out.frozen_positioned_cost +=
            model.user_cost(k, out.gnb_positions[out.deployment.assoc.serving[k]]);
    }

    Association final_assoc = detail::associate(build_cost_matrix(model, out.gnb_positions), caps,
                                                strategy.assoc, rng);
    if (arch == Architecture::SpecialTuav) {
      out.dl_assoc = std::move(final_assoc);
    } else {
      out.ul_assoc = std::move(final_assoc);
    }
  }

  // Uplink for DL-only architectures runs entirely through the BS: the tUAV
  // columns carry zero UL capacity, so the repair stage drains them.
  if (arch == Architecture::SpecialTuav) {
    LinkCostModel ul_model(sc, objective, policy, LinkDirection::Uplink);
    std::vector<int> ul_caps = caps;
    for (std::size_t j = 1; j < ul_caps.size(); ++j) ul_caps[j] = 0;
    out.ul_assoc = greedy_associate(build_cost_matrix(ul_model, out.gnb_positions), ul_caps);
  }

  // Downlink serving map: the BS unless this architecture's tUAVs carry DL.
  out.dl_serving.assign(active.size(), 0);
  if (arch == Architecture::RegularTuav) {
    out.dl_serving = out.ul_assoc.serving;
  } else if (arch == Architecture::SpecialTuav) {
    out.dl_serving = out.dl_assoc.serving;
  }

  out.report = detail::evaluate(sc, out.gnb_positions, active, out.ul_assoc, out.dl_serving, policy);

  const ConstraintAudit audit = audit_constraints(sc, out, policy);
  if (!audit.ok()) throw infeasible_error("run_pipeline: hard constraint violated");
  return out;
}

// --- Monte Carlo -----------------------------------------------------------

inline constexpr std::array<const char*, 6> kMetricNames = {
    "ei_ul", "ei_dl", "ei_total", "satisfied_ratio", "sum_rate_ul", "avg_rate_ul"};
inline constexpr int kNumMetrics = static_cast<int>(kMetricNames.size());

inline std::array<double, kNumMetrics> report_metrics(const EvaluationReport& rep, int n_users) {
  return {rep.ei_ul,
          rep.ei_dl,
          rep.ei_total(),
          rep.satisfied_ratio,
          rep.sum_rate_ul,
          n_users > 0 ? rep.sum_rate_ul / n_users : 0.0};
}

struct MetricStats {
  double mean = 0.0;
  double stddev = 0.0;
  double p05 = 0.0;
  double p95 = 0.0;
};

struct MonteCarloResult {
  int n_iters = 0;
  std::array<MetricStats, kNumMetrics> stats;
  std::array<std::vector<double>, kNumMetrics> raw;  // filled when keep_raw
};

inline int worker_count() {
  if (const char* env = std::getenv("EMFNET_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

inline MetricStats summarize(std::vector<double> v) {
  MetricStats s;
  const int n = static_cast<int>(v.size());
  if (n == 0) return s;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / n;
  if (n > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / (n - 1));
  }
  std::sort(v.begin(), v.end());
  auto quantile = [&](double q) {
    const double pos = q * (n - 1);
    const int lo = static_cast<int>(pos);
    const int hi = std::min(lo + 1, n - 1);
    return v[lo] + (v[hi] - v[lo]) * (pos - lo);
  };
  s.p05 = quantile(0.05);
  s.p95 = quantile(0.95);
  return s;
}

// Independent seeded scenarios; iteration i of a master seed always sees the
// same per-iteration seed, so results are reproducible for any worker count.
// Aggregation reduces in iteration order.
inline MonteCarloResult monte_carlo(const Config& cfg, int n_iters, Objective objective,
                                    const PowerPolicy& policy, const PipelineStrategy& strategy,
                                    std::uint64_t master_seed, bool keep_raw = false) {
  if (n_iters < 1) throw config_error("monte_carlo: n_iters must be >= 1");
  std::vector<std::array<double, kNumMetrics>> rows(n_iters);

  const int n_workers = std::min(worker_count(), n_iters);
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto work = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n_iters) return;
      try {
        const Scenario sc = generate_scenario(cfg, derive_seed(master_seed, i));
        const PipelineResult r = run_pipeline(sc, strategy, objective, policy);
        rows[i] = report_metrics(r.report, static_cast<int>(r.report.per_user_rate.size()));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  MonteCarloResult out;
  out.n_iters = n_iters;
  for (int m = 0; m < kNumMetrics; ++m) {
    std::vector<double> v(n_iters);
    for (int i = 0; i < n_iters; ++i) v[i] = rows[i][m];
    if (keep_raw) out.raw[m] = v;
    out.stats[m] = summarize(std::move(v));
  }
  return out;
}

// --- Sweeps ----------------------------------------------------------------

enum class SweepKind { ActiveUsers, RateReq, SarLimit, PMaxDbm, GroundStations };

inline const char* to_string(SweepKind k) {
  switch (k) {
    case SweepKind::ActiveUsers: return "K";
    case SweepKind::RateReq: return "rate_req";
    case SweepKind::SarLimit: return "sar_limit";
    case SweepKind::PMaxDbm: return "p_max";
    case SweepKind::GroundStations: return "N";
  }
  return "?";
}

inline SweepKind sweep_kind_from_string(const std::string& s) {
  if (s == "K") return SweepKind::ActiveUsers;
  if (s == "rate_req") return SweepKind::RateReq;
  if (s == "sar_limit") return SweepKind::SarLimit;
  if (s == "p_max") return SweepKind::PMaxDbm;
  if (s == "N") return SweepKind::GroundStations;
  throw config_error("unknown sweep '" + s + "' (expected K, rate_req, sar_limit, p_max, N)");
}

// p_max sweep values are in dBm (hardware threshold axis); everything else is
// in the unit of the underlying config key.
inline void apply_sweep(Config& cfg, PowerPolicy& policy, SweepKind kind, double value) {
  switch (kind) {
    case SweepKind::ActiveUsers: cfg.scenario.n_users = static_cast<int>(std::lround(value)); return;
    case SweepKind::RateReq: cfg.scenario.rate_data_ul = value; return;
    case SweepKind::SarLimit: policy.sar_limit = value; return;
    case SweepKind::PMaxDbm: cfg.params.p_max = dbm_to_watt(value); return;
    case SweepKind::GroundStations: cfg.scenario.n_gs = static_cast<int>(std::lround(value)); return;
  }
}

struct ResultRow {
  std::string architecture;  // architecture or variant label
  std::string sweep_name;
  double sweep_value = 0.0;
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;
  double p05 = 0.0;
  double p95 = 0.0;
  int n_iters = 0;
};

using ResultTable = std::vector<ResultRow>;

inline void append_mc_rows(ResultTable& table, const std::string& label,
                           const std::string& sweep_name, double sweep_value,
                           const MonteCarloResult& mc) {
  for (int m = 0; m < kNumMetrics; ++m)
    table.push_back({label, sweep_name, sweep_value, kMetricNames[m], mc.stats[m].mean,
                     mc.stats[m].stddev, mc.stats[m].p05, mc.stats[m].p95, mc.n_iters});
}

// Grid of Monte Carlo runs, one row group per (architecture, sweep value).
inline ResultTable compare_architectures(const Config& base, std::span<const Architecture> archs,
                                         SweepKind kind, std::span<const double> values,
                                         int n_iters, Objective objective,
                                         const PowerPolicy& base_policy,
                                         const PipelineStrategy& strategy,
                                         std::uint64_t master_seed) {
  ResultTable table;
  for (const Architecture arch : archs) {
    for (const double v : values) {
      Config cfg = base;
      PowerPolicy policy = base_policy;
      cfg.scenario.architecture = arch;
      apply_sweep(cfg, policy, kind, v);
      const MonteCarloResult mc = monte_carlo(cfg, n_iters, objective, policy, strategy, master_seed);
      append_mc_rows(table, to_string(arch), to_string(kind), v, mc);
    }
  }
  return table;
}

}  // namespace emfnet
