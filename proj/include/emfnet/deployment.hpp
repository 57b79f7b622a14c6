#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "emfnet/association.hpp"
#include "emfnet/errors.hpp"
#include "emfnet/geometry.hpp"
#include "emfnet/link_cost.hpp"
#include "emfnet/params.hpp"

namespace emfnet {

// Output of the 2D deployment stage: per-tUAV ground-station choice plus the
// association recomputed at the hover-center placement above each GS.
struct DeploymentResult {
  std::vector<int> gs_assignment;    // per tUAV; empty for grid small cells
  std::vector<Vec2> tuav_xy;         // final 2D search positions (pre-snap)
  std::vector<Vec3> gnb_positions;   // BS + tUAVs at their final placement
  Association assoc;
  double objective = 0.0;            // assoc.total_cost
};

enum class BaselineDeploy { RandomGs, UniformGrid };

namespace detail {

inline double search_altitude(const SimParams& p) { return p.h_gs + p.t_max / 2.0; }

inline Vec2 clip_to_area(Vec2 q, const SimParams& p) {
  return {std::clamp(q.x, 0.0, p.area_x), std::clamp(q.y, 0.0, p.area_y)};
}

inline std::vector<Vec3> positions_at(const Scenario& sc, std::span<const Vec2> xy) {
  std::vector<Vec3> pos;
  pos.reserve(xy.size() + 1);
  pos.push_back(sc.gnbs[0].position);
  const double h = search_altitude(sc.params);
  for (const Vec2& q : xy) pos.push_back({q.x, q.y, h});
  return pos;
}

inline std::vector<Vec2> random_scatter(const Scenario& sc, int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(0.0, sc.params.area_x);
  std::uniform_real_distribution<double> uy(0.0, sc.params.area_y);
  std::vector<Vec2> xy(m);
  for (auto& q : xy) q = {ux(rng), uy(rng)};
  return xy;
}

// Random scatter seeded at distinct active-user positions (the usual k-means
// start at data points); tUAVs beyond the user count fall back to uniform
// draws.
inline std::vector<Vec2> user_seeded_scatter(const Scenario& sc, int m, std::mt19937_64& rng) {
  std::vector<int> active = sc.active_indices();
  std::shuffle(active.begin(), active.end(), rng);
  std::vector<Vec2> xy;
  xy.reserve(m);
  for (int i = 0; i < m && i < static_cast<int>(active.size()); ++i)
    xy.push_back(sc.residents[active[i]].position.xy());
  for (Vec2 q : random_scatter(sc, m - static_cast<int>(xy.size()), rng)) xy.push_back(q);
  return xy;
}

inline void require_gs_capacity(const Scenario& sc, int m) {
  if (m > static_cast<int>(sc.ground_stations.size()))
    throw infeasible_error("deployment: " + std::to_string(m) + " tUAVs exceed " +
                           std::to_string(sc.ground_stations.size()) + " ground stations");
}

}  // namespace detail

// Near-square grid of n cell centers over the area, row-major.
inline std::vector<Vec2> uniform_grid_points(int n, const SimParams& p) {
  const int gx = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  const int gy = (n + gx - 1) / gx;
  std::vector<Vec2> pts;
  pts.reserve(n);
  for (int iy = 0; iy < gy && static_cast<int>(pts.size()) < n; ++iy)
    for (int ix = 0; ix < gx && static_cast<int>(pts.size()) < n; ++ix)
      pts.push_back({(ix + 0.5) * p.area_x / gx, (iy + 0.5) * p.area_y / gy});
  return pts;
}

// Greedy in tUAV id order: each takes the nearest ground station still
// unoccupied, so the result is an injection into the GS set.
inline std::vector<int> attach_nearest_gs(std::span<const Vec2> tuav_xy,
                                          std::span<const Vec3> ground_stations) {
  if (tuav_xy.size() > ground_stations.size())
    throw infeasible_error("attach_nearest_gs: more tUAVs than ground stations");
  std::vector<bool> taken(ground_stations.size(), false);
  std::vector<int> pick(tuav_xy.size(), -1);
  for (std::size_t m = 0; m < tuav_xy.size(); ++m) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < ground_stations.size(); ++n) {
      if (taken[n]) continue;
      const double dx = tuav_xy[m].x - ground_stations[n].x;
      const double dy = tuav_xy[m].y - ground_stations[n].y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best) {
        best = d2;
        pick[m] = static_cast<int>(n);
      }
    }
    taken[pick[m]] = true;
  }
  return pick;
}

namespace detail {

// Snap tUAVs to ground stations and recompute the association at the
// hover-center placement above each chosen GS.
inline DeploymentResult finish_at_gs(const Scenario& sc, const LinkCostModel& model,
                                     std::vector<Vec2> xy, std::vector<int> gs_pick) {
  DeploymentResult out;
  out.tuav_xy = std::move(xy);
  out.gs_assignment = std::move(gs_pick);
  out.gnb_positions.push_back(sc.gnbs[0].position);
  for (int n : out.gs_assignment) {
    const Vec3& gs = sc.ground_stations[n];
    out.gnb_positions.push_back(from_spherical(gs, default_placement(sc.params, n)));
  }
  out.assoc = greedy_associate(build_cost_matrix(model, out.gnb_positions), gnb_capacities(sc));
  out.objective = out.assoc.total_cost;
  return out;
}

inline DeploymentResult bs_only_result(const Scenario& sc, const LinkCostModel& model) {
  DeploymentResult out;
  out.gnb_positions.push_back(sc.gnbs[0].position);
  out.assoc = greedy_associate(build_cost_matrix(model, out.gnb_positions), gnb_capacities(sc));
  out.objective = out.assoc.total_cost;
  return out;
}

}  // namespace detail

// Cost-weighted k-means. tUAVs start at a random scatter; each round compares
// the per-tUAV gain at the current position against the gain at the weighted
// barycenter of its users and keeps the better of the two. The best iterate
// seen (by total association cost) is the one attached to ground stations,
// which keeps the tracked objective monotone even though the per-tUAV gains
// are coupled through the shared association.
inline DeploymentResult deploy_kmeans(const Scenario& sc, const LinkCostModel& model,
                                      std::mt19937_64& rng) {
  const int m = sc.tuav_count();
  if (m == 0) return detail::bs_only_result(sc, model);
  detail::require_gs_capacity(sc, m);
  const auto caps = gnb_capacities(sc);
  const SimParams& p = sc.params;

  std::vector<Vec2> xy = detail::user_seeded_scatter(sc, m, rng);
  Association cur = greedy_associate(build_cost_matrix(model, detail::positions_at(sc, xy)), caps);

  std::vector<Vec2> best_xy = xy;
  double best_cost = cur.total_cost;

  for (int iter = 0; iter < p.i_max; ++iter) {
    // Weighted barycenter of each tUAV's users; empty clusters stay put.
    std::vector<Vec2> mid = xy;
    std::vector<double> wx(m, 0.0), wy(m, 0.0), wsum(m, 0.0);
    for (int k = 0; k < cur.per_link_cost.n_users; ++k) {
      const int j = cur.serving[k];
      if (j == 0) continue;
      const User& u = sc.residents[model.active()[k]];
      const double w = cur.per_link_cost.at(k, j);
      wx[j - 1] += u.position.x * w;
      wy[j - 1] += u.position.y * w;
      wsum[j - 1] += w;
    }
    for (int j = 0; j < m; ++j)
      if (wsum[j] != 0.0) mid[j] = detail::clip_to_area({wx[j] / wsum[j], wy[j] / wsum[j]}, p);

    Association at_mid =
        greedy_associate(build_cost_matrix(model, detail::positions_at(sc, mid)), caps);

    std::vector<Vec2> next(m);
    double delta = 0.0;
    for (int j = 0; j < m; ++j) {
      next[j] = at_mid.tuav_gain[j] > cur.tuav_gain[j] ? mid[j] : xy[j];
      delta = std::max({delta, std::abs(next[j].x - xy[j].x), std::abs(next[j].y - xy[j].y)});
    }

    xy = std::move(next);
    cur = greedy_associate(build_cost_matrix(model, detail::positions_at(sc, xy)), caps);
    if (cur.total_cost < best_cost) {
      best_cost = cur.total_cost;
      best_xy = xy;
    }
    if (delta < p.tol_delta) break;
  }

  return detail::finish_at_gs(sc, model, best_xy,
                              attach_nearest_gs(best_xy, sc.ground_stations));
}

// 2D shrink-and-realign. tUAVs move one by one to the best of the candidate
// points on a circle around them, only when the total association cost
// improves; the radius halves each round until it drops below sr_radius_min.
inline DeploymentResult deploy_sr2d(const Scenario& sc, const LinkCostModel& model,
                                    std::mt19937_64& rng) {
  const int m = sc.tuav_count();
  if (m == 0) return detail::bs_only_result(sc, model);
  detail::require_gs_capacity(sc, m);
  const auto caps = gnb_capacities(sc);
  const SimParams& p = sc.params;

  // Even initial scatter; the first full-radius round reaches the whole area.
  std::vector<Vec2> xy = uniform_grid_points(m, p);
  double cur_cost =
      greedy_associate(build_cost_matrix(model, detail::positions_at(sc, xy)), caps).total_cost;

  const int T = p.sr_candidates_2d;
  for (double r = p.sr_radius_init; r >= p.sr_radius_min; r /= 2.0) {
    for (int j = 0; j < m; ++j) {
      Vec2 best_cand = xy[j];
      double best_cost = cur_cost;
      for (int t = 0; t < T; ++t) {
        const double ang = 2.0 * M_PI * t / T;
        std::vector<Vec2> trial = xy;
        trial[j] = detail::clip_to_area({xy[j].x + r * std::cos(ang), xy[j].y + r * std::sin(ang)}, p);
        const double c =
            greedy_associate(build_cost_matrix(model, detail::positions_at(sc, trial)), caps)
                .total_cost;
        if (c < best_cost) {
          best_cost = c;
          best_cand = trial[j];
        }
      }
      if (best_cost < cur_cost) {
        xy[j] = best_cand;
        cur_cost = best_cost;
      }
    }
  }

  return detail::finish_at_gs(sc, model, xy, attach_nearest_gs(xy, sc.ground_stations));
}

// RandomGs draws distinct ground stations uniformly; UniformGrid is the fixed
// small-cell layout (no GS attachment, cells hover at the search altitude).
inline DeploymentResult deploy_baseline(const Scenario& sc, const LinkCostModel& model,
                                        BaselineDeploy mode, std::mt19937_64& rng) {
  const int m = sc.tuav_count();
  if (m == 0) return detail::bs_only_result(sc, model);

  if (mode == BaselineDeploy::UniformGrid) {
    DeploymentResult out;
    out.tuav_xy = uniform_grid_points(m, sc.params);
    out.gnb_positions.push_back(sc.gnbs[0].position);
    const double h = detail::search_altitude(sc.params);
    for (const Vec2& q : out.tuav_xy) out.gnb_positions.push_back({q.x, q.y, h});
    out.assoc = greedy_associate(build_cost_matrix(model, out.gnb_positions), gnb_capacities(sc));
    out.objective = out.assoc.total_cost;
    return out;
  }

  detail::require_gs_capacity(sc, m);
  std::vector<int> idx(sc.ground_stations.size());
  for (std::size_t n = 0; n < idx.size(); ++n) idx[n] = static_cast<int>(n);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(m);
  std::vector<Vec2> xy;
  for (int n : idx) xy.push_back(sc.ground_stations[n].xy());
  return detail::finish_at_gs(sc, model, std::move(xy), std::move(idx));
}

// Exhaustive search over ground-station subsets. The association objective
// does not depend on which tUAV id sits on which GS, so subsets are
// enumerated as combinations assigned in id order; the budget guard still
// counts ordered subsets, C(N, M) * M!.
inline DeploymentResult brute_force_deploy(const Scenario& sc, const LinkCostModel& model,
                                           std::uint64_t budget = 10'000'000) {
  const int m = sc.tuav_count();
  if (m == 0) return detail::bs_only_result(sc, model);
  detail::require_gs_capacity(sc, m);
  const int n = static_cast<int>(sc.ground_stations.size());

  double ordered = 1.0;
  for (int i = 0; i < m; ++i) ordered *= n - i;
  if (ordered > static_cast<double>(budget))
    throw budget_error("brute_force_deploy: " + std::to_string(ordered) +
                       " ordered GS subsets exceed budget " + std::to_string(budget));

  std::vector<int> combo(m), best_combo;
  double best_cost = std::numeric_limits<double>::infinity();
  auto recurse = [&](auto&& self, int pos, int start) -> void {
    if (pos == m) {
      std::vector<Vec2> xy;
      for (int g : combo) xy.push_back(sc.ground_stations[g].xy());
      DeploymentResult trial = detail::finish_at_gs(sc, model, std::move(xy), combo);
      if (trial.objective < best_cost) {
        best_cost = trial.objective;
        best_combo = combo;
      }
      return;
    }
    for (int g = start; g <= n - (m - pos); ++g) {
      combo[pos] = g;
      self(self, pos + 1, g + 1);
    }
  };
  recurse(recurse, 0, 0);

  std::vector<Vec2> xy;
  for (int g : best_combo) xy.push_back(sc.ground_stations[g].xy());
  return detail::finish_at_gs(sc, model, std::move(xy), std::move(best_combo));
}

// Spec-shaped wrappers with the uplink exposure/rate cost.
inline DeploymentResult deploy_kmeans(const Scenario& sc, Objective objective,
                                      const PowerPolicy& policy, std::mt19937_64& rng) {
  LinkCostModel model(sc, objective, policy, LinkDirection::Uplink);
  return deploy_kmeans(sc, model, rng);
}

inline DeploymentResult deploy_sr2d(const Scenario& sc, Objective objective,
                                    const PowerPolicy& policy, std::mt19937_64& rng) {
  LinkCostModel model(sc, objective, policy, LinkDirection::Uplink);
  return deploy_sr2d(sc, model, rng);
}

inline DeploymentResult deploy_baseline(const Scenario& sc, Objective objective,
                                        const PowerPolicy& policy, BaselineDeploy mode,
                                        std::mt19937_64& rng) {
  LinkCostModel model(sc, objective, policy, LinkDirection::Uplink);
  return deploy_baseline(sc, model, mode, rng);
}

inline DeploymentResult brute_force_deploy(const Scenario& sc, Objective objective,
                                           const PowerPolicy& policy,
                                           std::uint64_t budget = 10'000'000) {
  LinkCostModel model(sc, objective, policy, LinkDirection::Uplink);
  return brute_force_deploy(sc, model, budget);
}

}  // namespace emfnet
