#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "emfnet/errors.hpp"
#include "emfnet/link_cost.hpp"
#include "emfnet/params.hpp"

namespace emfnet {

// Dense K x J cost matrix, e_kj for exposure or -R_kj for rate.
struct CostMatrix {
  int n_users = 0;
  int n_gnbs = 0;
  std::vector<double> e;  // row-major, user-major

  CostMatrix() = default;
  CostMatrix(int k, int j) : n_users(k), n_gnbs(j), e(static_cast<std::size_t>(k) * j, 0.0) {}
  double at(int k, int j) const { return e[static_cast<std::size_t>(k) * n_gnbs + j]; }
  double& at(int k, int j) { return e[static_cast<std::size_t>(k) * n_gnbs + j]; }
};

inline CostMatrix build_cost_matrix(const LinkCostModel& model, std::span<const Vec3> gnb_positions) {
  CostMatrix m(model.user_count(), static_cast<int>(gnb_positions.size()));
  std::vector<double> col(model.user_count());
  for (int j = 0; j < m.n_gnbs; ++j) {
    model.fill_column(gnb_positions[j], col);
    for (int k = 0; k < m.n_users; ++k) m.at(k, j) = col[k];
  }
  return m;
}

// User -> gNB assignment with capacity bookkeeping. serving[k] is the single
// serving gNB of active user k; tuav_gain[j-1] is g_j, the cost saved by
// serving gNB j's users there instead of at the BS.
struct Association {
  std::vector<int> serving;
  std::vector<int> load;
  CostMatrix per_link_cost;
  std::vector<double> tuav_gain;
  double total_cost = 0.0;
  int repair_moves = 0;

  bool satisfies_capacity(std::span<const int> capacity) const {
    for (std::size_t j = 0; j < load.size(); ++j)
      if (load[j] > capacity[j]) return false;
    return true;
  }
};

namespace detail {

inline void finalize_association(Association& a) {
  const CostMatrix& m = a.per_link_cost;
  a.total_cost = 0.0;
  for (int k = 0; k < m.n_users; ++k) a.total_cost += m.at(k, a.serving[k]);
  a.tuav_gain.assign(std::max(0, m.n_gnbs - 1), 0.0);
  for (int k = 0; k < m.n_users; ++k) {
    const int j = a.serving[k];
    if (j > 0) a.tuav_gain[j - 1] += m.at(k, 0) - m.at(k, j);
  }
}

}  // namespace detail

// Two-stage greedy association. Stage 1 gives every user its cheapest gNB.
// Stage 2 repairs capacity: while any gNB is overloaded, move the single
// (user, target) pair with the smallest cost increment, where the user sits
// on an overloaded gNB and the target still has room. Ties break toward the
// lowest user id then lowest gNB id. The non-full set is recomputed after
// every move, and each move strictly reduces total overload, so the repair
// ends in at most K moves.
inline Association greedy_associate(const CostMatrix& cost, std::span<const int> capacity) {
  const int K = cost.n_users;
  const int J = cost.n_gnbs;
  std::int64_t total_cap = 0;
  for (int c : capacity) total_cap += c;
  if (total_cap < K)
    throw infeasible_error("greedy_associate: total capacity " + std::to_string(total_cap) +
                           " below user count " + std::to_string(K));

  Association a;
  a.per_link_cost = cost;
  a.serving.assign(K, 0);
  a.load.assign(J, 0);
  for (int k = 0; k < K; ++k) {
    int best = 0;
    for (int j = 1; j < J; ++j)
      if (cost.at(k, j) < cost.at(k, best)) best = j;
    a.serving[k] = best;
    a.load[best]++;
  }

  for (;;) {
    bool overloaded = false;
    for (int j = 0; j < J; ++j) overloaded |= a.load[j] > capacity[j];
    if (!overloaded) break;

    int best_k = -1, best_j = -1;
    double best_inc = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      const int s = a.serving[k];
      if (a.load[s] <= capacity[s]) continue;
      for (int j = 0; j < J; ++j) {
        if (j == s || a.load[j] >= capacity[j]) continue;
        const double inc = cost.at(k, j) - cost.at(k, s);
        if (inc < best_inc) {
          best_inc = inc;
          best_k = k;
          best_j = j;
        }
      }
    }
    if (best_k < 0)
      throw infeasible_error("greedy_associate: overload with no movable user");
    a.load[a.serving[best_k]]--;
    a.serving[best_k] = best_j;
    a.load[best_j]++;
    a.repair_moves++;
  }

  detail::finalize_association(a);
  return a;
}

// Globally optimal association by exhaustive enumeration (depth-first with
// capacity pruning). Guarded by J^K against the enumeration budget.
inline Association brute_force_associate(const CostMatrix& cost, std::span<const int> capacity,
                                         std::uint64_t budget = 10'000'000) {
  const int K = cost.n_users;
  const int J = cost.n_gnbs;
  double combos = 1.0;
  for (int k = 0; k < K; ++k) combos *= J;
  if (combos > static_cast<double>(budget))
    throw budget_error("brute_force_associate: J^K = " + std::to_string(combos) +
                       " exceeds budget " + std::to_string(budget));

  std::vector<int> pick(K, 0), load(J, 0), best_pick;
  double best_cost = std::numeric_limits<double>::infinity();
  double run_cost = 0.0;

  auto recurse = [&](auto&& self, int k) -> void {
    if (k == K) {
      if (run_cost < best_cost) {
        best_cost = run_cost;
        best_pick = pick;
      }
      return;
    }
    for (int j = 0; j < J; ++j) {
      if (load[j] >= capacity[j]) continue;
      load[j]++;
      pick[k] = j;
      run_cost += cost.at(k, j);
      self(self, k + 1);
      run_cost -= cost.at(k, j);
      load[j]--;
    }
  };
  recurse(recurse, 0);
  if (best_pick.empty()) throw infeasible_error("brute_force_associate: no feasible assignment");

  Association a;
  a.per_link_cost = cost;
  a.serving = best_pick;
  a.load.assign(J, 0);
  for (int j : a.serving) a.load[j]++;
  detail::finalize_association(a);
  return a;
}

inline std::vector<int> gnb_capacities(const Scenario& sc) {
  std::vector<int> caps;
  caps.reserve(sc.gnbs.size());
  for (const Gnb& g : sc.gnbs)
    caps.push_back(g.id == 0 && g.capacity == 0 ? static_cast<int>(sc.residents.size())
                                                : g.capacity);
  return caps;
}

inline Association greedy_associate(const Scenario& sc, std::span<const Vec3> gnb_positions,
                                    Objective objective, const PowerPolicy& policy) {
  LinkCostModel model(sc, objective, policy, LinkDirection::Uplink);
  return greedy_associate(build_cost_matrix(model, gnb_positions), gnb_capacities(sc));
}

inline Association brute_force_associate(const Scenario& sc, std::span<const Vec3> gnb_positions,
                                         Objective objective, const PowerPolicy& policy,
                                         std::uint64_t budget = 10'000'000) {
  LinkCostModel model(sc, objective, policy, LinkDirection::Uplink);
  return brute_force_associate(build_cost_matrix(model, gnb_positions), gnb_capacities(sc), budget);
}

}  // namespace emfnet
