#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "emfnet/channel.hpp"
#include "emfnet/exposure.hpp"
#include "emfnet/params.hpp"

namespace emfnet {

enum class Objective { MinExposure, MaxRate };

// Which link directions a candidate gNB would carry for its users. Green
// tUAVs and fixed SCs assist the uplink only; special tUAVs the downlink
// only; regular tUAVs both (one association drives both directions).
enum class LinkDirection { Uplink, Downlink, UplinkAndDownlink };

// Per-link cost of serving an active user from a gNB at a given position.
//
// MinExposure, uplink: e_kj = sar_ul * P_k(loss), the user's exposure.
// MaxRate: -R_kj under the policy's power rule.
// MinExposure, downlink: exposure proxy for the radiated DL link power.
//   Serving user k from position q radiates sigma^2 * L_k(q) * (2^(R/B) - 1);
//   the population-wide density this produces is that power spread through
//   every resident's own path loss, so the cost is
//   sar_dl / A_eff * P_link * phi(q) with phi(q) = sum_residents 1 / L_i(q).
//   The served user's self term is position-independent and dropped.
class LinkCostModel {
 public:
  LinkCostModel(const Scenario& sc, Objective objective, PowerPolicy policy, LinkDirection dir)
      : sc_(sc),
        active_(sc.active_indices()),
        objective_(objective),
        policy_(policy),
        dir_(dir),
        sigma2_(noise_power(sc.params)),
        a_eff_(effective_aperture(sc.params)) {}

  const Scenario& scenario() const { return sc_; }
  const std::vector<int>& active() const { return active_; }
  int user_count() const { return static_cast<int>(active_.size()); }
  Objective objective() const { return objective_; }
  const PowerPolicy& policy() const { return policy_; }
  LinkDirection direction() const { return dir_; }

  // Cost column for one gNB position, all active users. out.size() == K.
  void fill_column(const Vec3& gnb_pos, std::span<double> out) const {
    const double phi = needs_dl() ? population_loss_factor(gnb_pos) : 0.0;
    for (int i = 0; i < user_count(); ++i) out[i] = cost_with_phi(i, gnb_pos, phi);
  }

  // One-off cost; recomputes the population factor when the DL term is used.
  double user_cost(int ordinal, const Vec3& gnb_pos) const {
    const double phi = needs_dl() ? population_loss_factor(gnb_pos) : 0.0;
    return cost_with_phi(ordinal, gnb_pos, phi);
  }

  // Sum of residents' reciprocal path losses to a transmitter at pos.
  double population_loss_factor(const Vec3& pos) const {
    double phi = 0.0;
    for (const User& u : sc_.residents) phi += 1.0 / avg_path_loss(u.position, pos, sc_.params);
    return phi;
  }

  // Cost with a precomputed population factor, for callers evaluating many
  // users at one candidate position.
  double user_cost_with_phi(int ordinal, const Vec3& gnb_pos, double phi) const {
    return cost_with_phi(ordinal, gnb_pos, phi);
  }

  bool uses_population_factor() const { return needs_dl(); }

 private:
  bool needs_ul() const { return dir_ != LinkDirection::Downlink; }
  bool needs_dl() const {
    return objective_ == Objective::MinExposure && dir_ != LinkDirection::Uplink;
  }

  double cost_with_phi(int ordinal, const Vec3& gnb_pos, double phi) const {
    const User& u = sc_.residents[active_[ordinal]];
    const double loss = avg_path_loss(u.position, gnb_pos, sc_.params);
    double cost = 0.0;
    if (objective_ == Objective::MaxRate) {
      const double p = allocate_power(u, loss, policy_, sc_.params);
      return -ul_rate(p, loss, sc_.params);
    }
    if (needs_ul()) {
      cost += u.sar_ul * allocate_power(u, loss, policy_, sc_.params);
    }
    if (needs_dl()) {
      const double link_power = sigma2_ * loss * (std::exp2(u.rate_req_dl / sc_.params.bandwidth_B) - 1.0);
      cost += sc_.params.sar_dl / a_eff_ * link_power * phi;
    }
    return cost;
  }

  const Scenario& sc_;
  std::vector<int> active_;
  Objective objective_;
  PowerPolicy policy_;
  LinkDirection dir_;
  double sigma2_;
  double a_eff_;
};

}  // namespace emfnet
