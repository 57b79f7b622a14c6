#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "emfnet/channel.hpp"
#include "emfnet/errors.hpp"
#include "emfnet/params.hpp"

namespace emfnet {

enum class PowerMode {
  PrimalRateTarget,  // meet the UL rate requirement, capped at p_max
  DualSarCap,        // max power allowed by the per-user SAR limit
};

struct PowerPolicy {
  PowerMode mode = PowerMode::PrimalRateTarget;
  double sar_limit = 0.0;  // W/kg, dual mode only

  static PowerPolicy primal() { return {PowerMode::PrimalRateTarget, 0.0}; }
  static PowerPolicy dual(double limit) { return {PowerMode::DualSarCap, limit}; }
};

// Transmit power of one user over a link with path loss `loss`. Always in
// [0, p_max]; in dual mode sar_ul * power <= sar_limit holds exactly, nudging
// the quotient down when the rounding of the product would overshoot.
inline double allocate_power(const User& user, double loss, const PowerPolicy& policy,
                             const SimParams& params) {
  if (policy.mode == PowerMode::PrimalRateTarget) {
    return std::min(params.p_max, required_power(user.rate_req_ul, loss, params));
  }
  double cap = policy.sar_limit / user.sar_ul;
  while (cap * user.sar_ul > policy.sar_limit) cap = std::nextafter(cap, 0.0);
  return std::min(params.p_max, cap);
}

// Uplink exposure index: SAR-weighted sum of the active users' transmit
// powers. `users` yields the User record for ordinal i of `powers`.
template <typename UserAt>
double exposure_index_ul(std::span<const double> powers, UserAt&& users) {
  double ei = 0.0;
  for (std::size_t i = 0; i < powers.size(); ++i) ei += users(i).sar_ul * powers[i];
  return ei;
}

inline double exposure_index_ul(const Scenario& sc, std::span<const int> active,
                                std::span<const double> powers) {
  double ei = 0.0;
  for (std::size_t i = 0; i < powers.size(); ++i) ei += sc.residents[active[i]].sar_ul * powers[i];
  return ei;
}

// Effective aperture converting received power to power density in free
// space: A_eff = lambda^2 / (4 pi).
inline double effective_aperture(const SimParams& p) {
  return (p.c * p.c) / (4.0 * M_PI * p.fc * p.fc);
}

// Downlink exposure index, summed over every resident and gNB. gNB j
// transmits, for each of its DL-served users, the per-link power that meets
// that user's DL rate requirement (the per-serving-link split of the total
// gNB power). Resident k is exposed to gNB j through the density of its own
// served link, (P_link / L_kj) / A_eff; resident-gNB pairs without a serving
// link carry no per-link power and contribute zero.
//
// dl_serving maps active-user ordinal -> serving gNB index for the DL.
inline double exposure_index_dl(const Scenario& sc, std::span<const Vec3> gnb_positions,
                                std::span<const int> active, std::span<const int> dl_serving) {
  const SimParams& p = sc.params;
  const double sigma2 = noise_power(p);
  const double a_eff = effective_aperture(p);

  double ei = 0.0;
  for (std::size_t i = 0; i < active.size(); ++i) {
    const User& u = sc.residents[active[i]];
    const double loss = avg_path_loss(u.position, gnb_positions[dl_serving[i]], p);
    const double link_power = sigma2 * loss * (std::exp2(u.rate_req_dl / p.bandwidth_B) - 1.0);
    ei += p.sar_dl * (link_power / loss) / a_eff;
  }
  return ei;
}

// Fraction of users whose achieved rate meets the requirement, with 1 bps of
// absolute slack.
inline double satisfied_ratio(std::span<const double> achieved, std::span<const double> required) {
  if (achieved.size() != required.size())
    throw config_error("satisfied_ratio: achieved/required size mismatch");
  if (achieved.empty()) throw config_error("satisfied_ratio: undefined for zero users");
  constexpr double kRateSlack = 1.0;  // bps
  int ok = 0;
  for (std::size_t i = 0; i < achieved.size(); ++i)
    if (achieved[i] >= required[i] - kRateSlack) ++ok;
  return static_cast<double>(ok) / static_cast<double>(achieved.size());
}

}  // namespace emfnet
