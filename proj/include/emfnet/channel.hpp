#pragma once

#include <cmath>

#include "emfnet/errors.hpp"
#include "emfnet/params.hpp"
#include "emfnet/units.hpp"
#include "emfnet/vec.hpp"

namespace emfnet {

// One user<->gNB link: 3D distance r and horizontal distance d, r >= d >= 0.
struct LinkGeometry {
  double r = 0.0;
  double d = 0.0;
};

inline LinkGeometry link_between(const Vec3& a, const Vec3& b) {
  return {distance(a, b), distance_xy(a, b)};
}

// Probabilistic LoS as a logistic function of the elevation angle in degrees.
// d = 0 is treated as the 90-degree limit.
inline double los_probability(const LinkGeometry& link, const SimParams& p) {
  double elev_deg;
  if (link.d <= 0.0) {
    elev_deg = 90.0;
  } else {
    const double dz = std::sqrt(std::max(0.0, link.r * link.r - link.d * link.d));
    elev_deg = rad_to_deg(std::atan(dz / link.d));
  }
  return 1.0 / (1.0 + p.a_env * std::exp(-p.b_env * (elev_deg - p.a_env)));
}

namespace detail {

inline double pow_dist(double r, double alpha) {
  return alpha == 2.0 ? r * r : std::pow(r, alpha);
}

}  // namespace detail

// Fading-averaged path loss: free-space factor times the LoS/NLoS mixture.
// Returned as a linear power ratio (>= 1 scale).
inline double avg_path_loss(const LinkGeometry& link, const SimParams& p) {
  if (link.r <= 0.0) throw geometry_error("avg_path_loss: degenerate zero-length link");
  const double pref = (4.0 * M_PI * p.fc / p.c) * (4.0 * M_PI * p.fc / p.c);
  const double plos = los_probability(link, p);
  const double eta_l = to_linear(p.eta_los_db);
  const double eta_n = to_linear(p.eta_nlos_db);
  return pref * (eta_l * detail::pow_dist(link.r, p.alpha_los) * plos +
                 eta_n * detail::pow_dist(link.r, p.alpha_nlos) * (1.0 - plos));
}

inline double avg_path_loss(const Vec3& a, const Vec3& b, const SimParams& p) {
  return avg_path_loss(link_between(a, b), p);
}

// Shannon rate over one RB, base-2 (bits). No interference: distinct RBs.
inline double ul_rate(double p_tx, double loss, const SimParams& p) {
  return p.bandwidth_B * std::log2(1.0 + p_tx / (noise_power(p) * loss));
}

// Exact inverse of ul_rate: the transmit power achieving rate_req.
inline double required_power(double rate_req, double loss, const SimParams& p) {
  return noise_power(p) * loss * (std::exp2(rate_req / p.bandwidth_B) - 1.0);
}

}  // namespace emfnet
