#pragma once

#include <algorithm>
#include <cmath>

#include "emfnet/errors.hpp"
#include "emfnet/params.hpp"
#include "emfnet/vec.hpp"

namespace emfnet {

// Tether state of one tUAV relative to its ground station: length T,
// elevation theta measured from the horizontal plane, azimuth phi in [0, 2pi).
struct TuavPlacement {
  int gs_index = -1;
  double tether_T = 0.0;
  double elevation_theta = M_PI / 2.0;
  double azimuth_phi = 0.0;
};

inline bool placement_feasible(const TuavPlacement& p, const SimParams& params) {
  return p.tether_T >= 0.0 && p.tether_T <= params.t_max &&
         p.elevation_theta >= params.theta_min && p.elevation_theta <= M_PI / 2.0 &&
         p.azimuth_phi >= 0.0 && p.azimuth_phi < 2.0 * M_PI;
}

// Hover-center placement used whenever a tUAV has nothing to optimize for:
// straight up at half tether.
inline TuavPlacement default_placement(const SimParams& params, int gs_index = -1) {
  TuavPlacement p;
  p.gs_index = gs_index;
  p.tether_T = params.t_max / 2.0;
  p.elevation_theta = M_PI / 2.0;
  p.azimuth_phi = 0.0;
  return p;
}

inline Vec3 from_spherical(const Vec3& gs, const TuavPlacement& p) {
  const double ct = std::cos(p.elevation_theta);
  return {gs.x + p.tether_T * ct * std::cos(p.azimuth_phi),
          gs.y + p.tether_T * ct * std::sin(p.azimuth_phi),
          gs.z + p.tether_T * std::sin(p.elevation_theta)};
}

// Inverse of from_spherical. phi is defined as 0 on the vertical axis, and a
// zero-length tether reports theta = pi/2 so that placement invariants hold.
inline TuavPlacement to_spherical(const Vec3& gs, const Vec3& p) {
  const Vec3 d = p - gs;
  if (d.z < 0.0) throw geometry_error("to_spherical: point below its ground station");
  TuavPlacement out;
  out.tether_T = d.norm();
  const double rho = std::hypot(d.x, d.y);
  if (out.tether_T == 0.0) {
    out.elevation_theta = M_PI / 2.0;
    out.azimuth_phi = 0.0;
    return out;
  }
  out.elevation_theta = std::atan2(d.z, rho);
  if (rho == 0.0) {
    out.azimuth_phi = 0.0;
  } else {
    out.azimuth_phi = std::atan2(d.y, d.x);
    if (out.azimuth_phi < 0.0) out.azimuth_phi += 2.0 * M_PI;
    if (out.azimuth_phi >= 2.0 * M_PI) out.azimuth_phi = 0.0;
  }
  return out;
}

// Round spherical components into the closed feasible intervals. Positioning
// results pass through this so downstream feasibility checks are exact field
// comparisons, immune to atan2/cos round-trip noise.
inline TuavPlacement snap_placement(TuavPlacement p, const SimParams& params) {
  p.tether_T = std::clamp(p.tether_T, 0.0, params.t_max);
  p.elevation_theta = std::clamp(p.elevation_theta, params.theta_min, M_PI / 2.0);
  if (p.azimuth_phi < 0.0 || p.azimuth_phi >= 2.0 * M_PI) p.azimuth_phi = 0.0;
  return p;
}

namespace detail {

// Margin keeping projected points strictly inside the feasible intervals, so
// that spherical round-trips cannot round back across a constraint boundary.
inline constexpr double kHoverSnap = 1e-12;

}  // namespace detail

// Euclidean-nearest point of the hovering area {T <= t_max,
// theta in [theta_min, pi/2]} to an arbitrary point p. The set is the
// intersection of the elevation cone with the tether ball, which is convex,
// so the projection splits into three cases: radial scaling for points inside
// the cone, projection onto the cone surface (or its apex), and the rim
// circle where cone and sphere meet. Feasible inputs are returned unchanged
// and the projection is idempotent.
inline Vec3 clamp_to_hover(const Vec3& gs, const Vec3& p, const SimParams& params) {
  const Vec3 d = p - gs;
  const double rho = std::hypot(d.x, d.y);
  const double tan_min = std::tan(params.theta_min);

  const bool in_cone = d.z >= rho * tan_min;
  const double dist = d.norm();
  if (in_cone && dist <= params.t_max) return p;

  const double ux = rho > 0.0 ? d.x / rho : 1.0;
  const double uy = rho > 0.0 ? d.y / rho : 0.0;

  double rho_q, z_q;
  if (in_cone) {
    // Outside the ball only: scale radially (stays inside the cone).
    const double s = params.t_max / dist * (1.0 - detail::kHoverSnap);
    rho_q = rho * s;
    z_q = d.z * s;
  } else {
    // Project onto the cone boundary ray (cos theta_min, sin theta_min).
    const double t = rho * std::cos(params.theta_min) + d.z * std::sin(params.theta_min);
    if (t <= 0.0) {
      // Below the polar cone: nearest point is the apex, i.e. the GS itself.
      return gs;
    }
    const double tc = std::min(t, params.t_max * (1.0 - detail::kHoverSnap));
    const double theta = params.theta_min + detail::kHoverSnap;
    rho_q = tc * std::cos(theta);
    z_q = tc * std::sin(theta);
  }
  return {gs.x + rho_q * ux, gs.y + rho_q * uy, gs.z + z_q};
}

}  // namespace emfnet
