#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "emfnet/errors.hpp"
#include "emfnet/geometry.hpp"
#include "emfnet/params.hpp"
#include "emfnet/vec.hpp"

namespace emfnet {

// Cost provider concept for the fine-positioning stage: the frozen users of
// one tUAV with their ground positions and the cost of serving user i from a
// candidate tUAV position.
template <typename T>
concept PositionCostProvider = requires(const T& t, int i, const Vec3& p) {
  { t.user_count() } -> std::convertible_to<int>;
  { t.user_xy(i) } -> std::convertible_to<Vec2>;
  { t.cost(i, p) } -> std::convertible_to<double>;
};

namespace detail {

template <PositionCostProvider P>
double total_cost(const P& users, const Vec3& pos) {
  double c = 0.0;
  for (int i = 0; i < users.user_count(); ++i) c += users.cost(i, pos);
  return c;
}

// Nearest point of the hovering-area slice at height h to the 2D target: the
// slice is a disk limited by both the tether sphere and the elevation cone.
inline Vec3 clamp_to_slice(const Vec3& gs, Vec2 target, double h, const SimParams& p) {
  const double dz = std::clamp(h - gs.z, 0.0, p.t_max);
  const double rho_sphere = std::sqrt(std::max(0.0, p.t_max * p.t_max - dz * dz));
  const double rho_cone = dz / std::tan(p.theta_min);
  const double rho_max = std::min(rho_sphere, rho_cone) * (1.0 - 1e-12);
  const Vec2 off{target.x - gs.x, target.y - gs.y};
  const double rho = off.norm();
  if (rho <= rho_max || rho == 0.0) return {target.x, target.y, gs.z + dz};
  const double s = rho_max / rho;
  return {gs.x + off.x * s, gs.y + off.y * s, gs.z + dz};
}

inline TuavPlacement placement_of(const Vec3& gs, const Vec3& pos, const SimParams& p,
                                  int gs_index) {
  TuavPlacement out = snap_placement(to_spherical(gs, pos), p);
  out.gs_index = gs_index;
  return out;
}

}  // namespace detail

struct GoldenDiagnostics {
  int iterations = 0;
};

// Golden-section search over the tUAV altitude. At each probe height the
// users' cost-weighted barycenter (weights evaluated with the tUAV on the
// vertical axis at that height) is clamped into the hovering-area slice and
// the cost is read there. The hover-center default remains a fallback, so the
// result never costs more than not positioning at all.
template <PositionCostProvider P>
TuavPlacement position_golden(const Vec3& gs, const P& users, const SimParams& params,
                              int gs_index = -1, GoldenDiagnostics* diag = nullptr) {
  if (users.user_count() == 0) return default_placement(params, gs_index);
  const double v = (std::sqrt(5.0) - 1.0) / 2.0;

  auto probe = [&](double h) {
    const Vec3 anchor{gs.x, gs.y, h};
    double wx = 0.0, wy = 0.0, ws = 0.0;
    for (int i = 0; i < users.user_count(); ++i) {
      const double w = users.cost(i, anchor);
      const Vec2 q = users.user_xy(i);
      wx += q.x * w;
      wy += q.y * w;
      ws += w;
    }
    const Vec2 bary = ws != 0.0 ? Vec2{wx / ws, wy / ws} : gs.xy();
    const Vec3 pt = detail::clamp_to_slice(gs, bary, h, params);
    return std::pair<Vec3, double>{pt, detail::total_cost(users, pt)};
  };

  double h_l = gs.z;
  double h_u = gs.z + params.t_max;
  int iters = 0;
  while (h_u - h_l > params.h_min) {
    const double h_up = h_l + v * (h_u - h_l);
    const double h_lo = h_u - v * (h_u - h_l);
    if (probe(h_lo).second < probe(h_up).second)
      h_u = h_up;
    else
      h_l = h_lo;
    ++iters;
  }
  if (diag) diag->iterations = iters;

  auto [pt, cost] = probe((h_l + h_u) / 2.0);
  const Vec3 dflt = from_spherical(gs, default_placement(params));
  if (detail::total_cost(users, dflt) < cost) pt = dflt;
  return detail::placement_of(gs, pt, params, gs_index);
}

namespace detail {

inline const std::array<Vec3, 14>& sr3d_directions() {
  static const std::array<Vec3, 14> dirs = [] {
    std::array<Vec3, 14> d{};
    int i = 0;
    for (int ax = 0; ax < 3; ++ax)
      for (int sgn : {1, -1}) {
        Vec3 v{};
        (ax == 0 ? v.x : ax == 1 ? v.y : v.z) = sgn;
        d[i++] = v;
      }
    const double s = 1.0 / std::sqrt(3.0);
    for (int sx : {1, -1})
      for (int sy : {1, -1})
        for (int sz : {1, -1}) d[i++] = {sx * s, sy * s, sz * s};
    return d;
  }();
  return dirs;
}

}  // namespace detail

// 3D shrink-and-realign inside the hovering cone, starting from `start`
// (normally the hover-center default). Candidates sit on a polyhedron of
// axis and diagonal directions, clamped into the hovering area; a move is
// taken only when it improves the cost, so the result never degrades.
template <PositionCostProvider P>
TuavPlacement position_sr3d(const Vec3& gs, const TuavPlacement& start, const P& users,
                            const SimParams& params, int gs_index = -1) {
  if (users.user_count() == 0) return default_placement(params, gs_index);
  Vec3 q = from_spherical(gs, start);
  double cost_q = detail::total_cost(users, q);
  const auto& dirs = detail::sr3d_directions();
  const int n_cand = params.sr_candidates_3d;

  for (double r = params.t_max / 2.0; r >= params.sr3d_radius_min; r /= 2.0) {
    Vec3 best = q;
    double best_cost = cost_q;
    for (int t = 0; t < n_cand; ++t) {
      const Vec3 cand = clamp_to_hover(gs, q + dirs[t] * r, params);
      const double c = detail::total_cost(users, cand);
      if (c < best_cost) {
        best_cost = c;
        best = cand;
      }
    }
    q = best;
    cost_q = best_cost;
  }
  return detail::placement_of(gs, q, params, gs_index);
}

// Exhaustive reference over a regular grid intersected with the hovering
// area. resolution = 1 degenerates to the hover-center point; resolution >= 2
// spans the bounding cube with endpoint-inclusive spacing so that refining
// res -> 2 res - 1 evaluates a superset of candidates. The hover-center
// default is always included.
template <PositionCostProvider P>
TuavPlacement position_grid_oracle(const Vec3& gs, const P& users, const SimParams& params,
                                   int resolution, int gs_index = -1,
                                   std::uint64_t budget = 10'000'000) {
  const double n3 = static_cast<double>(resolution) * resolution * resolution;
  if (resolution < 1 || n3 > static_cast<double>(budget))
    throw budget_error("position_grid_oracle: grid " + std::to_string(resolution) +
                       "^3 exceeds budget");

  Vec3 best = from_spherical(gs, default_placement(params));
  double best_cost = detail::total_cost(users, best);

  auto axis = [&](int i, double lo, double hi) {
    if (resolution == 1) return (lo + hi) / 2.0;
    return lo + (hi - lo) * i / (resolution - 1);
  };
  const double t = params.t_max;
  const double tan_min = std::tan(params.theta_min);
  for (int iz = 0; iz < resolution; ++iz) {
    const double dz = axis(iz, 0.0, t);
    for (int ix = 0; ix < resolution; ++ix) {
      const double dx = axis(ix, -t, t);
      for (int iy = 0; iy < resolution; ++iy) {
        const double dy = axis(iy, -t, t);
        const double rho = std::hypot(dx, dy);
        if (dz < rho * tan_min || dx * dx + dy * dy + dz * dz > t * t) continue;
        const Vec3 cand{gs.x + dx, gs.y + dy, gs.z + dz};
        const double c = detail::total_cost(users, cand);
        if (c < best_cost) {
          best_cost = c;
          best = cand;
        }
      }
    }
  }
  return detail::placement_of(gs, best, params, gs_index);
}

// Uniform draw in spherical coordinates; the random-hovering baseline.
inline TuavPlacement position_random(const SimParams& params, std::mt19937_64& rng,
                                     int gs_index = -1) {
  std::uniform_real_distribution<double> ut(0.0, params.t_max);
  std::uniform_real_distribution<double> uth(params.theta_min, M_PI / 2.0);
  std::uniform_real_distribution<double> uph(0.0, 2.0 * M_PI);
  TuavPlacement p;
  p.gs_index = gs_index;
  p.tether_T = ut(rng);
  p.elevation_theta = uth(rng);
  p.azimuth_phi = uph(rng);
  return snap_placement(p, params);
}

}  // namespace emfnet
