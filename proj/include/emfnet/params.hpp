#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "emfnet/errors.hpp"
#include "emfnet/units.hpp"
#include "emfnet/vec.hpp"

namespace emfnet {

// All physical and algorithmic constants. Lengths in m, frequencies in Hz,
// powers in W, rates in bps, angles in rad.
struct SimParams {
  double area_x = 1000.0;
  double area_y = 1000.0;
  double fc = 3.5e9;
  double c = 3e8;
  double bandwidth_B = 10e6;            // per resource block
  double a_env = 9.61;                  // LoS model environment constants
  double b_env = 0.16;
  double eta_los_db = 1.6;              // excess loss, dB
  double eta_nlos_db = 23.0;
  double alpha_los = 2.0;               // path-loss exponents
  double alpha_nlos = 2.0;
  double p_max = 0.398;                 // max UE transmit power (~26 dBm)
  double t_max = 100.0;                 // max tether length
  double theta_min = 0.5410520681182421;  // 31 deg
  double h_bs = 25.0;
  double h_gs = 30.0;
  int w_tuav_max = 6;                   // RBs per tUAV
  int w_bs_max = 0;                     // 0 = auto (resident count)
  double sar_voice = 0.0047;            // W/kg per W transmitted
  double sar_data = 0.0037;
  double sar_dl = 0.005;                // W/kg per W/m^2; placeholder, see README
  double noise_temp = 290.0;            // K

  // Solver tolerances and candidate counts.
  double tol_delta = 1.0;               // k-means coordinate tolerance, m
  int i_max = 50;                       // k-means iteration cap
  int sr_candidates_2d = 8;             // points on the 2D SR circle
  double sr_radius_init = 250.0;        // initial 2D SR radius, m
  double sr_radius_min = 2.0;           // 2D SR stop radius, m
  int sr_candidates_3d = 14;            // polyhedron vertices (6 axis + 8 diagonal)
  double sr3d_radius_min = 0.5;         // 3D SR stop radius, m
  double h_min = 1.0;                   // golden-search height tolerance, m

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) throw config_error(std::string("params.") + name + " must be strictly positive");
    };
    positive(area_x, "area_x");
    positive(area_y, "area_y");
    positive(fc, "fc");
    positive(c, "c");
    positive(bandwidth_B, "bandwidth_B");
    positive(p_max, "p_max");
    positive(t_max, "t_max");
    positive(h_bs, "h_bs");
    positive(h_gs, "h_gs");
    positive(sar_voice, "sar_voice");
    positive(sar_data, "sar_data");
    positive(sar_dl, "sar_dl");
    positive(noise_temp, "noise_temp");
    if (!(theta_min > 0.0 && theta_min < M_PI / 2.0))
      throw config_error("params.theta_min must lie in (0, pi/2)");
    if (!std::isfinite(eta_los_db) || !std::isfinite(eta_nlos_db))
      throw config_error("params.eta_los_db/eta_nlos_db must be finite");
    if (w_tuav_max < 1) throw config_error("params.w_tuav_max must be >= 1");
    if (w_bs_max < 0) throw config_error("params.w_bs_max must be >= 0 (0 = auto)");
    positive(tol_delta, "tol_delta");
    if (i_max < 1) throw config_error("params.i_max must be >= 1");
    if (sr_candidates_2d < 1) throw config_error("params.sr_candidates_2d must be >= 1");
    positive(sr_radius_init, "sr_radius_init");
    positive(sr_radius_min, "sr_radius_min");
    if (sr_candidates_3d < 1 || sr_candidates_3d > 14)
      throw config_error("params.sr_candidates_3d must be in [1, 14]");
    positive(sr3d_radius_min, "sr3d_radius_min");
    positive(h_min, "h_min");
  }
};

// Thermal noise power over one resource block.
inline double noise_power(const SimParams& p) { return kBoltzmann * p.noise_temp * p.bandwidth_B; }

enum class Usage { Voice, Data };

struct User {
  int id = 0;
  Vec3 position;          // body at ground plane, z = 0
  Usage usage = Usage::Data;
  bool active = false;    // resident vs active user
  double rate_req_ul = 0.0;
  double rate_req_dl = 0.0;
  double sar_ul = 0.0;    // W/kg per W, matches usage
};

enum class GnbKind { BaseStation, Tuav };

struct Gnb {
  int id = 0;             // 0 is the unique base station
  GnbKind kind = GnbKind::Tuav;
  Vec3 position;
  int capacity = 0;       // RB count usable for association
};

enum class Architecture { BsOnly, FixedSc, GreenTuav, RegularTuav, SpecialTuav };

inline const char* to_string(Architecture a) {
  switch (a) {
    case Architecture::BsOnly: return "bs_only";
    case Architecture::FixedSc: return "fixed_sc";
    case Architecture::GreenTuav: return "green_tuav";
    case Architecture::RegularTuav: return "regular_tuav";
    case Architecture::SpecialTuav: return "special_tuav";
  }
  return "?";
}

inline Architecture architecture_from_string(const std::string& s) {
  if (s == "bs_only") return Architecture::BsOnly;
  if (s == "fixed_sc") return Architecture::FixedSc;
  if (s == "green_tuav") return Architecture::GreenTuav;
  if (s == "regular_tuav") return Architecture::RegularTuav;
  if (s == "special_tuav") return Architecture::SpecialTuav;
  throw config_error("unknown architecture '" + s + "'");
}

// tUAVs (or fixed small cells) assist only some link directions.
inline bool arch_has_tuavs(Architecture a) { return a != Architecture::BsOnly; }
inline bool arch_assists_ul(Architecture a) {
  return a == Architecture::FixedSc || a == Architecture::GreenTuav || a == Architecture::RegularTuav;
}
inline bool arch_assists_dl(Architecture a) {
  return a == Architecture::RegularTuav || a == Architecture::SpecialTuav;
}
inline bool arch_uses_ground_stations(Architecture a) {
  return a == Architecture::GreenTuav || a == Architecture::RegularTuav || a == Architecture::SpecialTuav;
}

struct Scenario {
  SimParams params;
  std::vector<User> residents;
  std::vector<Gnb> gnbs;               // gnbs[0] is the BS
  std::vector<Vec3> ground_stations;
  Architecture architecture = Architecture::GreenTuav;
  std::uint64_t seed = 0;

  int tuav_count() const { return static_cast<int>(gnbs.size()) - 1; }

  std::vector<int> active_indices() const {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(residents.size()); ++i)
      if (residents[i].active) idx.push_back(i);
    return idx;
  }

  void validate() const {
    params.validate();
    if (gnbs.empty() || gnbs[0].kind != GnbKind::BaseStation)
      throw config_error("scenario: gnbs[0] must be the base station");
    for (std::size_t j = 1; j < gnbs.size(); ++j)
      if (gnbs[j].kind != GnbKind::Tuav) throw config_error("scenario: only gnb 0 may be a base station");
    if (arch_uses_ground_stations(architecture) &&
        tuav_count() > static_cast<int>(ground_stations.size()))
      throw infeasible_error("scenario: more tUAVs than ground stations");
    for (const auto& g : gnbs)
      if (g.capacity < 0) throw config_error("scenario: gnb capacity must be >= 0");
  }
};

// Per-scenario evaluation output. Per-user vectors are indexed by active-user
// ordinal (the order of Scenario::active_indices()).
struct EvaluationReport {
  double ei_ul = 0.0;                  // W/kg
  double ei_dl = 0.0;                  // W/kg
  std::vector<double> per_user_power;  // W
  std::vector<double> per_user_rate;   // bps
  double satisfied_ratio = 0.0;
  double sum_rate_ul = 0.0;            // bps

  double ei_total() const { return ei_ul + ei_dl; }
};

}  // namespace emfnet
