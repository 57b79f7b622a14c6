#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "emfnet/config.hpp"
#include "emfnet/deployment.hpp"
#include "emfnet/errors.hpp"
#include "emfnet/params.hpp"
#include "emfnet/rng.hpp"

namespace emfnet {

namespace detail {

inline int poisson_count(double mean, std::mt19937_64& rng) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<int> d(mean);
  return d(rng);
}

inline Vec3 uniform_in_area(const SimParams& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(0.0, p.area_x);
  std::uniform_real_distribution<double> uy(0.0, p.area_y);
  return {ux(rng), uy(rng), 0.0};
}

// Uniform draw in the hotspot disk, resampled until inside the area.
inline Vec3 cluster_point(const Vec3& center, double radius, const SimParams& p,
                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uu(0.0, 1.0);
  std::uniform_real_distribution<double> ua(0.0, 2.0 * M_PI);
  for (;;) {
    const double r = radius * std::sqrt(uu(rng));
    const double ang = ua(rng);
    const Vec3 q{center.x + r * std::cos(ang), center.y + r * std::sin(ang), 0.0};
    if (q.x >= 0.0 && q.x <= p.area_x && q.y >= 0.0 && q.y <= p.area_y) return q;
  }
}

inline int tuav_capacity(const Config& cfg) {
  // Regular tUAVs carry UL and DL for each user, so each user takes two RBs.
  if (cfg.scenario.architecture == Architecture::RegularTuav) return cfg.params.w_tuav_max / 2;
  return cfg.params.w_tuav_max;
}

}  // namespace detail

// Random scenario draw: residents from a PPP of mean n_residents/3 plus a
// cluster process with mean_clusters hotspots of mean n_residents/6 users
// each; n_users of them activated with the voice/data mix; ground stations on
// a near-square grid; the BS in the middle of the area.
inline Scenario generate_scenario(const Config& cfg, std::uint64_t seed) {
  cfg.validate();
  const SimParams& p = cfg.params;
  const ScenarioControls& sc = cfg.scenario;
  std::mt19937_64 rng = make_engine(splitmix64(seed));

  Scenario out;
  out.params = p;
  out.architecture = sc.architecture;
  out.seed = seed;

  // Residents: PPP part.
  const double kbar = sc.n_residents;
  const int n_ppp = sc.fixed_counts ? static_cast<int>(std::lround(kbar / 3.0))
                                    : detail::poisson_count(kbar / 3.0, rng);
  for (int i = 0; i < n_ppp; ++i) {
    User u;
    u.position = detail::uniform_in_area(p, rng);
    out.residents.push_back(u);
  }

  // Residents: cluster part.
  const int n_clusters = sc.fixed_counts ? static_cast<int>(std::lround(sc.mean_clusters))
                                         : detail::poisson_count(sc.mean_clusters, rng);
  std::vector<int> cluster_sizes(n_clusters, 0);
  if (sc.fixed_counts) {
    int remaining = std::max(0, sc.n_residents - n_ppp);
    for (int c = 0; c < n_clusters; ++c)
      cluster_sizes[c] = remaining / n_clusters + (c < remaining % n_clusters ? 1 : 0);
  } else {
    for (int c = 0; c < n_clusters; ++c) cluster_sizes[c] = detail::poisson_count(kbar / 6.0, rng);
  }
  for (int c = 0; c < n_clusters; ++c) {
    const Vec3 center = detail::uniform_in_area(p, rng);
    for (int i = 0; i < cluster_sizes[c]; ++i) {
      User u;
      u.position = detail::cluster_point(center, sc.cluster_radius, p, rng);
      out.residents.push_back(u);
    }
  }

  for (std::size_t i = 0; i < out.residents.size(); ++i) {
    out.residents[i].id = static_cast<int>(i);
    out.residents[i].usage = Usage::Data;
    out.residents[i].sar_ul = p.sar_data;
  }

  // Activate n_users residents, voice_fraction of them as voice users.
  const int n_active = std::min<int>(sc.n_users, static_cast<int>(out.residents.size()));
  std::vector<int> idx(out.residents.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::vector<int> chosen;
  std::sample(idx.begin(), idx.end(), std::back_inserter(chosen), n_active, rng);
  std::shuffle(chosen.begin(), chosen.end(), rng);
  const int n_voice = static_cast<int>(std::lround(sc.voice_fraction * n_active));
  for (int i = 0; i < n_active; ++i) {
    User& u = out.residents[chosen[i]];
    u.active = true;
    if (i < n_voice) {
      u.usage = Usage::Voice;
      u.sar_ul = p.sar_voice;
      u.rate_req_ul = sc.rate_voice_ul;
      u.rate_req_dl = sc.rate_voice_dl;
    } else {
      u.usage = Usage::Data;
      u.sar_ul = p.sar_data;
      u.rate_req_ul = sc.rate_data_ul;
      u.rate_req_dl = sc.rate_data_dl;
    }
  }

  // Ground stations on a near-square grid (exact square when n_gs is one).
  for (const Vec2& q : uniform_grid_points(sc.n_gs, p))
    out.ground_stations.push_back({q.x, q.y, p.h_gs});

  Gnb bs;
  bs.id = 0;
  bs.kind = GnbKind::BaseStation;
  bs.position = {p.area_x / 2.0, p.area_y / 2.0, p.h_bs};
  bs.capacity = p.w_bs_max;  // 0 = resident count, resolved by gnb_capacities
  out.gnbs.push_back(bs);

  const int m = arch_has_tuavs(sc.architecture) ? sc.n_tuavs : 0;
  for (int j = 1; j <= m; ++j) {
    Gnb g;
    g.id = j;
    g.kind = GnbKind::Tuav;
    g.position = {p.area_x / 2.0, p.area_y / 2.0, p.h_gs + p.t_max / 2.0};
    g.capacity = detail::tuav_capacity(cfg);
    out.gnbs.push_back(g);
  }

  out.validate();
  return out;
}

inline json to_json(const Scenario& sc) {
  json jp = json::object();
  detail::visit_params(const_cast<SimParams&>(sc.params),
                       [&](const char* key, auto& field) { jp[key] = field; });
  json residents = json::array();
  for (const User& u : sc.residents) {
    residents.push_back({{"id", u.id},
                         {"x", u.position.x},
                         {"y", u.position.y},
                         {"z", u.position.z},
                         {"usage", u.usage == Usage::Voice ? "voice" : "data"},
                         {"active", u.active},
                         {"rate_req_ul", u.rate_req_ul},
                         {"rate_req_dl", u.rate_req_dl},
                         {"sar_ul", u.sar_ul}});
  }
  json gnbs = json::array();
  for (const Gnb& g : sc.gnbs) {
    gnbs.push_back({{"id", g.id},
                    {"kind", g.kind == GnbKind::BaseStation ? "base_station" : "tuav"},
                    {"x", g.position.x},
                    {"y", g.position.y},
                    {"z", g.position.z},
                    {"capacity", g.capacity}});
  }
  json gs = json::array();
  for (const Vec3& q : sc.ground_stations) gs.push_back({q.x, q.y, q.z});
  return json{{"params", jp},
              {"residents", residents},
              {"gnbs", gnbs},
              {"ground_stations", gs},
              {"architecture", to_string(sc.architecture)},
              {"seed", sc.seed}};
}

inline Scenario scenario_from_json(const json& j) {
  Scenario sc;
  try {
    detail::apply_section(sc.params, j.at("params"), "params",
                          [](auto& s, auto&& f) { detail::visit_params(s, f); });
    for (const json& ju : j.at("residents")) {
      User u;
      u.id = ju.at("id").get<int>();
      u.position = {ju.at("x").get<double>(), ju.at("y").get<double>(), ju.at("z").get<double>()};
      u.usage = ju.at("usage").get<std::string>() == "voice" ? Usage::Voice : Usage::Data;
      u.active = ju.at("active").get<bool>();
      u.rate_req_ul = ju.at("rate_req_ul").get<double>();
      u.rate_req_dl = ju.at("rate_req_dl").get<double>();
      u.sar_ul = ju.at("sar_ul").get<double>();
      sc.residents.push_back(u);
    }
    for (const json& jg : j.at("gnbs")) {
      Gnb g;
      g.id = jg.at("id").get<int>();
      g.kind = jg.at("kind").get<std::string>() == "base_station" ? GnbKind::BaseStation
                                                                  : GnbKind::Tuav;
      g.position = {jg.at("x").get<double>(), jg.at("y").get<double>(), jg.at("z").get<double>()};
      g.capacity = jg.at("capacity").get<int>();
      sc.gnbs.push_back(g);
    }
    for (const json& jq : j.at("ground_stations"))
      sc.ground_stations.push_back(
          {jq.at(0).get<double>(), jq.at(1).get<double>(), jq.at(2).get<double>()});
    sc.architecture = architecture_from_string(j.at("architecture").get<std::string>());
    sc.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw config_error(std::string("malformed scenario file: ") + e.what());
  }
  sc.validate();
  return sc;
}

inline void save_scenario(const Scenario& sc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write scenario file: " + path);
  out << to_json(sc).dump(2) << '\n';
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error("scenario file " + path + " is not valid JSON: " + e.what());
  }
  return scenario_from_json(j);
}

}  // namespace emfnet
