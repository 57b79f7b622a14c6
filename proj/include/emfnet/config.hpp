#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "emfnet/errors.hpp"
#include "emfnet/params.hpp"

namespace emfnet {

using json = nlohmann::json;

// Scenario generation controls (everything random scenarios need beyond the
// physical constants).
struct ScenarioControls {
  int n_residents = 120;       // average (or exact, see fixed_counts) resident count
  int n_users = 24;            // active users drawn from the residents
  int n_tuavs = 4;
  int n_gs = 25;
  double voice_fraction = 0.2;
  double rate_voice_ul = 5e6;
  double rate_data_ul = 50e6;
  double rate_voice_dl = 5e6;
  double rate_data_dl = 100e6;
  double cluster_radius = 100.0;  // hotspot radius, m
  double mean_clusters = 4.0;     // average hotspot count
  Architecture architecture = Architecture::GreenTuav;
  bool fixed_counts = false;      // draw exact counts instead of Poisson counts

  void validate() const {
    if (n_residents < 0) throw config_error("scenario.n_residents must be >= 0");
    if (n_users < 0) throw config_error("scenario.n_users must be >= 0");
    if (n_tuavs < 0) throw config_error("scenario.n_tuavs must be >= 0");
    if (n_gs < 1) throw config_error("scenario.n_gs must be >= 1");
    if (!(voice_fraction >= 0.0 && voice_fraction <= 1.0))
      throw config_error("scenario.voice_fraction must lie in [0, 1]");
    if (rate_voice_ul < 0 || rate_data_ul < 0 || rate_voice_dl < 0 || rate_data_dl < 0)
      throw config_error("scenario rate requirements must be >= 0");
    if (!(cluster_radius > 0)) throw config_error("scenario.cluster_radius must be > 0");
    if (mean_clusters < 0) throw config_error("scenario.mean_clusters must be >= 0");
  }
};

struct Config {
  SimParams params;
  ScenarioControls scenario;
  bool sar_dl_user_set = false;  // false = documented placeholder value in use

  void validate() const {
    params.validate();
    scenario.validate();
  }
};

namespace detail {

template <typename F>
void visit_params(SimParams& p, F&& f) {
  f("area_x", p.area_x);
  f("area_y", p.area_y);
  f("fc", p.fc);
  f("c", p.c);
  f("bandwidth_B", p.bandwidth_B);
  f("a_env", p.a_env);
  f("b_env", p.b_env);
  f("eta_los_db", p.eta_los_db);
  f("eta_nlos_db", p.eta_nlos_db);
  f("alpha_los", p.alpha_los);
  f("alpha_nlos", p.alpha_nlos);
  f("p_max", p.p_max);
  f("t_max", p.t_max);
  f("theta_min", p.theta_min);
  f("h_bs", p.h_bs);
  f("h_gs", p.h_gs);
  f("w_tuav_max", p.w_tuav_max);
  f("w_bs_max", p.w_bs_max);
  f("sar_voice", p.sar_voice);
  f("sar_data", p.sar_data);
  f("sar_dl", p.sar_dl);
  f("noise_temp", p.noise_temp);
  f("tol_delta", p.tol_delta);
  f("i_max", p.i_max);
  f("sr_candidates_2d", p.sr_candidates_2d);
  f("sr_radius_init", p.sr_radius_init);
  f("sr_radius_min", p.sr_radius_min);
  f("sr_candidates_3d", p.sr_candidates_3d);
  f("sr3d_radius_min", p.sr3d_radius_min);
  f("h_min", p.h_min);
}

template <typename F>
void visit_scenario(ScenarioControls& s, F&& f) {
  f("n_residents", s.n_residents);
  f("n_users", s.n_users);
  f("n_tuavs", s.n_tuavs);
  f("n_gs", s.n_gs);
  f("voice_fraction", s.voice_fraction);
  f("rate_voice_ul", s.rate_voice_ul);
  f("rate_data_ul", s.rate_data_ul);
  f("rate_voice_dl", s.rate_voice_dl);
  f("rate_data_dl", s.rate_data_dl);
  f("cluster_radius", s.cluster_radius);
  f("mean_clusters", s.mean_clusters);
  f("fixed_counts", s.fixed_counts);
}

// Applies one JSON section onto visited fields, rejecting unknown keys and
// naming the offending key on type errors.
template <typename Struct, typename Visitor>
void apply_section(Struct& s, const json& j, const std::string& section, Visitor&& visit,
                   const std::vector<std::string>& extra_keys = {}) {
  if (!j.is_object()) throw config_error("config section '" + section + "' must be an object");
  std::vector<std::string> known = extra_keys;
  visit(s, [&](const char* key, [[maybe_unused]] auto& field) { known.push_back(key); });
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw config_error("unknown config key '" + section + "." + key + "'");
  }
  visit(s, [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      field = j.at(key).get<std::decay_t<decltype(field)>>();
    } catch (const json::exception&) {
      throw config_error("config key '" + section + "." + key + "' has the wrong type");
    }
  });
}

}  // namespace detail

inline json to_json(const Config& cfg) {
  json jp = json::object();
  detail::visit_params(const_cast<SimParams&>(cfg.params),
                       [&](const char* key, auto& field) { jp[key] = field; });
  json js = json::object();
  detail::visit_scenario(const_cast<ScenarioControls&>(cfg.scenario),
                         [&](const char* key, auto& field) { js[key] = field; });
  js["architecture"] = to_string(cfg.scenario.architecture);
  return json{{"params", jp}, {"scenario", js}};
}

inline Config config_from_json(const json& j) {
  Config cfg;
  if (!j.is_object()) throw config_error("config root must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "params" && key != "scenario")
      throw config_error("unknown config key '" + key + "'");
  }
  if (j.contains("params")) {
    cfg.sar_dl_user_set = j.at("params").is_object() && j.at("params").contains("sar_dl");
    detail::apply_section(cfg.params, j.at("params"), "params", [](auto& s, auto&& f) {
      detail::visit_params(s, f);
    });
  }
  if (j.contains("scenario")) {
    const json& js = j.at("scenario");
    detail::apply_section(cfg.scenario, js, "scenario",
                          [](auto& s, auto&& f) { detail::visit_scenario(s, f); },
                          {"architecture"});
    if (js.contains("architecture")) {
      if (!js.at("architecture").is_string())
        throw config_error("config key 'scenario.architecture' has the wrong type");
      cfg.scenario.architecture = architecture_from_string(js.at("architecture").get<std::string>());
    }
  }
  cfg.validate();
  return cfg;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error("config file " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

inline void save_config(const Config& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write config file: " + path);
  out << to_json(cfg).dump(2) << '\n';
}

}  // namespace emfnet
