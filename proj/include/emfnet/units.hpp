#pragma once

#include <cmath>

namespace emfnet {

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K

// Power-quantity conversions (factor 10).
inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

inline double deg_to_rad(double deg) { return deg * M_PI / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / M_PI; }

}  // namespace emfnet
