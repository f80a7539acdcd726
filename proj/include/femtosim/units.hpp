#pragma once

#include <cmath>

namespace femtosim {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

inline double watt_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }

} // namespace femtosim
