#pragma once

#include <cmath>
#include <stdexcept>

namespace wetsim {

namespace constants {
inline constexpr double speed_of_light = 299'792'458.0;       // m/s, exact
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
}  // namespace constants

inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

inline double watts_to_dbm(double watts) {
    if (watts < 0.0) throw std::invalid_argument("watts_to_dbm: negative power");
    return 10.0 * std::log10(watts / 1e-3);  // 0 W maps to -inf dBm
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

/// Wraps an angle in radians into [0, 2*pi).
inline double wrap_phase(double radians) {
    double w = std::fmod(radians, constants::two_pi);
    if (w < 0.0) w += constants::two_pi;
    // fmod of a slightly negative value can round up to exactly 2*pi
    if (w >= constants::two_pi) w -= constants::two_pi;
    return w;
}

}  // namespace wetsim
