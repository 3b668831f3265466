#pragma once

#include <cmath>
#include <numbers>

namespace rydberg {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

namespace phys {
inline constexpr double boltzmann = 1.380649e-23;       // J/K
inline constexpr double atomic_mass = 1.66053906660e-27; // kg
inline constexpr double rb87_mass = 86.909180527 * atomic_mass;
}  // namespace phys

/// Angular frequency (rad/s) from a frequency in MHz.
constexpr double mhz(double f) { return two_pi * 1e6 * f; }
constexpr double khz(double f) { return two_pi * 1e3 * f; }

/// Frequency in MHz from an angular frequency in rad/s.
constexpr double to_mhz(double omega) { return omega / (two_pi * 1e6); }

constexpr double microwatt(double p) { return p * 1e-6; }

inline double db_from_power_ratio(double r) { return 10.0 * std::log10(r); }
inline double power_ratio_from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace rydberg
