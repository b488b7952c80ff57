#pragma once

#include <numbers>

namespace pmgate {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// External interfaces speak Hz; everything inside is angular (rad/s).
constexpr double hz_to_rad(double f_hz) { return two_pi * f_hz; }
constexpr double rad_to_hz(double w_rad) { return w_rad / two_pi; }

} // namespace pmgate
