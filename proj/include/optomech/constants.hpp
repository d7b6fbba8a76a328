#pragma once

#include <numbers>

namespace optomech::constants {

// CODATA 2018 exact/recommended values.
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_B = 1.380649e-23;      // J / K

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Converts an ordinary frequency in Hz to an angular frequency in rad/s.
constexpr double hz_to_rads(double hz) { return two_pi * hz; }

}  // namespace optomech::constants
