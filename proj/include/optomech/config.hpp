#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "optomech/params.hpp"

namespace optomech {

/// Parameter set of the suspended-micromirror experiment the presets are built on:
/// omega_M/2pi = 947 kHz, gamma/2pi = 140 Hz, m = 145 ng, L = 25 mm,
/// omega_c/2pi = 5.26e14 Hz, omega_L/2pi = 2.82e14 Hz, kappa/2pi = 14 kHz,
/// red-sideband drive at C = 32.11, T = 0.1 mK, r = 1, xi = 0.2.
PhysicalParams reference_params();

/// Overlays key/value settings read from `in` onto `base`.
///
/// Format: one `key = value` pair per line, `#` starts a comment, blank lines are
/// ignored. Frequency keys carry an explicit unit suffix: `_hz` values are multiplied
/// by 2 pi, `_rads` values are taken as angular. Recognized keys:
///
///   omega_M, gamma, kappa, omega_c, omega_L, hopping_lambda, detuning  (+ _hz / _rads)
///   mass [kg], cavity_length [m], temperature [K], squeezing_r,
///   pump_power [W], cooperativity, xi, gamma_over_kappa
///
/// `xi` and `gamma_over_kappa` are resolved against the final kappa. Supplying a
/// quantity twice (including both unit spellings, or pump_power with cooperativity)
/// throws ConfigError naming the key; so do unknown keys and unparsable values.
PhysicalParams apply_config(PhysicalParams base, std::istream& in, const std::string& source = "<config>");

PhysicalParams load_config(const std::filesystem::path& path, const PhysicalParams& base = reference_params());

}  // namespace optomech
