#pragma once

#include <numbers>

namespace slp::constants {

// CODATA 2018 exact / recommended values, SI.
inline constexpr double h = 6.62607015e-34;              // J s
inline constexpr double pi = std::numbers::pi;
// From h rather than the rounded 1.054571817e-34, so h and hbar formulas agree to rounding.
inline constexpr double hbar = h / (2.0 * pi);           // J s
inline constexpr double k_B = 1.380649e-23;              // J / K
inline constexpr double c = 299792458.0;                 // m / s

// Riemann zeta(3/2).
inline constexpr double zeta_3_2 = 2.6123753486854883;

} // namespace slp::constants
