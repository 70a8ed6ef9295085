#pragma once

#include <complex>
#include <numbers>

namespace eitbragg {

using complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double speed_of_light = 299792458.0;   // m/s, exact
inline constexpr double hbar = 1.054571817e-34;         // J s

inline constexpr complex I{0.0, 1.0};

}  // namespace eitbragg
