#pragma once

#include <numbers>

namespace cavimode {

inline constexpr double kSpeedOfLight = 299792458.0;    // m/s
inline constexpr double kHbar = 1.054571817e-34;        // J s
inline constexpr double kPi = std::numbers::pi;

}  // namespace cavimode
