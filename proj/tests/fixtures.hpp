#pragma once

// Values frozen from the scripts in tests/oracles.

namespace fixtures {

// geometry_fields.py
inline constexpr double kLipschitzPerturbedDisk = 0.228979352283;
inline constexpr double kDisk11GradR05 = 0.644818917794631;
inline constexpr double kSquare21MassCenter = 1.886074001347997e-02;

// doubling_constants.py
inline constexpr double kDiskRatioMax = 1.504452;
inline constexpr double kScanSquare10 = 3.508085907258298;
inline constexpr double kAlmostMonotonicityC = 0.7751;
inline constexpr double kThreeBallC = 0.988;
inline constexpr double kThreeBallDelta = 0.2924812503605781;
inline constexpr double kGradientEstimateC = 1.35;
inline constexpr double kLocalBoundednessC = 9.169;

}  // namespace fixtures
