#pragma once

// Geometry fields are stored in the units the hardware is specified in
// (mm, um, cm2); transport math runs in SI. These factors are the single
// place the two meet.

namespace receptosim::units {

inline constexpr double mm = 1e-3;    // m per mm
inline constexpr double um = 1e-6;    // m per um
inline constexpr double mm2 = 1e-6;   // m^2 per mm^2
inline constexpr double mm3 = 1e-9;   // m^3 per mm^3
inline constexpr double cm2 = 1e-4;   // m^2 per cm^2
inline constexpr double mL = 1e-6;    // m^3 per millilitre

inline constexpr double pi = 3.14159265358979323846;

}  // namespace receptosim::units
