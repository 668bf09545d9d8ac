#pragma once

namespace magfd::constants {

inline constexpr double pi = 3.14159265358979323846;

// Vacuum permeability, T*m/A.  SI units are used throughout: M and H in A/m,
// energies in J, energy densities in J/m^3.
inline constexpr double mu0 = 4.0e-7 * pi;

// Electron gyromagnetic ratio, rad/(s*T).  Default for MaterialParams::gamma.
inline constexpr double gamma_e = 1.760859630e11;

} // namespace magfd::constants
