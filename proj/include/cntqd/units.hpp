#pragma once

// Internal unit system, fixed repo-wide:
//   energy  micro-eV (ueV)      time    nanoseconds (ns)
//   field   tesla (T)           length  angstrom (A)
// The trap module reports energies in meV (1 meV = 1000 ueV) because its
// well depths sit three orders of magnitude above the spin scales.

namespace cntqd::units {

// hbar in ueV * ns
inline constexpr double kHbar = 0.6582119569;

// Bohr magneton in ueV / T
inline constexpr double kMuB = 57.88381806;

// Nuclear magneton in ueV / T
inline constexpr double kMuN = 0.0315245125844;

// mu_0 / (4 pi) expressed so that for two moments m1, m2 in ueV/T separated
// by r angstrom, the dipolar energy scale is kDipole * m1 * m2 / r^3 in ueV.
inline constexpr double kDipole = 0.01602176634;

// Converts sqrt(k[meV/A^2] / m[amu]) to a wavenumber in cm^-1.
// Derived from 1 meV = 1.602176634e-22 J, 1 amu = 1.66053906660e-27 kg,
// c = 2.99792458e10 cm/s.
inline constexpr double kMevPerA2AmuToCm = 16.490357723513128;

inline constexpr double kTwoPi = 6.283185307179586476925287;

// 1 GHz corresponds to an angular frequency of 2*pi rad/ns.
inline constexpr double ghz_to_rad_per_ns(double ghz) { return kTwoPi * ghz; }
inline constexpr double rad_per_ns_to_ghz(double w) { return w / kTwoPi; }

}  // namespace cntqd::units
