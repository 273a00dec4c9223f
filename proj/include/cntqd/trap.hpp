#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cntqd/errors.hpp"

// Classical statics of atoms trapped inside a carbon nanotube, modelled as a
// 12-6 Lennard-Jones wall smeared over a continuum cylinder surface plus
// pairwise atom-atom 12-6 interactions.  Energies in meV, lengths in
// angstrom, masses in amu, mode frequencies in cm^-1.

namespace cntqd::trap {

struct TrapConfig {
  double tube_radius = 3.5;      // angstrom, >= 3.0
  double tube_length = 60.0;     // angstrom, used only in finite mode
  double wall_epsilon = 1.3;     // meV, atom-wall well depth parameter
  double wall_sigma = 2.98;      // angstrom
  double surface_density = 0.38; // wall atoms per angstrom^2
  double atom_epsilon = 0.6;     // meV, atom-atom well depth
  double atom_sigma = 2.7;       // angstrom
  bool finite_length = false;    // default: infinitely long tube
  int quadrature_order = 512;    // angular nodes; axial order is derived

  void validate() const;
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

struct ChainState {
  std::vector<Vec3> coordinates;  // sorted by z
  double energy = 0.0;            // meV
  bool converged = false;
  double gradient_norm = 0.0;     // meV / angstrom
};

struct WallEval {
  double energy = 0.0;    // meV
  double d_radial = 0.0;  // meV / angstrom
  double d_axial = 0.0;   // zero in the infinite-tube approximation
};

// Wall interaction of one atom at cylindrical (radial, axial); requires
// radial < tube_radius.
WallEval wall_potential(double radial, double axial, const TrapConfig& c);

struct EnergyGrad {
  double energy = 0.0;
  std::vector<Vec3> gradient;
};

EnergyGrad chain_energy(const std::vector<Vec3>& coords, const TrapConfig& c);

// Gradient descent with backtracking line search, finishing with damped
// Newton steps on a finite-difference Hessian.  Seeded from a uniformly
// spaced on-axis chain with deterministic jitter.  When energy_trace is
// given it receives the energy after every accepted iteration.
ChainState relax_chain(std::size_t n_atoms, const TrapConfig& c,
                       double seed_jitter, std::uint64_t seed = 0,
                       std::vector<double>* energy_trace = nullptr);

struct ModeReport {
  std::vector<double> frequencies_cm;  // ascending; unstable modes negative
  double translation_frequency = 0.0;  // the axial-translation mode
  std::size_t translation_index = 0;   // its position in frequencies_cm
};

ModeReport normal_modes(const ChainState& state, const TrapConfig& c,
                        double mass_amu);

// Smallest eigenvalue of the Hessian restricted to transverse displacements,
// meV / angstrom^2; positive means the on-axis chain is stable.
double transverse_stability(const ChainState& state, const TrapConfig& c);

// Full mass-unweighted Hessian by central differences of the analytic
// gradient (row-major 3n x 3n, coordinate order x0 y0 z0 x1 ...).
std::vector<double> chain_hessian(const std::vector<Vec3>& coords,
                                  const TrapConfig& c);

void write_xyz(const std::vector<Vec3>& coords, const std::string& element,
               std::ostream& os);

struct SpeciesParams {
  TrapConfig config;
  double mass_amu = 1.008;
  std::string element = "H";
};

// Flat JSON parameter file; see the documented schema in the README.
SpeciesParams load_trap_params(const std::string& path);
SpeciesParams hydrogen_defaults();
SpeciesParams nitrogen_defaults();

}  // namespace cntqd::trap
