#pragma once

#include <vector>

#include "cntqd/dotmodel.hpp"
#include "cntqd/qstate.hpp"

// Central-spin model: the dot electron coupled to a 1D chain of I=1/2 nuclei
// through the axial dipolar hyperfine interaction
//   H = -sum_k (coupling_scale / r_k^3) [ I_z^k L_z + 2 I_z^k S_z
//                                          - I_x^k S_x - I_y^k S_y ]
// The quantization axis is the tube axis; the valley operator enters through
// L_z only (the two-dimensional valley subspace carries no transverse L).

namespace cntqd::memory {

using qstate::cd;
using qstate::CMat;
using qstate::HilbertSpace;
using qstate::Operator;
using qstate::QuantumState;

struct NuclearChain {
  std::vector<double> positions;  // axial coordinates, angstrom, increasing
  double g_n = 5.5857;            // nuclear g-factor (proton by default)

  std::size_t count() const { return positions.size(); }
  void validate() const;
};

struct MemoryScenario {
  NuclearChain chain;
  dotmodel::DotParameters dot;
  double electron_position = 0.0;  // angstrom, axial
  double b_field = 0.0;            // tesla
  double coupling_scale = 27.818127;  // ueV * A^3; 1 ueV at r = 3.03 A
  int valley = -1;                 // m_l of the frozen valley state

  void validate() const;
};

// spin_e (x) valley_e (x) spin_n1 ... spin_nN; basis bit 0 = up everywhere.
HilbertSpace memory_space(const MemoryScenario& s);

Operator hyperfine_hamiltonian(const MemoryScenario& s);

// Adds the electron Zeeman (orbital + spin, from the dot parameters) and the
// nuclear Zeeman -g_n mu_N B I_z^k at the scenario field.
Operator add_zeeman(const MemoryScenario& s, const Operator& h);
Operator add_zeeman(const MemoryScenario& s, const Operator& h, double b_tesla);

// Joint product state electron_spin (x) |valley| (x) nuclear basis pattern.
QuantumState joint_state(const MemoryScenario& s, const cd& up_amp,
                         const cd& down_amp, std::size_t nuclear_bits);

// Expectation of sum_k I_z^k / N.
double faraday_readout(const QuantumState& joint, const NuclearChain& chain);

// Expectation of S_z^e + sum_k I_z^k.
double total_magnetization(const QuantumState& joint);

struct ResonanceScan {
  double b_star = 0.0;  // tesla
  double gap = 0.0;     // ueV, minimal splitting in the one-excitation sector
};

// Scans the field for the electron-nuclear flip-flop anti-crossing inside
// the conserved (valley, total magnetization) sector.
ResonanceScan find_flip_flop_resonance(const MemoryScenario& s);

struct WriteResult {
  QuantumState joint_final;
  double transfer_fidelity = 0.0;
  double b_tuned = 0.0;          // tesla
  double t_swap = 0.0;           // ns
  double flip_flop_element = 0.0;  // A_ff, ueV
  std::vector<cd> nuclear_target;  // target state over the nuclear factors
};

// Hartmann-Hahn flip-flop swap of a 2-dim electron spin qubit onto the
// chain (single nucleus for N=1, the coupling-weighted collective mode
// otherwise).  Nuclei start in |up...up>.
WriteResult write_protocol(const MemoryScenario& s,
                           const QuantumState& electron_qubit);

struct CoherencePoint {
  double t = 0.0;
  double overlap = 1.0;            // fidelity of the electron reduced state
                                   // against its uncoupled evolution
  double overlap_offloaded = 1.0;  // same quantity with coupling_scale = 0
};

std::vector<CoherencePoint> coherence_trajectory(const MemoryScenario& s,
                                                 const QuantumState& psi0,
                                                 const std::vector<double>& times);

}  // namespace cntqd::memory
