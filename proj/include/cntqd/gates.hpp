#pragma once

#include <array>
#include <vector>

#include "cntqd/dotmodel.hpp"
#include "cntqd/qstate.hpp"

namespace cntqd::gates {

using qstate::cd;
using qstate::CMat;
using qstate::Operator;
using qstate::QuantumState;

enum class PulseKind { field_kick, microwave_drive, free_evolution };

struct PulseSpec {
  PulseKind kind = PulseKind::free_evolution;
  double b_field = 0.0;       // tesla, static field during the pulse
  double duration = 0.0;      // ns
  double drive_amp = 0.0;     // ueV
  double drive_freq = 0.0;    // GHz; 0 tunes to the actual level splitting
  double phase = 0.0;         // drive phase, radians
  int steps_per_period = 0;   // full-drive integrator; 0 = adaptive from 200

  void validate() const;
};

// ---------------------------------------------------------------------------
// Field-kick phase gate on the zero-field {gamma, alpha} logical pair.

struct PhaseGate {
  // 2x2 in the (ket0=gamma, ket1=alpha) basis: diag(1, e^{-i theta}).
  CMat logical;
  double theta = 0.0;        // (E_alpha - E_gamma) * t / hbar, diagonal energies
  double exact_phase = 0.0;  // same phase extracted from the exact 4x4 evolution, wrapped
  double leakage = 0.0;      // mean population leaving span{alpha, gamma}
};

PhaseGate phase_gate(const dotmodel::DotParameters& p, const PulseSpec& kick);

// ---------------------------------------------------------------------------
// Microwave valley rotation on the {gamma, beta} pair, starting from gamma.

enum class RabiMode { rwa_two_level, full_four_level };

struct RabiResult {
  QuantumState final_state;        // 4-dim dot state at t = duration
  std::vector<double> times;       // ns
  std::vector<double> p_beta;      // population of the bare beta state
  double resonance_freq_ghz = 0.0; // from the actual gamma/beta level splitting
  double drive_freq_ghz = 0.0;     // frequency actually applied
  double rabi_rate = 0.0;          // Omega_R = drive_amp/(2 hbar), rad/ns
  int steps_per_period = 0;        // accepted step (full mode)
};

RabiResult valley_rabi(const dotmodel::DotParameters& p, const PulseSpec& drive,
                       RabiMode mode, const std::vector<double>& sample_times);

// ---------------------------------------------------------------------------
// Two-dot couplings.

struct TwoDotGeometry {
  double separation = 1000.0;      // angstrom, centre to centre
  double coupling_strength = 0.0;  // J_dd, ueV

  // J_dd = (mu_0 / 2 pi) mu_orb^2 / r^3 in the fixed unit system.
  static TwoDotGeometry from_separation(double r_angstrom, double mu_orb);
  void validate() const;
};

// 16x16 on spin1 (x) valley1 (x) spin2 (x) valley2:
//   H = -J_dd sigma_z^{L1} sigma_z^{L2}  (identity on both spins)
Operator dipole_coupling_hamiltonian(const TwoDotGeometry& g);

struct TwoQubitGate {
  CMat unitary;         // 16x16
  CMat valley_unitary;  // the 4x4 factor on (valley1, valley2)
  bool is_cphase = false;
  double phase = 0.0;   // entangling phase invariant, wrapped to (-pi, pi]
  double cz_fidelity = 0.0;
};

// verify = false skips the numeric local-equivalence search (the invariant
// phase is still reported); used by sweeps that only need the phases.
TwoQubitGate two_qubit_gate(const TwoDotGeometry& g, double t_ns,
                            bool verify = true);

// Ideal swap time: t* = pi hbar / (4 J_dd).
double cz_time(const TwoDotGeometry& g);

// exp(-i j_ex (S1.S2) t / hbar) on the two-spin space.
CMat exchange_gate(double j_ex_uev, double t_ns);

// |tr(u^dagger v)|^2 / d^2, invariant under global phases.
double gate_fidelity(const CMat& u, const CMat& v);

// phi(00) + phi(11) - phi(01) - phi(10) of a diagonal two-qubit unitary,
// wrapped to (-pi, pi].  Equals +-pi exactly for controlled-Z equivalents.
double diagonal_entangling_phase(const CMat& u4);

struct LocalEquivalence {
  double fidelity = 0.0;
  std::array<double, 4> angles{};  // z-rotation angles (a, b) pre, (c, d) post
};

// Brute-force search over local z-rotations maximising the fidelity of
// (Rz(a) x Rz(b)) U (Rz(c) x Rz(d)) against a controlled-Z.
LocalEquivalence cz_equivalence_search(const CMat& u4);

}  // namespace cntqd::gates
