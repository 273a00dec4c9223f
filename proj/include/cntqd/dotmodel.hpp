#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "cntqd/qstate.hpp"

// Single-dot spin (x) valley model.  Basis order (row-major over factors
// [spin, valley]):
//   0: |+1/2>_S |up>_L     (alpha)
//   1: |+1/2>_S |down>_L   (delta)
//   2: |-1/2>_S |up>_L     (beta)
//   3: |-1/2>_S |down>_L   (gamma)
// sigma_z on the spin factor has eigenvalue +1 on |+1/2>, sigma_z on the
// valley factor +1 on |up>_L (orbital moment m_l = +1).

namespace cntqd::dotmodel {

using qstate::cd;
using qstate::CMat;
using qstate::EighResult;
using qstate::HilbertSpace;
using qstate::Operator;
using qstate::QuantumState;

struct DotParameters {
  // Observed zero-field splitting between the two Kramers doublets, ueV.
  // The bare Ising coefficient is sqrt(delta_so^2 - delta_kk^2) so that the
  // doublet centres stay exactly delta_so apart with valley mixing on, while
  // the avoided crossing keeps its gap at exactly delta_kk.
  double delta_so = 400.0;
  // Valley-mixing (anti-crossing) gap, ueV.  Must not exceed delta_so.
  double delta_kk = 65.0;
  double g_s = 2.0;          // spin g-factor
  double mu_orb = 330.0;     // orbital moment, ueV/T
  double lever_arm = 1000.0; // gate lever arm, ueV/V
  // Sign conventions, exposed because the level diagram fixes only the
  // topology: so_sign = -1 puts {alpha, gamma} in the lower doublet;
  // zeeman_sign = +1 makes alpha/delta cross at positive field.
  int so_sign = -1;
  int zeeman_sign = +1;

  void validate() const;  // throws ValidationError naming the field
};

enum class StateLabel {
  alpha,
  beta,
  gamma,
  delta,
  omega1,
  omega2,
  kramers1,
  kramers2,
};

const char* to_string(StateLabel label);

struct NamedState {
  StateLabel label;
  QuantumState state;
  double phase = 0.0;  // relative phase parameter, radians
};

struct SpectrumPoint {
  double b_field = 0.0;
  double gate_v = 0.0;
  std::array<double, 4> energies{};  // ascending, ueV
  EighResult states;
};

HilbertSpace dot_space();

// The four product states by label (alpha, beta, gamma, delta only).
QuantumState product_state(StateLabel label);

Operator build_hamiltonian(const DotParameters& p, double b_tesla,
                           double vg_volt);

std::vector<SpectrumPoint> spectrum_sweep(const DotParameters& p,
                                          const std::vector<double>& b_grid,
                                          double vg_volt);

struct Crossing {
  double b_star = 0.0;   // tesla
  double gap = 0.0;      // minimal splitting, ueV
  StateLabel first = StateLabel::alpha;
  StateLabel second = StateLabel::alpha;
};

// Locates local minima of adjacent level gaps over [b_lo, b_hi]; each is
// refined by golden section to well below 1e-6 T.
std::vector<Crossing> find_crossings(const DotParameters& p, double b_lo,
                                     double b_hi);

// Field at which the alpha/delta diagonal energies coincide.
double alpha_delta_crossing_field(const DotParameters& p);
// Field at which the gamma/beta diagonal energies coincide (negative).
double gamma_beta_crossing_field(const DotParameters& p);

// |Omega_1> = (alpha + e^{i phi1} gamma)/sqrt(2),
// |Omega_2> = (beta  + e^{i phi2} delta)/sqrt(2)
std::pair<NamedState, NamedState> kramers_states(double phi1, double phi2);

// |omega_1> = |-1/2>_S (|down>_L + e^{i phi3} |up>_L)/sqrt(2),
// |omega_2> = |+1/2>_S (|up>_L + e^{i phi4} |down>_L)/sqrt(2)
std::pair<NamedState, NamedState> valley_superposition_states(double phi3,
                                                              double phi4);

// Coefficients of a dot state in the coupled |J, m_j> basis of L=1 (x) S=1/2,
// restricted to the m_l = +-1 subspace.  Output order:
//   |3/2,3/2>, |3/2,1/2>, |3/2,-1/2>, |3/2,-3/2>, |1/2,1/2>, |1/2,-1/2>
std::array<cd, 6> coupled_basis_transform(const QuantumState& s);

// The 6x4 isometry behind coupled_basis_transform (rows in the order above,
// columns in dot basis order).
std::array<std::array<double, 4>, 6> coupled_basis_matrix();

enum class Regime { b_zero, b_plus };

// Returns (ket0, ket1) for the regime's logical encoding.
std::pair<NamedState, NamedState> logical_encoding(Regime regime);

}  // namespace cntqd::dotmodel
