#include "cntqd/gates.hpp"

#include <algorithm>
#include <cmath>

#include "cntqd/numerics.hpp"
#include "cntqd/units.hpp"

namespace cntqd::gates {

namespace {

using dotmodel::DotParameters;
using units::kHbar;

constexpr std::size_t kAlpha = 0, kDelta = 1, kBeta = 2, kGamma = 3;

// exp(-i H dt / hbar) for a 2x2 Hermitian H given as (h00, h01, h11).
std::array<cd, 4> expm2(double h00, cd h01, double h11, double dt) {
  const double c0 = 0.5 * (h00 + h11);
  const double cz = 0.5 * (h00 - h11);
  const double cx = h01.real();
  const double cy = -h01.imag();
  const double w = std::sqrt(cx * cx + cy * cy + cz * cz);
  const double arg = w * dt / kHbar;
  const cd global = std::polar(1.0, -c0 * dt / kHbar);
  const double c = std::cos(arg);
  const double s = (w > 0.0) ? std::sin(arg) / w : dt / kHbar;
  const cd i(0, 1);
  return {global * (c - i * s * cz), global * (-i * s * (cx - i * cy)),
          global * (-i * s * (cx + i * cy)), global * (c + i * s * cz)};
}

void apply2(const std::array<cd, 4>& u, cd& a, cd& b) {
  const cd na = u[0] * a + u[1] * b;
  const cd nb = u[2] * a + u[3] * b;
  a = na;
  b = nb;
}

double wrap_pi(double x) {
  x = std::fmod(x + M_PI, 2.0 * M_PI);
  if (x < 0) x += 2.0 * M_PI;
  return x - M_PI;
}

}  // namespace

void PulseSpec::validate() const {
  if (!(duration >= 0)) throw ValidationError("pulse duration must be >= 0");
  if (kind != PulseKind::microwave_drive &&
      (drive_amp != 0.0 || drive_freq != 0.0))
    throw ValidationError("drive fields are only meaningful for microwave pulses");
}

// ---------------------------------------------------------------------------
// phase gate

PhaseGate phase_gate(const DotParameters& p, const PulseSpec& kick) {
  kick.validate();
  if (kick.kind != PulseKind::field_kick)
    throw WrongPulseKind("phase_gate expects a field_kick pulse");

  const Operator h = dotmodel::build_hamiltonian(p, kick.b_field, 0.0);
  const double e_alpha = h.at(kAlpha, kAlpha).real();
  const double e_gamma = h.at(kGamma, kGamma).real();
  const double theta = (e_alpha - e_gamma) * kick.duration / kHbar;

  PhaseGate out;
  out.theta = theta;
  out.logical = CMat(2);
  out.logical.at(0, 0) = cd(1, 0);
  out.logical.at(1, 1) = std::polar(1.0, -theta);

  // Exact 4x4 evolution: diagnostic phase and leakage out of span{alpha,gamma}.
  const CMat u = qstate::propagator(h, kick.duration);
  const cd u_aa = u.at(kAlpha, kAlpha);
  const cd u_gg = u.at(kGamma, kGamma);
  out.exact_phase = wrap_pi(std::arg(u_gg * std::conj(u_aa)));
  out.leakage = 1.0 - 0.5 * (std::norm(u_aa) + std::norm(u_gg));
  return out;
}

// ---------------------------------------------------------------------------
// valley Rabi

namespace {

struct TwoLevelBlock {
  double e_gamma, e_beta, kappa;  // diagonal energies and static coupling
  double mean, half_split;        // m and w of the diagonalised block
  double chi;                     // mixing angle
  double omega0;                  // eigen-splitting / hbar, rad/ns
};

TwoLevelBlock gamma_beta_block(const DotParameters& p, double b_field) {
  const Operator h = dotmodel::build_hamiltonian(p, b_field, 0.0);
  TwoLevelBlock blk;
  blk.e_gamma = h.at(kGamma, kGamma).real();
  blk.e_beta = h.at(kBeta, kBeta).real();
  blk.kappa = h.at(kGamma, kBeta).real();
  const double d = 0.5 * (blk.e_beta - blk.e_gamma);
  blk.mean = 0.5 * (blk.e_beta + blk.e_gamma);
  blk.half_split = std::hypot(d, blk.kappa);
  blk.chi = 0.5 * std::atan2(blk.kappa, d);
  blk.omega0 = 2.0 * blk.half_split / kHbar;
  return blk;
}

RabiResult rabi_rwa(const DotParameters& p, const PulseSpec& drive,
                    const std::vector<double>& times) {
  const TwoLevelBlock blk = gamma_beta_block(p, drive.b_field);
  const double omega =
      drive.drive_freq > 0 ? units::ghz_to_rad_per_ns(drive.drive_freq)
                           : blk.omega0;
  const double cos2chi = std::cos(2.0 * blk.chi);
  const double sin_chi = std::sin(blk.chi);
  const double cos_chi = std::cos(blk.chi);
  const double omega_t = drive.drive_amp * cos2chi / (2.0 * kHbar);
  const double half_det = 0.5 * (blk.omega0 - omega);

  RabiResult out;
  out.resonance_freq_ghz = units::rad_per_ns_to_ghz(blk.omega0);
  out.drive_freq_ghz = units::rad_per_ns_to_ghz(omega);
  out.rabi_rate = drive.drive_amp / (2.0 * kHbar);

  // Start state gamma in the (g, e) eigenbasis of the static block.
  auto state_at = [&](double t) -> std::array<cd, 2> {
    cd cg(cos_chi, 0.0), ce(sin_chi, 0.0);
    // rotating-frame propagator: H_rot/hbar = [[-hd, W e^{i phi}], [W e^{-i phi}, hd]]
    const std::array<cd, 4> u_rot =
        expm2(-half_det * kHbar,
              std::polar(omega_t * kHbar, drive.phase), half_det * kHbar, t);
    apply2(u_rot, cg, ce);
    // back to the lab frame (populations are insensitive to the mean phase)
    cg *= std::polar(1.0, 0.5 * omega * t);
    ce *= std::polar(1.0, -0.5 * omega * t);
    // eigenbasis -> (gamma, beta)
    return {cos_chi * cg + sin_chi * ce, -sin_chi * cg + cos_chi * ce};
  };

  for (double t : times) {
    const auto c = state_at(t);
    out.times.push_back(t);
    out.p_beta.push_back(std::norm(c[1]));
  }
  const auto cf = state_at(drive.duration);
  std::vector<cd> amps(4, cd(0, 0));
  amps[kGamma] = cf[0];
  amps[kBeta] = cf[1];
  out.final_state =
      QuantumState::normalized(dotmodel::dot_space(), std::move(amps));
  return out;
}

// One pass of the piecewise-constant full-drive integrator at a fixed
// resolution; fills p_beta at the sample times and returns the final state.
std::vector<cd> integrate_full(const DotParameters& p, const PulseSpec& drive,
                               double omega, int steps_per_period,
                               const std::vector<double>& times,
                               std::vector<double>* p_beta_out) {
  const Operator h = dotmodel::build_hamiltonian(p, drive.b_field, 0.0);
  const double period = (omega > 0) ? units::kTwoPi / omega : drive.duration;
  const double dt_max = period / static_cast<double>(steps_per_period);

  std::vector<cd> amps(4, cd(0, 0));
  amps[kGamma] = cd(1, 0);

  // averaged drive coefficient over [t, t+dt] on the valley-flip channel
  auto drive_avg = [&](double t, double dt) {
    if (omega <= 0) return drive.drive_amp * std::cos(drive.phase);
    return drive.drive_amp *
           (std::sin(omega * (t + dt) + drive.phase) -
            std::sin(omega * t + drive.phase)) /
           (omega * dt);
  };

  auto advance = [&](double t0, double t1) {
    if (t1 <= t0) return;
    const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / dt_max - 1e-12));
    const double dt = (t1 - t0) / static_cast<double>(std::max<std::size_t>(n, 1));
    double t = t0;
    for (std::size_t k = 0; k < std::max<std::size_t>(n, 1); ++k) {
      const double d = drive_avg(t, dt);
      // spin +1/2 sector (alpha, delta)
      apply2(expm2(h.at(0, 0).real(), h.at(0, 1) + d, h.at(1, 1).real(), dt),
             amps[0], amps[1]);
      // spin -1/2 sector (beta, gamma)
      apply2(expm2(h.at(2, 2).real(), h.at(2, 3) + d, h.at(3, 3).real(), dt),
             amps[2], amps[3]);
      t += dt;
    }
  };

  double t_prev = 0.0;
  if (p_beta_out != nullptr) p_beta_out->clear();
  for (double t : times) {
    advance(t_prev, t);
    t_prev = t;
    if (p_beta_out != nullptr) p_beta_out->push_back(std::norm(amps[kBeta]));
  }
  advance(t_prev, drive.duration);
  return amps;
}

RabiResult rabi_full(const DotParameters& p, const PulseSpec& drive,
                     const std::vector<double>& times) {
  const TwoLevelBlock blk = gamma_beta_block(p, drive.b_field);
  const double omega =
      drive.drive_freq > 0 ? units::ghz_to_rad_per_ns(drive.drive_freq)
                           : blk.omega0;

  RabiResult out;
  out.resonance_freq_ghz = units::rad_per_ns_to_ghz(blk.omega0);
  out.drive_freq_ghz = units::rad_per_ns_to_ghz(omega);
  out.rabi_rate = drive.drive_amp / (2.0 * kHbar);
  out.times = times;

  std::vector<cd> amps;
  int steps = drive.steps_per_period > 0 ? drive.steps_per_period : 200;
  if (drive.steps_per_period > 0) {
    amps = integrate_full(p, drive, omega, steps, times, &out.p_beta);
  } else {
    // refine until halving the step moves the final amplitudes by < 1e-8
    constexpr int kMaxSteps = 200 << 8;
    std::vector<double> traj;
    amps = integrate_full(p, drive, omega, steps, times, &traj);
    for (;;) {
      std::vector<double> traj2;
      const std::vector<cd> fine =
          integrate_full(p, drive, omega, steps * 2, times, &traj2);
      double diff = 0.0;
      for (std::size_t i = 0; i < 4; ++i)
        diff = std::max(diff, std::abs(fine[i] - amps[i]));
      if (diff < 1e-8) break;
      steps *= 2;
      amps = fine;
      traj = traj2;
      if (steps > kMaxSteps)
        throw StepSizeTooCoarse(
            "full-drive integrator did not reach 1e-8 step stability");
    }
    out.p_beta = traj;
  }
  out.steps_per_period = steps;

  double norm2 = 0.0;
  for (const cd& a : amps) norm2 += std::norm(a);
  if (std::abs(norm2 - 1.0) > 1e-8)
    throw StepSizeTooCoarse("unitarity drift exceeds 1e-8");

  out.final_state = QuantumState::normalized(dotmodel::dot_space(), amps);
  return out;
}

}  // namespace

RabiResult valley_rabi(const DotParameters& p, const PulseSpec& drive,
                       RabiMode mode, const std::vector<double>& sample_times) {
  drive.validate();
  if (drive.kind != PulseKind::microwave_drive)
    throw WrongPulseKind("valley_rabi expects a microwave_drive pulse");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < 0 || sample_times[i] > drive.duration + 1e-12)
      throw ValidationError("sample times must lie within the pulse duration");
    if (i > 0 && sample_times[i] < sample_times[i - 1])
      throw ValidationError("sample times must be non-decreasing");
  }
  return mode == RabiMode::rwa_two_level ? rabi_rwa(p, drive, sample_times)
                                         : rabi_full(p, drive, sample_times);
}

// ---------------------------------------------------------------------------
// two-dot couplings

TwoDotGeometry TwoDotGeometry::from_separation(double r_angstrom,
                                               double mu_orb) {
  TwoDotGeometry g;
  g.separation = r_angstrom;
  g.coupling_strength =
      2.0 * units::kDipole * mu_orb * mu_orb / (r_angstrom * r_angstrom * r_angstrom);
  g.validate();
  return g;
}

void TwoDotGeometry::validate() const {
  if (!(separation > 0)) throw ValidationError("separation must be positive");
}

Operator dipole_coupling_hamiltonian(const TwoDotGeometry& g) {
  g.validate();
  const qstate::HilbertSpace space({{"spin1", 2}, {"valley1", 2}, {"spin2", 2}, {"valley2", 2}});
  Operator h = Operator::zero(space);
  for (std::size_t idx = 0; idx < 16; ++idx) {
    const double l1 = (idx & 4u) ? -1.0 : 1.0;
    const double l2 = (idx & 1u) ? -1.0 : 1.0;
    h.at(idx, idx) = -g.coupling_strength * l1 * l2;
  }
  return h;
}

double cz_time(const TwoDotGeometry& g) {
  return M_PI * kHbar / (4.0 * g.coupling_strength);
}

double diagonal_entangling_phase(const CMat& u4) {
  if (u4.n != 4) throw DimensionMismatch("expected a 4x4 matrix");
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j && std::abs(u4.at(i, j)) > 1e-12)
        throw ValidationError("matrix is not diagonal");
  return wrap_pi(std::arg(u4.at(0, 0)) + std::arg(u4.at(3, 3)) -
                 std::arg(u4.at(1, 1)) - std::arg(u4.at(2, 2)));
}

LocalEquivalence cz_equivalence_search(const CMat& u4) {
  if (u4.n != 4) throw DimensionMismatch("expected a 4x4 matrix");
  CMat cz = CMat::identity(4);
  cz.at(3, 3) = cd(-1, 0);

  auto fidelity_of = [&](const std::vector<double>& ang) {
    auto rz2 = [](double a, double b) {
      CMat m(4);
      m.at(0, 0) = std::polar(1.0, -0.5 * (a + b));
      m.at(1, 1) = std::polar(1.0, -0.5 * (a - b));
      m.at(2, 2) = std::polar(1.0, 0.5 * (a - b));
      m.at(3, 3) = std::polar(1.0, 0.5 * (a + b));
      return m;
    };
    const CMat dressed =
        matmul(rz2(ang[0], ang[1]), matmul(u4, rz2(ang[2], ang[3])));
    return gate_fidelity(cz, dressed);
  };

  LocalEquivalence best;
  for (int s = 0; s < 8; ++s) {
    std::vector<double> x0 = {0.4 * s, -0.3 * s, 0.7 * s + 0.1, 0.2 * s - 0.5};
    const auto res = numerics::nelder_mead(
        [&](const std::vector<double>& x) { return -fidelity_of(x); }, x0, 0.7,
        1e-14, 4000);
    if (-res.value > best.fidelity) {
      best.fidelity = -res.value;
      for (std::size_t i = 0; i < 4; ++i) best.angles[i] = res.x[i];
    }
  }
  return best;
}

TwoQubitGate two_qubit_gate(const TwoDotGeometry& g, double t_ns, bool verify) {
  if (!(t_ns >= 0)) throw ValidationError("gate time must be >= 0");
  const Operator h = dipole_coupling_hamiltonian(g);

  TwoQubitGate out;
  out.unitary = CMat(16);
  for (std::size_t idx = 0; idx < 16; ++idx)
    out.unitary.at(idx, idx) =
        std::polar(1.0, -h.at(idx, idx).real() * t_ns / kHbar);

  out.valley_unitary = CMat(4);
  for (std::size_t v = 0; v < 4; ++v) {
    // spins fixed to up-up; the unitary factorises as I_spin (x) V_valley
    const std::size_t idx = ((v >> 1) & 1u) * 4 + (v & 1u);
    out.valley_unitary.at(v, v) = out.unitary.at(idx, idx);
  }
  out.phase = diagonal_entangling_phase(out.valley_unitary);
  if (verify) {
    out.cz_fidelity = cz_equivalence_search(out.valley_unitary).fidelity;
    out.is_cphase = out.cz_fidelity > 1.0 - 1e-9;
  }
  return out;
}

CMat exchange_gate(double j_ex_uev, double t_ns) {
  if (!(t_ns >= 0)) throw ValidationError("gate time must be >= 0");
  // S1.S2 = (1/2) SWAP - (1/4) I: uniform phase on the triplet sector, a
  // 2x2 rotation inside span{up-down, down-up}.
  CMat u(4);
  const double quarter = 0.25 * j_ex_uev;
  const cd ph_trip = std::polar(1.0, -quarter * t_ns / kHbar);
  u.at(0, 0) = ph_trip;
  u.at(3, 3) = ph_trip;
  const auto blk = expm2(-quarter, cd(2.0 * quarter, 0.0), -quarter, t_ns);
  u.at(1, 1) = blk[0];
  u.at(1, 2) = blk[1];
  u.at(2, 1) = blk[2];
  u.at(2, 2) = blk[3];
  return u;
}

double gate_fidelity(const CMat& u, const CMat& v) {
  if (u.n != v.n) throw DimensionMismatch("gate_fidelity: dimensions differ");
  cd tr(0, 0);
  for (std::size_t i = 0; i < u.n; ++i)
    for (std::size_t k = 0; k < u.n; ++k)
      tr += std::conj(u.at(k, i)) * v.at(k, i);
  const double d = static_cast<double>(u.n);
  return std::norm(tr) / (d * d);
}

}  // namespace cntqd::gates
