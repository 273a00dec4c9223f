#include <cmath>
#include <sstream>

#include "cntqd/cli.hpp"
#include "cntqd/dotmodel.hpp"
#include "cntqd/gates.hpp"
#include "cntqd/memory.hpp"
#include "cntqd/qstate.hpp"
#include "cntqd/trap.hpp"
#include "cntqd/units.hpp"

namespace cntqd::cli {

namespace {

using nlohmann::json;
using qstate::cd;

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

dotmodel::DotParameters dot_from(const json& p) {
  dotmodel::DotParameters d;
  d.delta_so = p.at("delta_so_uev").get<double>();
  d.delta_kk = p.at("delta_kk_uev").get<double>();
  d.g_s = p.at("g_s").get<double>();
  d.mu_orb = p.at("mu_orb_uev_per_t").get<double>();
  d.lever_arm = p.at("lever_arm_uev_per_v").get<double>();
  d.so_sign = static_cast<int>(p.at("so_sign").get<std::int64_t>());
  d.zeeman_sign = static_cast<int>(p.at("zeeman_sign").get<std::int64_t>());
  d.validate();
  return d;
}

ResultTable run_spectrum(const Scenario& s) {
  const json& p = s.params;
  const dotmodel::DotParameters dot = dot_from(p);
  const double lo = p.at("b_min_t").get<double>();
  const double hi = p.at("b_max_t").get<double>();
  const auto n = static_cast<std::size_t>(p.at("b_points").get<std::int64_t>());
  if (n > 1 && !(hi > lo))
    throw ValidationError("b_max_t must exceed b_min_t for multi-point grids");

  const auto points =
      dotmodel::spectrum_sweep(dot, linspace(lo, hi, n), p.at("gate_v").get<double>());

  ResultTable t;
  t.columns = {"b_t", "e1_uev", "e2_uev", "e3_uev", "e4_uev"};
  for (const auto& pt : points)
    t.rows.push_back({pt.b_field, pt.energies[0], pt.energies[1], pt.energies[2],
                      pt.energies[3]});
  return t;
}

ResultTable run_gate(const Scenario& s) {
  const json& p = s.params;
  const dotmodel::DotParameters dot = dot_from(p);
  const std::string kind = p.at("gate_kind").get<std::string>();
  const auto points = static_cast<std::size_t>(p.at("points").get<std::int64_t>());

  ResultTable t;
  if (kind == "phase") {
    const double b = p.at("kick_b_t").get<double>();
    const double duration = p.at("duration_ns").get<double>();
    t.columns = {"t_ns", "theta_rad", "exact_phase_rad", "leakage"};
    for (double tt : linspace(0.0, duration, points)) {
      gates::PulseSpec kick;
      kick.kind = gates::PulseKind::field_kick;
      kick.b_field = b;
      kick.duration = tt;
      const gates::PhaseGate g = gates::phase_gate(dot, kick);
      t.rows.push_back({tt, g.theta, g.exact_phase, g.leakage});
    }
    t.extra["kick_b_t"] = b;
    return t;
  }

  // rabi
  gates::PulseSpec drive;
  drive.kind = gates::PulseKind::microwave_drive;
  drive.b_field = p.at("b_field_t").get<double>();
  drive.drive_amp = p.at("drive_amp_uev").get<double>();
  drive.drive_freq = p.at("drive_freq_ghz").get<double>();
  drive.phase = p.at("drive_phase_rad").get<double>();
  drive.steps_per_period =
      static_cast<int>(p.at("steps_per_period").get<std::int64_t>());
  double duration = p.at("duration_ns").get<double>();
  if (duration <= 0.0) {
    // one full population flop at the requested amplitude
    const double omega_r = drive.drive_amp / (2.0 * units::kHbar);
    duration = omega_r > 0 ? M_PI / omega_r : 10.0;
  }
  drive.duration = duration;
  const std::vector<double> times = linspace(0.0, duration, points);

  const gates::RabiResult rwa =
      gates::valley_rabi(dot, drive, gates::RabiMode::rwa_two_level, times);
  const bool full = p.at("rabi_mode").get<std::string>() == "full";
  const gates::RabiResult* main = &rwa;
  gates::RabiResult full_res;
  if (full) {
    full_res =
        gates::valley_rabi(dot, drive, gates::RabiMode::full_four_level, times);
    main = &full_res;
  }

  t.columns = {"t_ns", "p_beta", "p_beta_rwa"};
  for (std::size_t i = 0; i < times.size(); ++i)
    t.rows.push_back({times[i], main->p_beta[i], rwa.p_beta[i]});
  t.extra["resonance_freq_ghz"] = rwa.resonance_freq_ghz;
  t.extra["drive_freq_ghz"] = rwa.drive_freq_ghz;
  t.extra["rabi_rate_rad_per_ns"] = rwa.rabi_rate;
  if (full) t.extra["steps_per_period"] = full_res.steps_per_period;
  return t;
}

ResultTable run_two_qubit(const Scenario& s) {
  const json& p = s.params;
  const std::string kind = p.at("tq_kind").get<std::string>();
  const auto points = static_cast<std::size_t>(p.at("points").get<std::int64_t>());
  double t_max = p.at("t_max_ns").get<double>();

  ResultTable t;
  if (kind == "dipole") {
    gates::TwoDotGeometry g;
    const double j_dd = p.at("j_dd_uev").get<double>();
    if (j_dd > 0) {
      g.separation = p.at("separation_angstrom").get<double>();
      g.coupling_strength = j_dd;
    } else {
      g = gates::TwoDotGeometry::from_separation(
          p.at("separation_angstrom").get<double>(),
          p.at("mu_orb_uev_per_t").get<double>());
    }
    const double t_star = gates::cz_time(g);
    if (t_max <= 0) t_max = 2.0 * t_star;

    t.columns = {"t_ns", "entangling_phase_rad", "is_cphase"};
    for (double tt : linspace(0.0, t_max, points)) {
      const gates::TwoQubitGate u = gates::two_qubit_gate(g, tt, false);
      const double dist = std::abs(std::abs(u.phase) - M_PI);
      t.rows.push_back({tt, u.phase, dist < 1e-9 ? 1.0 : 0.0});
    }
    const gates::TwoQubitGate star = gates::two_qubit_gate(g, t_star, true);
    t.extra["j_dd_uev"] = g.coupling_strength;
    t.extra["t_star_ns"] = t_star;
    t.extra["cz_fidelity_at_t_star"] = star.cz_fidelity;
    return t;
  }

  // exchange
  const double j_ex = p.at("j_ex_uev").get<double>();
  if (j_ex == 0.0) throw ValidationError("j_ex_uev must be nonzero");
  const double t_swap = M_PI * units::kHbar / std::abs(j_ex);
  if (t_max <= 0) t_max = 2.0 * t_swap;

  qstate::CMat swap(4);
  swap.at(0, 0) = swap.at(1, 2) = swap.at(2, 1) = swap.at(3, 3) = cd(1, 0);
  const qstate::CMat eye = qstate::CMat::identity(4);

  t.columns = {"t_ns", "swap_fidelity", "identity_fidelity"};
  for (double tt : linspace(0.0, t_max, points)) {
    const qstate::CMat u = gates::exchange_gate(j_ex, tt);
    t.rows.push_back(
        {tt, gates::gate_fidelity(swap, u), gates::gate_fidelity(eye, u)});
  }
  t.extra["j_ex_uev"] = j_ex;
  t.extra["t_swap_ns"] = t_swap;
  return t;
}

memory::MemoryScenario memory_from(const json& p) {
  memory::MemoryScenario m;
  m.dot = dot_from(p);
  const auto n = static_cast<std::size_t>(p.at("n_nuclei").get<std::int64_t>());
  const double first = p.at("first_position_angstrom").get<double>();
  const double spacing = p.at("spacing_angstrom").get<double>();
  for (std::size_t k = 0; k < n; ++k)
    m.chain.positions.push_back(first + spacing * static_cast<double>(k));
  m.chain.g_n = p.at("g_n").get<double>();
  m.electron_position = p.at("electron_position_angstrom").get<double>();
  m.coupling_scale = p.at("coupling_scale_uev_a3").get<double>();
  m.b_field = p.at("b_field_t").get<double>();
  m.valley = static_cast<int>(p.at("valley_sign").get<std::int64_t>());
  m.validate();
  return m;
}

qstate::QuantumState initial_joint(const memory::MemoryScenario& m,
                                   const std::string& electron_init) {
  const double r = 1.0 / std::sqrt(2.0);
  if (electron_init == "up") return memory::joint_state(m, cd(1, 0), cd(0, 0), 0);
  if (electron_init == "down")
    return memory::joint_state(m, cd(0, 0), cd(1, 0), 0);
  return memory::joint_state(m, cd(r, 0), cd(r, 0), 0);
}

ResultTable run_memory(const Scenario& s) {
  const json& p = s.params;
  const memory::MemoryScenario m = memory_from(p);
  const std::string mode = p.at("memory_mode").get<std::string>();
  const auto points = static_cast<std::size_t>(p.at("points").get<std::int64_t>());
  const qstate::QuantumState psi0 =
      initial_joint(m, p.at("electron_init").get<std::string>());

  ResultTable t;
  t.extra["n_nuclei"] = m.chain.count();

  if (mode == "coherence") {
    const std::vector<double> times =
        linspace(0.0, p.at("t_max_ns").get<double>(), points);
    const auto traj = memory::coherence_trajectory(m, psi0, times);
    const qstate::Operator h =
        memory::add_zeeman(m, memory::hyperfine_hamiltonian(m));
    const auto eig = qstate::eigh(h);
    t.columns = {"t_ns", "overlap", "overlap_offloaded", "faraday"};
    for (std::size_t i = 0; i < times.size(); ++i) {
      const qstate::QuantumState psi_t = qstate::evolve(eig, psi0, times[i]);
      t.rows.push_back({times[i], traj[i].overlap, traj[i].overlap_offloaded,
                        memory::faraday_readout(psi_t, m.chain)});
    }
    t.extra["b_field_t"] = m.b_field;
    return t;
  }

  // write: tune to the flip-flop resonance and follow the swap
  std::vector<cd> electron(2, cd(0, 0));
  const std::string init = p.at("electron_init").get<std::string>();
  if (init == "up")
    electron[0] = cd(1, 0);
  else if (init == "down")
    electron[1] = cd(1, 0);
  else
    electron[0] = electron[1] = cd(1.0 / std::sqrt(2.0), 0);
  const qstate::QuantumState qubit(
      qstate::HilbertSpace::single("espin", 2), electron);

  const memory::WriteResult w = memory::write_protocol(m, qubit);
  const double t_max = 2.0 * w.t_swap;  // the grid spans two swap periods

  memory::MemoryScenario tuned = m;
  tuned.b_field = w.b_tuned;
  const qstate::Operator h =
      memory::add_zeeman(tuned, memory::hyperfine_hamiltonian(tuned));
  const auto eig = qstate::eigh(h);
  std::vector<std::size_t> nuclear_factors;
  for (std::size_t k = 0; k < m.chain.count(); ++k)
    nuclear_factors.push_back(2 + k);

  t.columns = {"t_ns", "overlap", "faraday", "total_mz"};
  for (double tt : linspace(0.0, t_max, points)) {
    const qstate::QuantumState psi_t = qstate::evolve(eig, psi0, tt);
    const qstate::CMat rho_n = qstate::reduced_density(psi_t, nuclear_factors);
    cd fid(0, 0);
    for (std::size_t i = 0; i < rho_n.n; ++i)
      for (std::size_t j = 0; j < rho_n.n; ++j)
        fid += std::conj(w.nuclear_target[i]) * rho_n.at(i, j) *
               w.nuclear_target[j];
    t.rows.push_back({tt, fid.real(), memory::faraday_readout(psi_t, m.chain),
                      memory::total_magnetization(psi_t)});
  }
  t.extra["b_tuned_t"] = w.b_tuned;
  t.extra["t_swap_ns"] = w.t_swap;
  t.extra["transfer_fidelity"] = w.transfer_fidelity;
  t.extra["flip_flop_uev"] = w.flip_flop_element;
  return t;
}

ResultTable run_trap(const Scenario& s) {
  const json& p = s.params;
  trap::SpeciesParams sp;
  const std::string params_file = p.at("params_file").get<std::string>();
  if (!params_file.empty()) {
    sp = trap::load_trap_params(params_file);
  } else if (p.at("preset").get<std::string>() == "nitrogen") {
    sp = trap::nitrogen_defaults();
  } else {
    sp = trap::hydrogen_defaults();
  }
  auto override_num = [&](const char* key, double& slot) {
    const double v = p.at(key).get<double>();
    if (v > 0) slot = v;
  };
  override_num("tube_radius_angstrom", sp.config.tube_radius);
  override_num("tube_length_angstrom", sp.config.tube_length);
  override_num("wall_epsilon_mev", sp.config.wall_epsilon);
  override_num("wall_sigma_angstrom", sp.config.wall_sigma);
  override_num("surface_density_per_a2", sp.config.surface_density);
  override_num("atom_epsilon_mev", sp.config.atom_epsilon);
  override_num("atom_sigma_angstrom", sp.config.atom_sigma);
  override_num("mass_amu", sp.mass_amu);
  const auto qord = p.at("quadrature_order").get<std::int64_t>();
  if (qord > 0) sp.config.quadrature_order = static_cast<int>(qord);
  sp.config.finite_length = p.at("finite_length").get<bool>();
  const std::string element = p.at("element").get<std::string>();
  if (!element.empty()) sp.element = element;
  sp.config.validate();

  const auto n_atoms = static_cast<std::size_t>(p.at("n_atoms").get<std::int64_t>());
  const trap::ChainState chain = trap::relax_chain(
      n_atoms, sp.config, p.at("seed_jitter_angstrom").get<double>(),
      static_cast<std::uint64_t>(p.at("rng_seed").get<std::int64_t>()));
  const trap::ModeReport modes = trap::normal_modes(chain, sp.config, sp.mass_amu);
  const double min_transverse = trap::transverse_stability(chain, sp.config);

  ResultTable t;
  t.columns = {"mode_index", "frequency_cm1", "is_axial_translation"};
  for (std::size_t k = 0; k < modes.frequencies_cm.size(); ++k)
    t.rows.push_back({static_cast<double>(k), modes.frequencies_cm[k],
                      k == modes.translation_index ? 1.0 : 0.0});

  std::ostringstream xyz;
  trap::write_xyz(chain.coordinates, sp.element, xyz);
  t.attachments.emplace_back(".xyz", xyz.str());

  t.extra["energy_mev"] = chain.energy;
  t.extra["converged"] = chain.converged;
  t.extra["gradient_norm_mev_per_a"] = chain.gradient_norm;
  t.extra["min_transverse_hessian_mev_per_a2"] = min_transverse;
  if (n_atoms >= 2) {
    double mean = 0.0;
    std::vector<double> sp_list;
    for (std::size_t i = 1; i < n_atoms; ++i)
      sp_list.push_back(chain.coordinates[i].z - chain.coordinates[i - 1].z);
    for (double v : sp_list) mean += v;
    mean /= static_cast<double>(sp_list.size());
    t.extra["mean_spacing_angstrom"] = mean;
  }
  return t;
}

}  // namespace

ResultTable run_scenario(const Scenario& s) {
  ResultTable t;
  try {
    if (s.command == "spectrum")
      t = run_spectrum(s);
    else if (s.command == "gate")
      t = run_gate(s);
    else if (s.command == "two-qubit")
      t = run_two_qubit(s);
    else if (s.command == "memory")
      t = run_memory(s);
    else if (s.command == "trap")
      t = run_trap(s);
    else
      throw ValidationError("unknown command '" + s.command + "'");
  } catch (const Error& e) {
    // keep the error class, attach the scenario context
    throw Error(e.kind(), e.category(),
                "while running '" + s.command + "': " + e.message());
  }
  t.command = s.command;
  t.scenario_hash = scenario_hash(s);
  return t;
}

}  // namespace cntqd::cli
