#include "cntqd/memory.hpp"

#include <algorithm>
#include <cmath>

#include "cntqd/numerics.hpp"
#include "cntqd/units.hpp"

namespace cntqd::memory {

namespace {

using units::kHbar;
using units::kMuB;
using units::kMuN;

constexpr std::size_t kMaxNuclei = 10;

// Basis layout for N nuclei: index = e_bit * 2^{N+1} + v_bit * 2^N + nuclear
// bits, where bit 0 means spin up (s = +1/2) or valley m_l = +1.
struct Layout {
  std::size_t n;            // nuclei
  std::size_t dim;          // 4 * 2^n
  std::size_t e_stride;     // 2^{n+1}
  std::size_t v_stride;     // 2^n

  explicit Layout(std::size_t nuclei)
      : n(nuclei),
        dim(std::size_t{4} << nuclei),
        e_stride(std::size_t{2} << nuclei),
        v_stride(std::size_t{1} << nuclei) {}

  double s_z(std::size_t idx) const {
    return (idx & e_stride) ? -0.5 : 0.5;
  }
  double l_z(std::size_t idx) const {
    return (idx & v_stride) ? -1.0 : 1.0;
  }
  std::size_t nuc_stride(std::size_t k) const {
    return std::size_t{1} << (n - 1 - k);
  }
  double i_z(std::size_t idx, std::size_t k) const {
    return (idx & nuc_stride(k)) ? -0.5 : 0.5;
  }
};

std::vector<double> site_couplings(const MemoryScenario& s) {
  std::vector<double> c;
  c.reserve(s.chain.count());
  for (double pos : s.chain.positions) {
    const double r = std::abs(pos - s.electron_position);
    c.push_back(s.coupling_scale / (r * r * r));
  }
  return c;
}

}  // namespace

void NuclearChain::validate() const {
  if (positions.empty())
    throw ValidationError("nuclear chain needs at least one site");
  if (positions.size() > kMaxNuclei)
    throw ValidationError("nuclear chain is capped at 10 sites");
  for (std::size_t i = 1; i < positions.size(); ++i)
    if (!(positions[i] > positions[i - 1]))
      throw ValidationError("nuclear positions must be strictly increasing");
}

void MemoryScenario::validate() const {
  chain.validate();
  dot.validate();
  if (!(coupling_scale >= 0))
    throw ValidationError("coupling_scale must be non-negative");
  if (valley != 1 && valley != -1)
    throw ValidationError("valley must be +1 or -1");
  for (double pos : chain.positions)
    if (pos == electron_position)
      throw CoincidentPositions(
          "electron position coincides with a nuclear site");
}

HilbertSpace memory_space(const MemoryScenario& s) {
  std::vector<qstate::Factor> factors = {{"espin", 2}, {"valley", 2}};
  for (std::size_t k = 0; k < s.chain.count(); ++k)
    factors.push_back({"n" + std::to_string(k), 2});
  return HilbertSpace(std::move(factors));
}

Operator hyperfine_hamiltonian(const MemoryScenario& s) {
  s.validate();
  const Layout lay(s.chain.count());
  const std::vector<double> c = site_couplings(s);

  Operator h = Operator::zero(memory_space(s));
  for (std::size_t m = 0; m < lay.dim; ++m) {
    const double sz = lay.s_z(m);
    const double lz = lay.l_z(m);
    double diag = 0.0;
    for (std::size_t k = 0; k < lay.n; ++k) {
      const double iz = lay.i_z(m, k);
      diag += -c[k] * (iz * lz + 2.0 * iz * sz);
    }
    h.at(m, m) = diag;

    // flip-flop +c_k (I_x S_x + I_y S_y): couples |e down, n_k up> with
    // |e up, n_k down>; fill from the e-down side to keep hermiticity.
    if (sz < 0) {
      for (std::size_t k = 0; k < lay.n; ++k) {
        if (lay.i_z(m, k) < 0) continue;
        const std::size_t partner = (m ^ lay.e_stride) ^ lay.nuc_stride(k);
        h.at(m, partner) += 0.5 * c[k];
        h.at(partner, m) += 0.5 * c[k];
      }
    }
  }
  return h;
}

Operator add_zeeman(const MemoryScenario& s, const Operator& h,
                    double b_tesla) {
  const Layout lay(s.chain.count());
  if (h.dim() != lay.dim)
    throw SpaceMismatch("operator does not match the scenario space");
  Operator out = h;
  const double zs = static_cast<double>(s.dot.zeeman_sign);
  for (std::size_t m = 0; m < lay.dim; ++m) {
    double diag = zs * (s.dot.mu_orb * b_tesla * lay.l_z(m) +
                        s.dot.g_s * kMuB * b_tesla * lay.s_z(m));
    for (std::size_t k = 0; k < lay.n; ++k)
      diag += -s.chain.g_n * kMuN * b_tesla * lay.i_z(m, k);
    out.at(m, m) += diag;
  }
  return out;
}

Operator add_zeeman(const MemoryScenario& s, const Operator& h) {
  return add_zeeman(s, h, s.b_field);
}

QuantumState joint_state(const MemoryScenario& s, const cd& up_amp,
                         const cd& down_amp, std::size_t nuclear_bits) {
  const Layout lay(s.chain.count());
  std::vector<cd> amps(lay.dim, cd(0, 0));
  const std::size_t v_bit = (s.valley < 0) ? lay.v_stride : 0;
  amps[v_bit + nuclear_bits] = up_amp;
  amps[lay.e_stride + v_bit + nuclear_bits] = down_amp;
  return QuantumState::normalized(memory_space(s), std::move(amps));
}

double faraday_readout(const QuantumState& joint, const NuclearChain& chain) {
  chain.validate();
  const Layout lay(chain.count());
  if (joint.dim() != lay.dim)
    throw SpaceMismatch("state does not match the chain's memory space");
  double acc = 0.0;
  for (std::size_t m = 0; m < lay.dim; ++m) {
    const double p = std::norm(joint.amplitudes()[m]);
    if (p == 0.0) continue;
    double iz_sum = 0.0;
    for (std::size_t k = 0; k < lay.n; ++k) iz_sum += lay.i_z(m, k);
    acc += p * iz_sum;
  }
  return acc / static_cast<double>(lay.n);
}

double total_magnetization(const QuantumState& joint) {
  const std::size_t nf = joint.space().factor_count();
  if (nf < 3) throw SpaceMismatch("expected a memory-space state");
  const Layout lay(nf - 2);
  double acc = 0.0;
  for (std::size_t m = 0; m < lay.dim; ++m) {
    const double p = std::norm(joint.amplitudes()[m]);
    if (p == 0.0) continue;
    double mz = lay.s_z(m);
    for (std::size_t k = 0; k < lay.n; ++k) mz += lay.i_z(m, k);
    acc += p * mz;
  }
  return acc;
}

namespace {

// One-excitation sector at the scenario valley: the initial |e down, all up>
// plus the N states |e up, one nucleus down>.
std::vector<std::size_t> sector_indices(const MemoryScenario& s) {
  const Layout lay(s.chain.count());
  const std::size_t v_bit = (s.valley < 0) ? lay.v_stride : 0;
  std::vector<std::size_t> idx;
  idx.push_back(lay.e_stride + v_bit);  // electron down, all nuclei up
  for (std::size_t k = 0; k < lay.n; ++k)
    idx.push_back(v_bit + lay.nuc_stride(k));  // electron up, nucleus k down
  return idx;
}

}  // namespace

ResonanceScan find_flip_flop_resonance(const MemoryScenario& s) {
  s.validate();
  const Operator hf = hyperfine_hamiltonian(s);
  const std::vector<std::size_t> idx = sector_indices(s);
  const std::size_t n = s.chain.count();

  // Flip-flop couplings from |e down, all up> into the one-excitation states.
  std::vector<double> w(n);
  double w2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = hf.at(idx[0], idx[1 + j]).real();
    w2 += w[j] * w[j];
  }
  const double coupling = std::sqrt(w2);
  if (!(coupling > 1e-30))
    throw NoResonanceFound("flip-flop matrix elements vanish");

  // Project onto span{initial, bright mode}.  Dark combinations carry no
  // coupling and would sit inside the avoided crossing, hiding it from a
  // plain adjacent-gap scan.  Both diagonals are linear in B.
  const Operator z1 = add_zeeman(s, Operator::zero(hf.space()), 1.0);
  const double d0 = hf.at(idx[0], idx[0]).real();
  const double s0 = z1.at(idx[0], idx[0]).real();
  double db = 0.0, sb = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double weight = w[j] * w[j] / w2;
    db += weight * hf.at(idx[1 + j], idx[1 + j]).real();
    sb += weight * z1.at(idx[1 + j], idx[1 + j]).real();
  }
  if (s0 == sb)
    throw NoResonanceFound("electron and nuclear Zeeman slopes coincide");

  auto pair_gap = [&](double b) {
    return std::hypot((d0 + s0 * b) - (db + sb * b), 2.0 * coupling);
  };
  const double b_est = (db - d0) / (s0 - sb);

  // Scan the bracket and refine, per the tuning contract.
  const double halfwidth = 0.75 * std::max(std::abs(b_est), 1e-6);
  const double a = b_est - halfwidth, b = b_est + halfwidth;
  constexpr std::size_t kGrid = 301;
  double best_b = a, best_gap = 0.0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < kGrid; ++i) {
    const double bi = a + (b - a) * static_cast<double>(i) / (kGrid - 1);
    const double g = pair_gap(bi);
    if (i == 0 || g < best_gap) {
      best_gap = g;
      best_b = bi;
      best_i = i;
    }
  }
  if (best_i == 0 || best_i == kGrid - 1)
    throw NoResonanceFound(
        "flip-flop gap minimum not bracketed by the field scan");
  const double h = (b - a) / (kGrid - 1);
  ResonanceScan out;
  out.b_star =
      numerics::golden_section_min(pair_gap, best_b - h, best_b + h, 1e-10);
  out.gap = pair_gap(out.b_star);
  return out;
}

WriteResult write_protocol(const MemoryScenario& s,
                           const QuantumState& electron_qubit) {
  s.validate();
  if (electron_qubit.dim() != 2)
    throw SpaceMismatch("electron qubit must be a 2-dim spin state");

  const ResonanceScan res = find_flip_flop_resonance(s);
  const double a_ff = 0.5 * res.gap;
  const double t_swap = M_PI * kHbar / (2.0 * a_ff);

  const cd up = electron_qubit.amplitudes()[0];
  const cd down = electron_qubit.amplitudes()[1];
  const QuantumState psi0 = joint_state(s, up, down, 0);

  const Operator h = add_zeeman(s, hyperfine_hamiltonian(s), res.b_star);
  QuantumState joint = qstate::evolve(h, psi0, t_swap);

  // Nuclear target: the qubit written onto the coupling-weighted collective
  // mode (the single nucleus itself for N = 1).
  const Layout lay(s.chain.count());
  const std::vector<double> c = site_couplings(s);
  double cnorm = 0.0;
  for (double ck : c) cnorm += ck * ck;
  cnorm = std::sqrt(cnorm);
  std::vector<cd> target(lay.v_stride, cd(0, 0));
  target[0] = up;
  for (std::size_t k = 0; k < lay.n; ++k)
    target[lay.nuc_stride(k)] += down * (c[k] / cnorm);

  std::vector<std::size_t> nuclear_factors;
  for (std::size_t k = 0; k < lay.n; ++k) nuclear_factors.push_back(2 + k);
  const CMat rho_n = qstate::reduced_density(joint, nuclear_factors);
  cd fid(0, 0);
  for (std::size_t i = 0; i < rho_n.n; ++i)
    for (std::size_t j = 0; j < rho_n.n; ++j)
      fid += std::conj(target[i]) * rho_n.at(i, j) * target[j];

  WriteResult out{std::move(joint), fid.real(), res.b_star, t_swap, a_ff,
                  std::move(target)};
  return out;
}

std::vector<CoherencePoint> coherence_trajectory(
    const MemoryScenario& s, const QuantumState& psi0,
    const std::vector<double>& times) {
  s.validate();
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] >= times[i - 1]))
      throw ValidationError("times must be ascending");
  if (psi0.dim() != (std::size_t{4} << s.chain.count()))
    throw SpaceMismatch("state does not match the scenario space");

  MemoryScenario off = s;
  off.coupling_scale = 0.0;  // electron off-loaded

  const Operator h_full = add_zeeman(s, hyperfine_hamiltonian(s));
  const Operator h_free = add_zeeman(off, hyperfine_hamiltonian(off));
  const auto eig_full = qstate::eigh(h_full);
  const auto eig_free = qstate::eigh(h_free);

  const std::vector<std::size_t> electron_factors = {0, 1};
  std::vector<CoherencePoint> out;
  out.reserve(times.size());
  for (double t : times) {
    const QuantumState full_t = qstate::evolve(eig_full, psi0, t);
    const QuantumState free_t = qstate::evolve(eig_free, psi0, t);
    const CMat rho_full = qstate::reduced_density(full_t, electron_factors);
    const CMat rho_free = qstate::reduced_density(free_t, electron_factors);
    CoherencePoint pt;
    pt.t = t;
    pt.overlap = qstate::state_fidelity(rho_free, rho_full);
    pt.overlap_offloaded = qstate::state_fidelity(rho_free, rho_free);
    out.push_back(pt);
  }
  return out;
}

}  // namespace cntqd::memory
