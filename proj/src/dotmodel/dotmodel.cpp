#include "cntqd/dotmodel.hpp"

#include <algorithm>
#include <cmath>

#include "cntqd/numerics.hpp"
#include "cntqd/units.hpp"

namespace cntqd::dotmodel {

namespace {

constexpr std::size_t kAlpha = 0, kDelta = 1, kBeta = 2, kGamma = 3;

std::size_t basis_index(StateLabel label) {
  switch (label) {
    case StateLabel::alpha: return kAlpha;
    case StateLabel::delta: return kDelta;
    case StateLabel::beta: return kBeta;
    case StateLabel::gamma: return kGamma;
    default:
      throw ValidationError("not a product-state label");
  }
}

// Bare Ising coefficient reproducing the observed doublet separation.
double so_coefficient(const DotParameters& p) {
  return std::sqrt(p.delta_so * p.delta_so - p.delta_kk * p.delta_kk);
}

}  // namespace

const char* to_string(StateLabel label) {
  switch (label) {
    case StateLabel::alpha: return "alpha";
    case StateLabel::beta: return "beta";
    case StateLabel::gamma: return "gamma";
    case StateLabel::delta: return "delta";
    case StateLabel::omega1: return "omega1";
    case StateLabel::omega2: return "omega2";
    case StateLabel::kramers1: return "kramers1";
    case StateLabel::kramers2: return "kramers2";
  }
  return "?";
}

void DotParameters::validate() const {
  if (!(delta_so > 0))
    throw ValidationError("delta_so must be positive (ueV)");
  if (!(delta_kk >= 0))
    throw ValidationError("delta_kk must be non-negative (ueV)");
  if (delta_kk > delta_so)
    throw ValidationError(
        "delta_kk must not exceed delta_so: the zero-field doublet "
        "separation equals delta_so only in that regime");
  if (!(g_s > 0)) throw ValidationError("g_s must be positive");
  if (!(mu_orb > 0)) throw ValidationError("mu_orb must be positive (ueV/T)");
  if (so_sign != 1 && so_sign != -1)
    throw ValidationError("so_sign must be +1 or -1");
  if (zeeman_sign != 1 && zeeman_sign != -1)
    throw ValidationError("zeeman_sign must be +1 or -1");
}

HilbertSpace dot_space() {
  return HilbertSpace({{"spin", 2}, {"valley", 2}});
}

QuantumState product_state(StateLabel label) {
  return QuantumState::basis_state(dot_space(), basis_index(label));
}

Operator build_hamiltonian(const DotParameters& p, double b_tesla,
                           double vg_volt) {
  p.validate();
  const double c_so = p.so_sign * 0.5 * so_coefficient(p);
  const double c_orb = p.zeeman_sign * p.mu_orb * b_tesla;
  const double c_spin = p.zeeman_sign * 0.5 * p.g_s * units::kMuB * b_tesla;
  const double c_mix = 0.5 * p.delta_kk;
  const double c_vg = p.lever_arm * vg_volt;

  Operator h = Operator::zero(dot_space());
  for (std::size_t idx = 0; idx < 4; ++idx) {
    const double s = (idx & 2u) ? -1.0 : 1.0;  // sigma_z on spin
    const double l = (idx & 1u) ? -1.0 : 1.0;  // sigma_z on valley
    h.at(idx, idx) = c_so * s * l + c_orb * l + c_spin * s + c_vg;
  }
  // (delta_kk / 2) sigma_x on the valley factor, identical in both spin
  // sectors: couples alpha<->delta and beta<->gamma.
  h.at(kAlpha, kDelta) += c_mix;
  h.at(kDelta, kAlpha) += c_mix;
  h.at(kBeta, kGamma) += c_mix;
  h.at(kGamma, kBeta) += c_mix;
  return h;
}

std::vector<SpectrumPoint> spectrum_sweep(const DotParameters& p,
                                          const std::vector<double>& b_grid,
                                          double vg_volt) {
  if (b_grid.empty()) throw EmptyGrid("magnetic-field grid is empty");
  for (std::size_t i = 1; i < b_grid.size(); ++i)
    if (!(b_grid[i] > b_grid[i - 1]))
      throw ValidationError("b_grid must be strictly increasing");

  std::vector<SpectrumPoint> out;
  out.reserve(b_grid.size());
  for (double b : b_grid) {
    SpectrumPoint pt;
    pt.b_field = b;
    pt.gate_v = vg_volt;
    pt.states = qstate::eigh(build_hamiltonian(p, b, vg_volt));
    for (std::size_t k = 0; k < 4; ++k) pt.energies[k] = pt.states.eigenvalues[k];
    out.push_back(std::move(pt));
  }
  return out;
}

double alpha_delta_crossing_field(const DotParameters& p) {
  // E_alpha - E_delta = so_sign * a + zeeman_sign * 2 mu_orb B = 0
  return -static_cast<double>(p.so_sign) * so_coefficient(p) /
         (static_cast<double>(p.zeeman_sign) * 2.0 * p.mu_orb);
}

double gamma_beta_crossing_field(const DotParameters& p) {
  return -alpha_delta_crossing_field(p);
}

namespace {

std::array<double, 3> adjacent_gaps(const DotParameters& p, double b) {
  const EighResult eig = qstate::eigh(build_hamiltonian(p, b, 0.0));
  return {eig.eigenvalues[1] - eig.eigenvalues[0],
          eig.eigenvalues[2] - eig.eigenvalues[1],
          eig.eigenvalues[3] - eig.eigenvalues[2]};
}

std::pair<StateLabel, StateLabel> crossing_pair(const DotParameters& p,
                                                double b, std::size_t level) {
  const EighResult eig = qstate::eigh(build_hamiltonian(p, b, 0.0));
  // Weight of each product state inside the two anti-crossing eigenvectors.
  std::array<double, 4> weight{};
  for (std::size_t k = level; k <= level + 1; ++k)
    for (std::size_t idx = 0; idx < 4; ++idx)
      weight[idx] += std::norm(eig.vectors.at(idx, k));
  std::array<std::size_t, 4> order = {0, 1, 2, 3};
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b2) { return weight[a] > weight[b2]; });
  static constexpr StateLabel kByIndex[4] = {StateLabel::alpha, StateLabel::delta,
                                             StateLabel::beta, StateLabel::gamma};
  StateLabel l1 = kByIndex[order[0]], l2 = kByIndex[order[1]];
  if (static_cast<int>(l1) > static_cast<int>(l2)) std::swap(l1, l2);
  return {l1, l2};
}

}  // namespace

std::vector<Crossing> find_crossings(const DotParameters& p, double b_lo,
                                     double b_hi) {
  p.validate();
  if (!(b_hi > b_lo)) throw ValidationError("b range must be non-empty");

  constexpr std::size_t kGrid = 512;
  const double h = (b_hi - b_lo) / static_cast<double>(kGrid - 1);

  std::array<std::vector<double>, 3> gap;
  for (auto& g : gap) g.resize(kGrid);
  for (std::size_t i = 0; i < kGrid; ++i) {
    const auto g = adjacent_gaps(p, b_lo + h * static_cast<double>(i));
    for (std::size_t k = 0; k < 3; ++k) gap[k][i] = g[k];
  }

  std::vector<Crossing> found;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 1; i + 1 < kGrid; ++i) {
      if (!(gap[k][i] <= gap[k][i - 1] && gap[k][i] <= gap[k][i + 1])) continue;
      // Skip plateaus away from a genuine dip.
      if (gap[k][i - 1] - gap[k][i] < 1e-12 && gap[k][i + 1] - gap[k][i] < 1e-12)
        continue;
      const double lo = b_lo + h * static_cast<double>(i - 1);
      const double hi = b_lo + h * static_cast<double>(i + 1);
      const double b_star = numerics::golden_section_min(
          [&](double b) { return adjacent_gaps(p, b)[k]; }, lo, hi, 1e-12);
      Crossing c;
      c.b_star = b_star;
      c.gap = adjacent_gaps(p, b_star)[k];
      const auto pair = crossing_pair(p, b_star, k);
      c.first = pair.first;
      c.second = pair.second;
      found.push_back(c);
    }
  }
  if (found.empty())
    throw NoCrossingFound("no local gap minimum inside the given field range");
  std::sort(found.begin(), found.end(),
            [](const Crossing& a, const Crossing& b) { return a.b_star < b.b_star; });
  return found;
}

std::pair<NamedState, NamedState> kramers_states(double phi1, double phi2) {
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<cd> a1(4, cd(0, 0)), a2(4, cd(0, 0));
  a1[kAlpha] = r;
  a1[kGamma] = r * cd(std::cos(phi1), std::sin(phi1));
  a2[kBeta] = r;
  a2[kDelta] = r * cd(std::cos(phi2), std::sin(phi2));
  return {NamedState{StateLabel::kramers1, QuantumState(dot_space(), a1), phi1},
          NamedState{StateLabel::kramers2, QuantumState(dot_space(), a2), phi2}};
}

std::pair<NamedState, NamedState> valley_superposition_states(double phi3,
                                                              double phi4) {
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<cd> a1(4, cd(0, 0)), a2(4, cd(0, 0));
  a1[kGamma] = r;
  a1[kBeta] = r * cd(std::cos(phi3), std::sin(phi3));
  a2[kAlpha] = r;
  a2[kDelta] = r * cd(std::cos(phi4), std::sin(phi4));
  return {NamedState{StateLabel::omega1, QuantumState(dot_space(), a1), phi3},
          NamedState{StateLabel::omega2, QuantumState(dot_space(), a2), phi4}};
}

std::array<std::array<double, 4>, 6> coupled_basis_matrix() {
  // Clebsch-Gordan expansion of the m_l = +-1 product states for L=1, S=1/2
  // (Condon-Shortley phases).  Rows: |3/2,3/2>, |3/2,1/2>, |3/2,-1/2>,
  // |3/2,-3/2>, |1/2,1/2>, |1/2,-1/2>.  Columns: alpha, delta, beta, gamma.
  const double c1 = std::sqrt(1.0 / 3.0);
  const double c2 = std::sqrt(2.0 / 3.0);
  std::array<std::array<double, 4>, 6> t{};
  t[0][kAlpha] = 1.0;
  t[1][kBeta] = c1;
  t[2][kDelta] = c1;
  t[3][kGamma] = 1.0;
  t[4][kBeta] = c2;
  t[5][kDelta] = -c2;
  return t;
}

std::array<cd, 6> coupled_basis_transform(const QuantumState& s) {
  if (!s.space().compatible(dot_space()))
    throw SpaceMismatch("coupled_basis_transform expects the 4-dim dot space");
  const auto t = coupled_basis_matrix();
  std::array<cd, 6> out{};
  for (std::size_t r = 0; r < 6; ++r) {
    cd acc(0, 0);
    for (std::size_t ci = 0; ci < 4; ++ci) acc += t[r][ci] * s.amplitudes()[ci];
    out[r] = acc;
  }
  return out;
}

std::pair<NamedState, NamedState> logical_encoding(Regime regime) {
  switch (regime) {
    case Regime::b_zero:
      return {NamedState{StateLabel::gamma, product_state(StateLabel::gamma), 0.0},
              NamedState{StateLabel::alpha, product_state(StateLabel::alpha), 0.0}};
    case Regime::b_plus:
      return {NamedState{StateLabel::beta, product_state(StateLabel::beta), 0.0},
              NamedState{StateLabel::gamma, product_state(StateLabel::gamma), 0.0}};
  }
  throw ValidationError("unknown logical-encoding regime");
}

}  // namespace cntqd::dotmodel
