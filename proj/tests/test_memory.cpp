#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cntqd/memory.hpp"
#include "cntqd/units.hpp"

using namespace cntqd::memory;
using cntqd::qstate::cd;
using cntqd::qstate::CMat;
using cntqd::qstate::HilbertSpace;
using cntqd::qstate::Operator;
using cntqd::qstate::QuantumState;
using cntqd::units::kHbar;
using cntqd::units::kMuB;
using cntqd::units::kMuN;

namespace {

MemoryScenario single_site(double r = 3.03) {
  MemoryScenario s;
  s.chain.positions = {r};
  return s;
}

MemoryScenario chain_sites(std::initializer_list<double> pos) {
  MemoryScenario s;
  s.chain.positions = pos;
  return s;
}

// Independent construction of the single-site Hamiltonian from explicit
// Kronecker products (the implementation enumerates basis bits instead).
Operator oracle_single_site(const MemoryScenario& s, double b) {
  using cntqd::qstate::kron;
  auto two = [](const std::string& l) { return HilbertSpace::single(l, 2); };
  auto mat = [&](const std::string& l, cd a00, cd a01, cd a10, cd a11) {
    Operator o = Operator::zero(two(l));
    o.at(0, 0) = a00;
    o.at(0, 1) = a01;
    o.at(1, 0) = a10;
    o.at(1, 1) = a11;
    return o;
  };
  const cd i(0, 1);
  const Operator sx = mat("e", 0, 0.5, 0.5, 0);
  const Operator sy = mat("e", 0, -0.5 * i, 0.5 * i, 0);
  const Operator sz = mat("e", 0.5, 0, 0, -0.5);
  const Operator se = mat("e", 1, 0, 0, 1);
  const Operator lz = mat("v", 1, 0, 0, -1);
  const Operator lv = mat("v", 1, 0, 0, 1);
  const Operator ix = mat("n", 0, 0.5, 0.5, 0);
  const Operator iy = mat("n", 0, -0.5 * i, 0.5 * i, 0);
  const Operator iz = mat("n", 0.5, 0, 0, -0.5);
  const Operator in = mat("n", 1, 0, 0, 1);

  const double r = std::abs(s.chain.positions[0] - s.electron_position);
  const double c = s.coupling_scale / (r * r * r);
  Operator h = kron(se, kron(lz, iz));           // I_z L_z
  h += cd(2, 0) * kron(sz, kron(lv, iz));        // 2 I_z S_z
  h += cd(-1, 0) * kron(sx, kron(lv, ix));       // -I_x S_x
  h += cd(-1, 0) * kron(sy, kron(lv, iy));       // -I_y S_y
  h *= cd(-c, 0);
  // electron and nuclear Zeeman terms
  Operator zee = cd(s.dot.zeeman_sign * s.dot.mu_orb * b, 0) *
                 kron(se, kron(lz, in));
  zee += cd(s.dot.zeeman_sign * s.dot.g_s * kMuB * b, 0) *
         kron(sz, kron(lv, in));
  zee += cd(-s.chain.g_n * kMuN * b, 0) * kron(se, kron(lv, iz));
  h += zee;
  return h;
}

}  // namespace

TEST_CASE("scenario validation") {
  MemoryScenario s = single_site();
  s.chain.positions = {};
  CHECK_THROWS_AS(hyperfine_hamiltonian(s), cntqd::ValidationError);
  s.chain.positions = {3.0, 2.0};
  CHECK_THROWS_AS(hyperfine_hamiltonian(s), cntqd::ValidationError);
  s.chain.positions = std::vector<double>(11, 0.0);
  for (std::size_t k = 0; k < 11; ++k) s.chain.positions[k] = 3.0 * (k + 1);
  CHECK_THROWS_AS(hyperfine_hamiltonian(s), cntqd::ValidationError);
  s = single_site();
  s.electron_position = s.chain.positions[0];
  CHECK_THROWS_AS(hyperfine_hamiltonian(s), cntqd::CoincidentPositions);
}

TEST_CASE("hyperfine matrix elements scale as 1/r^3") {
  MemoryScenario near = single_site(3.03);
  MemoryScenario far = single_site(6.06);
  const Operator h1 = hyperfine_hamiltonian(near);
  const Operator h2 = hyperfine_hamiltonian(far);
  for (std::size_t k = 0; k < h1.matrix().a.size(); ++k) {
    const cd a = h1.matrix().a[k];
    const cd b = h2.matrix().a[k];
    if (std::abs(a) < 1e-30) {
      CHECK(std::abs(b) < 1e-30);
    } else {
      CHECK(std::abs(a / b - 8.0) < 1e-12);
    }
  }
}

TEST_CASE("zero coupling gives the zero operator") {
  MemoryScenario s = single_site();
  s.coupling_scale = 0.0;
  const Operator h = hyperfine_hamiltonian(s);
  for (const cd& v : h.matrix().a) CHECK(v == cd(0, 0));
}

TEST_CASE("symmetric two-site chain is invariant under the site swap") {
  MemoryScenario s = chain_sites({-3.03, 3.03});
  const Operator h = hyperfine_hamiltonian(s);
  // permutation exchanging the two nuclear bits
  const std::size_t dim = 16;
  std::vector<std::size_t> perm(dim);
  for (std::size_t m = 0; m < dim; ++m) {
    const std::size_t n0 = (m >> 1) & 1u, n1 = m & 1u;
    perm[m] = (m & ~std::size_t{3}) | (n1 << 1) | n0;
  }
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      CHECK(h.at(i, j) == h.at(perm[i], perm[j]));
}

TEST_CASE("hyperfine hamiltonian is hermitian on random scenarios") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> pos(2.0, 9.0), scale(5.0, 60.0);
  for (int rep = 0; rep < 8; ++rep) {
    MemoryScenario s;
    double p = pos(rng);
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < n; ++k) {
      s.chain.positions.push_back(p);
      p += pos(rng);
    }
    s.coupling_scale = scale(rng);
    s.valley = (rng() & 1) ? 1 : -1;
    const Operator h = add_zeeman(s, hyperfine_hamiltonian(s), 0.3);
    CHECK(h.hermiticity_defect() < 1e-12);
  }
}

TEST_CASE("add_zeeman: identity at zero field, diagonal spectrum at zero coupling") {
  MemoryScenario s = single_site();
  const Operator h = hyperfine_hamiltonian(s);
  const Operator same = add_zeeman(s, h, 0.0);
  for (std::size_t k = 0; k < h.matrix().a.size(); ++k)
    CHECK(h.matrix().a[k] == same.matrix().a[k]);

  s.coupling_scale = 0.0;
  const double b = 0.37;
  const Operator hz = add_zeeman(s, hyperfine_hamiltonian(s), b);
  // all off-diagonal entries vanish; eigenvalues are sums of Zeeman terms
  std::vector<double> expected;
  for (int e = 0; e < 2; ++e)
    for (int v = 0; v < 2; ++v)
      for (int n = 0; n < 2; ++n) {
        const double sz = e == 0 ? 0.5 : -0.5;
        const double lz = v == 0 ? 1.0 : -1.0;
        const double iz = n == 0 ? 0.5 : -0.5;
        expected.push_back(s.dot.mu_orb * b * lz + s.dot.g_s * kMuB * b * sz -
                           s.chain.g_n * kMuN * b * iz);
      }
  std::sort(expected.begin(), expected.end());
  const auto eig = cntqd::qstate::eigh(hz);
  for (std::size_t k = 0; k < 8; ++k)
    CHECK(eig.eigenvalues[k] == doctest::Approx(expected[k]).epsilon(1e-12));
}

TEST_CASE("flip-flop resonance matches the diagonal-energy estimate") {
  MemoryScenario s = single_site();
  const double c = s.coupling_scale / std::pow(3.03, 3);
  const ResonanceScan res = find_flip_flop_resonance(s);
  const double b_expected = c / (s.dot.g_s * kMuB + s.chain.g_n * kMuN);
  CHECK(res.b_star == doctest::Approx(b_expected).epsilon(1e-6));
  // gap at the anti-crossing equals twice the flip-flop element c/2
  CHECK(res.gap == doctest::Approx(c).epsilon(1e-9));
}

TEST_CASE("write protocol swaps a basis qubit with high fidelity") {
  MemoryScenario s = single_site();
  const QuantumState down(HilbertSpace::single("espin", 2), {cd(0, 0), cd(1, 0)});
  const WriteResult w = write_protocol(s, down);
  CHECK(w.transfer_fidelity >= 0.999);
  CHECK(w.t_swap ==
        doctest::Approx(M_PI * kHbar / (2 * w.flip_flop_element)).epsilon(1e-12));

  // no excitation to transfer: |up> stays put
  const QuantumState up(HilbertSpace::single("espin", 2), {cd(1, 0), cd(0, 0)});
  const WriteResult wu = write_protocol(s, up);
  CHECK(wu.transfer_fidelity == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("write protocol agrees with the kron-built evolution oracle") {
  MemoryScenario s = single_site();
  const QuantumState down(HilbertSpace::single("espin", 2), {cd(0, 0), cd(1, 0)});
  const WriteResult w = write_protocol(s, down);

  const Operator h_oracle = oracle_single_site(s, w.b_tuned);
  // same |e down, valley -1, n up> start, built directly
  std::vector<cd> amps(8, cd(0, 0));
  amps[4 + 2 + 0] = cd(1, 0);  // e bit=1 (stride 4), valley bit=1 (stride 2)
  const QuantumState psi0(h_oracle.space(), amps);
  const QuantumState oracle_final =
      cntqd::qstate::evolve(h_oracle, psi0, w.t_swap);

  REQUIRE(oracle_final.dim() == w.joint_final.dim());
  for (std::size_t k = 0; k < 8; ++k)
    CHECK(std::abs(oracle_final.amplitudes()[k] -
                   w.joint_final.amplitudes()[k]) < 1e-9);
}

TEST_CASE("total magnetization is conserved along the swap") {
  MemoryScenario s = single_site();
  const QuantumState down(HilbertSpace::single("espin", 2), {cd(0, 0), cd(1, 0)});
  const WriteResult w = write_protocol(s, down);
  MemoryScenario tuned = s;
  tuned.b_field = w.b_tuned;
  const Operator h = add_zeeman(tuned, hyperfine_hamiltonian(tuned));
  const auto eig = cntqd::qstate::eigh(h);
  const QuantumState psi0 = joint_state(s, cd(0, 0), cd(1, 0), 0);
  const double m0 = total_magnetization(psi0);
  for (double t : {0.3, 1.1, 2.0, 3.7}) {
    const QuantumState psi_t = cntqd::qstate::evolve(eig, psi0, t);
    CHECK(std::abs(total_magnetization(psi_t) - m0) < 1e-10);
  }
}

TEST_CASE("faraday readout: polarized, GHZ, permutation symmetry") {
  MemoryScenario s = chain_sites({3.0, 6.0, 9.0});
  const std::size_t n = 3;
  // all up
  const QuantumState all_up = joint_state(s, cd(1, 0), cd(0, 0), 0);
  CHECK(faraday_readout(all_up, s.chain) == doctest::Approx(0.5));
  // all down
  const QuantumState all_dn = joint_state(s, cd(1, 0), cd(0, 0), (1u << n) - 1);
  CHECK(faraday_readout(all_dn, s.chain) == doctest::Approx(-0.5));
  // GHZ over the nuclei
  const HilbertSpace space = memory_space(s);
  std::vector<cd> amps(space.dim(), cd(0, 0));
  const double r = 1.0 / std::sqrt(2.0);
  amps[2 * (1u << n) + 0] = r;             // nuclei all up
  amps[2 * (1u << n) + ((1u << n) - 1)] = r;  // nuclei all down
  const QuantumState ghz(space, amps);
  CHECK(faraday_readout(ghz, s.chain) == doctest::Approx(0.0).epsilon(1e-12));

  // W state: symmetric single-excitation, value (n/2 - 1)/n regardless of order
  std::vector<cd> wamp(space.dim(), cd(0, 0));
  const double rw = 1.0 / std::sqrt(3.0);
  for (std::size_t k = 0; k < n; ++k)
    wamp[2 * (1u << n) + (1u << k)] = rw;
  const QuantumState wstate(space, wamp);
  const double expected = (0.5 * (n - 1) - 0.5) / n;
  CHECK(faraday_readout(wstate, s.chain) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("faraday rejects a state from the wrong space") {
  MemoryScenario s3 = chain_sites({3.0, 6.0, 9.0});
  MemoryScenario s1 = single_site();
  const QuantumState joint = joint_state(s1, cd(1, 0), cd(0, 0), 0);
  CHECK_THROWS_AS(faraday_readout(joint, s3.chain), cntqd::SpaceMismatch);
}

TEST_CASE("coherence trajectory: off-loaded electron keeps unit overlap") {
  MemoryScenario s = single_site();
  s.coupling_scale = 0.0;
  s.b_field = 0.25;
  const double r = 1.0 / std::sqrt(2.0);
  const QuantumState psi0 = joint_state(s, cd(r, 0), cd(r, 0), 0);
  const auto traj = coherence_trajectory(s, psi0, {0.0, 0.7, 1.9, 5.0});
  for (const auto& pt : traj) {
    CHECK(pt.overlap == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pt.overlap_offloaded == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("coherence trajectory: resonant flip-flop oscillates at 2 t_swap") {
  MemoryScenario s = single_site();
  const QuantumState down(HilbertSpace::single("espin", 2), {cd(0, 0), cd(1, 0)});
  const WriteResult w = write_protocol(s, down);
  s.b_field = w.b_tuned;
  const QuantumState psi0 = joint_state(s, cd(0, 0), cd(1, 0), 0);
  const auto traj = coherence_trajectory(
      s, psi0, {0.0, w.t_swap, 2 * w.t_swap, 3 * w.t_swap});
  CHECK(traj[0].overlap == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(traj[1].overlap == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(traj[2].overlap == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(traj[3].overlap == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("norm stays unit along trajectories") {
  MemoryScenario s = chain_sites({3.03, 6.06, 9.09});
  s.b_field = 0.02;
  const Operator h = add_zeeman(s, hyperfine_hamiltonian(s));
  const auto eig = cntqd::qstate::eigh(h);
  const double r = 1.0 / std::sqrt(2.0);
  const QuantumState psi0 = joint_state(s, cd(r, 0), cd(0, r), 0);
  for (double t : {0.5, 5.0, 50.0}) {
    const QuantumState psi_t = cntqd::qstate::evolve(eig, psi0, t);
    CHECK(std::abs(psi_t.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("collective write onto a symmetric pair of nuclei") {
  // equal couplings: the bright mode takes the excitation with a sqrt(2)
  // enhanced flip-flop element
  MemoryScenario s = chain_sites({-3.03, 3.03});
  const double c = s.coupling_scale / std::pow(3.03, 3);
  const QuantumState down(HilbertSpace::single("espin", 2), {cd(0, 0), cd(1, 0)});
  const WriteResult w = write_protocol(s, down);
  CHECK(w.flip_flop_element ==
        doctest::Approx(std::sqrt(2.0) * 0.5 * c).epsilon(1e-9));
  // the electron-down diagonal carries the summed I_z L_z shifts
  const double b_expected =
      2.0 * c / (s.dot.g_s * kMuB + s.chain.g_n * kMuN);
  CHECK(w.b_tuned == doctest::Approx(b_expected).epsilon(1e-6));
  CHECK(w.transfer_fidelity > 0.999);

  // strongly lopsided couplings still complete, with honest partial fidelity
  MemoryScenario lop = chain_sites({3.03, 4.8});
  const WriteResult wl = write_protocol(lop, down);
  CHECK(wl.transfer_fidelity > 0.5);
  CHECK(wl.transfer_fidelity <= 1.0 + 1e-12);
}

TEST_CASE("zero coupling has no flip-flop resonance") {
  MemoryScenario s = single_site();
  s.coupling_scale = 0.0;
  CHECK_THROWS_AS(find_flip_flop_resonance(s), cntqd::NoResonanceFound);
}

TEST_CASE("flip-flop terms commute with the total magnetization") {
  MemoryScenario s = chain_sites({3.03, 6.06});
  const Operator h = add_zeeman(s, hyperfine_hamiltonian(s), 0.1);
  const std::size_t dim = h.dim();
  // M = S_z + sum I_z, diagonal in the product basis
  std::vector<double> m(dim, 0.0);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    m[idx] = ((idx & 8u) ? -0.5 : 0.5) + ((idx & 2u) ? -0.5 : 0.5) +
             ((idx & 1u) ? -0.5 : 0.5);
  }
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      CHECK(std::abs(h.at(i, j) * (m[j] - m[i])) < 1e-15);
}
