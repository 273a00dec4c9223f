#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "cntqd/qstate.hpp"
#include "cntqd/units.hpp"

using namespace cntqd::qstate;
using cntqd::units::kHbar;

namespace {

HilbertSpace qubit(const std::string& label) {
  return HilbertSpace::single(label, 2);
}

Operator pauli_z(const std::string& label) {
  Operator o = Operator::zero(qubit(label));
  o.at(0, 0) = cd(1, 0);
  o.at(1, 1) = cd(-1, 0);
  return o;
}

Operator pauli_x(const std::string& label) {
  Operator o = Operator::zero(qubit(label));
  o.at(0, 1) = cd(1, 0);
  o.at(1, 0) = cd(1, 0);
  return o;
}

Operator random_hermitian(std::mt19937_64& rng, const HilbertSpace& space) {
  std::normal_distribution<double> g(0.0, 1.0);
  const std::size_t n = space.dim();
  Operator h = Operator::zero(space);
  for (std::size_t i = 0; i < n; ++i) {
    h.at(i, i) = cd(g(rng), 0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const cd v(g(rng), g(rng));
      h.at(i, j) = v;
      h.at(j, i) = std::conj(v);
    }
  }
  return h;
}

QuantumState random_state(std::mt19937_64& rng, const HilbertSpace& space) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cd> amps(space.dim());
  for (cd& a : amps) a = cd(g(rng), g(rng));
  return QuantumState::normalized(space, std::move(amps));
}

// Unitary from the eigenvectors of a random Hermitian matrix.
CMat random_unitary(std::mt19937_64& rng, std::size_t dim) {
  HilbertSpace space({{"u", dim}});
  return eigh(random_hermitian(rng, space)).vectors;
}

double op_max_abs(const Operator& o) {
  double m = 0;
  for (const cd& v : o.matrix().a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("space validation") {
  CHECK_THROWS_AS(HilbertSpace({{"a", 1}}), cntqd::ValidationError);
  CHECK_THROWS_AS(HilbertSpace({{"a", 2}, {"a", 2}}), cntqd::ValidationError);
  const HilbertSpace s({{"spin", 2}, {"valley", 2}});
  CHECK(s.dim() == 4);
  CHECK_THROWS_AS(QuantumState(s, std::vector<cd>(3, cd(0, 0))),
                  cntqd::SpaceMismatch);
  std::vector<cd> off(4, cd(0, 0));
  off[0] = cd(1.0 + 1e-9, 0);
  CHECK_THROWS_AS(QuantumState(s, off), cntqd::ValidationError);
}

TEST_CASE("kron identities and signs") {
  const Operator i2a = Operator::identity(qubit("a"));
  const Operator i2b = Operator::identity(qubit("b"));
  const Operator i4 = kron(i2a, i2b);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(i4.at(i, j) == (i == j ? cd(1, 0) : cd(0, 0)));

  const Operator zi = kron(pauli_z("a"), i2b);
  CHECK(zi.at(0, 0) == cd(1, 0));
  CHECK(zi.at(1, 1) == cd(1, 0));
  CHECK(zi.at(2, 2) == cd(-1, 0));
  CHECK(zi.at(3, 3) == cd(-1, 0));

  // basis index 3 = |down>|down>: sigma_z (x) sigma_z gives (+1)
  const Operator zz = kron(pauli_z("a"), pauli_z("b"));
  CHECK(zz.at(3, 3) == cd(1, 0));
  CHECK(zz.at(1, 1) == cd(-1, 0));
  CHECK(zz.at(2, 2) == cd(-1, 0));
}

TEST_CASE("kron associativity is exact") {
  // Dyadic-rational entries keep every intermediate product exactly
  // representable, so the two groupings must agree bit for bit.
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> d(-16, 16);
  auto random_dyadic = [&](const HilbertSpace& space) {
    Operator o = Operator::zero(space);
    for (std::size_t i = 0; i < space.dim(); ++i)
      for (std::size_t j = 0; j < space.dim(); ++j)
        o.at(i, j) = cd(d(rng) / 16.0, d(rng) / 16.0);
    return o;
  };
  const Operator a = random_dyadic(qubit("a"));
  const Operator b = random_dyadic(HilbertSpace::single("b", 3));
  const Operator c = random_dyadic(qubit("c"));
  const Operator lhs = kron(kron(a, b), c);
  const Operator rhs = kron(a, kron(b, c));
  REQUIRE(lhs.matrix().a.size() == rhs.matrix().a.size());
  for (std::size_t k = 0; k < lhs.matrix().a.size(); ++k)
    CHECK(lhs.matrix().a[k] == rhs.matrix().a[k]);
}

TEST_CASE("eigh on fixed matrices") {
  Operator d = Operator::zero(qubit("a"));
  d.at(0, 0) = cd(1, 0);
  d.at(1, 1) = cd(2, 0);
  const EighResult r = eigh(d);
  CHECK(r.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(r.eigenvalues[1] == doctest::Approx(2.0));
  CHECK(std::abs(r.vectors.at(0, 0)) == doctest::Approx(1.0));

  const EighResult rx = eigh(pauli_x("a"));
  CHECK(rx.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(rx.eigenvalues[1] == doctest::Approx(1.0));
}

TEST_CASE("eigh rejects non-hermitian input") {
  Operator o = Operator::zero(qubit("a"));
  o.at(0, 1) = cd(1, 0);
  CHECK_THROWS_AS(eigh(o), cntqd::NonHermitianInput);
}

TEST_CASE("eigh reconstruction on random hermitian matrices") {
  std::mt19937_64 rng(42);
  for (std::size_t dim : {2u, 3u, 8u, 17u, 64u}) {
    const HilbertSpace space({{"sys", dim}});
    const Operator h = random_hermitian(rng, space);
    const EighResult r = eigh(h);

    // reconstruct V Lambda V^dagger
    CMat lam(dim);
    for (std::size_t k = 0; k < dim; ++k) lam.at(k, k) = r.eigenvalues[k];
    const CMat rec = matmul(r.vectors, matmul(lam, r.vectors.adjoint()));
    CHECK(max_abs_diff(rec, h.matrix()) < 1e-10 * op_max_abs(h) * dim);
    CHECK(unitarity_defect(r.vectors) < 1e-10);
    for (std::size_t k = 1; k < dim; ++k)
      CHECK(r.eigenvalues[k] >= r.eigenvalues[k - 1]);
  }
}

TEST_CASE("evolve fixed cases") {
  const HilbertSpace s = qubit("a");
  const QuantumState zero = QuantumState::basis_state(s, 0);

  // zero hamiltonian leaves any state unchanged
  std::mt19937_64 rng(5);
  const QuantumState psi = random_state(rng, s);
  const QuantumState out = evolve(Operator::zero(s), psi, 3.7);
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(std::abs(out.amplitudes()[i] - psi.amplitudes()[i]) < 1e-14);

  // projector E|0><0| imprints the phase e^{-iEt/hbar}
  Operator proj = Operator::zero(s);
  const double energy = 2.5;
  proj.at(0, 0) = energy;
  const double t = 1.3;
  const QuantumState ph = evolve(proj, zero, t);
  const cd expected = std::polar(1.0, -energy * t / kHbar);
  CHECK(std::abs(overlap(zero, ph) - expected) < 1e-13);

  // half-period of (Delta/2) sigma_x maps |0> to |1> up to a global phase
  const double delta = 4.0;
  Operator hx = pauli_x("a");
  hx *= cd(delta / 2.0, 0);
  const QuantumState flipped = evolve(hx, zero, M_PI * kHbar / delta);
  CHECK(std::abs(flipped.amplitudes()[0]) < 1e-12);
  CHECK(std::abs(flipped.amplitudes()[1]) == doctest::Approx(1.0));
}

TEST_CASE("evolve preserves the norm on random inputs") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> tdist(0.0, 50.0);
  for (std::size_t dim : {2u, 5u, 16u, 64u}) {
    const HilbertSpace space({{"sys", dim}});
    const Operator h = random_hermitian(rng, space);
    const EighResult eig = eigh(h);
    for (int rep = 0; rep < 5; ++rep) {
      const QuantumState psi = random_state(rng, space);
      const QuantumState out = evolve(eig, psi, tdist(rng));
      CHECK(std::abs(out.norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("evolve rejects a state from another space") {
  const Operator h = pauli_x("a");
  const QuantumState s3 =
      QuantumState::basis_state(HilbertSpace::single("b", 3), 0);
  CHECK_THROWS_AS(evolve(h, s3, 1.0), cntqd::SpaceMismatch);
}

TEST_CASE("entanglement entropy: products, Bell states, phases") {
  const HilbertSpace s({{"spin", 2}, {"valley", 2}});
  const QuantumState prod = QuantumState::basis_state(s, 0);
  CHECK(entanglement_entropy(prod, {0}) == doctest::Approx(0.0).epsilon(1e-12));

  const double r = 1.0 / std::sqrt(2.0);
  for (double phi : {0.0, 0.4, M_PI, 5.0}) {
    std::vector<cd> amps(4, cd(0, 0));
    amps[0] = r;
    amps[3] = r * std::polar(1.0, phi);
    const QuantumState bell(s, amps);
    CHECK(entanglement_entropy(bell, {0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(entanglement_entropy(bell, {1}) == doctest::Approx(1.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(entanglement_entropy(prod, {}), cntqd::InvalidPartition);
  CHECK_THROWS_AS(entanglement_entropy(prod, {0, 1}), cntqd::InvalidPartition);
  CHECK_THROWS_AS(entanglement_entropy(prod, {7}), cntqd::InvalidPartition);
}

TEST_CASE("entropy is invariant under local unitaries") {
  std::mt19937_64 rng(321);
  const HilbertSpace space({{"a", 2}, {"b", 3}});
  for (int rep = 0; rep < 6; ++rep) {
    const QuantumState psi = random_state(rng, space);
    const double base = entanglement_entropy(psi, {0});

    const CMat ua = random_unitary(rng, 2);
    const CMat ub = random_unitary(rng, 3);
    const Operator u(space, kron(ua, ub));
    const QuantumState rotated = u.apply(psi);
    CHECK(entanglement_entropy(rotated, {0}) ==
          doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("reduced density over non-adjacent factors") {
  // |0>|0>|0> + |1>|0>|1> over three qubits: factors {0,2} hold a Bell pair
  const HilbertSpace s({{"a", 2}, {"b", 2}, {"c", 2}});
  std::vector<cd> amps(8, cd(0, 0));
  const double r = 1.0 / std::sqrt(2.0);
  amps[0b000] = r;
  amps[0b101] = r;
  const QuantumState psi(s, amps);
  CHECK(entanglement_entropy(psi, {0, 2}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(entanglement_entropy(psi, {1}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(entanglement_entropy(psi, {0}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("state fidelity reduces to squared overlap for pure states") {
  std::mt19937_64 rng(8);
  const HilbertSpace s({{"sys", 4}});
  const QuantumState a = random_state(rng, s);
  const QuantumState b = random_state(rng, s);
  CMat ra(4), rb(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      ra.at(i, j) = a.amplitudes()[i] * std::conj(a.amplitudes()[j]);
      rb.at(i, j) = b.amplitudes()[i] * std::conj(b.amplitudes()[j]);
    }
  CHECK(state_fidelity(ra, rb) ==
        doctest::Approx(std::norm(overlap(a, b))).epsilon(1e-10));
  CHECK(state_fidelity(ra, ra) == doctest::Approx(1.0).epsilon(1e-10));
}
