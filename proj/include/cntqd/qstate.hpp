#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "cntqd/errors.hpp"

// Dense complex linear algebra and quantum-state kernel shared by all the
// quantum modules.  Storage is row-major std::vector<complex<double>>;
// the hot vector paths route through cntqd::kernels, the Hermitian
// eigenproblem is delegated to Eigen behind eigh().

namespace cntqd::qstate {

using cd = std::complex<double>;

struct Factor {
  std::string label;
  std::size_t dim;
};

class HilbertSpace {
 public:
  HilbertSpace() = default;
  explicit HilbertSpace(std::vector<Factor> factors);

  static HilbertSpace single(std::string label, std::size_t dim) {
    return HilbertSpace({Factor{std::move(label), dim}});
  }

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t factor_count() const { return factors_.size(); }
  std::size_t dim() const { return dim_; }

  // Same factor dimensions in the same order (labels may differ; states
  // produced by different constructors must still compose).
  bool compatible(const HilbertSpace& other) const;
  HilbertSpace joined(const HilbertSpace& other) const;

 private:
  std::vector<Factor> factors_;
  std::size_t dim_ = 0;
};

// Bare row-major complex square matrix; the workhorse for gate unitaries and
// reduced density matrices that do not carry a factor structure.
struct CMat {
  std::size_t n = 0;
  std::vector<cd> a;

  CMat() = default;
  CMat(std::size_t dim, cd fill = cd(0, 0)) : n(dim), a(dim * dim, fill) {}

  static CMat identity(std::size_t dim);

  cd& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const cd& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  CMat adjoint() const;
  cd trace() const;
};

CMat matmul(const CMat& l, const CMat& r);
CMat kron(const CMat& l, const CMat& r);
// max_ij |l - r|
double max_abs_diff(const CMat& l, const CMat& r);
// max_ij |m^dagger m - I|
double unitarity_defect(const CMat& m);

class QuantumState {
 public:
  // Empty placeholder (dim 0); any real state comes from the named paths.
  QuantumState() = default;

  // Validates the norm to 1e-12; use normalized() to rescale instead.
  QuantumState(HilbertSpace space, std::vector<cd> amplitudes);

  static QuantumState normalized(HilbertSpace space, std::vector<cd> amps);
  static QuantumState basis_state(HilbertSpace space, std::size_t index);

  const HilbertSpace& space() const { return space_; }
  const std::vector<cd>& amplitudes() const { return amps_; }
  std::size_t dim() const { return amps_.size(); }
  double norm() const;

 private:
  HilbertSpace space_;
  std::vector<cd> amps_;
  friend QuantumState unchecked_state(HilbertSpace, std::vector<cd>);
};

// <a|b>
cd overlap(const QuantumState& a, const QuantumState& b);
QuantumState tensor(const QuantumState& a, const QuantumState& b);

class Operator {
 public:
  Operator(HilbertSpace space, std::vector<cd> entries);
  Operator(HilbertSpace space, CMat m);

  static Operator identity(const HilbertSpace& space);
  static Operator zero(const HilbertSpace& space);

  const HilbertSpace& space() const { return space_; }
  const CMat& matrix() const { return m_; }
  std::size_t dim() const { return m_.n; }
  const cd& at(std::size_t i, std::size_t j) const { return m_.at(i, j); }
  cd& at(std::size_t i, std::size_t j) { return m_.at(i, j); }

  // max |A - A^dagger| entrywise
  double hermiticity_defect() const;
  bool is_hermitian(double tol = 1e-12) const;

  QuantumState apply(const QuantumState& psi) const;

  Operator& operator+=(const Operator& other);
  Operator& operator*=(cd scale);
  friend Operator operator+(Operator l, const Operator& r) { return l += r; }
  friend Operator operator*(cd s, Operator o) { return o *= s; }

 private:
  HilbertSpace space_;
  CMat m_;
};

Operator kron(const Operator& a, const Operator& b);

struct EighResult {
  HilbertSpace space;
  std::vector<double> eigenvalues;  // ascending
  CMat vectors;                     // column k = eigenvector k

  std::vector<cd> column(std::size_t k) const;
};

// Hermitian eigendecomposition; throws NonHermitianInput when the
// hermiticity defect exceeds 1e-9 * max|h| (absolute 1e-12 floor).
EighResult eigh(const Operator& h);

// exp(-i h t / hbar) |psi>, via the eigendecomposition.
QuantumState evolve(const Operator& h, const QuantumState& psi, double t_ns);
QuantumState evolve(const EighResult& eig, const QuantumState& psi,
                    double t_ns);

// exp(-i h t / hbar) as a dense matrix.
CMat propagator(const EighResult& eig, double t_ns);
CMat propagator(const Operator& h, double t_ns);

// Reduced density matrix over the listed factors (kept in listed order).
CMat reduced_density(const QuantumState& psi,
                     const std::vector<std::size_t>& keep_factors);

// Von Neumann entropy, in bits, of the reduced state over `left_factors`.
double entanglement_entropy(const QuantumState& psi,
                            const std::vector<std::size_t>& left_factors);

// Entropy (bits) of a density matrix's eigenvalue spectrum.
double spectrum_entropy_bits(const CMat& rho);

// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 between two density
// matrices; reduces to |<a|b>|^2 for pure states.
double state_fidelity(const CMat& rho, const CMat& sigma);

}  // namespace cntqd::qstate
