#include "cntqd/qstate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "cntqd/kernels.hpp"
#include "cntqd/units.hpp"

namespace cntqd::qstate {

namespace {

constexpr double kNormTol = 1e-12;

using EMat =
    Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

// ---------------------------------------------------------------------------
// HilbertSpace

HilbertSpace::HilbertSpace(std::vector<Factor> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty())
    throw ValidationError("HilbertSpace needs at least one factor");
  std::set<std::string> labels;
  dim_ = 1;
  for (const Factor& f : factors_) {
    if (f.dim < 2)
      throw ValidationError("factor '" + f.label + "' must have dimension >= 2");
    if (!labels.insert(f.label).second)
      throw ValidationError("duplicate factor label '" + f.label + "'");
    dim_ *= f.dim;
  }
}

bool HilbertSpace::compatible(const HilbertSpace& other) const {
  if (factors_.size() != other.factors_.size()) return false;
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].dim != other.factors_[i].dim) return false;
  return true;
}

HilbertSpace HilbertSpace::joined(const HilbertSpace& other) const {
  std::vector<Factor> fs = factors_;
  for (Factor f : other.factors_) {
    // Disambiguate colliding labels from independent subsystems.
    std::string label = f.label;
    int suffix = 1;
    auto taken = [&](const std::string& l) {
      return std::any_of(fs.begin(), fs.end(),
                         [&](const Factor& g) { return g.label == l; });
    };
    while (taken(label)) label = f.label + "_" + std::to_string(++suffix);
    f.label = label;
    fs.push_back(std::move(f));
  }
  return HilbertSpace(std::move(fs));
}

// ---------------------------------------------------------------------------
// CMat

CMat CMat::identity(std::size_t dim) {
  CMat m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = cd(1, 0);
  return m;
}

CMat CMat::adjoint() const {
  CMat r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.at(j, i) = std::conj(at(i, j));
  return r;
}

cd CMat::trace() const {
  cd t(0, 0);
  for (std::size_t i = 0; i < n; ++i) t += at(i, i);
  return t;
}

CMat matmul(const CMat& l, const CMat& r) {
  if (l.n != r.n) throw DimensionMismatch("matmul: dimensions differ");
  const std::size_t n = l.n;
  CMat out(n);
  // out_row_i = sum_k l(i,k) * r_row_k
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      kernels::active().caxpy(l.at(i, k), &r.a[k * n], &out.a[i * n], n);
  return out;
}

CMat kron(const CMat& l, const CMat& r) {
  const std::size_t n = l.n * r.n;
  CMat out(n);
  for (std::size_t i1 = 0; i1 < l.n; ++i1)
    for (std::size_t j1 = 0; j1 < l.n; ++j1) {
      const cd s = l.at(i1, j1);
      if (s == cd(0, 0)) continue;
      for (std::size_t i2 = 0; i2 < r.n; ++i2)
        kernels::active().caxpy(s, &r.a[i2 * r.n],
                                &out.a[(i1 * r.n + i2) * n + j1 * r.n], r.n);
    }
  return out;
}

double max_abs_diff(const CMat& l, const CMat& r) {
  if (l.n != r.n) throw DimensionMismatch("max_abs_diff: dimensions differ");
  double m = 0.0;
  for (std::size_t i = 0; i < l.a.size(); ++i)
    m = std::max(m, std::abs(l.a[i] - r.a[i]));
  return m;
}

double unitarity_defect(const CMat& m) {
  return max_abs_diff(matmul(m.adjoint(), m), CMat::identity(m.n));
}

// ---------------------------------------------------------------------------
// QuantumState

QuantumState::QuantumState(HilbertSpace space, std::vector<cd> amplitudes)
    : space_(std::move(space)), amps_(std::move(amplitudes)) {
  if (amps_.size() != space_.dim())
    throw SpaceMismatch("amplitude count " + std::to_string(amps_.size()) +
                        " does not match space dimension " +
                        std::to_string(space_.dim()));
  if (std::abs(norm() - 1.0) > kNormTol)
    throw ValidationError("state norm deviates from 1 by more than 1e-12");
}

QuantumState unchecked_state(HilbertSpace space, std::vector<cd> amps) {
  QuantumState s;
  s.space_ = std::move(space);
  s.amps_ = std::move(amps);
  return s;
}

QuantumState QuantumState::normalized(HilbertSpace space,
                                      std::vector<cd> amps) {
  if (amps.size() != space.dim())
    throw SpaceMismatch("amplitude count does not match space dimension");
  const double n = std::sqrt(kernels::active().sumsq(amps.data(), amps.size()));
  if (n == 0.0) throw ValidationError("cannot normalize the zero vector");
  for (cd& a : amps) a /= n;
  return QuantumState(std::move(space), std::move(amps));
}

QuantumState QuantumState::basis_state(HilbertSpace space, std::size_t index) {
  if (index >= space.dim())
    throw ValidationError("basis index out of range");
  std::vector<cd> amps(space.dim(), cd(0, 0));
  amps[index] = cd(1, 0);
  return QuantumState(std::move(space), std::move(amps));
}

double QuantumState::norm() const {
  return std::sqrt(kernels::active().sumsq(amps_.data(), amps_.size()));
}

cd overlap(const QuantumState& a, const QuantumState& b) {
  if (!a.space().compatible(b.space()))
    throw SpaceMismatch("overlap of states from different spaces");
  return kernels::active().cdotc(a.amplitudes().data(), b.amplitudes().data(),
                                 a.dim());
}

QuantumState tensor(const QuantumState& a, const QuantumState& b) {
  std::vector<cd> amps(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j)
      amps[i * b.dim() + j] = a.amplitudes()[i] * b.amplitudes()[j];
  return QuantumState(a.space().joined(b.space()), std::move(amps));
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(HilbertSpace space, std::vector<cd> entries)
    : space_(std::move(space)) {
  const std::size_t d = space_.dim();
  if (entries.size() != d * d)
    throw SpaceMismatch("entry count does not match space dimension");
  m_.n = d;
  m_.a = std::move(entries);
}

Operator::Operator(HilbertSpace space, CMat m) : space_(std::move(space)), m_(std::move(m)) {
  if (m_.n != space_.dim())
    throw SpaceMismatch("matrix dimension does not match space");
}

Operator Operator::identity(const HilbertSpace& space) {
  return Operator(space, CMat::identity(space.dim()));
}

Operator Operator::zero(const HilbertSpace& space) {
  return Operator(space, CMat(space.dim()));
}

double Operator::hermiticity_defect() const {
  double m = 0.0;
  for (std::size_t i = 0; i < m_.n; ++i)
    for (std::size_t j = i; j < m_.n; ++j)
      m = std::max(m, std::abs(m_.at(i, j) - std::conj(m_.at(j, i))));
  return m;
}

bool Operator::is_hermitian(double tol) const {
  return hermiticity_defect() <= tol;
}

QuantumState Operator::apply(const QuantumState& psi) const {
  if (!space_.compatible(psi.space()))
    throw SpaceMismatch("operator applied to a state from another space");
  std::vector<cd> out(dim());
  kernels::active().cmatvec(m_.a.data(), psi.amplitudes().data(), out.data(),
                            dim());
  return unchecked_state(psi.space(), std::move(out));
}

Operator& Operator::operator+=(const Operator& other) {
  if (!space_.compatible(other.space_))
    throw SpaceMismatch("adding operators from different spaces");
  kernels::active().caxpy(cd(1, 0), other.m_.a.data(), m_.a.data(),
                          m_.a.size());
  return *this;
}

Operator& Operator::operator*=(cd scale) {
  for (cd& e : m_.a) e *= scale;
  return *this;
}

Operator kron(const Operator& a, const Operator& b) {
  return Operator(a.space().joined(b.space()), kron(a.matrix(), b.matrix()));
}

// ---------------------------------------------------------------------------
// eigh / evolve

std::vector<cd> EighResult::column(std::size_t k) const {
  std::vector<cd> v(vectors.n);
  for (std::size_t i = 0; i < vectors.n; ++i) v[i] = vectors.at(i, k);
  return v;
}

EighResult eigh(const Operator& h) {
  double scale = 0.0;
  for (const cd& e : h.matrix().a) scale = std::max(scale, std::abs(e));
  const double tol = std::max(1e-12, 1e-9 * scale);
  if (h.hermiticity_defect() > tol)
    throw NonHermitianInput("hermiticity defect " +
                            std::to_string(h.hermiticity_defect()) +
                            " exceeds tolerance");

  const std::size_t n = h.dim();
  Eigen::Map<const EMat> m(h.matrix().a.data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success)
    throw NonConvergence("eigensolver failed to converge");

  EighResult out;
  out.space = h.space();
  out.eigenvalues.resize(n);
  out.vectors = CMat(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = solver.eigenvalues()(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < n; ++i)
      out.vectors.at(i, k) = solver.eigenvectors()(
          static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
  }
  return out;
}

QuantumState evolve(const EighResult& eig, const QuantumState& psi,
                    double t_ns) {
  if (!eig.space.compatible(psi.space()))
    throw SpaceMismatch("evolve: state does not live in the operator space");
  const std::size_t n = psi.dim();
  const auto& k = kernels::active();
  std::vector<cd> coeff(n);
  k.cmatvec_adj(eig.vectors.a.data(), psi.amplitudes().data(), coeff.data(),
                n);
  std::vector<cd> phases(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ang = -eig.eigenvalues[i] * t_ns / units::kHbar;
    phases[i] = cd(std::cos(ang), std::sin(ang));
  }
  k.cmul(coeff.data(), phases.data(), n);
  std::vector<cd> out(n);
  k.cmatvec(eig.vectors.a.data(), coeff.data(), out.data(), n);
  return unchecked_state(psi.space(), std::move(out));
}

QuantumState evolve(const Operator& h, const QuantumState& psi, double t_ns) {
  return evolve(eigh(h), psi, t_ns);
}

CMat propagator(const EighResult& eig, double t_ns) {
  const std::size_t n = eig.vectors.n;
  // V * diag(e^{-i lambda t / hbar}) * V^dagger
  CMat phased = eig.vectors;
  for (std::size_t k = 0; k < n; ++k) {
    const double ang = -eig.eigenvalues[k] * t_ns / units::kHbar;
    const cd ph(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; ++i) phased.at(i, k) *= ph;
  }
  return matmul(phased, eig.vectors.adjoint());
}

CMat propagator(const Operator& h, double t_ns) {
  return propagator(eigh(h), t_ns);
}

// ---------------------------------------------------------------------------
// partial trace / entropy

CMat reduced_density(const QuantumState& psi,
                     const std::vector<std::size_t>& keep_factors) {
  const auto& factors = psi.space().factors();
  const std::size_t nf = factors.size();
  std::vector<bool> keep(nf, false);
  for (std::size_t f : keep_factors) {
    if (f >= nf) throw InvalidPartition("factor index out of range");
    if (keep[f]) throw InvalidPartition("factor listed twice");
    keep[f] = true;
  }
  if (keep_factors.empty())
    throw InvalidPartition("kept factor set must be non-empty");

  // Row-major strides for each factor.
  std::vector<std::size_t> stride(nf, 1);
  for (std::size_t f = nf; f-- > 1;)
    stride[f - 1] = stride[f] * factors[f].dim;

  std::size_t dim_a = 1, dim_b = 1;
  for (std::size_t f = 0; f < nf; ++f)
    (keep[f] ? dim_a : dim_b) *= factors[f].dim;

  // Enumerate offsets of every (kept, traced) sub-index combination, with the
  // kept factors ordered as given in keep_factors.
  std::vector<std::size_t> off_a(dim_a, 0), off_b(dim_b, 0);
  {
    std::size_t block = 1;
    for (std::size_t pos = keep_factors.size(); pos-- > 0;) {
      const std::size_t f = keep_factors[pos];
      const std::size_t d = factors[f].dim;
      for (std::size_t i = 0; i < dim_a; ++i)
        off_a[i] += ((i / block) % d) * stride[f];
      block *= d;
    }
    block = 1;
    for (std::size_t f = nf; f-- > 0;) {
      if (keep[f]) continue;
      const std::size_t d = factors[f].dim;
      for (std::size_t i = 0; i < dim_b; ++i)
        off_b[i] += ((i / block) % d) * stride[f];
      block *= d;
    }
  }

  const std::vector<cd>& amp = psi.amplitudes();
  CMat rho(dim_a);
  for (std::size_t i = 0; i < dim_a; ++i)
    for (std::size_t j = 0; j < dim_a; ++j) {
      cd acc(0, 0);
      for (std::size_t b = 0; b < dim_b; ++b)
        acc += amp[off_a[i] + off_b[b]] * std::conj(amp[off_a[j] + off_b[b]]);
      rho.at(i, j) = acc;
    }
  return rho;
}

double spectrum_entropy_bits(const CMat& rho) {
  Eigen::Map<const EMat> m(rho.a.data(), rho.n, rho.n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m,
                                                         Eigen::EigenvaluesOnly);
  double bits = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double p = solver.eigenvalues()(i);
    if (p > 1e-15) bits -= p * std::log2(p);
  }
  return bits;
}

double state_fidelity(const CMat& rho, const CMat& sigma) {
  if (rho.n != sigma.n)
    throw DimensionMismatch("state_fidelity: dimensions differ");
  const std::size_t n = rho.n;
  Eigen::Map<const EMat> mr(rho.a.data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> er(mr);
  // Clip eigenvalue noise: sqrt() would amplify O(eps) wobble around zero
  // into O(sqrt(eps)) fidelity error.
  const double cutoff =
      1e-13 * std::max(1.0, er.eigenvalues().cwiseAbs().maxCoeff());
  CMat sqrt_rho(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cd acc(0, 0);
      for (std::size_t k = 0; k < n; ++k) {
        const double lam = er.eigenvalues()(static_cast<Eigen::Index>(k));
        if (lam <= cutoff) continue;
        acc += er.eigenvectors()(static_cast<Eigen::Index>(i),
                                 static_cast<Eigen::Index>(k)) *
               std::sqrt(lam) *
               std::conj(er.eigenvectors()(static_cast<Eigen::Index>(j),
                                           static_cast<Eigen::Index>(k)));
      }
      sqrt_rho.at(i, j) = acc;
    }
  const CMat inner = matmul(sqrt_rho, matmul(sigma, sqrt_rho));
  Eigen::Map<const EMat> mi(inner.a.data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ei(mi, Eigen::EigenvaluesOnly);
  const double cutoff2 =
      1e-13 * std::max(1.0, ei.eigenvalues().cwiseAbs().maxCoeff());
  double root_sum = 0.0;
  for (Eigen::Index k = 0; k < ei.eigenvalues().size(); ++k)
    if (ei.eigenvalues()(k) > cutoff2) root_sum += std::sqrt(ei.eigenvalues()(k));
  return root_sum * root_sum;
}

double entanglement_entropy(const QuantumState& psi,
                            const std::vector<std::size_t>& left_factors) {
  const std::size_t nf = psi.space().factor_count();
  if (left_factors.empty() || left_factors.size() >= nf)
    throw InvalidPartition("cut must split the factors into two non-empty groups");
  return spectrum_entropy_bits(reduced_density(psi, left_factors));
}

}  // namespace cntqd::qstate
