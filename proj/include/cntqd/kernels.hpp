#pragma once

#include <complex>
#include <cstddef>
#include <string>

// Data-parallel inner loops shared by the quantum-state and trap modules.
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant selected at runtime.  The two lanes are equivalence-tested
// against each other; callers go through active() and never notice which
// lane runs.  CNTQD_SIMD=scalar|avx2|auto overrides the automatic choice.

namespace cntqd::kernels {

using cd = std::complex<double>;

// Accumulated 12-6 wall-quadrature sums over n nodes with squared distances
// a2[i] and radial direction factors b[i]:
//   s5  = sum a^-5        s11 = sum a^-11
//   g7  = sum b * a^-7    g13 = sum b * a^-13
struct LjSums {
  double s5 = 0.0;
  double s11 = 0.0;
  double g7 = 0.0;
  double g13 = 0.0;
};

struct Ops {
  // y = A x, A row-major n x n
  void (*cmatvec)(const cd* a, const cd* x, cd* y, std::size_t n);
  // y = adjoint(A) x
  void (*cmatvec_adj)(const cd* a, const cd* x, cd* y, std::size_t n);
  // y += alpha * x
  void (*caxpy)(cd alpha, const cd* x, cd* y, std::size_t n);
  // sum_i conj(x_i) y_i
  cd (*cdotc)(const cd* x, const cd* y, std::size_t n);
  // sum_i |x_i|^2
  double (*sumsq)(const cd* x, std::size_t n);
  // x_i *= f_i
  void (*cmul)(cd* x, const cd* f, std::size_t n);
  LjSums (*lj_sums)(const double* a2, const double* b, std::size_t n);
};

enum class Lane { scalar, avx2 };

const Ops& lane_ops(Lane lane);
bool lane_available(Lane lane);
const char* lane_name(Lane lane);

// The lane picked at startup (honours CNTQD_SIMD).
const Ops& active();
Lane active_lane();

}  // namespace cntqd::kernels
