#include <cmath>

#include "cntqd/kernels.hpp"

namespace cntqd::kernels::scalar {

void cmatvec(const cd* a, const cd* x, cd* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const cd* row = a + i * n;
    cd acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void cmatvec_adj(const cd* a, const cd* x, cd* y, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) y[j] = cd(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const cd* row = a + i * n;
    const cd xi = x[i];
    for (std::size_t j = 0; j < n; ++j) y[j] += std::conj(row[j]) * xi;
  }
}

void caxpy(cd alpha, const cd* x, cd* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

cd cdotc(const cd* x, const cd* y, std::size_t n) {
  cd acc(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

double sumsq(const cd* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return acc;
}

void cmul(cd* x, const cd* f, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= f[i];
}

LjSums lj_sums(const double* a2, const double* b, std::size_t n) {
  LjSums out;
  for (std::size_t i = 0; i < n; ++i) {
    const double inv2 = 1.0 / a2[i];
    const double inv = std::sqrt(inv2);
    const double inv4 = inv2 * inv2;
    const double inv5 = inv4 * inv;
    const double inv7 = inv5 * inv2;
    const double inv11 = inv7 * inv4;
    const double inv13 = inv11 * inv2;
    out.s5 += inv5;
    out.s11 += inv11;
    out.g7 += b[i] * inv7;
    out.g13 += b[i] * inv13;
  }
  return out;
}

extern const Ops kOps;
const Ops kOps = {cmatvec, cmatvec_adj, caxpy, cdotc, sumsq, cmul, lj_sums};

}  // namespace cntqd::kernels::scalar
