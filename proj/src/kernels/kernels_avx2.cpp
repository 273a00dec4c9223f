// AVX2+FMA lane.  Compiled only on x86-64 with -mavx2 -mfma; runtime
// dispatch keeps it out of the call path on CPUs without the extensions.

#include "cntqd/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>

namespace cntqd::kernels::avx2 {
namespace {

// Packed layout: one __m256d holds two complex doubles [re0, im0, re1, im1].

inline __m256d cmul_pd(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

inline __m256d conj_pd(__m256d a) {
  const __m256d mask = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
  return _mm256_xor_pd(a, mask);
}

// Sums the two complex lanes of acc into one complex double.
inline cd hsum_c(__m256d acc) {
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return cd(out[0], out[1]);
}

inline double hsum_d(__m256d acc) {
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void cmatvec(const cd* a, const cd* x, cd* y, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = reinterpret_cast<const double*>(a + i * n);
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
      const __m256d av = _mm256_loadu_pd(row + 2 * j);
      const __m256d xv = _mm256_loadu_pd(xd + 2 * j);
      acc = _mm256_add_pd(acc, cmul_pd(av, xv));
    }
    cd sum = hsum_c(acc);
    for (; j < n; ++j) sum += a[i * n + j] * x[j];
    y[i] = sum;
  }
}

void cmatvec_adj(const cd* a, const cd* x, cd* y, std::size_t n) {
  double* yd = reinterpret_cast<double*>(y);
  for (std::size_t j = 0; j < 2 * n; ++j) yd[j] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = reinterpret_cast<const double*>(a + i * n);
    const __m256d x_re = _mm256_set1_pd(x[i].real());
    const __m256d x_im = _mm256_set1_pd(x[i].imag());
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
      const __m256d av = conj_pd(_mm256_loadu_pd(row + 2 * j));
      const __m256d a_sw = _mm256_permute_pd(av, 0x5);
      const __m256d prod =
          _mm256_fmaddsub_pd(av, x_re, _mm256_mul_pd(a_sw, x_im));
      const __m256d yv = _mm256_loadu_pd(yd + 2 * j);
      _mm256_storeu_pd(yd + 2 * j, _mm256_add_pd(yv, prod));
    }
    for (; j < n; ++j) y[j] += std::conj(a[i * n + j]) * x[i];
  }
}

void caxpy(cd alpha, const cd* x, cd* y, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const __m256d al_re = _mm256_set1_pd(alpha.real());
  const __m256d al_im = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d x_sw = _mm256_permute_pd(xv, 0x5);
    const __m256d prod =
        _mm256_fmaddsub_pd(xv, al_re, _mm256_mul_pd(x_sw, al_im));
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

cd cdotc(const cd* x, const cd* y, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = conj_pd(_mm256_loadu_pd(xd + 2 * i));
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    acc = _mm256_add_pd(acc, cmul_pd(xv, yv));
  }
  cd sum = hsum_c(acc);
  for (; i < n; ++i) sum += std::conj(x[i]) * y[i];
  return sum;
}

double sumsq(const cd* x, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(xd + 2 * i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double sum = hsum_d(acc);
  for (; i < n; ++i)
    sum += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return sum;
}

void cmul(cd* x, const cd* f, std::size_t n) {
  double* xd = reinterpret_cast<double*>(x);
  const double* fd = reinterpret_cast<const double*>(f);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d fv = _mm256_loadu_pd(fd + 2 * i);
    _mm256_storeu_pd(xd + 2 * i, cmul_pd(xv, fv));
  }
  for (; i < n; ++i) x[i] *= f[i];
}

LjSums lj_sums(const double* a2, const double* b, std::size_t n) {
  __m256d s5 = _mm256_setzero_pd();
  __m256d s11 = _mm256_setzero_pd();
  __m256d g7 = _mm256_setzero_pd();
  __m256d g13 = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a2v = _mm256_loadu_pd(a2 + i);
    const __m256d bv = _mm256_loadu_pd(b + i);
    const __m256d inv2 = _mm256_div_pd(one, a2v);
    const __m256d inv = _mm256_sqrt_pd(inv2);
    const __m256d inv4 = _mm256_mul_pd(inv2, inv2);
    const __m256d inv5 = _mm256_mul_pd(inv4, inv);
    const __m256d inv7 = _mm256_mul_pd(inv5, inv2);
    const __m256d inv11 = _mm256_mul_pd(inv7, inv4);
    const __m256d inv13 = _mm256_mul_pd(inv11, inv2);
    s5 = _mm256_add_pd(s5, inv5);
    s11 = _mm256_add_pd(s11, inv11);
    g7 = _mm256_fmadd_pd(bv, inv7, g7);
    g13 = _mm256_fmadd_pd(bv, inv13, g13);
  }
  LjSums out;
  out.s5 = hsum_d(s5);
  out.s11 = hsum_d(s11);
  out.g7 = hsum_d(g7);
  out.g13 = hsum_d(g13);
  for (; i < n; ++i) {
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

}  // namespace cntqd::kernels::avx2

#endif  // __AVX2__ && __FMA__
