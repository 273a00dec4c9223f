#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "cntqd/kernels.hpp"

using cntqd::kernels::cd;
using cntqd::kernels::Lane;
using cntqd::kernels::lane_available;
using cntqd::kernels::lane_ops;
using cntqd::kernels::LjSums;

namespace {

std::vector<cd> random_cvec(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cd> v(n);
  for (cd& x : v) x = cd(g(rng), g(rng));
  return v;
}

std::vector<double> random_rvec(std::mt19937_64& rng, std::size_t n, double lo,
                                double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

double cvec_max_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("scalar lane: small hand-checked cases") {
  const auto& ops = lane_ops(Lane::scalar);

  // 2x2 matvec with complex entries
  std::vector<cd> a = {cd(1, 0), cd(0, 1), cd(2, -1), cd(0, 0)};
  std::vector<cd> x = {cd(1, 0), cd(0, 1)};
  std::vector<cd> y(2);
  ops.cmatvec(a.data(), x.data(), y.data(), 2);
  CHECK(std::abs(y[0] - cd(0, 0)) < 1e-15);  // 1*1 + i*i = 0
  CHECK(std::abs(y[1] - cd(2, -1)) < 1e-15);

  // adjoint matvec agrees with the explicit conjugate transpose
  std::vector<cd> y_adj(2);
  ops.cmatvec_adj(a.data(), x.data(), y_adj.data(), 2);
  std::vector<cd> at = {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]),
                        std::conj(a[3])};
  std::vector<cd> y_ref(2);
  ops.cmatvec(at.data(), x.data(), y_ref.data(), 2);
  CHECK(cvec_max_diff(y_adj, y_ref) < 1e-15);

  CHECK(std::abs(ops.cdotc(x.data(), x.data(), 2) - cd(2, 0)) < 1e-15);
  CHECK(ops.sumsq(x.data(), 2) == doctest::Approx(2.0));
}

TEST_CASE("lanes agree on random inputs") {
  if (!lane_available(Lane::avx2)) {
    MESSAGE("avx2 lane unavailable on this host; skipping equivalence checks");
    return;
  }
  const auto& s = lane_ops(Lane::scalar);
  const auto& v = lane_ops(Lane::avx2);
  std::mt19937_64 rng(20240811);

  for (std::size_t n : {1u, 2u, 3u, 4u, 7u, 16u, 33u, 257u}) {
    const auto a = random_cvec(rng, n * n);
    const auto x = random_cvec(rng, n);
    auto y1 = random_cvec(rng, n), y2 = y1;
    const double scale = std::sqrt(static_cast<double>(n));

    std::vector<cd> m1(n), m2(n);
    s.cmatvec(a.data(), x.data(), m1.data(), n);
    v.cmatvec(a.data(), x.data(), m2.data(), n);
    CHECK(cvec_max_diff(m1, m2) < 1e-12 * scale);

    s.cmatvec_adj(a.data(), x.data(), m1.data(), n);
    v.cmatvec_adj(a.data(), x.data(), m2.data(), n);
    CHECK(cvec_max_diff(m1, m2) < 1e-12 * scale);

    const cd alpha(0.7, -1.3);
    s.caxpy(alpha, x.data(), y1.data(), n);
    v.caxpy(alpha, x.data(), y2.data(), n);
    CHECK(cvec_max_diff(y1, y2) < 1e-13);

    CHECK(std::abs(s.cdotc(x.data(), y1.data(), n) -
                   v.cdotc(x.data(), y2.data(), n)) < 1e-12 * scale);
    CHECK(s.sumsq(x.data(), n) ==
          doctest::Approx(v.sumsq(x.data(), n)).epsilon(1e-13));

    auto f = random_cvec(rng, n);
    auto z1 = x, z2 = x;
    s.cmul(z1.data(), f.data(), n);
    v.cmul(z2.data(), f.data(), n);
    CHECK(cvec_max_diff(z1, z2) < 1e-13);
  }
}

TEST_CASE("lanes agree on the 12-6 quadrature sums") {
  if (!lane_available(Lane::avx2)) return;
  const auto& s = lane_ops(Lane::scalar);
  const auto& v = lane_ops(Lane::avx2);
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 3u, 4u, 5u, 64u, 255u, 256u}) {
    const auto a2 = random_rvec(rng, n, 0.5, 30.0);
    const auto b = random_rvec(rng, n, -3.0, 3.0);
    const LjSums r1 = s.lj_sums(a2.data(), b.data(), n);
    const LjSums r2 = v.lj_sums(a2.data(), b.data(), n);
    CHECK(r1.s5 == doctest::Approx(r2.s5).epsilon(1e-13));
    CHECK(r1.s11 == doctest::Approx(r2.s11).epsilon(1e-13));
    CHECK(r1.g7 == doctest::Approx(r2.g7).epsilon(1e-12));
    CHECK(r1.g13 == doctest::Approx(r2.g13).epsilon(1e-12));
  }
}

TEST_CASE("lj_sums matches a direct evaluation") {
  const auto& ops = cntqd::kernels::active();
  std::mt19937_64 rng(99);
  const std::size_t n = 37;
  const auto a2 = random_rvec(rng, n, 1.0, 20.0);
  const auto b = random_rvec(rng, n, -2.0, 2.0);
  const LjSums r = ops.lj_sums(a2.data(), b.data(), n);
  double s5 = 0, s11 = 0, g7 = 0, g13 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::sqrt(a2[i]);
    s5 += std::pow(a, -5.0);
    s11 += std::pow(a, -11.0);
    g7 += b[i] * std::pow(a, -7.0);
    g13 += b[i] * std::pow(a, -13.0);
  }
  CHECK(r.s5 == doctest::Approx(s5).epsilon(1e-12));
  CHECK(r.s11 == doctest::Approx(s11).epsilon(1e-12));
  CHECK(r.g7 == doctest::Approx(g7).epsilon(1e-12));
  CHECK(r.g13 == doctest::Approx(g13).epsilon(1e-12));
}

TEST_CASE("dispatch reports an available lane") {
  const Lane lane = cntqd::kernels::active_lane();
  CHECK(lane_available(lane));
  CHECK((std::string(cntqd::kernels::lane_name(lane)) == "scalar" ||
         std::string(cntqd::kernels::lane_name(lane)) == "avx2"));
}
