#include <cstdlib>
#include <cstring>

#include "cntqd/kernels.hpp"

namespace cntqd::kernels {

namespace scalar {
extern const Ops kOps;
}

#ifdef CNTQD_HAVE_AVX2
namespace avx2 {
extern const Ops kOps;
}
#endif

bool lane_available(Lane lane) {
  switch (lane) {
    case Lane::scalar:
      return true;
    case Lane::avx2:
#ifdef CNTQD_HAVE_AVX2
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const Ops& lane_ops(Lane lane) {
#ifdef CNTQD_HAVE_AVX2
  if (lane == Lane::avx2 && lane_available(Lane::avx2)) return avx2::kOps;
#endif
  (void)lane;
  return scalar::kOps;
}

const char* lane_name(Lane lane) {
  return lane == Lane::avx2 ? "avx2" : "scalar";
}

namespace {

Lane pick_lane() {
  const char* env = std::getenv("CNTQD_SIMD");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return Lane::scalar;
    if (std::strcmp(env, "avx2") == 0 && lane_available(Lane::avx2))
      return Lane::avx2;
    // "auto" or anything unrecognised falls through to detection
  }
  return lane_available(Lane::avx2) ? Lane::avx2 : Lane::scalar;
}

}  // namespace

Lane active_lane() {
  static const Lane lane = pick_lane();
  return lane;
}

const Ops& active() { return lane_ops(active_lane()); }

}  // namespace cntqd::kernels
