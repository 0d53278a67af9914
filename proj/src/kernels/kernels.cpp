#include "crowdte/kernels.hpp"

#include <cstdlib>
#include <mutex>

namespace crowdte::kernels {

namespace {

void accumulate_row_scalar(std::int32_t* m_row, std::int32_t* n_row,
                           const std::int8_t* x, int n, int sign) {
  for (int j = 0; j < n; ++j) {
    const std::int32_t xj = x[j];
    m_row[j] += sign * xj;
    n_row[j] += xj < 0 ? -xj : xj;
  }
}

void covariance_block_scalar(double* c, const std::int32_t* m,
                             const std::int32_t* n, int len) {
  for (int j = 0; j < len; ++j) {
    const std::int32_t denom = n[j] > 1 ? n[j] : 1;
    c[j] = static_cast<double>(m[j]) / static_cast<double>(denom);
  }
}

constexpr KernelSet kScalarSet{&accumulate_row_scalar, &covariance_block_scalar, "scalar"};

}  // namespace

#if defined(CROWDTE_HAVE_AVX2_TU)
namespace detail {
const KernelSet& avx2_kernel_set();
bool avx2_supported();
}  // namespace detail
#endif

#if defined(CROWDTE_HAVE_NEON_TU)
namespace detail {
const KernelSet& neon_kernel_set();
}  // namespace detail
#endif

const KernelSet& scalar_kernel_set() { return kScalarSet; }

bool lane_available(Lane lane) {
  switch (lane) {
    case Lane::Auto:
    case Lane::Scalar:
      return true;
    case Lane::Avx2:
#if defined(CROWDTE_HAVE_AVX2_TU)
      return detail::avx2_supported();
#else
      return false;
#endif
    case Lane::Neon:
#if defined(CROWDTE_HAVE_NEON_TU)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::string lane_name(Lane lane) {
  switch (lane) {
    case Lane::Auto: return "auto";
    case Lane::Scalar: return "scalar";
    case Lane::Avx2: return "avx2";
    case Lane::Neon: return "neon";
  }
  return "unknown";
}

namespace {

struct Dispatch {
  const KernelSet* set = &kScalarSet;
  Lane lane = Lane::Scalar;
};

Dispatch resolve(Lane requested) {
  Dispatch d;
  Lane want = requested;
  if (want == Lane::Auto) {
#if defined(CROWDTE_HAVE_NEON_TU)
    want = Lane::Neon;
#elif defined(CROWDTE_HAVE_AVX2_TU)
    want = lane_available(Lane::Avx2) ? Lane::Avx2 : Lane::Scalar;
#else
    want = Lane::Scalar;
#endif
  }
  if (!lane_available(want)) want = Lane::Scalar;
  d.lane = want;
  switch (want) {
    case Lane::Avx2:
#if defined(CROWDTE_HAVE_AVX2_TU)
      d.set = &detail::avx2_kernel_set();
#endif
      break;
    case Lane::Neon:
#if defined(CROWDTE_HAVE_NEON_TU)
      d.set = &detail::neon_kernel_set();
#endif
      break;
    default:
      d.set = &kScalarSet;
      break;
  }
  return d;
}

Lane lane_from_env() {
  const char* env = std::getenv("CROWDTE_SIMD");
  if (env == nullptr) return Lane::Auto;
  const std::string value(env);
  if (value == "scalar") return Lane::Scalar;
  if (value == "avx2") return Lane::Avx2;
  if (value == "neon") return Lane::Neon;
  return Lane::Auto;
}

std::mutex g_mutex;
Dispatch g_dispatch;
bool g_initialized = false;

Dispatch& dispatch() {
  std::lock_guard<std::mutex> lock(g_mutex);
  if (!g_initialized) {
    g_dispatch = resolve(lane_from_env());
    g_initialized = true;
  }
  return g_dispatch;
}

}  // namespace

const KernelSet& active_kernel_set() { return *dispatch().set; }

Lane active_lane() { return dispatch().lane; }

bool select_lane(Lane lane) {
  if (lane != Lane::Auto && !lane_available(lane)) return false;
  std::lock_guard<std::mutex> lock(g_mutex);
  g_dispatch = resolve(lane);
  g_initialized = true;
  return true;
}

}  // namespace crowdte::kernels
