// NEON lane for aarch64 builds.

#include "crowdte/kernels.hpp"

#include <arm_neon.h>

namespace crowdte::kernels::detail {

namespace {

void accumulate_row_neon(std::int32_t* m_row, std::int32_t* n_row,
                         const std::int8_t* x, int n, int sign) {
  const int32x4_t sign_vec = vdupq_n_s32(sign);
  int j = 0;
  for (; j + 8 <= n; j += 8) {
    const int8x8_t bytes = vld1_s8(x + j);
    const int16x8_t wide = vmovl_s8(bytes);
    const int32x4_t x_lo = vmovl_s16(vget_low_s16(wide));
    const int32x4_t x_hi = vmovl_s16(vget_high_s16(wide));

    int32x4_t m_lo = vld1q_s32(m_row + j);
    int32x4_t m_hi = vld1q_s32(m_row + j + 4);
    m_lo = vmlaq_s32(m_lo, x_lo, sign_vec);
    m_hi = vmlaq_s32(m_hi, x_hi, sign_vec);
    vst1q_s32(m_row + j, m_lo);
    vst1q_s32(m_row + j + 4, m_hi);

    int32x4_t n_lo = vld1q_s32(n_row + j);
    int32x4_t n_hi = vld1q_s32(n_row + j + 4);
    n_lo = vaddq_s32(n_lo, vabsq_s32(x_lo));
    n_hi = vaddq_s32(n_hi, vabsq_s32(x_hi));
    vst1q_s32(n_row + j, n_lo);
    vst1q_s32(n_row + j + 4, n_hi);
  }
  for (; j < n; ++j) {
    const std::int32_t xj = x[j];
    m_row[j] += sign * xj;
    n_row[j] += xj < 0 ? -xj : xj;
  }
}

void covariance_block_neon(double* c, const std::int32_t* m,
                           const std::int32_t* n, int len) {
  const int32x4_t ones = vdupq_n_s32(1);
  int j = 0;
  for (; j + 4 <= len; j += 4) {
    const int32x4_t mv = vld1q_s32(m + j);
    const int32x4_t nv = vmaxq_s32(vld1q_s32(n + j), ones);

    const float64x2_t m_lo = vcvtq_f64_s64(vmovl_s32(vget_low_s32(mv)));
    const float64x2_t m_hi = vcvtq_f64_s64(vmovl_s32(vget_high_s32(mv)));
    const float64x2_t n_lo = vcvtq_f64_s64(vmovl_s32(vget_low_s32(nv)));
    const float64x2_t n_hi = vcvtq_f64_s64(vmovl_s32(vget_high_s32(nv)));

    vst1q_f64(c + j, vdivq_f64(m_lo, n_lo));
    vst1q_f64(c + j + 2, vdivq_f64(m_hi, n_hi));
  }
  for (; j < len; ++j) {
    const std::int32_t denom = n[j] > 1 ? n[j] : 1;
    c[j] = static_cast<double>(m[j]) / static_cast<double>(denom);
  }
}

constexpr KernelSet kNeonSet{&accumulate_row_neon, &covariance_block_neon, "neon"};

}  // namespace

const KernelSet& neon_kernel_set() { return kNeonSet; }

}  // namespace crowdte::kernels::detail
