#pragma once

#include <cstdint>
#include <string>

namespace crowdte::kernels {

// Inner loops of the streaming estimator. Both kernels are element-wise, so
// every lane must produce bit-identical results to the scalar reference:
// the accumulate kernel is pure int32 arithmetic and the covariance kernel
// uses only exactly-rounded IEEE conversions and division. The equivalence
// suite asserts exact equality across lanes.
//
// accumulate_row: fold one task into row i of the co-answer counters, given
// that worker i answered `sign` (+1 or -1):
//   m_row[j] += sign * x[j]
//   n_row[j] += |x[j]|        for j = 0..n-1, x[j] in {-1, 0, +1}.
//
// covariance_block: c[j] = m[j] / max(n[j], 1) over a contiguous block.

using AccumulateRowFn = void (*)(std::int32_t* m_row, std::int32_t* n_row,
                                 const std::int8_t* x, int n, int sign);
using CovarianceBlockFn = void (*)(double* c, const std::int32_t* m,
                                   const std::int32_t* n, int len);

struct KernelSet {
  AccumulateRowFn accumulate_row;
  CovarianceBlockFn covariance_block;
  const char* name;
};

enum class Lane { Auto, Scalar, Avx2, Neon };

const KernelSet& scalar_kernel_set();

// Kernel set in effect. Resolved on first use: the CROWDTE_SIMD environment
// variable (scalar|avx2|neon|auto) wins, otherwise the widest lane this CPU
// supports.
const KernelSet& active_kernel_set();

// Force a lane. Returns false (and leaves the selection unchanged) if the
// lane is not available on this host.
bool select_lane(Lane lane);
Lane active_lane();
bool lane_available(Lane lane);
std::string lane_name(Lane lane);

}  // namespace crowdte::kernels
