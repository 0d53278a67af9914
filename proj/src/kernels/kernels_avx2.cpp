// AVX2 lane. Compiled with -mavx2 for x86-64 targets only; callers reach it
// through the dispatcher, which checks cpuid first.

#include "crowdte/kernels.hpp"

#include <immintrin.h>

namespace crowdte::kernels::detail {

namespace {

void accumulate_row_avx2(std::int32_t* m_row, std::int32_t* n_row,
                         const std::int8_t* x, int n, int sign) {
  const __m256i sign_vec = _mm256_set1_epi32(sign);
  int j = 0;
  for (; j + 8 <= n; j += 8) {
    const __m128i bytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(x + j));
    const __m256i xj = _mm256_cvtepi8_epi32(bytes);
    // sign * x[j]: _mm256_sign_epi32 negates where sign_vec is negative and
    // passes through where positive (sign is never 0 here).
    const __m256i m_add = _mm256_sign_epi32(xj, sign_vec);
    const __m256i n_add = _mm256_abs_epi32(xj);

    __m256i m_acc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(m_row + j));
    __m256i n_acc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(n_row + j));
    m_acc = _mm256_add_epi32(m_acc, m_add);
    n_acc = _mm256_add_epi32(n_acc, n_add);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(m_row + j), m_acc);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(n_row + j), n_acc);
  }
  for (; j < n; ++j) {
    const std::int32_t xj = x[j];
    m_row[j] += sign * xj;
    n_row[j] += xj < 0 ? -xj : xj;
  }
}

void covariance_block_avx2(double* c, const std::int32_t* m,
                           const std::int32_t* n, int len) {
  const __m256i ones = _mm256_set1_epi32(1);
  int j = 0;
  for (; j + 8 <= len; j += 8) {
    const __m256i mv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(m + j));
    const __m256i nv = _mm256_max_epi32(
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(n + j)), ones);

    const __m128i m_lo = _mm256_castsi256_si128(mv);
    const __m128i m_hi = _mm256_extracti128_si256(mv, 1);
    const __m128i n_lo = _mm256_castsi256_si128(nv);
    const __m128i n_hi = _mm256_extracti128_si256(nv, 1);

    const __m256d q_lo = _mm256_div_pd(_mm256_cvtepi32_pd(m_lo), _mm256_cvtepi32_pd(n_lo));
    const __m256d q_hi = _mm256_div_pd(_mm256_cvtepi32_pd(m_hi), _mm256_cvtepi32_pd(n_hi));
    _mm256_storeu_pd(c + j, q_lo);
    _mm256_storeu_pd(c + j + 4, q_hi);
  }
  for (; j < len; ++j) {
    const std::int32_t denom = n[j] > 1 ? n[j] : 1;
    c[j] = static_cast<double>(m[j]) / static_cast<double>(denom);
  }
}

constexpr KernelSet kAvx2Set{&accumulate_row_avx2, &covariance_block_avx2, "avx2"};

}  // namespace

const KernelSet& avx2_kernel_set() { return kAvx2Set; }

bool avx2_supported() { return __builtin_cpu_supports("avx2") != 0; }

}  // namespace crowdte::kernels::detail
