// AVX2 variants. This translation unit is compiled with -mavx2; callers go
// through the runtime dispatch in kernels.cpp, which only routes here after
// a CPUID check.
#include "disjlab/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <bit>

namespace disjlab::kernels::detail {

namespace {

// movemask_epi8 yields 2 identical bits per u16 lane; popcount and halve.
inline std::size_t mask_lane_count(__m256i cmp) {
  unsigned mask = static_cast<unsigned>(_mm256_movemask_epi8(cmp));
  return static_cast<std::size_t>(std::popcount(mask)) >> 1;
}

}  // namespace

std::size_t match_count_u16_avx2(const std::uint16_t* a, const std::uint16_t* b,
                                 std::size_t n) {
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    count += mask_lane_count(_mm256_cmpeq_epi16(va, vb));
  }
  for (; i < n; ++i) count += (a[i] == b[i]);
  return count;
}

std::size_t count_leq_u16_avx2(const std::uint16_t* a, std::size_t n,
                               std::uint16_t bound) {
  // a[i] <= bound  <=>  min_epu16(a[i], bound) == a[i]  (unsigned compare)
  const __m256i vb = _mm256_set1_epi16(static_cast<short>(bound));
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i mn = _mm256_min_epu16(va, vb);
    count += mask_lane_count(_mm256_cmpeq_epi16(mn, va));
  }
  for (; i < n; ++i) count += (a[i] <= bound);
  return count;
}

bool any_equal_u16_avx2(const std::uint16_t* a, const std::uint16_t* b,
                        std::size_t n) {
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    __m256i eq = _mm256_cmpeq_epi16(va, vb);
    if (!_mm256_testz_si256(eq, eq)) return true;
  }
  for (; i < n; ++i)
    if (a[i] == b[i]) return true;
  return false;
}

}  // namespace disjlab::kernels::detail

#endif  // x86-64
