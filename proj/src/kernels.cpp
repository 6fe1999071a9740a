#include "disjlab/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace disjlab::kernels {

namespace detail {

std::size_t match_count_u16_scalar(const std::uint16_t* a,
                                   const std::uint16_t* b, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += (a[i] == b[i]);
  return count;
}

std::size_t count_leq_u16_scalar(const std::uint16_t* a, std::size_t n,
                                 std::uint16_t bound) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += (a[i] <= bound);
  return count;
}

bool any_equal_u16_scalar(const std::uint16_t* a, const std::uint16_t* b,
                          std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] == b[i]) return true;
  return false;
}

}  // namespace detail

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

Backend detect() { return cpu_supports_avx2() ? Backend::avx2 : Backend::scalar; }

std::atomic<Backend> g_backend{detect()};

}  // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

void force_backend(Backend b) {
  if (b == Backend::avx2 && !cpu_supports_avx2())
    throw std::runtime_error("kernels: AVX2 backend not supported on this CPU");
  g_backend.store(b, std::memory_order_relaxed);
}

void reset_backend() { g_backend.store(detect(), std::memory_order_relaxed); }

std::size_t match_count_u16(const std::uint16_t* a, const std::uint16_t* b,
                            std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active_backend() == Backend::avx2)
    return detail::match_count_u16_avx2(a, b, n);
#endif
  return detail::match_count_u16_scalar(a, b, n);
}

std::size_t count_leq_u16(const std::uint16_t* a, std::size_t n,
                          std::uint16_t bound) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active_backend() == Backend::avx2)
    return detail::count_leq_u16_avx2(a, n, bound);
#endif
  return detail::count_leq_u16_scalar(a, n, bound);
}

bool any_equal_u16(const std::uint16_t* a, const std::uint16_t* b,
                   std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active_backend() == Backend::avx2)
    return detail::any_equal_u16_avx2(a, b, n);
#endif
  return detail::any_equal_u16_scalar(a, b, n);
}

}  // namespace disjlab::kernels
