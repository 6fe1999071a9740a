#pragma once
// Dense inner loops shared by the grid, protocol and embedding code:
// counting agreeing coordinates, counting coordinates below a threshold,
// and any-coordinate-equal tests over contiguous u16 vectors.
//
// Every kernel has a portable scalar reference implementation and an AVX2
// variant; the active one is picked once at runtime from CPUID. The two
// must agree exactly on every input; tests/test_kernels.cpp enforces this
// across lengths covering all remainder paths.

#include <cstddef>
#include <cstdint>

namespace disjlab::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
// Pin a backend (tests, benchmarks). Throws std::runtime_error if the CPU
// lacks it. reset_backend() returns to auto-detection.
void force_backend(Backend b);
void reset_backend();
bool cpu_supports_avx2();

// |{i : a[i] == b[i]}|
std::size_t match_count_u16(const std::uint16_t* a, const std::uint16_t* b,
                            std::size_t n);

// |{i : a[i] <= bound}|
std::size_t count_leq_u16(const std::uint16_t* a, std::size_t n,
                          std::uint16_t bound);

// true iff a[i] == b[i] for some i
bool any_equal_u16(const std::uint16_t* a, const std::uint16_t* b,
                   std::size_t n);

namespace detail {
std::size_t match_count_u16_scalar(const std::uint16_t*, const std::uint16_t*,
                                   std::size_t);
std::size_t count_leq_u16_scalar(const std::uint16_t*, std::size_t,
                                 std::uint16_t);
bool any_equal_u16_scalar(const std::uint16_t*, const std::uint16_t*,
                          std::size_t);
#if defined(__x86_64__) || defined(_M_X64)
std::size_t match_count_u16_avx2(const std::uint16_t*, const std::uint16_t*,
                                 std::size_t);
std::size_t count_leq_u16_avx2(const std::uint16_t*, std::size_t,
                               std::uint16_t);
bool any_equal_u16_avx2(const std::uint16_t*, const std::uint16_t*,
                        std::size_t);
#endif
}  // namespace detail

}  // namespace disjlab::kernels
