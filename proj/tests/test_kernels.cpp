#include "doctest.h"

#include <vector>

#include "disjlab/kernels.hpp"
#include "disjlab/rng.hpp"

using namespace disjlab;

namespace {

std::vector<std::uint16_t> random_u16(std::size_t n, std::uint16_t cap,
                                      RandomStream& rng) {
  std::vector<std::uint16_t> v(n);
  for (auto& x : v) x = static_cast<std::uint16_t>(rng.uniform_below(cap));
  return v;
}

std::size_t ref_match(const std::vector<std::uint16_t>& a,
                      const std::vector<std::uint16_t>& b) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += (a[i] == b[i]);
  return c;
}

}  // namespace

TEST_CASE("scalar and avx2 kernels agree on every remainder length") {
  REQUIRE(kernels::cpu_supports_avx2());  // this suite targets an AVX2 host
  RandomStream rng(20240901);
  // Lengths crossing the 16-lane boundary plus large bulk sizes.
  std::vector<std::size_t> lengths;
  for (std::size_t n = 0; n <= 40; ++n) lengths.push_back(n);
  lengths.insert(lengths.end(), {127, 128, 129, 400, 2000, 2001});

  for (std::size_t n : lengths) {
    // small cap makes equalities frequent
    auto a = random_u16(n, 4, rng);
    auto b = random_u16(n, 4, rng);
    const auto m_s = kernels::detail::match_count_u16_scalar(a.data(), b.data(), n);
    const auto m_v = kernels::detail::match_count_u16_avx2(a.data(), b.data(), n);
    CHECK(m_s == m_v);
    CHECK(m_s == ref_match(a, b));

    for (std::uint16_t bound : {0, 1, 2, 3, 7}) {
      const auto c_s = kernels::detail::count_leq_u16_scalar(a.data(), n, bound);
      const auto c_v = kernels::detail::count_leq_u16_avx2(a.data(), n, bound);
      CHECK(c_s == c_v);
    }
    const bool e_s = kernels::detail::any_equal_u16_scalar(a.data(), b.data(), n);
    const bool e_v = kernels::detail::any_equal_u16_avx2(a.data(), b.data(), n);
    CHECK(e_s == e_v);
    CHECK(e_s == (m_s > 0));
  }
}

TEST_CASE("unsigned compare boundary: values above 0x7fff") {
  REQUIRE(kernels::cpu_supports_avx2());
  // _mm256_min_epu16 must behave as an unsigned comparison; exercise values
  // with the sign bit set.
  std::vector<std::uint16_t> a = {0x8000, 0x7fff, 0xffff, 0x0001, 0x8001,
                                  0x8000, 0x7fff, 0xffff, 0x0001, 0x8001,
                                  0x8000, 0x7fff, 0xffff, 0x0001, 0x8001, 0x1234};
  for (std::uint16_t bound : {std::uint16_t{0x7fff}, std::uint16_t{0x8000},
                              std::uint16_t{0xffff}, std::uint16_t{0}}) {
    const auto s = kernels::detail::count_leq_u16_scalar(a.data(), a.size(), bound);
    const auto v = kernels::detail::count_leq_u16_avx2(a.data(), a.size(), bound);
    CHECK(s == v);
  }
}

TEST_CASE("backend pinning routes the public entry points") {
  const auto saved = kernels::active_backend();
  std::vector<std::uint16_t> a = {1, 2, 3, 4, 5};
  std::vector<std::uint16_t> b = {1, 9, 3, 9, 5};
  kernels::force_backend(kernels::Backend::scalar);
  CHECK(kernels::match_count_u16(a.data(), b.data(), a.size()) == 3);
  if (kernels::cpu_supports_avx2()) {
    kernels::force_backend(kernels::Backend::avx2);
    CHECK(kernels::match_count_u16(a.data(), b.data(), a.size()) == 3);
  }
  kernels::reset_backend();
  CHECK(kernels::active_backend() == saved);
}
