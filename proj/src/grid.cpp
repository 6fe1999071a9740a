#include "disjlab/grid.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "disjlab/kernels.hpp"

namespace disjlab {

namespace {

std::uint32_t ceil_log2_u32(std::uint32_t v) {
  if (v <= 1) return 0;
  return 32 - std::countl_zero(v - 1);
}

// C(n, k) in u64 with overflow detection.
std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > ~std::uint64_t{0})
      throw std::overflow_error("binomial: value exceeds u64");
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
  if (r > ~std::uint64_t{0}) throw std::overflow_error("u64 product overflow");
  return static_cast<std::uint64_t>(r);
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r = checked_mul(r, base);
  return r;
}

}  // namespace

std::uint32_t GridParams::code_bits() const {
  return n * ceil_log2_u32(t);
}

std::uint64_t GridParams::point_count() const {
  if (!codes_fit())
    throw std::overflow_error("grid too large: n*ceil(log2 t) = " +
                              std::to_string(code_bits()) + " > 62 bits");
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < n; ++i) r *= t;  // fits: t^n < 2^62
  return r;
}

void validate_params(const GridParams& p) {
  if (p.t < 1 || p.n < 1)
    throw std::invalid_argument("grid params require t >= 1 and n >= 1");
  if (p.t > 0xffffu)
    throw std::invalid_argument("side length above 2^16 is unsupported");
}

void validate_point(const GridParams& p, const GridPoint& x) {
  if (x.size() != p.n)
    throw std::invalid_argument("point dimension " + std::to_string(x.size()) +
                                " != n = " + std::to_string(p.n));
  for (Coord c : x)
    if (c < 1 || c > p.t)
      throw std::invalid_argument("coordinate value out of [1, t]");
}

std::size_t match_count(const GridPoint& x, const GridPoint& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("match_count: dimension mismatch");
  return kernels::match_count_u16(x.data(), y.data(), x.size());
}

std::size_t hamming_distance(const GridPoint& x, const GridPoint& y) {
  return x.size() - match_count(x, y);
}

bool exists_equal(const GridPoint& x, const GridPoint& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("exists_equal: dimension mismatch");
  return kernels::any_equal_u16(x.data(), y.data(), x.size());
}

std::uint64_t encode_point(const GridParams& p, const GridPoint& x) {
  if (!p.codes_fit()) throw std::overflow_error("point codes do not fit 62 bits");
  if (x.size() != p.n) throw std::invalid_argument("encode: dimension mismatch");
  std::uint64_t code = 0;
  for (std::uint32_t i = 0; i < p.n; ++i) code = code * p.t + (x[i] - 1);
  return code;
}

GridPoint decode_point(const GridParams& p, std::uint64_t code) {
  GridPoint x(p.n);
  for (std::uint32_t i = p.n; i-- > 0;) {
    x[i] = static_cast<Coord>(code % p.t + 1);
    code /= p.t;
  }
  if (code != 0) throw std::invalid_argument("decode: code out of range");
  return x;
}

GridPoint uniform_point(const GridParams& p, RandomStream& rng) {
  GridPoint x(p.n);
  for (auto& c : x) c = static_cast<Coord>(rng.uniform_below(p.t) + 1);
  return x;
}

std::uint64_t ball_count(const GridParams& p, const CoordSet& I, std::uint64_t M) {
  const std::uint64_t s = I.size();
  if (M > s) throw std::invalid_argument("ball: M exceeds |I|");
  const std::uint64_t outside = checked_pow(p.t, p.n - s);
  std::uint64_t total = 0;
  for (std::uint64_t j = M; j <= s; ++j) {
    std::uint64_t term = binomial_u64(s, j);
    term = checked_mul(term, checked_pow(p.t - 1, s - j));
    term = checked_mul(term, outside);
    std::uint64_t next = total + term;
    if (next < total) throw std::overflow_error("ball count overflows u64");
    total = next;
  }
  return total;
}

namespace {

// Recursion over positions: inside I a coordinate either agrees with x
// (when still needed to reach >= M it may, otherwise also may not) or takes
// one of the t-1 disagreeing values; outside I all t values are free.
void ball_rec(const GridParams& p, const GridPoint& x,
              const std::vector<bool>& in_I, std::uint32_t pos,
              std::uint64_t agrees, std::uint64_t M, GridPoint& y,
              const std::function<void(const GridPoint&)>& fn) {
  if (pos == p.n) {
    if (agrees >= M) fn(y);
    return;
  }
  // Remaining members of I after pos.
  std::uint64_t remaining = 0;
  for (std::uint32_t q = pos; q < p.n; ++q) remaining += in_I[q];
  if (agrees + remaining < M) return;  // cannot reach the threshold

  if (!in_I[pos]) {
    for (Coord v = 1; v <= p.t; ++v) {
      y[pos] = v;
      ball_rec(p, x, in_I, pos + 1, agrees, M, y, fn);
    }
  } else {
    y[pos] = x[pos];
    ball_rec(p, x, in_I, pos + 1, agrees + 1, M, y, fn);
    for (Coord v = 1; v <= p.t; ++v) {
      if (v == x[pos]) continue;
      y[pos] = v;
      ball_rec(p, x, in_I, pos + 1, agrees, M, y, fn);
    }
  }
}

}  // namespace

void ball_for_each(const GridParams& p, const GridPoint& x, const CoordSet& I,
                   std::uint64_t M,
                   const std::function<void(const GridPoint&)>& fn) {
  validate_point(p, x);
  if (M > I.size()) throw std::invalid_argument("ball: M exceeds |I|");
  std::vector<bool> in_I(p.n, false);
  for (auto i : I) {
    if (i >= p.n) throw std::invalid_argument("ball: coordinate index out of range");
    in_I[i] = true;
  }
  GridPoint y(p.n);
  ball_rec(p, x, in_I, 0, 0, M, y, fn);
}

GridSet GridSet::of_points(const GridParams& p, const std::vector<GridPoint>& pts) {
  std::vector<std::uint64_t> codes;
  codes.reserve(pts.size());
  for (const auto& x : pts) {
    validate_point(p, x);
    codes.push_back(encode_point(p, x));
  }
  return of_codes(p, std::move(codes));
}

GridSet GridSet::of_codes(const GridParams& p, std::vector<std::uint64_t> codes) {
  validate_params(p);
  GridSet s(p);
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  if (!codes.empty() && codes.back() >= p.point_count())
    throw std::invalid_argument("point code out of range");
  s.codes_ = std::move(codes);
  return s;
}

bool GridSet::contains_code(std::uint64_t c) const {
  return std::binary_search(codes_.begin(), codes_.end(), c);
}

std::vector<GridPoint> GridSet::points() const {
  std::vector<GridPoint> out;
  out.reserve(codes_.size());
  for (auto c : codes_) out.push_back(decode_point(params_, c));
  return out;
}

std::vector<std::uint64_t> GridSet::bitmap() const {
  const std::uint64_t total = params_.point_count();
  if (total > kBitmapLimit)
    throw std::overflow_error("bitmap limited to t^n <= 2^24");
  std::vector<std::uint64_t> bits((total + 63) / 64, 0);
  for (auto c : codes_) bits[c >> 6] |= (1ull << (c & 63));
  return bits;
}

GridSet box_set(const GridParams& p, const GridPoint& corner) {
  validate_point(p, corner);
  std::vector<std::uint64_t> codes;
  std::uint64_t count = 1;
  for (Coord c : corner) count = checked_mul(count, c);
  codes.reserve(count);
  GridPoint y(p.n, 1);
  bool done = false;
  while (!done) {
    codes.push_back(encode_point(p, y));
    done = true;
    for (std::uint32_t i = p.n; i-- > 0;) {
      if (y[i] < corner[i]) {
        ++y[i];
        done = false;
        break;
      }
      y[i] = 1;
    }
  }
  return GridSet::of_codes(p, std::move(codes));
}

}  // namespace disjlab
