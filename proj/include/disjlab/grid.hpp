#pragma once
// Points and subsets of the grid [t]^n: match counts, Hamming balls around a
// point restricted to a coordinate subset, mixed-radix integer codes, and
// uniform sampling. Coordinate values are 1-based (1..t); the codec subtracts
// 1 internally. Coordinate *indices* in the C++ API are 0-based.

#include <cstdint>
#include <functional>
#include <vector>

#include "disjlab/rng.hpp"

namespace disjlab {

using Coord = std::uint16_t;
using GridPoint = std::vector<Coord>;   // values in [1, t], length n
using CoordSet = std::vector<std::uint32_t>;  // sorted 0-based indices

struct GridParams {
  std::uint32_t t = 1;  // side length
  std::uint32_t n = 1;  // dimension

  // Convention used by the exists-equal experiments.
  static GridParams exists_equal_default(std::uint32_t n) { return {4 * n, n}; }

  bool operator==(const GridParams&) const = default;

  // Number of bits of a point code; the codec requires n*ceil(log2 t) <= 62.
  std::uint32_t code_bits() const;
  bool codes_fit() const { return code_bits() <= 62; }
  // t^n; throws std::overflow_error unless codes_fit().
  std::uint64_t point_count() const;
};

void validate_params(const GridParams& p);
void validate_point(const GridParams& p, const GridPoint& x);

// |{i : x_i == y_i}|; throws std::invalid_argument on dimension mismatch.
std::size_t match_count(const GridPoint& x, const GridPoint& y);
std::size_t hamming_distance(const GridPoint& x, const GridPoint& y);
// true iff the two points agree in some coordinate.
bool exists_equal(const GridPoint& x, const GridPoint& y);

// Mixed-radix (base t, n digits) code with coordinate 0 most significant:
// code = sum_i (x_i - 1) * t^(n-1-i). Bijective on [0, t^n).
std::uint64_t encode_point(const GridParams& p, const GridPoint& x);
GridPoint decode_point(const GridParams& p, std::uint64_t code);

GridPoint uniform_point(const GridParams& p, RandomStream& rng);

// Number of y with match(x_I, y_I) >= M; independent of x:
//   sum_{j=M..|I|} C(|I|,j) (t-1)^(|I|-j) t^(n-|I|).
// Throws std::invalid_argument if M > |I| and std::overflow_error if the
// count does not fit u64.
std::uint64_t ball_count(const GridParams& p, const CoordSet& I, std::uint64_t M);

// Enumerate the ball around x by match pattern (subset of I that agrees,
// then the non-agreeing and free values) instead of scanning t^n points.
void ball_for_each(const GridParams& p, const GridPoint& x, const CoordSet& I,
                   std::uint64_t M, const std::function<void(const GridPoint&)>& fn);

// Duplicate-free canonically ordered point set, stored as sorted codes.
class GridSet {
 public:
  GridSet() = default;
  explicit GridSet(GridParams p) : params_(p) { (void)p.point_count(); }

  static GridSet of_points(const GridParams& p, const std::vector<GridPoint>& pts);
  static GridSet of_codes(const GridParams& p, std::vector<std::uint64_t> codes);

  const GridParams& params() const { return params_; }
  const std::vector<std::uint64_t>& codes() const { return codes_; }
  std::size_t size() const { return codes_.size(); }
  bool empty() const { return codes_.empty(); }
  bool contains_code(std::uint64_t c) const;
  bool contains(const GridPoint& x) const {
    return contains_code(encode_point(params_, x));
  }
  std::vector<GridPoint> points() const;

  bool operator==(const GridSet&) const = default;

  // Membership bitmap (t^n bits) for O(1) lookups in the exhaustive
  // verifiers; only available when t^n <= 2^24.
  static constexpr std::uint64_t kBitmapLimit = 1ull << 24;
  std::vector<std::uint64_t> bitmap() const;

 private:
  GridParams params_;
  std::vector<std::uint64_t> codes_;
};

// Full product set [side_1] x ... x [side_n] as a GridSet (toy scale).
GridSet box_set(const GridParams& p, const GridPoint& corner);

}  // namespace disjlab
