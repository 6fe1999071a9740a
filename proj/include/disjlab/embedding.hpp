#pragma once
// Embedding a small exists-equal instance into a large one: the (X', Y)
// construction over a box-shaped extracted set, efficient sampling from
// N_x = {z in box : match(x_I, z_I) >= M} through its closed-form count, and
// the Monte Carlo estimators for the resulting error constants.
//
// The statistical harness uses a box for T: a box is its own down-image, so
// it is a valid extracted set without materializing anything, and the
// closed-form sampler makes the per-trial cost linear in n.

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "disjlab/grid.hpp"
#include "disjlab/rng.hpp"

namespace disjlab {

struct EmbeddingParams {
  std::uint32_t n = 0, t = 0;        // big instance; t = 4n
  std::uint32_t M = 0;               // match threshold (>= 2, multiple of 10)
  std::uint32_t R = 1;               // planned match count of (u, v)
  std::uint32_t n_small = 0, t_small = 0;  // n' = M/10, t' = 4n'
  std::uint32_t m = 0;               // repeat count: 2n/(MR)
  CoordSet I;                        // |I| = n/5
  std::uint32_t box_side = 0;        // k; M = n*k/(20t)

  GridParams big() const { return {t, n}; }
  GridParams small() const { return {t_small, n_small}; }
  std::uint32_t placed() const { return n_small * m; }  // n/(5R)

  // Derives and validates every field from (n, box_side, R); I defaults to
  // the first n/5 coordinates. Throws on any divisibility violation.
  static EmbeddingParams make(std::uint32_t n, std::uint32_t box_side,
                              std::uint32_t R);
  // n = 2000, box_side = 1600, R = 1  =>  M = 20, n' = 2, t' = 8, m = 200.
  static EmbeddingParams desk_scale();

  static EmbeddingParams from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// The box as an implicit set: [side] on I, {1} elsewhere.
struct BoxT {
  CoordSet I;
  std::uint32_t side = 1;
  std::uint32_t n = 0, t = 0;

  bool contains(const GridPoint& z) const;
  static BoxT of(const EmbeddingParams& p) {
    return BoxT{p.I, p.box_side, p.n, p.t};
  }
};

// Out-of-band value standing in for "an arbitrary point outside the box":
// the all-t corner, which cannot lie in any box with side < t. Drawn from
// N_x only when it is empty, an event of probability <= 5^-M.
GridPoint sentinel_point(const GridParams& p);

struct BuildXY {
  GridPoint X, Y;
};

// Both players repeat their small input m times, push every slot through an
// independent uniform map [t'] -> [t] (evaluated lazily: equal slots share
// one draw, unequal slots draw independently), place the slots at uniform
// distinct positions inside I, and fill all remaining coordinates uniformly.
// Marginals of X and Y are uniform on [t]^n; match(u,v) = R forces
// match(X_I, Y_I) >= m*R.
BuildXY build_XY(const GridPoint& u, const GridPoint& v,
                 const EmbeddingParams& params, RandomStream& rng);

// Closed-form sampler over N_x for a box T. With h = |{i in I : x_i <= side}|:
// empty iff h < M, else |N_x| = sum_{j=M..h} C(h,j)(side-1)^(h-j) side^(|I|-h);
// draws the match count j from its log-space weights (long double cumulative
// inversion), then positions, then values. Returns nullopt when empty.
std::optional<GridPoint> sample_Nx_box(const GridPoint& x, const BoxT& box,
                                       std::uint32_t M, RandomStream& rng);

// Reference sampler: scans an explicit T.
std::optional<GridPoint> sample_Nx_scan(const GridPoint& x, const GridSet& T,
                                        const CoordSet& I, std::uint32_t M,
                                        RandomStream& rng);

// log2 |N_x| pieces for cross-checking the closed form at toy scale.
unsigned __int128 nx_box_count(std::uint32_t h, std::uint32_t M,
                               std::uint32_t side, std::uint32_t I_size);

enum class MatchCase { match0, matchR };

struct EstimatorReport {
  std::string case_name;
  std::uint64_t trials = 0;
  double estimate = 0;       // Pr[EE(X',Y)=0] (match0) or Pr[EE=1] (matchR)
  double ci95 = 0;
  double paper_bound = 0;    // 0.77 or 0.80
  bool pass = false;         // estimate clears bound - ci95
  double exact_reference = 0;  // match0 only: (1-1/t)^n
  bool within_3sigma = false;  // match0 only: |estimate - exact| <= 3 sigma
  std::uint64_t sentinel_draws = 0;
  nlohmann::json to_json() const;
};

// Monte Carlo over (u, v) pairs with the stated match count, embedding each
// and evaluating exists-equal on (X', Y). Per-trial randomness derives from
// seed ^ trial-index, so any partition of the trial range yields identical
// totals (jobs only sets the thread count).
EstimatorReport estimate_lemma_error(const EmbeddingParams& params, MatchCase c,
                                     std::uint64_t trials, std::uint64_t seed,
                                     unsigned jobs = 1);

struct EmptyRateReport {
  std::uint64_t trials = 0;
  std::uint64_t empty_events = 0;
  double estimate = 0;
  double bound = 0;          // 5^-M
  bool pass = false;         // estimate <= bound + ci95
  double ci95 = 0;
  nlohmann::json to_json() const;
};

// Pr[N_X empty] over uniform X in [t]^n (the tail statistic of the
// isoperimetry pipeline, evaluated on the box harness at full scale).
EmptyRateReport estimate_empty_rate(const EmbeddingParams& params,
                                    std::uint64_t trials, std::uint64_t seed,
                                    unsigned jobs = 1);

}  // namespace disjlab
