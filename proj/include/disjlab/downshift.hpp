#pragma once
// Down-compression operators on grid sets, ideal predicates, box-witness
// extraction, generalized perimeters, and the exhaustive/randomized verifiers
// built on them. All operators preserve cardinality; down(K) is an ideal.
//
// Coordinate indices are 0-based here; coordinate *values* are 1-based.
// down(K) applies the single-coordinate compression from the last coordinate
// to the first: down(K) = down_0(down_1(...down_{n-1}(K)...)).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "disjlab/concave.hpp"
#include "disjlab/grid.hpp"

namespace disjlab {

// One elementary step: members x with x_i = a slide to x_i = a-1 unless the
// slot below is already taken. Requires 2 <= a <= t.
GridSet down_ia(const GridSet& K, std::uint32_t i, std::uint32_t a);

// Per equivalence class of "equal everywhere except coordinate i" with c
// members, keep exactly the points with i-th value in [c].
GridSet down_i(const GridSet& K, std::uint32_t i);

// down_i computed by sweeping down_ia to a fixpoint; same result, used as a
// cross-check of the two definitions.
GridSet down_i_via_ia(const GridSet& K, std::uint32_t i);

GridSet down(const GridSet& K);

bool is_i_ideal(const GridSet& K, std::uint32_t i);
bool is_ideal(const GridSet& K);

struct BoxWitness {
  GridPoint x;          // lexicographically smallest qualifying point of down(K)
  CoordSet I;           // smallest ceil(n/5) qualifying coordinates
  double k_raw = 0;     // (t/2) * mu(K)^(5/(4n))
  std::uint32_t side = 1;  // max(1, floor(k_raw)); box side on I

  // Corner of the box: side on I, 1 elsewhere.
  GridPoint corner(const GridParams& p) const;
};

// Finds x in down(K) with at least ceil(n/5) coordinates strictly above
// k_raw. Throws std::runtime_error naming mu(K) and k_raw if rounding edge
// cases void the guarantee (the counting argument rules this out for the
// real-valued statement).
BoxWitness find_box_witness(const GridSet& K);

// Builds T subseteq K with |T| = prod x_i and down(T) = [x_1] x ... x [x_n].
// Requires x in down(K). The result is postcondition-checked by running down
// on it; ties are broken toward the smallest coordinate values.
GridSet extract_T(const GridSet& K, const GridPoint& x);

struct Perimeter {
  bool exact = true;
  __int128 num = 0;          // exact mode: sum over x of f_num(|B cap S|)
  std::uint64_t count = 0;   // grid points (exact) or samples (Monte Carlo)
  double value = 0;
  double std_error = 0;      // 0 in exact mode
};

struct PerimeterOptions {
  std::uint64_t exhaustive_limit = 1ull << 20;  // switch to sampling above
  std::uint64_t mc_samples = 100000;
  std::uint64_t seed = 0;
};

// E_{x uniform}[ f(|B_{I,M}(x) cap S|) ]; exact average over all t^n points
// in exhaustive mode, Monte Carlo with reported standard error above the
// size limit.
Perimeter perimeter(const GridSet& S, const ConcaveTable& f, const CoordSet& I,
                    std::uint64_t M, const PerimeterOptions& opts = {});

struct ListLemmaResult {
  Perimeter compressed;  // E[f(|B cap down(K)|)]
  Perimeter original;    // E[f(|B cap K|)]
  bool holds = false;    // compressed <= original (exact integer compare)
  bool equal = false;
};

ListLemmaResult verify_list_lemma(const GridSet& K, const CoordSet& I,
                                  std::uint64_t M, const ConcaveTable& f);

struct ConjectureReport {
  std::uint32_t t = 0, n = 0, k = 0;
  std::uint64_t M = 0;
  std::string f_name;
  bool refused = false;
  std::string refusal;          // names the subset count or limit
  std::uint64_t subset_count = 0;
  std::uint64_t sets_checked = 0;
  bool box_minimizes = false;
  double box_value = 0;
  double min_value = 0;
  __int128 box_num = 0;
  __int128 min_num = 0;
  std::uint64_t ties = 0;       // sets achieving the minimum
  std::optional<std::vector<std::uint64_t>> argmin_codes;  // a counterexample
};

// Minimum of the generalized perimeter over every |S| = k^n against the box
// [k]^n. Enumerates subsets as 64-bit masks (requires t^n <= 64); refuses
// with the subset count when C(t^n, k^n) exceeds the budget.
ConjectureReport verify_conjecture(std::uint32_t t, std::uint32_t n,
                                   std::uint32_t k, std::uint64_t M,
                                   const ConcaveTable& f,
                                   std::uint64_t budget = 10000000);

struct PipelineOptions {
  std::uint64_t exhaustive_limit = 1ull << 20;
  std::uint64_t mc_samples = 100000;
  std::uint64_t seed = 0;
};

struct PipelineResult {
  BoxWitness witness;
  GridSet T;
  double M_raw = 0;          // n*k_raw/(20t)
  std::uint64_t M = 0;       // floor(M_raw)
  bool stats_refused = true;
  std::string refusal;       // set when M_raw < 1
  // Statistics (only when M >= 1):
  bool exhaustive = false;
  std::uint64_t samples = 0;
  double pr_empty = 0, pr_empty_bound = 0;      // <= 5^-M
  double e_log = 0, e_log_bound = 0;            // >= (n/5-M)log k - n log k/5^M
  bool holds_empty = false, holds_log = false;
};

// Structural stage always runs: down, witness, extract_T (self-checked).
// The theorem-statistics stage needs floor(M_raw) >= 1 and is otherwise
// refused with a reason naming n, k_raw and M_raw.
PipelineResult isoperimetry_pipeline(const GridSet& S,
                                     const PipelineOptions& opts = {});

}  // namespace disjlab
