#pragma once
// Sparse set disjointness protocols over the simulated channel: the
// multi-round biased-set protocol with its exact schedule, the classic
// halving baseline, the folklore one-round hashing protocol, and the
// exists-equal reduction.
//
// Round i's sender holds the set updated in round i-2; the holder of the
// second input sends first. On round i the parties conceptually share l_i
// random subsets of [m], each containing every element independently with
// probability p_i; the sender announces the index of the first one
// containing its current set (ceil(log2(l_i+1)) bits, index 0 reserved for
// the error signal) and the receiver intersects its own set with it.
//
// l_i is astronomically large, so the default sampler is "virtual": the
// error event fires with probability (1-p^|S|)^l and, conditioned on some
// candidate containing S, the receiver's elements outside S survive
// independently with probability p. A literal sampler that materializes the
// candidate sets exists for toy scales; the two are distribution-identical
// (tests verify this exactly).

#include <cstdint>
#include <optional>
#include <vector>

#include "disjlab/channel.hpp"
#include "disjlab/grid.hpp"
#include "disjlab/schedule.hpp"

namespace disjlab {

// Sorted duplicate-free subset of [1, m].
struct KSet {
  std::uint64_t universe = 0;
  std::vector<std::uint32_t> elems;

  static KSet of(std::uint64_t universe, std::vector<std::uint32_t> elems);
  std::size_t size() const { return elems.size(); }
  bool empty() const { return elems.empty(); }
  bool contains(std::uint32_t e) const;
  bool operator==(const KSet&) const = default;
};

KSet intersect(const KSet& a, const KSet& b);
bool intersects(const KSet& a, const KSet& b);

// Uniform k-subset of [1, m] (Floyd's algorithm).
KSet random_kset(std::uint64_t m, std::uint32_t k, RandomStream& rng);
// Pair with empty intersection (requires m >= 2k) / with >= 1 shared element.
std::pair<KSet, KSet> random_disjoint_pair(std::uint64_t m, std::uint32_t k,
                                           RandomStream& rng);
std::pair<KSet, KSet> random_intersecting_pair(std::uint64_t m, std::uint32_t k,
                                               RandomStream& rng);

struct RoundOutcome {
  bool error_signal = false;
  std::uint64_t bits = 0;  // ceil(log2(l+1))
  KSet new_receiver_set;   // receiver's set when no error was signalled
};

// Virtual sampler; p and l arrive via the schedule's RoundParams.
// The no-candidate probability (1-p^s)^l is evaluated with log1p/expm1-style
// stable formulas (see round_error_probability).
RoundOutcome round_step_virtual(const KSet& sender, const KSet& receiver,
                                const RoundParams& rp, RandomStream& rng);

// Literal sampler: actually draws l subsets of [m], each element kept with
// probability p, and scans for the first containing the sender's set.
// Requires p in (0,1); meant for m*l small.
RoundOutcome round_step_literal(const KSet& sender, const KSet& receiver,
                                double p, std::uint64_t l, RandomStream& rng);

// (1 - p^s)^l for p = 2^log2_p, candidate count l = k*2^(reported by rp):
// exact-ish two-regime evaluation, stable for huge l and tiny p^s.
double round_error_probability(double log2_p, std::uint64_t s,
                               const RoundParams& rp);

struct RunResult {
  bool intersecting = false;
  Transcript transcript;
};

// The multi-round protocol. One-sided: intersecting inputs always answer
// "intersecting". early_stop ends the run (and saves the remaining rounds)
// once a current set is empty, which is sound because the running
// intersection never changes.
RunResult run_sparse_disjointness(const KSet& input_a, const KSet& input_b,
                                  const Schedule& schedule, std::uint64_t seed,
                                  bool early_stop = true);

// One round: A sends a hash of each of its elements; B answers
// "intersecting" iff one of its own hashes occurs among them. False
// intersections occur with probability <= |A||B|*2^-hash_bits.
RunResult folklore_one_round(const KSet& input_a, const KSet& input_b,
                             std::uint32_t hash_bits, std::uint64_t seed);

// Halving baseline: p = 1/2 every round, the first containing-set index is
// geometric and sent in Elias-gamma coding (expected O(|S|) bits). Disjoint
// is declared on emptiness, intersecting when 2*(ceil(log2 k)+5) rounds pass
// without it; the slack of 5 rounds puts the disjoint-input error below
// 2k*2^-(ceil(log2 k)+5) (0.0625 at k=256).
RunResult hw_baseline(const KSet& input_a, const KSet& input_b,
                      std::uint64_t seed);

// Exists-equal as sparse disjointness: x in [t]^n maps to
// {(i-1)t + x_i : i in [n]} inside [t*n]; the images intersect iff some
// coordinate agrees.
std::pair<KSet, KSet> ee_to_disjointness(const GridParams& p, const GridPoint& x,
                                         const GridPoint& y);

}  // namespace disjlab
