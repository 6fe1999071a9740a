#pragma once
// Iterated base-2 logarithm/exponential, log*, and the per-round parameter
// schedule of the multi-round disjointness protocol. Candidate-set counts
// l_i = k*2^(e_i) are astronomically large, so every round carries its
// parameters in log2 space together with the exact message width
// ceil(log2(l_i + 1)).

#include <cstdint>
#include <optional>
#include <vector>

namespace disjlab {

// log^(r) x: r-fold base-2 log. Throws std::domain_error when an
// intermediate value becomes nonpositive (the next log is undefined).
double iterated_log(int r, double x);
// exp^(r) x with exp(x) = 2^x; may overflow to +inf.
double iterated_exp(int r, double x);
// Smallest r with log^(r) x < 2.
int log_star(double x);

struct RoundParams {
  double log2_p = 0;    // log2 of the per-element containment probability
  double exponent = 0;  // e: the candidate count is l = k * 2^e
  double log2_l = 0;    // log2 k + e
  double l_double = 0;  // k * 2^e as a double, +inf when unrepresentable
  std::uint64_t bits = 0;      // ceil(log2(l + 1)): exact message width
  double k_threshold = 0;      // analysis threshold for this round
};

struct Schedule {
  std::uint64_t k = 0;
  int r = 0;
  double c = 2.0;
  double u = 0;                       // (c+1) * log^(r) k
  int effective_rounds = 0;           // r, or the adjusted round j
  std::optional<int> adjusted_round;  // 1-based, set when some k_i < 4*sqrt(k)
  std::vector<RoundParams> rounds;    // rounds[i-1] holds round i
  std::vector<double> k_raw;          // k_0 .. k_{r+1} before adjustment

  const RoundParams& round(int i) const { return rounds[i - 1]; }
  std::uint64_t total_bits() const;

  // Evaluated error bound for disjoint inputs:
  //   r_eff*e^-k + (last-round leftover) + sum_{i=2..r_eff} 2^(-k_i/4),
  // with the leftover k*2^(-2 sqrt k) when adjusted and k/exp^(r)(u)
  // otherwise, and k_j replaced by 4*sqrt(k) in the adjusted round.
  double error_bound() const;
};

// Width of a message announcing one of l = k*2^e candidates plus a reserved
// error signal: ceil(log2(l+1)). Exact integer arithmetic when k is a power
// of two and e integral (then l is exactly a power of two); otherwise the
// width comes from double arithmetic and a tie at an exact integer (only
// reachable through rounding) is resolved upward.
std::uint64_t message_bits_for_l(std::uint64_t k, double e);

// Requires k >= 4, c > 1 and 1 <= r <= log*(k).
Schedule compute_schedule(std::uint64_t k, int r, double c = 2.0);

}  // namespace disjlab
