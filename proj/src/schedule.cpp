#include "disjlab/schedule.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace disjlab {

double iterated_log(int r, double x) {
  if (r < 0) throw std::invalid_argument("iterated_log: negative r");
  double v = x;
  for (int i = 0; i < r; ++i) {
    if (v <= 0)
      throw std::domain_error("iterated_log: nonpositive intermediate at step " +
                              std::to_string(i));
    v = std::log2(v);
  }
  return v;
}

double iterated_exp(int r, double x) {
  if (r < 0) throw std::invalid_argument("iterated_exp: negative r");
  double v = x;
  for (int i = 0; i < r; ++i) v = std::exp2(v);
  return v;
}

int log_star(double x) {
  if (x <= 0) throw std::domain_error("log_star: nonpositive argument");
  int r = 0;
  double v = x;
  while (v >= 2) {
    v = std::log2(v);
    ++r;
  }
  return r;
}

std::uint64_t message_bits_for_l(std::uint64_t k, double e) {
  if (k == 0 || e < 0) throw std::invalid_argument("message width: bad l");
  const bool k_pow2 = std::has_single_bit(k);
  const bool e_integral = (e == std::floor(e));
  const auto log2k_floor = static_cast<std::uint64_t>(std::bit_width(k) - 1);
  if (k_pow2 && e_integral)
    return log2k_floor + static_cast<std::uint64_t>(e) + 1;
  const double v = std::log2(static_cast<double>(k)) + e;
  const double fl = std::floor(v);
  if (v == fl) return static_cast<std::uint64_t>(fl) + 1;  // tie goes up
  return static_cast<std::uint64_t>(std::ceil(v));
}

Schedule compute_schedule(std::uint64_t k, int r, double c) {
  if (k < 4) throw std::invalid_argument("schedule: k must be at least 4");
  if (c <= 1) throw std::invalid_argument("schedule: c must exceed 1");
  const int ls = log_star(static_cast<double>(k));
  if (r < 1 || r > ls)
    throw std::invalid_argument("schedule: r must lie in [1, log*(k) = " +
                                std::to_string(ls) + "]");

  Schedule s;
  s.k = k;
  s.r = r;
  s.c = c;
  s.u = (c + 1) * iterated_log(r, static_cast<double>(k));

  s.k_raw.assign(r + 2, 0.0);
  s.k_raw[0] = s.k_raw[1] = static_cast<double>(k);
  for (int i = 2; i <= r; ++i)
    s.k_raw[i] = static_cast<double>(k) /
                 (std::exp2(static_cast<double>(i - 4)) * iterated_exp(i - 1, s.u));
  s.k_raw[r + 1] = 0.0;

  s.rounds.resize(r);
  for (int i = 1; i <= r; ++i) {
    RoundParams& rp = s.rounds[i - 1];
    rp.log2_p = -iterated_exp(i - 1, s.u);  // p_i = 1/exp^(i)(u) = 2^-exp^(i-1)(u)
    rp.exponent = (i == 1) ? static_cast<double>(k) * s.u
                           : static_cast<double>(k) / std::exp2(static_cast<double>(i - 4));
    rp.log2_l = std::log2(static_cast<double>(k)) + rp.exponent;
    rp.l_double = static_cast<double>(k) * std::exp2(rp.exponent);  // may be +inf
    rp.bits = message_bits_for_l(k, rp.exponent);
    rp.k_threshold = s.k_raw[i];
  }

  // First round whose analysis threshold drops below 4*sqrt(k) gets boosted
  // parameters and becomes the last round.
  const double gate = 4.0 * std::sqrt(static_cast<double>(k));
  s.effective_rounds = r;
  for (int i = 1; i <= r; ++i) {
    if (s.k_raw[i] < gate) {
      RoundParams& rp = s.rounds[i - 1];
      rp.log2_p = -2.0 * std::sqrt(static_cast<double>(k));
      rp.exponent = 8.0 * static_cast<double>(k);
      rp.log2_l = std::log2(static_cast<double>(k)) + rp.exponent;
      rp.l_double = std::numeric_limits<double>::infinity();
      rp.bits = message_bits_for_l(k, rp.exponent);
      rp.k_threshold = gate;
      s.adjusted_round = i;
      s.effective_rounds = i;
      break;
    }
  }
  return s;
}

std::uint64_t Schedule::total_bits() const {
  std::uint64_t b = 0;
  for (int i = 1; i <= effective_rounds; ++i) b += round(i).bits;
  return b;
}

double Schedule::error_bound() const {
  const double kd = static_cast<double>(k);
  double bound = effective_rounds * std::exp(-kd);
  if (adjusted_round)
    bound += kd * std::exp2(-2.0 * std::sqrt(kd));
  else
    bound += kd / iterated_exp(r, u);  // may be 0 after underflow
  for (int i = 2; i <= effective_rounds; ++i)
    bound += std::exp2(-round(i).k_threshold / 4.0);
  return bound;
}

}  // namespace disjlab
