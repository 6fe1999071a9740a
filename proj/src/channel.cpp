#include "disjlab/channel.hpp"

#include <cmath>

namespace disjlab {

const char* message_kind_name(MessageKind k) {
  switch (k) {
    case MessageKind::index: return "index";
    case MessageKind::error_signal: return "error-signal";
    case MessageKind::raw: return "raw";
  }
  return "?";
}

nlohmann::json Transcript::to_json() const {
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& m : messages)
    rounds.push_back({{"sender", party_name(m.sender)},
                      {"bits", m.bits},
                      {"kind", message_kind_name(m.kind)}});
  return nlohmann::json{{"seed", seed},
                        {"protocol", protocol},
                        {"params", params},
                        {"rounds", rounds},
                        {"output", intersecting() ? "intersecting" : "disjoint"},
                        {"total_bits", total_bits()}};
}

ZeroRoundBaseline zero_round_baseline_error(std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("baseline: n must be positive");
  const long double t = 4.0L * static_cast<long double>(n);
  const long double base = (t - 1.0L) / t;
  long double p;
  if (n <= 64) {
    // Direct product; keeps the n = 1 boundary value 3/4 exact.
    p = 1.0L;
    for (std::uint64_t i = 0; i < n; ++i) p *= base;
  } else {
    p = std::exp2(static_cast<long double>(n) * std::log2(base));
  }
  ZeroRoundBaseline r;
  r.pr_exists_equal_zero = static_cast<double>(p);
  r.best_constant_error = static_cast<double>(p < 0.5L ? p : 1.0L - p);
  return r;
}

}  // namespace disjlab
