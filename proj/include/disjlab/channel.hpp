#pragma once
// Simulated two-party channel: message/transcript records with exact bit
// accounting, the shared-randomness handle both parties read, and the
// zero-round constant-output baseline.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "disjlab/rng.hpp"

namespace disjlab {

enum class Party : std::uint8_t { A, B };
inline Party other(Party p) { return p == Party::A ? Party::B : Party::A; }
inline const char* party_name(Party p) { return p == Party::A ? "A" : "B"; }

enum class MessageKind : std::uint8_t { index, error_signal, raw };
const char* message_kind_name(MessageKind k);

struct Message {
  Party sender = Party::A;
  std::uint64_t bits = 0;  // >= 1 for any sent message
  MessageKind kind = MessageKind::index;
};

struct Transcript {
  std::uint64_t seed = 0;
  std::string protocol;
  nlohmann::json params;  // echo of the protocol parameters
  std::vector<Message> messages;
  int rounds_used = 0;

  void send(Party p, std::uint64_t bits, MessageKind kind) {
    if (bits < 1) throw std::logic_error("transcript: zero-bit message");
    messages.push_back({p, bits, kind});
    ++rounds_used;
  }
  void set_output(bool intersecting) {
    if (output.has_value()) throw std::logic_error("transcript: output set twice");
    output = intersecting;
  }
  bool intersecting() const { return output.value(); }
  std::uint64_t total_bits() const {
    std::uint64_t t = 0;
    for (const auto& m : messages) t += m.bits;
    return t;
  }
  std::uint64_t max_message_bits() const {
    std::uint64_t t = 0;
    for (const auto& m : messages) t = std::max(t, m.bits);
    return t;
  }

  nlohmann::json to_json() const;

  std::optional<bool> output;  // present exactly once per run
};

// Everything a protocol body needs: the shared random source and the
// transcript it writes into.
struct Channel {
  SharedRandomness shared;
  Transcript transcript;

  explicit Channel(std::uint64_t seed, std::string protocol, nlohmann::json params)
      : shared{seed} {
    transcript.seed = seed;
    transcript.protocol = std::move(protocol);
    transcript.params = std::move(params);
  }
  RandomStream stream(std::string_view label, std::uint64_t index = 0) const {
    return shared.stream(label, index);
  }
};

// Best constant-output error against uniform pairs in [4n]^n:
// Pr[no coordinate agrees] = (1-1/t)^n with t = 4n, best constant errs
// min(p, 1-p). Evaluated in long double; absolute error is below 1e-15
// while every decision margin in the supported range n <= 10^6 is at least
// 2.4e-8 (tightest: the strict upper bound e^(-1/4)). The boundary case
// n = 1 (p = 3/4) is exactly representable and exactly computed.
struct ZeroRoundBaseline {
  double pr_exists_equal_zero = 0;
  double best_constant_error = 0;
};
ZeroRoundBaseline zero_round_baseline_error(std::uint64_t n);

}  // namespace disjlab
