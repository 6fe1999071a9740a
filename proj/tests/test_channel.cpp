#include "doctest.h"

#include <cmath>

#include "disjlab/channel.hpp"

using namespace disjlab;

TEST_CASE("labeled streams: identical on both sides, distinct across labels") {
  SharedRandomness a{12345}, b{12345};
  RandomStream s1 = a.stream("round", 1);
  RandomStream s2 = b.stream("round", 1);
  for (int i = 0; i < 32; ++i) CHECK(s1.next_u64() == s2.next_u64());

  RandomStream s3 = a.stream("round", 2);
  RandomStream s4 = a.stream("thin", 1);
  bool all_same = true;
  RandomStream s5 = a.stream("round", 1);
  for (int i = 0; i < 8; ++i) {
    const auto v = s5.next_u64();
    all_same &= (v == s3.next_u64()) && (v == s4.next_u64());
  }
  CHECK_FALSE(all_same);
}

TEST_CASE("transcript bookkeeping") {
  Channel ch(7, "toy", {{"x", 1}});
  ch.transcript.send(Party::A, 5, MessageKind::index);
  ch.transcript.send(Party::B, 3, MessageKind::error_signal);
  ch.transcript.set_output(true);
  CHECK(ch.transcript.total_bits() == 8);
  CHECK(ch.transcript.rounds_used == 2);
  CHECK(ch.transcript.max_message_bits() == 5);
  CHECK_THROWS_AS(ch.transcript.set_output(false), std::logic_error);
  CHECK_THROWS_AS(ch.transcript.send(Party::A, 0, MessageKind::raw),
                  std::logic_error);

  const auto j = ch.transcript.to_json();
  CHECK(j["seed"] == 7);
  CHECK(j["total_bits"] == 8);
  CHECK(j["rounds"].size() == 2);
  CHECK(j["rounds"][0]["sender"] == "A");
  CHECK(j["rounds"][1]["kind"] == "error-signal");
  CHECK(j["output"] == "intersecting");

  // a zero-round constant-output protocol leaves an empty message list
  Channel zero(9, "constant", nlohmann::json::object());
  zero.transcript.set_output(false);
  CHECK(zero.transcript.messages.empty());
  CHECK(zero.transcript.to_json()["rounds"].size() == 0);
}

namespace {

// Exact rational oracle for (1-1/t)^n at small n: compares
// num = (t-1)^n, den = t^n against p with cross-multiplied integers.
void check_small_exact(std::uint64_t n) {
  const std::uint64_t t = 4 * n;
  unsigned __int128 num = 1, den = 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    num *= (t - 1);
    den *= t;
  }
  const double exact = static_cast<double>(num) / static_cast<double>(den);
  const ZeroRoundBaseline r = zero_round_baseline_error(n);
  CHECK(std::abs(r.pr_exists_equal_zero - exact) <= 1e-15);
}

}  // namespace

TEST_CASE("zero-round baseline values") {
  const ZeroRoundBaseline r1 = zero_round_baseline_error(1);
  CHECK(r1.pr_exists_equal_zero == 0.75);  // exact boundary case
  CHECK(r1.best_constant_error == 0.25);

  for (std::uint64_t n : {2ull, 3ull, 4ull, 7ull, 10ull, 15ull})
    check_small_exact(n);

  const ZeroRoundBaseline r1000 = zero_round_baseline_error(1000);
  CHECK(r1000.pr_exists_equal_zero > 0.7786);
  CHECK(r1000.pr_exists_equal_zero < 0.7789);

  // monotone toward e^-1/4, never reaching it
  const double limit = std::exp(-0.25);
  double prev = 0;
  for (std::uint64_t n : {1ull, 10ull, 100ull, 10000ull, 1000000ull}) {
    const ZeroRoundBaseline r = zero_round_baseline_error(n);
    CHECK(r.pr_exists_equal_zero > prev);
    CHECK(r.pr_exists_equal_zero < limit);
    CHECK(r.best_constant_error >= 0.22);
    prev = r.pr_exists_equal_zero;
  }
  CHECK_THROWS_AS((void)zero_round_baseline_error(0), std::invalid_argument);
}
