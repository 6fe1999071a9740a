#include "disjlab/disjointness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace disjlab {

KSet KSet::of(std::uint64_t universe, std::vector<std::uint32_t> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  if (!elems.empty() && (elems.front() < 1 || elems.back() > universe))
    throw std::invalid_argument("kset: element outside [1, m]");
  return KSet{universe, std::move(elems)};
}

bool KSet::contains(std::uint32_t e) const {
  return std::binary_search(elems.begin(), elems.end(), e);
}

KSet intersect(const KSet& a, const KSet& b) {
  std::vector<std::uint32_t> out;
  std::set_intersection(a.elems.begin(), a.elems.end(), b.elems.begin(),
                        b.elems.end(), std::back_inserter(out));
  return KSet{a.universe, std::move(out)};
}

bool intersects(const KSet& a, const KSet& b) {
  auto i = a.elems.begin();
  auto j = b.elems.begin();
  while (i != a.elems.end() && j != b.elems.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

KSet random_kset(std::uint64_t m, std::uint32_t k, RandomStream& rng) {
  if (k > m) throw std::invalid_argument("random_kset: k exceeds m");
  // Floyd's sampling: uniform over k-subsets.
  std::unordered_set<std::uint32_t> chosen;
  chosen.reserve(k * 2);
  for (std::uint64_t j = m - k + 1; j <= m; ++j) {
    const auto r = static_cast<std::uint32_t>(rng.uniform_below(j) + 1);
    if (!chosen.insert(r).second) chosen.insert(static_cast<std::uint32_t>(j));
  }
  return KSet::of(m, {chosen.begin(), chosen.end()});
}

std::pair<KSet, KSet> random_disjoint_pair(std::uint64_t m, std::uint32_t k,
                                           RandomStream& rng) {
  if (m < 2ull * k)
    throw std::invalid_argument("disjoint pair needs m >= 2k");
  KSet a = random_kset(m, k, rng);
  std::vector<std::uint32_t> b;
  b.reserve(k);
  while (b.size() < k) {
    const auto e = static_cast<std::uint32_t>(rng.uniform_below(m) + 1);
    if (!a.contains(e) && !std::count(b.begin(), b.end(), e)) b.push_back(e);
  }
  return {std::move(a), KSet::of(m, std::move(b))};
}

std::pair<KSet, KSet> random_intersecting_pair(std::uint64_t m, std::uint32_t k,
                                               RandomStream& rng) {
  if (k < 1) throw std::invalid_argument("intersecting pair needs k >= 1");
  KSet a = random_kset(m, k, rng);
  KSet b = random_kset(m, k, rng);
  if (!intersects(a, b)) {
    // Force one shared element, replacing a random member of b.
    const auto shared = a.elems[rng.uniform_below(a.size())];
    b.elems[rng.uniform_below(b.size())] = shared;
    b = KSet::of(m, std::move(b.elems));
  }
  return {std::move(a), std::move(b)};
}

double round_error_probability(double log2_p, std::uint64_t s,
                               const RoundParams& rp) {
  if (s == 0) return 0.0;  // every candidate contains the empty set
  const double lx = static_cast<double>(s) * log2_p;  // log2 of p^s
  const double x = std::exp2(lx);
  if (std::isfinite(rp.l_double) && x > 1e-17) {
    // (1-x)^l = exp(l*log1p(-x)); product may sink to -inf -> 0, correctly.
    return std::exp(rp.l_double * std::log1p(-x));
  }
  // Here either l or 1/x exceeds double range. (1-x)^l = exp(-l*x*c) with
  // c = -log1p(-x)/x in [1, 1+x); l*x = 2^(log2_l + lx) evaluated directly.
  const double c = (x > 0) ? -std::log1p(-x) / x : 1.0;
  const double y = std::exp2(rp.log2_l + lx) * c;  // may overflow -> exp -> 0
  return std::exp(-y);
}

RoundOutcome round_step_virtual(const KSet& sender, const KSet& receiver,
                                const RoundParams& rp, RandomStream& rng) {
  if (!(rp.log2_p < 0))
    throw std::invalid_argument("round step: p must lie in (0,1)");
  RoundOutcome out;
  out.bits = rp.bits;
  const double q = round_error_probability(rp.log2_p, sender.size(), rp);
  if (rng.bernoulli(q)) {
    out.error_signal = true;
    out.new_receiver_set = receiver;
    return out;
  }
  // Conditioned on some candidate containing the sender's set, the
  // receiver's elements inside it survive exactly and the rest thin at p.
  std::vector<std::uint32_t> kept;
  kept.reserve(receiver.size());
  for (std::uint32_t e : receiver.elems) {
    if (sender.contains(e))
      kept.push_back(e);
    else if (rng.bernoulli_log2(rp.log2_p))
      kept.push_back(e);
  }
  out.new_receiver_set = KSet::of(receiver.universe, std::move(kept));
  return out;
}

RoundOutcome round_step_literal(const KSet& sender, const KSet& receiver,
                                double p, std::uint64_t l, RandomStream& rng) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("round step: p must lie in (0,1)");
  if (l < 1) throw std::invalid_argument("round step: l must be positive");
  const std::uint64_t m = sender.universe;
  RoundOutcome out;
  out.bits = std::bit_width(l);  // == ceil(log2(l+1))
  std::vector<char> member(m + 1, 0);
  for (std::uint64_t j = 0; j < l; ++j) {
    for (std::uint64_t e = 1; e <= m; ++e) member[e] = rng.bernoulli(p);
    bool contains = true;
    for (std::uint32_t e : sender.elems) contains &= (member[e] != 0);
    if (contains) {
      std::vector<std::uint32_t> kept;
      for (std::uint32_t e : receiver.elems)
        if (member[e]) kept.push_back(e);
      out.new_receiver_set = KSet::of(receiver.universe, std::move(kept));
      return out;
    }
  }
  out.error_signal = true;
  out.new_receiver_set = receiver;
  return out;
}

RunResult run_sparse_disjointness(const KSet& input_a, const KSet& input_b,
                                  const Schedule& schedule, std::uint64_t seed,
                                  bool early_stop) {
  if (input_a.universe != input_b.universe)
    throw std::invalid_argument("inputs live in different universes");
  if (input_a.size() > schedule.k || input_b.size() > schedule.k)
    throw std::invalid_argument("input exceeds the schedule's k");

  Channel ch(seed, "sparse-disjointness",
             {{"k", schedule.k},
              {"r", schedule.r},
              {"c", schedule.c},
              {"m", input_a.universe},
              {"early_stop", early_stop}});
  const KSet ground = intersect(input_a, input_b);

  KSet prev = input_a;  // receiver's current set going into round i
  KSet curr = input_b;  // sender's current set in round i
  Party sender = Party::B;
  bool error = false;
  bool empty_stop = false;
  for (int i = 1; i <= schedule.effective_rounds; ++i) {
    if (early_stop && curr.empty()) {
      empty_stop = true;
      break;
    }
    RandomStream rng = ch.stream("round", static_cast<std::uint64_t>(i));
    RoundOutcome out = round_step_virtual(curr, prev, schedule.round(i), rng);
    ch.transcript.send(sender, out.bits,
                       out.error_signal ? MessageKind::error_signal
                                        : MessageKind::index);
    if (out.error_signal) {
      error = true;
      break;
    }
    if (!(intersect(out.new_receiver_set, curr) == ground))
      throw std::logic_error("running-intersection invariant violated");
    prev = std::move(curr);
    curr = std::move(out.new_receiver_set);
    sender = other(sender);
  }
  const bool disjoint = !error && (empty_stop || curr.empty());
  ch.transcript.set_output(!disjoint);
  return {!disjoint, std::move(ch.transcript)};
}

RunResult folklore_one_round(const KSet& input_a, const KSet& input_b,
                             std::uint32_t hash_bits, std::uint64_t seed) {
  if (hash_bits < 1) throw std::invalid_argument("folklore: hash_bits >= 1");
  if (input_a.universe != input_b.universe)
    throw std::invalid_argument("inputs live in different universes");
  Channel ch(seed, "folklore-one-round",
             {{"hash_bits", hash_bits}, {"m", input_a.universe}});
  const std::uint64_t hseed = ch.shared.derive("element-hash", 0);
  const std::uint32_t eff = std::min<std::uint32_t>(hash_bits, 64);
  auto h = [&](std::uint32_t e) {
    const std::uint64_t v = mix64(hseed ^ (static_cast<std::uint64_t>(e) *
                                           0x9e3779b97f4a7c15ULL));
    return eff == 64 ? v : (v & ((1ull << eff) - 1));
  };
  // An empty list still costs one bit of framing.
  const std::uint64_t bits = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(input_a.size()) * hash_bits);
  ch.transcript.send(Party::A, bits, MessageKind::raw);

  std::unordered_set<std::uint64_t> sent;
  sent.reserve(input_a.size() * 2);
  for (std::uint32_t e : input_a.elems) sent.insert(h(e));
  bool intersecting = false;
  for (std::uint32_t e : input_b.elems)
    if (sent.count(h(e))) {
      intersecting = true;
      break;
    }
  ch.transcript.set_output(intersecting);
  return {intersecting, std::move(ch.transcript)};
}

RunResult hw_baseline(const KSet& input_a, const KSet& input_b,
                      std::uint64_t seed) {
  if (input_a.universe != input_b.universe)
    throw std::invalid_argument("inputs live in different universes");
  const std::uint64_t k =
      std::max<std::uint64_t>({input_a.size(), input_b.size(), 1});
  const int ceil_log2_k =
      (k <= 1) ? 0 : static_cast<int>(std::bit_width(k - 1));
  const int round_budget = 2 * (ceil_log2_k + 5);

  Channel ch(seed, "hw-baseline",
             {{"m", input_a.universe},
              {"k", k},
              {"round_budget", round_budget}});
  KSet prev = input_a;
  KSet curr = input_b;
  Party sender = Party::B;
  bool empty_seen = false;
  for (int i = 1; i <= round_budget; ++i) {
    if (curr.empty()) {
      empty_seen = true;
      break;
    }
    RandomStream rng = ch.stream("round", static_cast<std::uint64_t>(i));
    // Index of the first candidate containing the sender's set: geometric
    // with success 2^-s, sampled by inverse transform in log space. The
    // message is its Elias-gamma code: 2*floor(log2 J) + 1 bits.
    const std::uint64_t s = curr.size();
    const double a = rng.exponential();
    double log2_B;  // log2(-ln(1 - 2^-s))
    if (s <= 500) {
      const double qq = std::exp2(-static_cast<double>(s));
      log2_B = std::log2(-std::log1p(-qq));
    } else {
      log2_B = -static_cast<double>(s);
    }
    const double log2_J = std::log2(a) - log2_B;
    std::uint64_t lg;
    if (log2_J < 52) {
      const double J = std::max(1.0, std::ceil(std::exp2(log2_J)));
      lg = static_cast<std::uint64_t>(
               std::bit_width(static_cast<std::uint64_t>(J))) - 1;
    } else {
      lg = static_cast<std::uint64_t>(std::floor(log2_J));
    }
    ch.transcript.send(sender, 2 * lg + 1, MessageKind::index);

    std::vector<std::uint32_t> kept;
    kept.reserve(prev.size());
    for (std::uint32_t e : prev.elems)
      if (curr.contains(e) || rng.bernoulli(0.5)) kept.push_back(e);
    KSet next = KSet::of(prev.universe, std::move(kept));
    prev = std::move(curr);
    curr = std::move(next);
    sender = other(sender);
  }
  const bool disjoint = empty_seen || curr.empty();
  ch.transcript.set_output(!disjoint);
  return {!disjoint, std::move(ch.transcript)};
}

std::pair<KSet, KSet> ee_to_disjointness(const GridParams& p, const GridPoint& x,
                                         const GridPoint& y) {
  validate_point(p, x);
  validate_point(p, y);
  const std::uint64_t m = static_cast<std::uint64_t>(p.t) * p.n;
  if (m > std::numeric_limits<std::uint32_t>::max())
    throw std::overflow_error("ee reduction: t*n exceeds element width");
  std::vector<std::uint32_t> a(p.n), b(p.n);
  for (std::uint32_t i = 0; i < p.n; ++i) {
    a[i] = static_cast<std::uint32_t>(i * p.t + x[i]);
    b[i] = static_cast<std::uint32_t>(i * p.t + y[i]);
  }
  return {KSet::of(m, std::move(a)), KSet::of(m, std::move(b))};
}

}  // namespace disjlab
