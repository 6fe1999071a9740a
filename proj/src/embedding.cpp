#include "disjlab/embedding.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "disjlab/kernels.hpp"
#include "disjlab/parallel.hpp"

namespace disjlab {

unsigned default_jobs() {
  if (const char* env = std::getenv("DISJLAB_JOBS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

EmbeddingParams EmbeddingParams::make(std::uint32_t n, std::uint32_t box_side,
                                      std::uint32_t R) {
  if (n < 3) throw std::invalid_argument("embedding: n must be at least 3");
  if (R < 1) throw std::invalid_argument("embedding: R must be at least 1");
  EmbeddingParams p;
  p.n = n;
  p.t = 4 * n;
  if (p.t > 0xffffu)
    throw std::invalid_argument("embedding: 4n exceeds the coordinate width");
  if (box_side < 1 || box_side >= p.t)
    throw std::invalid_argument("embedding: box side must lie in [1, t)");
  p.box_side = box_side;
  if (n % 5 != 0) throw std::invalid_argument("embedding: n must divide by 5");

  // M = n*k/(20t); the construction needs it to be a positive multiple of 10.
  const std::uint64_t num = static_cast<std::uint64_t>(n) * box_side;
  const std::uint64_t den = 20ull * p.t;
  if (num % den != 0)
    throw std::invalid_argument("embedding: n*k/(20t) is not an integer");
  const std::uint64_t M = num / den;
  if (M < 2) throw std::invalid_argument("embedding: M must be at least 2");
  if (M % 10 != 0)
    throw std::invalid_argument("embedding: M must be a multiple of 10");
  p.M = static_cast<std::uint32_t>(M);
  p.n_small = p.M / 10;
  p.t_small = 4 * p.n_small;

  if ((2ull * n) % (M * R) != 0)
    throw std::invalid_argument("embedding: 2n/(MR) is not an integer");
  p.m = static_cast<std::uint32_t>(2ull * n / (M * R));
  if (n % (5ull * R) != 0)
    throw std::invalid_argument("embedding: n/(5R) is not an integer");

  const std::uint32_t isize = n / 5;
  p.I.resize(isize);
  for (std::uint32_t i = 0; i < isize; ++i) p.I[i] = i;
  if (static_cast<std::uint64_t>(p.m) * R > isize)
    throw std::invalid_argument("embedding: mR exceeds |I|");
  return p;
}

EmbeddingParams EmbeddingParams::desk_scale() { return make(2000, 1600, 1); }

EmbeddingParams EmbeddingParams::from_json(const nlohmann::json& j) {
  return make(j.at("n").get<std::uint32_t>(),
              j.at("box_side").get<std::uint32_t>(),
              j.value("R", std::uint32_t{1}));
}

nlohmann::json EmbeddingParams::to_json() const {
  return {{"n", n},       {"t", t},         {"M", M},
          {"R", R},       {"n_small", n_small}, {"t_small", t_small},
          {"m", m},       {"box_side", box_side}, {"I_size", I.size()}};
}

bool BoxT::contains(const GridPoint& z) const {
  if (z.size() != n) return false;
  std::size_t q = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const bool in_I = (q < I.size() && I[q] == i);
    if (in_I) {
      if (z[i] > side) return false;
      ++q;
    } else if (z[i] != 1) {
      return false;
    }
  }
  return true;
}

GridPoint sentinel_point(const GridParams& p) {
  return GridPoint(p.n, static_cast<Coord>(p.t));
}

BuildXY build_XY(const GridPoint& u, const GridPoint& v,
                 const EmbeddingParams& P, RandomStream& rng) {
  const GridParams small = P.small();
  validate_point(small, u);
  validate_point(small, v);

  BuildXY out;
  out.X.resize(P.n);
  out.Y.resize(P.n);
  for (auto& c : out.X) c = static_cast<Coord>(rng.uniform_below(P.t) + 1);
  for (auto& c : out.Y) c = static_cast<Coord>(rng.uniform_below(P.t) + 1);

  // Uniform injection of the repeated slots into I (partial Fisher-Yates).
  const std::uint32_t L = P.placed();
  CoordSet pos = P.I;
  for (std::uint32_t j = 0; j < L; ++j) {
    const std::uint64_t swap_at = j + rng.uniform_below(pos.size() - j);
    std::swap(pos[j], pos[swap_at]);
  }
  // Each slot passes through an independent uniform map [t'] -> [t],
  // evaluated lazily: equal arguments share one value, distinct arguments
  // get independent values (which may still collide, as a random map does).
  for (std::uint32_t j = 0; j < L; ++j) {
    const Coord uu = u[j % P.n_small];
    const Coord vv = v[j % P.n_small];
    const std::uint32_t c = pos[j];
    if (uu == vv) {
      const Coord w = static_cast<Coord>(rng.uniform_below(P.t) + 1);
      out.X[c] = w;
      out.Y[c] = w;
    } else {
      out.X[c] = static_cast<Coord>(rng.uniform_below(P.t) + 1);
      out.Y[c] = static_cast<Coord>(rng.uniform_below(P.t) + 1);
    }
  }
  return out;
}

unsigned __int128 nx_box_count(std::uint32_t h, std::uint32_t M,
                               std::uint32_t side, std::uint32_t I_size) {
  if (h < M) return 0;
  auto binom = [](std::uint64_t n, std::uint64_t k) {
    if (k > n) return (unsigned __int128)0;
    if (k > n - k) k = n - k;
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  unsigned __int128 outside = 1;
  for (std::uint32_t q = 0; q < I_size - h; ++q) outside *= side;
  unsigned __int128 total = 0;
  for (std::uint32_t j = M; j <= h; ++j) {
    unsigned __int128 term = binom(h, j);
    for (std::uint32_t q = 0; q < h - j; ++q) term *= (side - 1);
    total += term * outside;
  }
  return total;
}

std::optional<GridPoint> sample_Nx_box(const GridPoint& x, const BoxT& box,
                                       std::uint32_t M, RandomStream& rng) {
  if (x.size() != box.n) throw std::invalid_argument("sample: dimension mismatch");
  // H: coordinates of I where a box member can match x.
  CoordSet H;
  H.reserve(box.I.size());
  for (std::uint32_t i : box.I)
    if (x[i] <= box.side) H.push_back(i);
  const auto h = static_cast<std::uint32_t>(H.size());
  if (h < M) return std::nullopt;

  // Draw the exact match count j with weight C(h,j)(side-1)^(h-j); the
  // side^(|I|-h) factor is common. Log-space weights in long double (64-bit
  // mantissa) with cumulative inversion.
  std::uint32_t j = h;
  if (box.side > 1 && h > M) {
    const long double logd = std::log(static_cast<long double>(box.side - 1));
    std::vector<long double> lw(h - M + 1);
    long double lmax = -std::numeric_limits<long double>::infinity();
    for (std::uint32_t jj = M; jj <= h; ++jj) {
      const long double v = std::lgamma(h + 1.0L) - std::lgamma(jj + 1.0L) -
                            std::lgamma(h - jj + 1.0L) +
                            (h - jj) * logd;
      lw[jj - M] = v;
      lmax = std::max(lmax, v);
    }
    long double total = 0;
    for (auto& v : lw) {
      v = std::exp(v - lmax);
      total += v;
    }
    long double target = static_cast<long double>(rng.next_double53()) * total;
    j = h;  // fall through to the last bucket on accumulated rounding
    for (std::uint32_t jj = M; jj <= h; ++jj) {
      target -= lw[jj - M];
      if (target < 0) {
        j = jj;
        break;
      }
    }
  } else if (box.side == 1) {
    j = h;  // members match exactly where x is 1
  }

  // Positions: j uniform members of H.
  std::vector<std::uint8_t> match_here(h, 0);
  {
    CoordSet idx(h);
    for (std::uint32_t q = 0; q < h; ++q) idx[q] = q;
    for (std::uint32_t q = 0; q < j; ++q) {
      const std::uint64_t swap_at = q + rng.uniform_below(h - q);
      std::swap(idx[q], idx[swap_at]);
      match_here[idx[q]] = 1;
    }
  }

  GridPoint z(box.n, 1);
  std::size_t hq = 0;
  for (std::uint32_t i : box.I) {
    if (hq < H.size() && H[hq] == i) {
      if (match_here[hq]) {
        z[i] = x[i];
      } else {
        // uniform over [side] minus x_i
        auto val = static_cast<Coord>(rng.uniform_below(box.side - 1) + 1);
        if (val >= x[i]) ++val;
        z[i] = val;
      }
      ++hq;
    } else {
      z[i] = static_cast<Coord>(rng.uniform_below(box.side) + 1);
    }
  }
  return z;
}

std::optional<GridPoint> sample_Nx_scan(const GridPoint& x, const GridSet& T,
                                        const CoordSet& I, std::uint32_t M,
                                        RandomStream& rng) {
  std::vector<GridPoint> candidates;
  for (const GridPoint& z : T.points()) {
    std::uint32_t matches = 0;
    for (std::uint32_t i : I) matches += (z[i] == x[i]);
    if (matches >= M) candidates.push_back(z);
  }
  if (candidates.empty()) return std::nullopt;
  return candidates[rng.uniform_below(candidates.size())];
}

namespace {

double uniform_pair_miss_probability(std::uint32_t t, std::uint32_t n) {
  const long double base =
      (static_cast<long double>(t) - 1.0L) / static_cast<long double>(t);
  return static_cast<double>(
      std::exp2(static_cast<long double>(n) * std::log2(base)));
}

GridPoint draw_small_uniform(const GridParams& p, RandomStream& rng) {
  return uniform_point(p, rng);
}

// v agreeing with u in exactly `want` coordinates, uniform otherwise.
GridPoint draw_partner(const GridPoint& u, const GridParams& p,
                       std::uint32_t want, RandomStream& rng) {
  GridPoint v(p.n);
  std::vector<std::uint32_t> idx(p.n);
  for (std::uint32_t i = 0; i < p.n; ++i) idx[i] = i;
  for (std::uint32_t q = 0; q < want; ++q) {
    const std::uint64_t swap_at = q + rng.uniform_below(p.n - q);
    std::swap(idx[q], idx[swap_at]);
  }
  std::vector<std::uint8_t> agree(p.n, 0);
  for (std::uint32_t q = 0; q < want; ++q) agree[idx[q]] = 1;
  for (std::uint32_t i = 0; i < p.n; ++i) {
    if (agree[i]) {
      v[i] = u[i];
    } else {
      auto val = static_cast<Coord>(rng.uniform_below(p.t - 1) + 1);
      if (val >= u[i]) ++val;
      v[i] = val;
    }
  }
  return v;
}

}  // namespace

nlohmann::json EstimatorReport::to_json() const {
  nlohmann::json j{{"case", case_name},
                   {"trials", trials},
                   {"estimate", estimate},
                   {"ci95", ci95},
                   {"paper_bound", paper_bound},
                   {"verdict", pass ? "pass" : "fail"},
                   {"sentinel_draws", sentinel_draws}};
  if (case_name == "match0") {
    j["exact_reference"] = exact_reference;
    j["within_3sigma"] = within_3sigma;
  }
  return j;
}

EstimatorReport estimate_lemma_error(const EmbeddingParams& params, MatchCase c,
                                     std::uint64_t trials, std::uint64_t seed,
                                     unsigned jobs) {
  if (trials < 1) throw std::invalid_argument("estimator: trials >= 1");
  const GridParams big = params.big();
  const GridParams small = params.small();
  const BoxT box = BoxT::of(params);
  const GridPoint sentinel = sentinel_point(big);
  const std::uint64_t need_match =
      static_cast<std::uint64_t>(params.m) * params.R;

  struct Acc {
    std::uint64_t hits = 0;
    std::uint64_t sentinels = 0;
    std::uint64_t match_violations = 0;
  };
  auto per_trial = [&](std::uint64_t trial, Acc& acc) {
    SharedRandomness sr{seed ^ trial};
    RandomStream rng = sr.stream("embed-trial");
    const GridPoint u = draw_small_uniform(small, rng);
    const GridPoint v = (c == MatchCase::match0)
                            ? draw_partner(u, small, 0, rng)
                            : draw_partner(u, small, params.R, rng);
    const BuildXY xy = build_XY(u, v, params, rng);
    if (c == MatchCase::matchR) {
      std::uint64_t got = 0;
      for (std::uint32_t i : params.I) got += (xy.X[i] == xy.Y[i]);
      if (got < need_match) ++acc.match_violations;
    }
    const auto z = sample_Nx_box(xy.X, box, params.M, rng);
    if (!z) ++acc.sentinels;
    const GridPoint& xprime = z ? *z : sentinel;
    const bool ee = exists_equal(xprime, xy.Y);
    acc.hits += (c == MatchCase::match0) ? !ee : ee;
  };
  const Acc acc = run_trials<Acc>(trials, jobs, per_trial, [](Acc& a, Acc& b) {
    a.hits += b.hits;
    a.sentinels += b.sentinels;
    a.match_violations += b.match_violations;
  });
  if (acc.match_violations)
    throw std::logic_error("embedding: match(X_I, Y_I) fell below m*R");

  EstimatorReport rep;
  rep.case_name = (c == MatchCase::match0) ? "match0" : "matchR";
  rep.trials = trials;
  rep.sentinel_draws = acc.sentinels;
  rep.estimate = static_cast<double>(acc.hits) / static_cast<double>(trials);
  rep.ci95 = 1.96 * std::sqrt(std::max(rep.estimate * (1 - rep.estimate), 1e-12) /
                              static_cast<double>(trials));
  rep.paper_bound = (c == MatchCase::match0) ? 0.77 : 0.80;
  rep.pass = rep.estimate > rep.paper_bound - rep.ci95;
  if (c == MatchCase::match0) {
    rep.exact_reference = uniform_pair_miss_probability(params.t, params.n);
    const double sigma = std::sqrt(rep.exact_reference *
                                   (1 - rep.exact_reference) /
                                   static_cast<double>(trials));
    rep.within_3sigma = std::abs(rep.estimate - rep.exact_reference) <= 3 * sigma;
  }
  return rep;
}

nlohmann::json EmptyRateReport::to_json() const {
  return {{"trials", trials},
          {"empty_events", empty_events},
          {"estimate", estimate},
          {"ci95", ci95},
          {"paper_bound", bound},
          {"verdict", pass ? "pass" : "fail"}};
}

EmptyRateReport estimate_empty_rate(const EmbeddingParams& params,
                                    std::uint64_t trials, std::uint64_t seed,
                                    unsigned jobs) {
  const GridParams big = params.big();
  const BoxT box = BoxT::of(params);
  struct Acc {
    std::uint64_t empties = 0;
  };
  auto per_trial = [&](std::uint64_t trial, Acc& acc) {
    SharedRandomness sr{seed ^ trial};
    RandomStream rng = sr.stream("empty-rate");
    const GridPoint x = uniform_point(big, rng);
    acc.empties += !sample_Nx_box(x, box, params.M, rng).has_value();
  };
  const Acc acc = run_trials<Acc>(trials, jobs, per_trial,
                                  [](Acc& a, Acc& b) { a.empties += b.empties; });
  EmptyRateReport rep;
  rep.trials = trials;
  rep.empty_events = acc.empties;
  rep.estimate = static_cast<double>(acc.empties) / static_cast<double>(trials);
  rep.bound = std::pow(5.0, -static_cast<double>(params.M));
  rep.ci95 = 1.96 * std::sqrt(std::max(rep.estimate * (1 - rep.estimate), 1e-12) /
                              static_cast<double>(trials));
  rep.pass = rep.estimate <= rep.bound + rep.ci95;
  return rep;
}

}  // namespace disjlab
