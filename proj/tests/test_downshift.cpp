#include "doctest.h"

#include <cmath>

#include "disjlab/downshift.hpp"

using namespace disjlab;

namespace {

GridSet set_from_mask(const GridParams& p, std::uint64_t mask) {
  std::vector<std::uint64_t> codes;
  for (std::uint64_t c = 0; c < p.point_count(); ++c)
    if (mask & (1ull << c)) codes.push_back(c);
  return GridSet::of_codes(p, std::move(codes));
}

GridSet pts(const GridParams& p, std::vector<GridPoint> v) {
  return GridSet::of_points(p, v);
}

GridSet random_subset(const GridParams& p, RandomStream& rng) {
  std::vector<std::uint64_t> codes;
  for (std::uint64_t c = 0; c < p.point_count(); ++c)
    if (rng.bernoulli(0.5)) codes.push_back(c);
  return GridSet::of_codes(p, std::move(codes));
}

}  // namespace

TEST_CASE("down_ia worked examples") {
  {
    GridParams p{2, 1};
    CHECK(down_ia(pts(p, {{2}}), 0, 2) == pts(p, {{1}}));
    CHECK(down_ia(pts(p, {{1}, {2}}), 0, 2) == pts(p, {{1}, {2}}));
  }
  {
    GridParams p{3, 1};
    CHECK(down_ia(pts(p, {{2}}), 0, 3) == pts(p, {{2}}));
    CHECK_THROWS_AS((void)down_ia(pts(p, {{2}}), 0, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)down_ia(pts(p, {{2}}), 0, 4), std::invalid_argument);
  }
}

TEST_CASE("down_i and down worked examples") {
  GridParams p{3, 2};
  const GridSet K = pts(p, {{1, 1}, {1, 3}, {3, 1}});
  CHECK(down_i(K, 1) == pts(p, {{1, 1}, {1, 2}, {3, 1}}));
  CHECK(down(K) == pts(p, {{1, 1}, {1, 2}, {2, 1}}));

  const GridSet box = box_set(p, {2, 2});  // [2]x[2] inside [3]^2 is an ideal
  CHECK(down_i(box, 0) == box);
  CHECK(down_i(box, 1) == box);
  CHECK(down(box) == box);

  const GridSet empty(p);
  CHECK(down_i(empty, 0) == empty);
  CHECK(down(empty) == empty);
}

TEST_CASE("ideal predicates") {
  GridParams p{3, 2};
  CHECK(is_ideal(pts(p, {{1, 1}, {2, 1}, {1, 2}})));
  CHECK_FALSE(is_ideal(pts(p, {{2, 1}})));
  CHECK(is_ideal(GridSet(p)));
  CHECK(is_ideal(box_set(p, {3, 3})));
}

TEST_CASE("exhaustive suite over [2]^3: the down operators") {
  GridParams p{2, 3};
  for (std::uint64_t mask = 0; mask < 256; ++mask) {
    const GridSet K = set_from_mask(p, mask);
    const GridSet D = down(K);
    CHECK(D.size() == K.size());
    CHECK(is_ideal(D));
    CHECK(down(D) == D);  // idempotent
    for (std::uint32_t i = 0; i < 3; ++i) {
      const GridSet Di = down_i(K, i);
      CHECK(Di.size() == K.size());
      CHECK(is_i_ideal(Di, i));
      CHECK(down_i_via_ia(K, i) == Di);
      for (std::uint32_t a = 2; a <= 2; ++a)
        CHECK(down_ia(K, i, a).size() == K.size());
      // i-ideals are fixed points
      if (is_i_ideal(K, i)) CHECK(Di == K);
      // j-ideality is preserved
      for (std::uint32_t j = 0; j < 3; ++j)
        if (j != i && is_i_ideal(K, j)) CHECK(is_i_ideal(Di, j));
    }
  }
}

TEST_CASE("randomized suite over [3]^3: down_i equals the sweep route") {
  GridParams p{3, 3};
  RandomStream rng(4711);
  for (int trial = 0; trial < 1000; ++trial) {
    const GridSet K = random_subset(p, rng);
    const GridSet D = down(K);
    CHECK(D.size() == K.size());
    CHECK(is_ideal(D));
    const auto i = static_cast<std::uint32_t>(rng.uniform_below(3));
    CHECK(down_i_via_ia(K, i) == down_i(K, i));
  }
}

TEST_CASE("box witness: full grid and singleton") {
  {
    GridParams p{4, 2};
    const BoxWitness w = find_box_witness(box_set(p, {4, 4}));
    CHECK(w.k_raw == doctest::Approx(2.0));  // t/2 at full density
    // lexicographically smallest point with ceil(n/5) coordinates above t/2
    CHECK(w.x == GridPoint{1, 3});
    CHECK(w.I == CoordSet{1});
    CHECK(w.side == 2);
    // the extreme corner qualifies in every coordinate
    std::uint32_t qual = 0;
    for (Coord c : GridPoint{4, 4}) qual += (static_cast<double>(c) > w.k_raw);
    CHECK(qual == p.n);
  }
  {
    GridParams p{4, 5};
    const GridSet K = pts(p, {{3, 1, 4, 2, 2}});
    const BoxWitness w = find_box_witness(K);
    // mu = 4^-5, k = 2 * (4^-5)^(1/4) = 2^-1.5 < 1: every coordinate of the
    // single compressed point qualifies.
    CHECK(w.k_raw == doctest::Approx(std::pow(2.0, -1.5)));
    CHECK(w.x == GridPoint{1, 1, 1, 1, 1});
    CHECK(w.I == CoordSet{0});  // ceil(5/5) = 1 coordinate
    CHECK(w.side == 1);
  }
  CHECK_THROWS_AS((void)find_box_witness(GridSet(GridParams{2, 2})),
                  std::invalid_argument);
}

TEST_CASE("box witness exists for every nonempty K in [2]^3 and random [4]^4") {
  {
    GridParams p{2, 3};
    for (std::uint64_t mask = 1; mask < 256; ++mask) {
      const GridSet K = set_from_mask(p, mask);
      const BoxWitness w = find_box_witness(K);
      const GridSet D = down(K);
      CHECK(D.contains(w.x));
      std::uint32_t qual = 0;
      for (std::uint32_t i = 0; i < p.n; ++i)
        qual += (static_cast<double>(w.x[i]) > w.k_raw);
      CHECK(qual >= (p.n + 4) / 5);
      // the witness box sits inside down(K)
      const GridSet boxw = box_set(p, w.corner(p));
      for (auto c : boxw.codes()) CHECK(D.contains_code(c));
    }
  }
  {
    GridParams p{4, 4};
    RandomStream rng(90210);
    for (int trial = 0; trial < 1000; ++trial) {
      GridSet K = random_subset(p, rng);
      if (K.empty()) continue;
      const BoxWitness w = find_box_witness(K);
      CHECK(down(K).contains(w.x));
    }
  }
}

TEST_CASE("extract_T worked examples and postcondition") {
  GridParams p{3, 2};
  const GridSet K = pts(p, {{1, 1}, {1, 2}, {2, 1}, {3, 3}});
  {
    const GridSet T = extract_T(K, {2, 1});
    CHECK(T.size() == 2);
    CHECK(down(T) == pts(p, {{1, 1}, {2, 1}}));
    for (auto c : T.codes()) CHECK(K.contains_code(c));
  }
  {
    const GridSet T = extract_T(K, {1, 2});
    CHECK(T == pts(p, {{1, 1}, {1, 2}}));  // smallest-first tie-break
  }
  {
    // K an ideal, x inside it: the box itself qualifies
    const GridSet box = box_set(p, {2, 2});
    const GridSet T = extract_T(box, {2, 2});
    CHECK(T == box);
  }
  CHECK_THROWS_AS((void)extract_T(K, {3, 1}), std::invalid_argument);
}

TEST_CASE("extract_T postcondition across all of [2]^3 and random [3]^3") {
  {
    GridParams p{2, 3};
    for (std::uint64_t mask = 1; mask < 256; ++mask) {
      const GridSet K = set_from_mask(p, mask);
      const GridSet D = down(K);
      for (auto c : D.codes()) {
        const GridPoint x = decode_point(p, c);
        const GridSet T = extract_T(K, x);  // self-checking
        CHECK(down(T) == box_set(p, x));
      }
    }
  }
  {
    GridParams p{3, 3};
    RandomStream rng(1337);
    for (int trial = 0; trial < 200; ++trial) {
      GridSet K = random_subset(p, rng);
      if (K.empty()) continue;
      const GridSet D = down(K);
      const auto pick = D.codes()[rng.uniform_below(D.size())];
      (void)extract_T(K, decode_point(p, pick));
    }
  }
}

TEST_CASE("perimeter worked examples") {
  GridParams p{2, 2};
  const CoordSet I{0, 1};
  const GridSet S = pts(p, {{1, 1}});
  {
    const Perimeter r = perimeter(S, ConcaveTable::counting(), I, 1);
    CHECK(r.exact);
    CHECK(r.num == 3 * ConcaveTable::kOne);
    CHECK(r.value == doctest::Approx(0.75));
  }
  {
    const Perimeter r = perimeter(S, ConcaveTable::log2_table(4), I, 1);
    CHECK(r.num == -ConcaveTable::kOne);
    CHECK(r.value == doctest::Approx(-0.25));
  }
  {
    const Perimeter r = perimeter(GridSet(p), ConcaveTable::log2_table(4), I, 1);
    CHECK(r.value == doctest::Approx(-1.0));  // f(0) everywhere
  }
}

TEST_CASE("perimeter monte carlo mode agrees with the exact value") {
  GridParams p{2, 2};
  const CoordSet I{0, 1};
  const GridSet S = pts(p, {{1, 1}});
  PerimeterOptions opts;
  opts.exhaustive_limit = 1;  // force sampling on a tiny grid
  opts.mc_samples = 200000;
  opts.seed = 5;
  const Perimeter mc = perimeter(S, ConcaveTable::counting(), I, 1, opts);
  CHECK_FALSE(mc.exact);
  CHECK(mc.std_error > 0);
  CHECK(std::abs(mc.value - 0.75) <= 4 * mc.std_error);
}

TEST_CASE("list inequality: exhaustive over [2]^2 and [2]^3, three tables") {
  const auto tables = {ConcaveTable::counting(), ConcaveTable::log2_table(8),
                       ConcaveTable::empty_indicator()};
  for (std::uint32_t n : {2u, 3u}) {
    GridParams p{2, n};
    CoordSet I(n);
    for (std::uint32_t i = 0; i < n; ++i) I[i] = i;
    for (std::uint64_t mask = 0; mask < (1ull << p.point_count()); ++mask) {
      const GridSet K = set_from_mask(p, mask);
      for (const auto& f : tables) {
        for (std::uint64_t M : {1, 2}) {
          const ListLemmaResult r = verify_list_lemma(K, I, M, f);
          CHECK(r.holds);
          if (is_ideal(K)) CHECK(r.equal);
        }
      }
    }
  }
}

TEST_CASE("list inequality on proper coordinate subsets") {
  GridParams p{2, 3};
  const auto f = ConcaveTable::log2_table(8);
  for (std::uint32_t imask = 1; imask < 8; ++imask) {
    CoordSet I;
    for (std::uint32_t i = 0; i < 3; ++i)
      if (imask & (1u << i)) I.push_back(i);
    for (std::uint64_t mask = 0; mask < 256; ++mask) {
      const GridSet K = set_from_mask(p, mask);
      for (std::uint64_t M = 1; M <= I.size(); ++M)
        CHECK(verify_list_lemma(K, I, M, f).holds);
    }
  }
}

TEST_CASE("box-minimization check at (t=3, n=2, k=2, M=1)") {
  for (const auto& f : {ConcaveTable::counting(), ConcaveTable::log2_table(16)}) {
    const ConjectureReport rep = verify_conjecture(3, 2, 2, 1, f);
    CHECK_FALSE(rep.refused);
    CHECK(rep.sets_checked == 126);
    CHECK(rep.box_minimizes);
    CHECK_FALSE(rep.argmin_codes.has_value());
  }
}

TEST_CASE("box-minimization: singletons tie by symmetry at (t=2, n=2, k=1)") {
  const ConjectureReport rep = verify_conjecture(2, 2, 1, 1, ConcaveTable::counting());
  CHECK(rep.sets_checked == 4);
  CHECK(rep.box_minimizes);
  CHECK(rep.ties == 4);
}

TEST_CASE("box-minimization: full grid leaves a single subset") {
  // k^n = t^n forces S = [t]^n
  const ConjectureReport rep =
      verify_conjecture(2, 3, 2, 2, ConcaveTable::log2_table(8));
  CHECK(rep.sets_checked == 1);
  CHECK(rep.box_minimizes);
}

TEST_CASE("box-minimization refusals") {
  const ConjectureReport rep =
      verify_conjecture(4, 3, 2, 1, ConcaveTable::counting(), 1000000);
  CHECK(rep.refused);
  CHECK(rep.refusal.find("exceeds") != std::string::npos);
  CHECK_THROWS_AS((void)verify_conjecture(3, 2, 2, 2, ConcaveTable::counting()),
                  std::invalid_argument);  // M must stay below n
}

TEST_CASE("isoperimetry pipeline: structure returned, statistics gated") {
  {
    // box S = [2]^10 in [4]^10 is far below the M >= 1 regime
    GridParams p{4, 10};
    const GridSet S = box_set(p, {2, 2, 2, 2, 2, 2, 2, 2, 2, 2});
    const PipelineResult r = isoperimetry_pipeline(S);
    CHECK(r.stats_refused);
    CHECK(r.M_raw < 1.0);
    CHECK(r.refusal.find("refused") != std::string::npos);
    // |T| = side^|I| as forced by the construction
    std::uint64_t want = 1;
    for (std::uint32_t q = 0; q < r.witness.I.size(); ++q) want *= r.witness.side;
    CHECK(r.T.size() == want);
    CHECK(down(r.T) == box_set(p, r.witness.corner(p)));
    for (auto c : r.T.codes()) CHECK(S.contains_code(c));
  }
  {
    // structural stage on 100 random sets
    GridParams p{3, 4};
    RandomStream rng(2024);
    int ran = 0;
    for (int trial = 0; trial < 200 && ran < 100; ++trial) {
      GridSet S = random_subset(p, rng);
      if (S.empty()) continue;
      ++ran;
      const PipelineResult r = isoperimetry_pipeline(S);
      CHECK(r.stats_refused);  // M_raw < 1 at every explicit-set scale
      CHECK(down(r.T) == box_set(p, r.witness.corner(p)));
      for (auto c : r.T.codes()) CHECK(S.contains_code(c));
    }
    CHECK(ran == 100);
  }
}
