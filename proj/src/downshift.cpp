#include "disjlab/downshift.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "disjlab/kernels.hpp"

namespace disjlab {

namespace {

std::uint64_t stride_of(const GridParams& p, std::uint32_t i) {
  if (i >= p.n) throw std::invalid_argument("coordinate index out of range");
  std::uint64_t s = 1;
  for (std::uint32_t q = i + 1; q < p.n; ++q) s *= p.t;
  return s;
}

std::uint64_t binom_saturating(std::uint64_t n, std::uint64_t k,
                               std::uint64_t cap) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace

GridSet down_ia(const GridSet& K, std::uint32_t i, std::uint32_t a) {
  const GridParams& p = K.params();
  const std::uint64_t stride = stride_of(p, i);
  if (a < 2 || a > p.t)
    throw std::invalid_argument("down_ia: a must lie in [2, t]");
  std::vector<std::uint64_t> out;
  out.reserve(K.size());
  for (std::uint64_t c : K.codes()) {
    const std::uint64_t digit = (c / stride) % p.t;  // value - 1
    if (digit == a - 1 && !K.contains_code(c - stride))
      out.push_back(c - stride);
    else
      out.push_back(c);
  }
  return GridSet::of_codes(p, std::move(out));
}

GridSet down_i(const GridSet& K, std::uint32_t i) {
  const GridParams& p = K.params();
  const std::uint64_t stride = stride_of(p, i);
  std::unordered_map<std::uint64_t, std::uint32_t> class_count;
  class_count.reserve(K.size());
  for (std::uint64_t c : K.codes()) {
    const std::uint64_t digit = (c / stride) % p.t;
    ++class_count[c - digit * stride];
  }
  std::vector<std::uint64_t> out;
  out.reserve(K.size());
  for (const auto& [base, cnt] : class_count)
    for (std::uint32_t j = 0; j < cnt; ++j) out.push_back(base + j * stride);
  return GridSet::of_codes(p, std::move(out));
}

GridSet down_i_via_ia(const GridSet& K, std::uint32_t i) {
  GridSet cur = K;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint32_t a = 2; a <= K.params().t; ++a) {
      GridSet next = down_ia(cur, i, a);
      if (next.codes() != cur.codes()) {
        cur = std::move(next);
        changed = true;
      }
    }
  }
  return cur;
}

GridSet down(const GridSet& K) {
  GridSet cur = K;
  for (std::uint32_t i = K.params().n; i-- > 0;) cur = down_i(cur, i);
  return cur;
}

bool is_i_ideal(const GridSet& K, std::uint32_t i) {
  const GridParams& p = K.params();
  const std::uint64_t stride = stride_of(p, i);
  for (std::uint64_t c : K.codes()) {
    const std::uint64_t digit = (c / stride) % p.t;
    if (digit > 0 && !K.contains_code(c - stride)) return false;
  }
  return true;
}

bool is_ideal(const GridSet& K) {
  for (std::uint32_t i = 0; i < K.params().n; ++i)
    if (!is_i_ideal(K, i)) return false;
  return true;
}

GridPoint BoxWitness::corner(const GridParams& p) const {
  GridPoint c(p.n, 1);
  for (auto i : I) c[i] = static_cast<Coord>(side);
  return c;
}

BoxWitness find_box_witness(const GridSet& K) {
  if (K.empty()) throw std::invalid_argument("find_box_witness: K is empty");
  const GridParams& p = K.params();
  const GridSet D = down(K);
  const double mu =
      static_cast<double>(K.size()) / static_cast<double>(p.point_count());
  const double k_raw =
      (p.t / 2.0) * std::pow(mu, 5.0 / (4.0 * static_cast<double>(p.n)));
  const std::uint32_t need = (p.n + 4) / 5;  // ceil(n/5)

  for (std::uint64_t code : D.codes()) {  // sorted codes = lexicographic points
    const GridPoint x = decode_point(p, code);
    CoordSet qualifying;
    for (std::uint32_t i = 0; i < p.n; ++i)
      if (static_cast<double>(x[i]) > k_raw) qualifying.push_back(i);
    if (qualifying.size() >= need) {
      BoxWitness w;
      w.x = x;
      w.I.assign(qualifying.begin(), qualifying.begin() + need);
      w.k_raw = k_raw;
      w.side = std::max<std::uint32_t>(
          1, static_cast<std::uint32_t>(std::floor(k_raw)));
      return w;
    }
  }
  std::ostringstream os;
  os << "find_box_witness: no point of down(K) has " << need
     << " coordinates above k; mu(K)=" << mu << " k=" << k_raw;
  throw std::runtime_error(os.str());
}

namespace {

// Members of K_pts share their coordinate values below d. Returns T inside
// K_pts whose down over coordinates d.. equals the box with corner suffix
// corner[d..] (prefix coordinates stay fixed).
std::vector<GridPoint> extract_rec(const GridParams& p,
                                   std::vector<GridPoint> K_pts,
                                   std::uint32_t d, const GridPoint& corner) {
  const std::uint32_t n = p.n;
  if (K_pts.size() < corner[d])
    throw std::logic_error("extract_T: hyperplane shorter than required");
  if (d == n - 1) {
    std::sort(K_pts.begin(), K_pts.end(),
              [d](const GridPoint& a, const GridPoint& b) { return a[d] < b[d]; });
    K_pts.resize(corner[d]);
    return K_pts;
  }
  // Compress the suffix coordinates only; coordinate d is untouched.
  GridSet Kp = GridSet::of_points(p, K_pts);
  for (std::uint32_t i = n; i-- > d + 1;) Kp = down_i(Kp, i);
  // Distinct classmates of the corner across coordinate d: suffix equals
  // the corner suffix, prefix is the shared fixed prefix.
  std::vector<Coord> firsts;
  for (const GridPoint& z : Kp.points()) {
    bool suffix_ok = true;
    for (std::uint32_t q = d + 1; q < n && suffix_ok; ++q)
      suffix_ok = (z[q] == corner[q]);
    if (suffix_ok) firsts.push_back(z[d]);
  }
  std::sort(firsts.begin(), firsts.end());
  if (firsts.size() < corner[d])
    throw std::logic_error("extract_T: fewer classmates than corner value");
  firsts.resize(corner[d]);

  std::vector<GridPoint> out;
  for (Coord l : firsts) {
    std::vector<GridPoint> slab;
    for (const GridPoint& y : K_pts)
      if (y[d] == l) slab.push_back(y);
    std::vector<GridPoint> sub = extract_rec(p, std::move(slab), d + 1, corner);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

}  // namespace

GridSet extract_T(const GridSet& K, const GridPoint& x) {
  const GridParams& p = K.params();
  validate_point(p, x);
  if (!down(K).contains(x))
    throw std::invalid_argument("extract_T: x is not in down(K)");
  GridSet T = GridSet::of_points(p, extract_rec(p, K.points(), 0, x));

  // Postcondition (self-checking): T inside K, |T| = prod x_i, down(T) = box.
  std::uint64_t want = 1;
  for (Coord c : x) want *= c;
  for (std::uint64_t c : T.codes())
    if (!K.contains_code(c)) throw std::logic_error("extract_T: T escapes K");
  if (T.size() != want || !(down(T) == box_set(p, x)))
    throw std::logic_error("extract_T: down(T) is not the requested box");
  return T;
}

namespace {

// Count members of the I-projected set (flattened rows of width w, `members`
// rows) matching xi in at least M coordinates. With w == 0 only M == 0 is
// possible and every member matches vacuously.
std::uint64_t hits_at_least(const std::vector<std::uint16_t>& rows,
                            std::size_t w, std::size_t members,
                            const std::uint16_t* xi, std::uint64_t M) {
  if (w == 0) return M == 0 ? members : 0;
  std::uint64_t cnt = 0;
  for (std::size_t j = 0; j < members; ++j)
    cnt += (kernels::match_count_u16(xi, rows.data() + j * w, w) >= M);
  return cnt;
}

std::vector<std::uint16_t> project_rows(const std::vector<GridPoint>& pts,
                                        const CoordSet& I) {
  std::vector<std::uint16_t> rows(pts.size() * I.size());
  for (std::size_t j = 0; j < pts.size(); ++j)
    for (std::size_t q = 0; q < I.size(); ++q) rows[j * I.size() + q] = pts[j][I[q]];
  return rows;
}

}  // namespace

Perimeter perimeter(const GridSet& S, const ConcaveTable& f, const CoordSet& I,
                    std::uint64_t M, const PerimeterOptions& opts) {
  const GridParams& p = S.params();
  if (M > I.size()) throw std::invalid_argument("perimeter: M exceeds |I|");
  for (auto i : I)
    if (i >= p.n) throw std::invalid_argument("perimeter: bad coordinate index");

  const std::size_t w = I.size();
  const std::vector<std::uint16_t> rows = project_rows(S.points(), I);
  std::vector<std::uint16_t> xi(w);

  Perimeter r;
  const std::uint64_t total = p.point_count();
  if (total <= opts.exhaustive_limit) {
    __int128 sum = 0;
    GridPoint x(p.n, 1);
    bool done = false;
    while (!done) {
      for (std::size_t q = 0; q < w; ++q) xi[q] = x[I[q]];
      sum += f.value_num(hits_at_least(rows, w, S.size(), xi.data(), M));
      done = true;
      for (std::uint32_t i = p.n; i-- > 0;) {
        if (x[i] < p.t) {
          ++x[i];
          done = false;
          break;
        }
        x[i] = 1;
      }
    }
    r.exact = true;
    r.num = sum;
    r.count = total;
    r.value = static_cast<double>(sum) /
              (static_cast<double>(total) * static_cast<double>(ConcaveTable::kOne));
    r.std_error = 0;
  } else {
    RandomStream rng(mix64(opts.seed ^ fnv1a64("perimeter")));
    double sum = 0, sumsq = 0;
    for (std::uint64_t s = 0; s < opts.mc_samples; ++s) {
      const GridPoint x = uniform_point(p, rng);
      for (std::size_t q = 0; q < w; ++q) xi[q] = x[I[q]];
      const double v =
          f.value(hits_at_least(rows, w, S.size(), xi.data(), M));
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / static_cast<double>(opts.mc_samples);
    const double var =
        std::max(0.0, (sumsq / static_cast<double>(opts.mc_samples) - mean * mean));
    r.exact = false;
    r.num = 0;
    r.count = opts.mc_samples;
    r.value = mean;
    r.std_error = std::sqrt(var / static_cast<double>(opts.mc_samples - 1));
  }
  return r;
}

ListLemmaResult verify_list_lemma(const GridSet& K, const CoordSet& I,
                                  std::uint64_t M, const ConcaveTable& f) {
  ListLemmaResult res;
  res.compressed = perimeter(down(K), f, I, M);
  res.original = perimeter(K, f, I, M);
  if (!res.compressed.exact || !res.original.exact)
    throw std::invalid_argument("verify_list_lemma: grid too large for exact mode");
  res.holds = res.compressed.num <= res.original.num;
  res.equal = res.compressed.num == res.original.num;
  return res;
}

ConjectureReport verify_conjecture(std::uint32_t t, std::uint32_t n,
                                   std::uint32_t k, std::uint64_t M,
                                   const ConcaveTable& f, std::uint64_t budget) {
  ConjectureReport rep;
  rep.t = t;
  rep.n = n;
  rep.k = k;
  rep.M = M;
  rep.f_name = f.name();

  if (n < 2 || M < 1 || M >= n)
    throw std::invalid_argument("verify_conjecture: requires 1 <= M < n");
  if (k < 1 || k > t)
    throw std::invalid_argument("verify_conjecture: requires 1 <= k <= t");
  GridParams p{t, n};
  validate_params(p);
  if (!p.codes_fit() || p.point_count() > 64) {
    rep.refused = true;
    rep.refusal = "grid has more than 64 points; subset enumeration over "
                  "64-bit masks is the implemented limit";
    return rep;
  }
  const std::uint64_t N = p.point_count();
  std::uint64_t ssize = 1;
  for (std::uint32_t i = 0; i < n; ++i) ssize *= k;

  rep.subset_count = binom_saturating(N, ssize, budget);
  if (rep.subset_count > budget) {
    std::ostringstream os;
    os << "C(" << N << ", " << ssize << ") exceeds the subset budget " << budget;
    rep.refused = true;
    rep.refusal = os.str();
    return rep;
  }

  // Ball incidence masks over point codes; the conjecture uses I = all
  // coordinates.
  CoordSet I(n);
  for (std::uint32_t i = 0; i < n; ++i) I[i] = i;
  std::vector<std::uint64_t> ball_mask(N, 0);
  std::vector<GridPoint> pts(N);
  for (std::uint64_t c = 0; c < N; ++c) pts[c] = decode_point(p, c);
  for (std::uint64_t a = 0; a < N; ++a)
    for (std::uint64_t b = 0; b < N; ++b)
      if (match_count(pts[a], pts[b]) >= M) ball_mask[a] |= (1ull << b);

  GridPoint corner(n, static_cast<Coord>(k));
  std::uint64_t box_mask = 0;
  for (std::uint64_t c : box_set(p, corner).codes()) box_mask |= (1ull << c);

  auto value_of = [&](std::uint64_t set_mask) {
    __int128 sum = 0;
    for (std::uint64_t a = 0; a < N; ++a)
      sum += f.value_num(
          static_cast<std::uint64_t>(__builtin_popcountll(ball_mask[a] & set_mask)));
    return sum;
  };

  rep.box_num = value_of(box_mask);

  std::uint64_t mask =
      (ssize == 64) ? ~0ull : ((1ull << ssize) - 1);
  __int128 min_num = 0;
  std::uint64_t min_mask = 0;
  bool first = true;
  for (std::uint64_t it = 0; it < rep.subset_count; ++it) {
    const __int128 v = value_of(mask);
    if (first || v < min_num) {
      min_num = v;
      min_mask = mask;
      rep.ties = 1;
      first = false;
    } else if (v == min_num) {
      ++rep.ties;
    }
    if (it + 1 < rep.subset_count) {
      const std::uint64_t c = mask & (~mask + 1);
      const std::uint64_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
  }
  rep.sets_checked = rep.subset_count;
  rep.min_num = min_num;
  rep.box_minimizes = rep.box_num <= min_num;
  const double denom =
      static_cast<double>(N) * static_cast<double>(ConcaveTable::kOne);
  rep.box_value = static_cast<double>(rep.box_num) / denom;
  rep.min_value = static_cast<double>(rep.min_num) / denom;
  if (!rep.box_minimizes) {
    std::vector<std::uint64_t> codes;
    for (std::uint64_t c = 0; c < N; ++c)
      if (min_mask & (1ull << c)) codes.push_back(c);
    rep.argmin_codes = std::move(codes);
  }
  return rep;
}

PipelineResult isoperimetry_pipeline(const GridSet& S, const PipelineOptions& opts) {
  if (S.empty())
    throw std::invalid_argument("isoperimetry_pipeline: S is empty");
  const GridParams& p = S.params();

  PipelineResult res;
  res.witness = find_box_witness(S);
  res.T = extract_T(S, res.witness.corner(p));

  res.M_raw = static_cast<double>(p.n) * res.witness.k_raw /
              (20.0 * static_cast<double>(p.t));
  res.M = static_cast<std::uint64_t>(std::floor(res.M_raw));
  if (res.M < 1) {
    res.stats_refused = true;
    std::ostringstream os;
    os << "statistics refused: floor(n*k/(20t)) = floor(" << res.M_raw
       << ") < 1 at n=" << p.n << " k=" << res.witness.k_raw
       << "; the tail bounds are vacuous at this scale";
    res.refusal = os.str();
    return res;
  }
  res.stats_refused = false;

  const std::size_t w = res.witness.I.size();
  const std::vector<std::uint16_t> rows = project_rows(res.T.points(), res.witness.I);
  std::vector<std::uint16_t> xi(w);
  auto observe = [&](const GridPoint& x, std::uint64_t& empties, double& logsum) {
    for (std::size_t q = 0; q < w; ++q) xi[q] = x[res.witness.I[q]];
    const std::uint64_t c = hits_at_least(rows, w, res.T.size(), xi.data(), res.M);
    if (c == 0) {
      ++empties;
      logsum += -1.0;  // log 0 := -1
    } else {
      logsum += std::log2(static_cast<double>(c));
    }
  };

  std::uint64_t empties = 0;
  double logsum = 0;
  const std::uint64_t total = p.point_count();
  if (total <= opts.exhaustive_limit) {
    res.exhaustive = true;
    res.samples = total;
    GridPoint x(p.n, 1);
    bool done = false;
    while (!done) {
      observe(x, empties, logsum);
      done = true;
      for (std::uint32_t i = p.n; i-- > 0;) {
        if (x[i] < p.t) {
          ++x[i];
          done = false;
          break;
        }
        x[i] = 1;
      }
    }
  } else {
    res.exhaustive = false;
    res.samples = opts.mc_samples;
    RandomStream rng(mix64(opts.seed ^ fnv1a64("pipeline")));
    for (std::uint64_t s = 0; s < opts.mc_samples; ++s)
      observe(uniform_point(p, rng), empties, logsum);
  }

  res.pr_empty = static_cast<double>(empties) / static_cast<double>(res.samples);
  res.e_log = logsum / static_cast<double>(res.samples);
  res.pr_empty_bound = std::pow(5.0, -static_cast<double>(res.M));
  const double logk = std::log2(res.witness.k_raw);
  const double n5 = static_cast<double>(p.n) / 5.0;
  res.e_log_bound = (n5 - static_cast<double>(res.M)) * logk -
                    static_cast<double>(p.n) * logk / std::pow(5.0, static_cast<double>(res.M));
  res.holds_empty = res.pr_empty <= res.pr_empty_bound;
  res.holds_log = res.e_log >= res.e_log_bound;
  return res;
}

}  // namespace disjlab
