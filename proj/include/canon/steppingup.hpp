#ifndef CANON_STEPPINGUP_HPP
#define CANON_STEPPINGUP_HPP

#include <bit>
#include <functional>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "canon/formats.hpp"
#include "canon/kset.hpp"
#include "canon/ordering.hpp"

namespace canon {

/// [2^m] read as {-1,+1}^m; level 1 is the most significant coordinate.
class Cube {
 public:
  explicit Cube(int m) : m_(m)
  {
    if (m < 1 || m > 30) throw std::invalid_argument("cube height must be in [1,30]");
  }
  int m() const { return m_; }
  int size() const { return 1 << m_; }

  int coord(int a, int level) const
  {
    check(a);
    if (level < 1 || level > m_) throw std::invalid_argument("level out of range");
    return ((a - 1) >> (m_ - level)) & 1 ? 1 : -1;
  }

  std::vector<int> vec(int a) const
  {
    std::vector<int> v(m_);
    for (int l = 1; l <= m_; ++l) v[l - 1] = coord(a, l);
    return v;
  }

  int from_vec(const std::vector<int>& v) const
  {
    if (static_cast<int>(v.size()) != m_) throw std::invalid_argument("vector length differs from m");
    int a = 0;
    for (int c : v) a = 2 * a + (c > 0 ? 1 : 0);
    return a + 1;
  }

  int delta(int a, int b) const
  {
    check(a);
    check(b);
    if (a == b) throw std::invalid_argument("delta needs distinct vectors");
    unsigned d = static_cast<unsigned>((a - 1) ^ (b - 1));
    return m_ - std::bit_width(d) + 1;
  }

  int delta(std::span<const int> xs) const
  {
    if (xs.size() < 2) throw std::invalid_argument("delta needs at least two vectors");
    unsigned acc = 0;
    for (int a : xs) {
      check(a);
      acc |= static_cast<unsigned>((a - 1) ^ (xs[0] - 1));
    }
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = i + 1; j < xs.size(); ++j)
        if (xs[i] == xs[j]) throw std::invalid_argument("delta needs distinct vectors");
    return m_ - std::bit_width(acc) + 1;
  }

 private:
  void check(int a) const
  {
    if (a < 1 || a > (1 << m_)) throw std::invalid_argument("vector index out of range");
  }
  int m_;
};

enum class Tree { Left, Right };
enum class CombDir { Left, Right, Both, Neither };

inline std::string to_string(CombDir d)
{
  switch (d) {
    case CombDir::Left: return "left";
    case CombDir::Right: return "right";
    case CombDir::Both: return "both";
    default: return "neither";
  }
}

inline Tree classify_triple(const Cube& c, int x, int y, int z)
{
  if (!(x < y && y < z)) throw std::invalid_argument("classify_triple needs x < y < z");
  return c.delta(x, y) > c.delta(y, z) ? Tree::Left : Tree::Right;
}

struct CombReport {
  CombDir dir = CombDir::Both;
  std::vector<int> projection;  // consecutive delta values, sorted ascending
};

inline CombReport comb_report(const Cube& c, std::span<const int> xs)
{
  CombReport r;
  if (xs.size() <= 2) {
    if (xs.size() == 2) r.projection = {c.delta(xs[0], xs[1])};
    return r;
  }
  std::vector<int> ds;
  for (std::size_t i = 1; i < xs.size(); ++i) ds.push_back(c.delta(xs[i - 1], xs[i]));
  bool dec = true, inc = true;
  for (std::size_t i = 1; i < ds.size(); ++i) {
    if (!(ds[i - 1] > ds[i])) dec = false;
    if (!(ds[i - 1] < ds[i])) inc = false;
  }
  r.dir = dec ? CombDir::Left : inc ? CombDir::Right : CombDir::Neither;
  if (dec || inc) {
    std::sort(ds.begin(), ds.end());
    r.projection = ds;
  }
  return r;
}

/// Number of members carrying -1 at level delta(min, max).
inline int phi(const Cube& c, std::span<const int> xs)
{
  if (xs.size() < 2) throw std::invalid_argument("phi needs at least two elements");
  int d = c.delta(xs.front(), xs.back());
  int count = 0;
  for (int a : xs) count += c.coord(a, d) < 0;
  return count;
}

inline std::vector<int> ltimes(const Cube& c, int x, int level, const PairColouring& g)
{
  if (level < 1 || level >= c.m()) throw std::invalid_argument("ltimes level out of range");
  if (g.r < c.m()) throw std::invalid_argument("colouring does not cover [m]");
  std::vector<int> v;
  for (int mu = level + 1; mu <= c.m(); ++mu) v.push_back(c.coord(x, mu) * g(level, mu));
  return v;
}

/// The pair ordering on [2^m]^(2): larger delta first, then the concatenated twisted tails,
/// then the shared prefix above delta.
class PairStepComparator : public LazyComparator {
 public:
  PairStepComparator(int m, PairColouring g) : cube_(m), g_(std::move(g)), flip_(m + 1, 0)
  {
    if (g_.r != m) throw std::invalid_argument("pair colouring must live on [m]");
    for (int d = 1; d <= m; ++d)
      for (int mu = d + 1; mu <= m; ++mu)
        if (g_(d, mu) < 0) flip_[d] |= 1u << (m - mu);
  }

  // (delta, key of x, key of y, prefix); smaller tuples come first after negating delta.
  std::tuple<int, unsigned, unsigned, unsigned> key(int x, int y) const
  {
    int d = cube_.delta(x, y);
    int m = cube_.m();
    unsigned mask = (m - d) >= 32 ? ~0u : ((1u << (m - d)) - 1);
    unsigned kx = (static_cast<unsigned>(x - 1) & mask) ^ flip_[d];
    unsigned ky = (static_cast<unsigned>(y - 1) & mask) ^ flip_[d];
    unsigned prefix = static_cast<unsigned>(x - 1) >> (m - d + 1);
    return {-d, kx, ky, prefix};
  }

  std::strong_ordering compare(const KSet& a, const KSet& b) const override
  {
    return key(a[0], a[1]) <=> key(b[0], b[1]);
  }
  std::string tag() const override { return "stepup2"; }
  const Cube& cube() const { return cube_; }
  const PairColouring& colouring() const { return g_; }

 private:
  Cube cube_;
  PairColouring g_;
  std::vector<unsigned> flip_;
};

inline Ordering build_pair_ordering(int m, const PairColouring& g)
{
  return Ordering::lazy(2, 1 << m, std::make_shared<PairStepComparator>(m, g));
}

/// The k-set ordering on [2^m]^(k) satisfying the four comb rules, completed deterministically.
class KStepComparator : public LazyComparator {
 public:
  KStepComparator(int m, int k, Ordering inner) : cube_(m), k_(k), inner_(std::move(inner))
  {
    if (k < 3) throw std::invalid_argument("k-ordering needs k >= 3");
    if (inner_.k() != k - 1) throw std::invalid_argument("inner ordering must have uniformity k-1");
    if (inner_.n() != m) throw std::invalid_argument("inner ordering must live on [m]");
  }

  struct Info {
    int parity;  // 0 odd, 1 even
    int comb;    // 0 left, 1 right, 2 neither
    KSet proj;
  };

  Info info(const KSet& x) const
  {
    Info in;
    in.parity = phi(cube_, x.span()) % 2 == 1 ? 0 : 1;
    auto rep = comb_report(cube_, x.span());
    in.comb = rep.dir == CombDir::Left ? 0 : rep.dir == CombDir::Right ? 1 : 2;
    for (int p : rep.projection) in.proj.push_back(p);
    return in;
  }

  std::strong_ordering compare(const KSet& a, const KSet& b) const override
  {
    if (a == b) return std::strong_ordering::equal;
    Info ia = info(a), ib = info(b);
    if (auto c = ia.parity <=> ib.parity; c != 0) return c;
    if (auto c = ia.comb <=> ib.comb; c != 0) return c;
    if (ia.comb == 2) return colex_rank(a) <=> colex_rank(b);
    if (!(ia.proj == ib.proj)) return inner_.compare(ia.proj, ib.proj);
    return ia.comb == 0 ? b <=> a : a <=> b;
  }
  std::string tag() const override { return "stepupk"; }
  const Cube& cube() const { return cube_; }
  const Ordering& inner() const { return inner_; }

 private:
  Cube cube_;
  int k_;
  Ordering inner_;
};

inline Ordering build_k_ordering(int m, int k, const Ordering& inner)
{
  return Ordering::lazy(k, 1 << m, std::make_shared<KStepComparator>(m, k, inner));
}

struct ImpededWitness {
  int x, x1, x2, y2, y1, y;  // x < x' < x'' < y'' < y' < y
  int level;
  int between;

  std::string str() const
  {
    return "x=" + std::to_string(x) + " x'=" + std::to_string(x1) + " x''=" + std::to_string(x2) +
           " y''=" + std::to_string(y2) + " y'=" + std::to_string(y1) + " y=" + std::to_string(y) +
           " delta=" + std::to_string(level) + " between=" + std::to_string(between);
  }
};

inline bool verify_impeded(const Cube& c, std::span<const int> z, int k, const ImpededWitness& w)
{
  auto in = [&](int v) { return std::binary_search(z.begin(), z.end(), v); };
  if (!(w.x < w.x1 && w.x1 < w.x2 && w.x2 < w.y2 && w.y2 < w.y1 && w.y1 < w.y)) return false;
  for (int v : {w.x, w.x1, w.x2, w.y2, w.y1, w.y})
    if (!in(v)) return false;
  int between = 0;
  for (int v : z) between += v > w.x && v < w.y;
  int d = c.delta(w.x, w.y);
  return between >= k && d == w.level && c.coord(w.x2, d) < 0 && c.coord(w.y2, d) > 0;
}

inline std::optional<ImpededWitness> impeded_witness(const Cube& c, std::span<const int> z, int k)
{
  const int n = static_cast<int>(z.size());
  for (int gap = n - 2; gap >= std::max(k, 4); --gap) {
    for (int s = 0; s + gap + 1 < n; ++s) {
      int t = s + gap + 1;
      int d = c.delta(z[s], z[t]);
      // between elements: -1 block then +1 block at level d
      if (c.coord(z[s + 2], d) < 0 && c.coord(z[t - 2], d) > 0)
        return ImpededWitness{z[s], z[s + 1], z[s + 2], z[t - 2], z[t - 1], z[t], d, gap};
    }
  }
  return std::nullopt;
}

struct CombDecomposition {
  std::vector<int> left, right;
  std::optional<ImpededWitness> witness;
};

namespace detail {

inline CombDecomposition decompose(const Cube& c, std::span<const int> z, int k)
{
  const int n = static_cast<int>(z.size());
  CombDecomposition out;
  auto dir = comb_report(c, z).dir;
  if (n <= k + 1 || dir != CombDir::Neither) {
    out.left.assign(z.begin(), z.begin() + std::min(2, n));
    out.right = out.left;
    if (dir == CombDir::Left) out.left.assign(z.begin(), z.end());
    if (dir == CombDir::Right) out.right.assign(z.begin(), z.end());
    return out;
  }
  int d = c.delta(z.front(), z.back());
  int xs = c.coord(z[2], d), ys = c.coord(z[n - 3], d);
  if (xs < 0 && ys > 0) {
    out.witness = ImpededWitness{z[0], z[1], z[2], z[n - 3], z[n - 2], z[n - 1], d, n - 2};
    return out;
  }
  if (xs > 0) {
    out = decompose(c, z.subspan(2), k);
    if (!out.witness) out.right.insert(out.right.begin(), z[0]);
  } else {
    out = decompose(c, z.subspan(0, n - 2), k);
    if (!out.witness) out.left.push_back(z[n - 1]);
  }
  return out;
}

}  // namespace detail

/// Either an impeded witness or a left comb and a right comb with |L|+|R| >= (|Z|-k+1)/2.
inline CombDecomposition comb_decomposition(const Cube& c, std::span<const int> z, int k)
{
  for (std::size_t i = 1; i < z.size(); ++i)
    if (z[i - 1] >= z[i]) throw std::invalid_argument("set must be strictly increasing");
  auto out = detail::decompose(c, z, k);
  if (out.witness) {
    int between = 0;
    for (int v : z) between += v > out.witness->x && v < out.witness->y;
    out.witness->between = between;
  }
  return out;
}

inline constexpr int kWitnessMaxR = 17;

/// A 2-colouring of [r]^(2) without monochromatic s-sets, by backtracking.
inline std::optional<PairColouring> find_witness_colouring(int r, int s, int cap = kWitnessMaxR)
{
  if (s < 2) throw std::invalid_argument("s must be at least 2");
  if (r > cap || r > 31) throw std::length_error("witness search refused above r=" + std::to_string(std::min(cap, 31)));
  if (r <= 1) return PairColouring{std::max(r, 0), {}};
  std::vector<std::pair<int, int>> edges;
  for (int b = 2; b <= r; ++b)
    for (int a = 1; a < b; ++a) edges.push_back({a, b});
  std::vector<std::uint32_t> nb[2];
  nb[0].assign(r + 1, 0);
  nb[1].assign(r + 1, 0);
  std::vector<signed char> colour(edges.size(), 0);

  std::function<bool(std::uint32_t, int, int)> clique_in = [&](std::uint32_t cand, int need, int col) -> bool {
    if (need == 0) return true;
    if (std::popcount(cand) < need) return false;
    while (cand) {
      int v = std::countr_zero(cand);
      cand &= cand - 1;
      if (clique_in(cand & nb[col][v], need - 1, col)) return true;
    }
    return false;
  };

  std::function<bool(std::size_t)> dfs = [&](std::size_t e) -> bool {
    if (e == edges.size()) return true;
    auto [a, b] = edges[e];
    for (int ci = 0; ci < 2; ++ci) {
      if (e == 0 && ci == 1) break;
      nb[ci][a] |= 1u << b;
      nb[ci][b] |= 1u << a;
      std::uint32_t common = nb[ci][a] & nb[ci][b] & ((1u << a) - 1);
      if (!clique_in(common, s - 2, ci)) {
        colour[e] = ci == 0 ? 1 : -1;
        if (dfs(e + 1)) return true;
      }
      nb[ci][a] &= ~(1u << b);
      nb[ci][b] &= ~(1u << a);
    }
    return false;
  };
  if (!dfs(0)) return std::nullopt;
  return PairColouring{r, colour};
}

/// Largest monochromatic subset size of a pair colouring (brute force, small r).
inline int max_monochromatic(const PairColouring& g)
{
  int best = std::min(g.r, 1);
  for (std::uint32_t mask = 1; mask < (1u << g.r); ++mask) {
    int sz = std::popcount(mask);
    if (sz <= best) continue;
    for (int col : {1, -1}) {
      bool ok = true;
      for (int a = 1; a <= g.r && ok; ++a)
        for (int b = a + 1; b <= g.r && ok; ++b)
          if ((mask >> (a - 1) & 1) && (mask >> (b - 1) & 1) && g(a, b) != col) ok = false;
      if (ok) best = sz;
    }
  }
  return best;
}

}  // namespace canon

#endif  // CANON_STEPPINGUP_HPP
