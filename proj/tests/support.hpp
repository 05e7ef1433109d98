#ifndef CANON_TESTS_SUPPORT_HPP
#define CANON_TESTS_SUPPORT_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "canon/canonical.hpp"
#include "canon/canonical_eq.hpp"
#include "canon/canonise.hpp"
#include "canon/erdos_rado.hpp"
#include "canon/colouring.hpp"
#include "canon/ordering.hpp"

namespace support {

using namespace canon;

inline Ordering random_ordering(int k, int n, std::uint64_t seed)
{
  std::vector<std::uint32_t> ranks(binom(n, k));
  std::iota(ranks.begin(), ranks.end(), 0u);
  std::mt19937_64 rng(seed);
  std::shuffle(ranks.begin(), ranks.end(), rng);
  return Ordering::from_ranks(k, n, std::move(ranks));
}

// Canonical for spec on the planted set, random elsewhere.
inline Ordering planted_ordering(int k, int n, const std::vector<int>& planted, const CanonicalSpec& spec, std::uint64_t seed)
{
  std::vector<KSet> sets;
  for_each_kset(k, n, [&](const KSet& s) { sets.push_back(s); });
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> key(sets.size());
  for (auto& v : key) v = u(rng);
  std::vector<std::size_t> inside;
  for (std::size_t t = 0; t < sets.size(); ++t) {
    bool in = true;
    for (int x : sets[t]) in = in && std::binary_search(planted.begin(), planted.end(), x);
    if (in) inside.push_back(t);
  }
  std::vector<double> keys;
  for (auto t : inside) keys.push_back(key[t]);
  std::sort(keys.begin(), keys.end());
  std::sort(inside.begin(), inside.end(), [&](std::size_t a, std::size_t b) { return associated_compare(spec, sets[a], sets[b]) < 0; });
  for (std::size_t t = 0; t < inside.size(); ++t) key[inside[t]] = keys[t];
  std::vector<std::size_t> idx(sets.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  std::vector<std::uint32_t> ranks(sets.size());
  for (std::uint32_t r = 0; r < idx.size(); ++r) ranks[idx[r]] = r;
  return Ordering::from_ranks(k, n, std::move(ranks));
}

// Orders k-sets by a weighted sum of their coordinates, colex on ties.
class LinearComparator : public LazyComparator {
 public:
  explicit LinearComparator(std::vector<long long> w) : w_(std::move(w)) {}
  std::strong_ordering compare(const KSet& a, const KSet& b) const override
  {
    long long sa = 0, sb = 0;
    for (int t = 0; t < a.size(); ++t) {
      sa += w_[t] * a[t];
      sb += w_[t] * b[t];
    }
    if (sa != sb) return sa <=> sb;
    return colex_rank(a) <=> colex_rank(b);
  }
  std::string tag() const override { return "linear"; }

 private:
  std::vector<long long> w_;
};

inline Ordering linear_ordering(int k, int n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long long> d(-40, 40);
  std::vector<long long> w(k);
  for (auto& v : w) {
    v = d(rng);
    if (v == 0) v = 1;
  }
  return materialise(Ordering::lazy(k, n, std::make_shared<LinearComparator>(std::move(w))));
}

// First coordinate decides (with a fixed sign); ties are broken lexicographically on the
// remaining coordinates with signs chosen by the shared first element. Governed by pairs.
class FirstElementComparator : public LazyComparator {
 public:
  FirstElementComparator(int first_sign, std::vector<std::vector<int>> signs) : first_(first_sign), signs_(std::move(signs)) {}
  std::strong_ordering compare(const KSet& a, const KSet& b) const override
  {
    if (a[0] != b[0]) return first_ > 0 ? a[0] <=> b[0] : b[0] <=> a[0];
    const auto& s = signs_[a[0]];
    for (int t = 1; t < a.size(); ++t)
      if (a[t] != b[t]) return s[t] > 0 ? a[t] <=> b[t] : b[t] <=> a[t];
    return std::strong_ordering::equal;
  }
  std::string tag() const override { return "first-element"; }

 private:
  int first_;
  std::vector<std::vector<int>> signs_;
};

inline Ordering first_element_ordering(int k, int n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::vector<std::vector<int>> signs(n + 1, std::vector<int>(k, 1));
  for (auto& row : signs)
    for (auto& v : row) v = (rng() & 1) ? 1 : -1;
  return Ordering::lazy(k, n, std::make_shared<FirstElementComparator>((rng() & 1) ? 1 : -1, std::move(signs)));
}

inline std::uint64_t mix(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_blocks(std::uint64_t seed, std::span<const Elem> xs, int shift)
{
  std::uint64_t h = mix(seed);
  for (Elem x : xs) h = mix(h ^ static_cast<std::uint64_t>(x >> shift));
  return h;
}

// A colouring into [0, gamma) that is constant on aligned blocks of 2^shift in every coordinate.
inline Colouring<int> block_colouring(int arity, IntervalSet carrier, int gamma, int shift, std::uint64_t seed)
{
  Colouring<int> f;
  f.arity = arity;
  f.carrier = std::move(carrier);
  f.fn = [=](std::span<const Elem> xs) { return static_cast<int>(hash_blocks(seed, xs, shift) % gamma); };
  f.run_end = [=](std::span<const Elem> xs, int pos) { return xs[pos] | ((Elem{1} << shift) - 1); };
  return f;
}

// +1 iff the block of the last coordinate reaches a threshold hashed from the other blocks
// (increasing); negated when dir < 0.
inline PhiColouring block_monotone(int arity, IntervalSet carrier, int shift, Elem blocks, int dir, std::uint64_t seed)
{
  PhiColouring f;
  f.arity = arity;
  f.carrier = std::move(carrier);
  f.fn = [=](std::span<const Elem> xs) {
    std::uint64_t h = hash_blocks(seed, xs.first(xs.size() - 1), shift);
    Elem theta = static_cast<Elem>(h % static_cast<std::uint64_t>(blocks + 1));
    int v = (xs.back() >> shift) >= theta ? 1 : -1;
    return dir * v;
  };
  f.run_end = [=](std::span<const Elem> xs, int pos) { return xs[pos] | ((Elem{1} << shift) - 1); };
  return f;
}

// Random monotone pair colouring on an explicit carrier: thresholds per first element.
inline PhiColouring random_monotone_pairs(const std::vector<Elem>& xs, int dir, std::mt19937_64& rng)
{
  auto thr = std::make_shared<std::vector<std::pair<Elem, Elem>>>();
  std::uniform_int_distribution<std::size_t> d(0, xs.size());
  for (Elem x : xs) {
    std::size_t t = d(rng);
    thr->push_back({x, t < xs.size() ? xs[t] : xs.back() + 1});
  }
  PhiColouring f;
  f.arity = 2;
  f.carrier = IntervalSet::from_sorted(xs);
  f.fn = [thr, dir](std::span<const Elem> p) {
    auto it = std::lower_bound(thr->begin(), thr->end(), std::pair<Elem, Elem>{p[0], INT64_MIN});
    return dir * (p[1] >= it->second ? 1 : -1);
  };
  return f;
}

// Reduces the governing arity of o's associated colouring down to `arity`.
inline std::optional<GovernedCarrier> reduce_to(const Ordering& o, int arity, std::uint64_t cap = 40)
{
  GovernedCarrier g{o, iota_set(o.n()), o.k() + 2};
  while (g.arity > arity) {
    if (static_cast<int>(g.carrier.size()) < o.k() + 3) return std::nullopt;
    auto f = representative_colouring(g);
    auto r = govern_reduce(f, std::min<std::uint64_t>(cap, f.carrier.size()), Mode::BestEffort);
    if (!r.cert_a) return std::nullopt;
    g = {o, detail::to_ints(r.set), g.arity - 1};
  }
  return g;
}

inline std::vector<int> iota_vec(int n)
{
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 1);
  return v;
}

// Canonical for idx on the planted set, uniform labels from a disjoint pool elsewhere.
inline Equivalence planted_equivalence(int k, int n, const std::vector<int>& planted, const IndexSet& idx, int classes,
                                std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::map<std::vector<int>, std::uint32_t> ids;
  return Equivalence::from_function(k, n, [&](const KSet& s) -> std::uint32_t {
    bool in = true;
    for (int x : s) in = in && std::binary_search(planted.begin(), planted.end(), x);
    if (!in) return static_cast<std::uint32_t>(rng() % classes);
    std::vector<int> key;
    for (int i = 1; i <= k; ++i)
      if (idx.contains(i)) key.push_back(s[i - 1]);
    return classes + ids.try_emplace(key, static_cast<std::uint32_t>(ids.size())).first->second;
  });
}

// Classes keyed by the coordinates in a random I plus, for a random nonempty J, whether x_j
// reaches a random threshold t_j.
inline Equivalence threshold_equivalence(int k, int n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  const std::uint32_t imask = rng() % (1u << k), jmask = 1 + rng() % ((1u << k) - 1);
  std::vector<int> t(k);
  for (auto& v : t) v = 2 + static_cast<int>(rng() % (n - 2));
  std::map<std::vector<int>, std::uint32_t> ids;
  return Equivalence::from_function(k, n, [&](const KSet& s) {
    std::vector<int> key;
    for (int i = 0; i < k; ++i) {
      if (imask >> i & 1) key.push_back(s[i]);
      if (jmask >> i & 1) key.push_back(s[i] >= t[i] ? -1 : -2);
    }
    return ids.try_emplace(key, static_cast<std::uint32_t>(ids.size())).first->second;
  });
}

// Reduces the governing arity of e's associated colouring down to `arity`.
inline std::optional<GovernedEq> reduce_eq(const Equivalence& e, int arity, std::uint64_t cap = 40)
{
  GovernedEq g{e, iota_vec(e.n()), e.k() + 2};
  while (g.arity > arity) {
    if (static_cast<int>(g.carrier.size()) < e.k() + 3) return std::nullopt;
    auto f = representative_colouring(g);
    auto r = govern_reduce(f, std::min<std::uint64_t>(cap, f.carrier.size()), Mode::BestEffort);
    if (!r.cert_a) return std::nullopt;
    g = {e, detail::to_ints(r.set), g.arity - 1};
  }
  return g;
}

}  // namespace support

#endif  // CANON_TESTS_SUPPORT_HPP
