#ifndef CANON_ERDOS_RADO_HPP
#define CANON_ERDOS_RADO_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "canon/bignum.hpp"
#include "canon/canonical_eq.hpp"
#include "canon/canonise.hpp"
#include "canon/colouring.hpp"
#include "canon/homogenise.hpp"
#include "canon/ordering.hpp"
#include "canon/params.hpp"

namespace canon {

/// Normalised class labels of e on xs^(k) in colex order, one byte per label.
inline Colour eq_pattern_colour(const Equivalence& e, std::span<const int> xs)
{
  const int k = e.k();
  Colour c;
  std::vector<std::uint32_t> seen;
  for_each_kset(k, static_cast<int>(xs.size()), [&](const KSet& s) {
    std::uint32_t l = e.label(map_through(s, xs));
    auto it = std::find(seen.begin(), seen.end(), l);
    if (it == seen.end()) {
      c.push_back(static_cast<char>('0' + seen.size()));
      seen.push_back(l);
    } else {
      c.push_back(static_cast<char>('0' + (it - seen.begin())));
    }
  });
  return c;
}

inline GammaColouring associated_colouring(const Equivalence& e)
{
  const int k = e.k();
  if (e.n() < k + 2) throw std::invalid_argument("associated colouring needs N >= k+2");
  GammaColouring f;
  f.arity = k + 2;
  f.carrier = IntervalSet::range(1, e.n());
  f.fn = [e](std::span<const Elem> xs) {
    auto v = detail::to_ints(xs);
    return eq_pattern_colour(e, v);
  };
  return f;
}

/// An equivalence relation with a carrier on which its associated colouring is
/// (claimed to be) governed by arity-sets.
struct GovernedEq {
  Equivalence e;
  std::vector<int> carrier;
  int arity = 0;
};

inline bool verify_governed(const GovernedEq& g, const DeciderScan& scan = {})
{
  const int k = g.e.k(), m = g.arity;
  const int n = static_cast<int>(g.carrier.size());
  if (m < 1 || m > k + 2) return false;
  if (n < k + 2) return true;
  bool ok = true;
  std::vector<int> a(k + 2), b(k + 2);
  detail::scan_sets(k + 2, n, scan, binom(k + 2, k), [&](const KSet& pos) {
    for (int t = 0; t < k + 2; ++t) a[t] = g.carrier[pos[t] - 1];
    for (int t = 0; t < m; ++t) b[t] = a[t];
    for (int t = m; t < k + 2; ++t) b[t] = g.carrier[n - (k + 2) + t];
    if (eq_pattern_colour(g.e, a) != eq_pattern_colour(g.e, b)) ok = false;
    return ok;
  });
  return ok;
}

inline GammaColouring representative_colouring(const GovernedEq& g)
{
  const int k = g.e.k(), m = g.arity;
  auto fill = detail::top_of(g.carrier, k + 2 - m);
  std::vector<int> dom(g.carrier.begin(), g.carrier.end() - (k + 2 - m));
  GammaColouring f;
  f.arity = m;
  f.carrier = IntervalSet::from_ints(dom);
  f.fn = [e = g.e, fill](std::span<const Elem> xs) {
    auto v = detail::to_ints(xs);
    v.insert(v.end(), fill.begin(), fill.end());
    return eq_pattern_colour(e, v);
  };
  return f;
}

/// +1 iff dropping the i-th and dropping the (i+1)-th element of z give equivalent k-sets.
inline int aux_g(const Equivalence& e, int i, std::span<const int> z)
{
  const int k = e.k();
  if (i < 1 || i > k) throw std::invalid_argument("auxiliary index out of range");
  if (static_cast<int>(z.size()) != k + 1) throw std::invalid_argument("auxiliary function needs a (k+1)-tuple");
  for (int t = 0; t <= k; ++t)
    if (z[t] < 1 || z[t] > e.n() || (t && z[t - 1] >= z[t])) throw std::invalid_argument("malformed auxiliary tuple");
  KSet x, y;
  for (int t = 0; t <= k; ++t) {
    if (t != i - 1) x.push_back(z[t]);
    if (t != i) y.push_back(z[t]);
  }
  return e.equiv(x, y) ? 1 : -1;
}

/// g_i^{m-1} on the carrier minus its minimum and the top k+2-m elements.
inline PhiColouring governed_sign_fn(const GovernedEq& g, int i)
{
  const int k = g.e.k(), m = g.arity;
  if (m < 2 || m > k + 2) throw std::invalid_argument("governed sign functions need governing arity in [2, k+2]");
  if (i < 1 || i > k) throw std::invalid_argument("auxiliary index out of range");
  const int nfill = k + 2 - m;
  if (static_cast<int>(g.carrier.size()) < nfill + 1) throw std::invalid_argument("carrier too small");
  auto fill = detail::top_of(g.carrier, nfill);
  std::vector<int> dom(g.carrier.begin() + 1, g.carrier.end() - nfill);
  PhiColouring f;
  f.arity = m - 1;
  f.carrier = IntervalSet::from_ints(dom);
  f.fn = [e = g.e, fill, i](std::span<const Elem> xs) {
    auto v = detail::to_ints(xs);
    v.insert(v.end(), fill.begin(), fill.end());
    return aux_g(e, i, v);
  };
  return f;
}

/// Checks g_i(z) = fn(first m-1 elements of z) for (k+1)-sets z of the carrier minus its minimum.
inline bool verify_sign_fn(const GovernedEq& g, int i, const PhiColouring& fn, const DeciderScan& scan = {})
{
  const int k = g.e.k();
  std::vector<int> dom(g.carrier.begin() + std::min<std::size_t>(1, g.carrier.size()), g.carrier.end());
  const int n = static_cast<int>(dom.size());
  if (n < k + 1) return true;
  bool ok = true;
  std::vector<int> z(k + 1);
  detail::scan_sets(k + 1, n, scan, 2, [&](const KSet& pos) {
    for (int t = 0; t <= k; ++t) z[t] = dom[pos[t] - 1];
    std::vector<Elem> head(z.begin(), z.begin() + fn.arity);
    if (aux_g(g.e, i, z) != fn.fn(head)) ok = false;
    return ok;
  });
  return ok;
}

/// A counterexample to being i-purged: conditions (i)-(iv) hold and a_i != b_i.
struct PurgeWitness {
  int i = 0;
  std::vector<int> a, b, c;  // c = c_{i+1}, ..., c_{k+1}

  std::string str() const
  {
    auto list = [](const std::vector<int>& v) {
      std::string s;
      for (std::size_t t = 0; t < v.size(); ++t) s += (t ? "," : "") + std::to_string(v[t]);
      return s;
    };
    return "purge i=" + std::to_string(i) + " a=" + list(a) + " b=" + list(b) + " c=" + list(c);
  }
};

inline bool is_purge_witness(const Equivalence& e, const PurgeWitness& w)
{
  const int k = e.k(), i = w.i;
  if (i < 1 || i > k || static_cast<int>(w.a.size()) != i || static_cast<int>(w.b.size()) != i ||
      static_cast<int>(w.c.size()) != k + 1 - i)
    return false;
  auto increasing = [](const std::vector<int>& v) { return std::is_sorted(v.begin(), v.end()) && std::adjacent_find(v.begin(), v.end()) == v.end(); };
  if (!increasing(w.a) || !increasing(w.b) || !increasing(w.c)) return false;
  if (w.a.front() < 1 || w.b.front() < 1 || w.c.back() > e.n()) return false;
  if (std::max(w.a.back(), w.b.back()) >= w.c.front()) return false;
  if (w.a.back() == w.b.back()) return false;
  std::vector<int> za = w.a, zb = w.b;
  za.insert(za.end(), w.c.begin(), w.c.end());
  zb.insert(zb.end(), w.c.begin(), w.c.end());
  if (aux_g(e, i, za) != -1 || aux_g(e, i, zb) != -1) return false;
  za.pop_back();
  zb.pop_back();
  return e.equiv(KSet(za), KSet(zb));
}

/// Exhaustive search for a counterexample to being i-purged; refuses when C(N, k+1) exceeds cap.
inline std::optional<PurgeWitness> purge_check(const Equivalence& e, int i, std::uint64_t cap = 50'000'000)
{
  const int k = e.k(), n = e.n();
  if (i < 1 || i > k) throw std::invalid_argument("purge index out of range");
  if (n <= k) return std::nullopt;
  if (binom(n, k + 1) > cap) throw std::length_error("purge_check refused: C(N, k+1) above the cap");
  const int t = k + 1 - i;
  std::optional<PurgeWitness> out;
  std::unordered_map<std::uint32_t, std::vector<int>> reps;
  std::vector<int> z(k + 1);
  for_each_kset(t, n, [&](const KSet& tail) {
    if (out || tail[0] <= i) return;
    reps.clear();
    for (int u = 0; u < t; ++u) z[i + u] = tail[u];
    for_each_kset(i, tail[0] - 1, [&](const KSet& a) {
      if (out) return;
      for (int u = 0; u < i; ++u) z[u] = a[u];
      if (aux_g(e, i, z) != -1) return;
      KSet x;
      for (int u = 0; u < k; ++u) x.push_back(z[u]);
      std::vector<int> av(a.begin(), a.end());
      auto [it, fresh] = reps.try_emplace(e.label(x), av);
      if (!fresh && it->second.back() != av.back())
        out = PurgeWitness{i, it->second, av, std::vector<int>(tail.begin(), tail.end())};
    });
  });
  return out;
}

/// Carrier size from which purge is guaranteed: (2kn)^(2k).
inline BigInt purge_bound(int k, int n) { return boost::multiprecision::pow(BigInt(2 * k * n), 2 * k); }

/// Carrier size from which er_end_step is guaranteed: (k-1)! (2n)^(2k).
inline BigInt er_end_step_bound(int k, int n)
{
  return factorial_big(k - 1) * boost::multiprecision::pow(BigInt(2 * n), 2 * k);
}

/// (a_1..a_m, b_1..b_m, c_{m+1}..c_k) of the purging count.
struct PsiTuple {
  std::vector<int> a, b, c;
};

/// Potential counterexamples to m-purgedness on the carrier minus its minimum, for a relation
/// governed by (m+1)-sets; nullopt when more than budget tuples exist.
inline std::optional<std::vector<PsiTuple>> psi_tuples(const GovernedEq& g, int m, std::uint64_t budget = 2'000'000)
{
  const int k = g.e.k();
  if (m < 1 || m > k) throw std::invalid_argument("purge index out of range");
  if (g.arity > m + 1) throw std::invalid_argument("psi tuples need a relation governed by (m+1)-sets");
  GovernedEq h = g;
  h.arity = m + 1;
  std::vector<PsiTuple> out;
  if (static_cast<int>(h.carrier.size()) < k + 2) return out;
  const PhiColouring gm = governed_sign_fn(h, m);
  const Elem last_b = gm.carrier.max();
  std::vector<int> dom(h.carrier.begin() + 1, h.carrier.end());
  const int n = static_cast<int>(dom.size());
  const int t = k - m;
  std::map<std::uint32_t, std::vector<std::vector<int>>> buckets;
  bool over = false;
  auto flush = [&](const std::vector<int>& c) {
    for (auto& [label, as] : buckets) {
      for (const auto& b : as) {
        if (b.back() > last_b) continue;
        std::vector<Elem> be(b.begin(), b.end());
        if (gm.fn(be) != -1) continue;
        for (const auto& a : as) {
          if (a.back() >= b.back()) continue;
          if (out.size() >= budget) {
            over = true;
            return;
          }
          out.push_back({a, b, c});
        }
      }
    }
  };
  auto scan_tail = [&](const std::vector<int>& c, int below) {
    buckets.clear();
    for_each_kset(m, below, [&](const KSet& pos) {
      std::vector<int> a;
      for (int p : pos) a.push_back(dom[p - 1]);
      KSet x(a);
      for (int v : c) x.push_back(v);
      buckets[g.e.label(x)].push_back(std::move(a));
    });
    flush(c);
  };
  if (t == 0) {
    scan_tail({}, n);
  } else {
    for_each_kset(t, n, [&](const KSet& tail) {
      if (over || tail[0] <= m) return;
      std::vector<int> c;
      for (int p : tail) c.push_back(dom[p - 1]);
      scan_tail(c, tail[0] - 1);
    });
  }
  if (over) return std::nullopt;
  return out;
}

struct PurgeOptions {
  std::uint64_t psi_budget = 2'000'000;
  int restarts = 8;
  std::uint64_t seed = 1;
};

struct PurgeResult {
  std::vector<int> set;  // largest verified m-purged set found, at most n elements
  bool success = false;  // set has n elements
  bool psi_mode = false;
};

namespace detail {

inline bool purged_on(const Equivalence& e, const std::vector<int>& z, int m)
{
  if (static_cast<int>(z.size()) <= e.k()) return true;
  return !purge_check(restrict(e, z), m);
}

}  // namespace detail

/// Greedy derandomisation of the purging count: grow Z inside the carrier minus its minimum,
/// never completing a forbidden tuple; seeded restarts when short; always verified.
inline PurgeResult purge(const GovernedEq& g, int m, int n, Mode mode = Mode::BestEffort, const PurgeOptions& opt = {})
{
  const int k = g.e.k();
  if (m < 1 || m > k) throw std::invalid_argument("purge index out of range");
  if (n < 1) throw std::invalid_argument("purge needs n >= 1");
  if (mode == Mode::Guaranteed) {
    if (n < k) throw std::invalid_argument("guaranteed purge needs n >= k");
    if (BigInt(g.carrier.size()) < purge_bound(k, n)) throw std::invalid_argument("carrier below (2kn)^(2k)");
  }
  PurgeResult res;
  if (g.carrier.size() < 2) return res;
  std::vector<int> cand(g.carrier.begin() + 1, g.carrier.end());
  const int top = g.carrier.back();

  std::optional<std::vector<PsiTuple>> psi;
  if (g.arity <= m + 1) psi = psi_tuples(g, m, opt.psi_budget);
  res.psi_mode = psi.has_value();
  std::vector<std::vector<int>> forbidden;
  std::vector<std::vector<std::size_t>> touching(top + 1);
  if (psi) {
    for (const auto& p : *psi) {
      std::vector<int> u = p.a;
      u.insert(u.end(), p.b.begin(), p.b.end());
      u.insert(u.end(), p.c.begin(), p.c.end());
      std::sort(u.begin(), u.end());
      u.erase(std::unique(u.begin(), u.end()), u.end());
      for (int x : u) touching[x].push_back(forbidden.size());
      forbidden.push_back(std::move(u));
    }
  }

  auto run = [&](std::vector<int> order) {
    std::vector<char> in(top + 1, 0);
    std::vector<int> z;
    for (int x : order) {
      if (static_cast<int>(z.size()) >= n) break;
      bool ok = true;
      if (psi) {
        for (std::size_t id : touching[x]) {
          bool complete = true;
          for (int y : forbidden[id])
            if (y != x && !in[y]) complete = false;
          if (complete) {
            ok = false;
            break;
          }
        }
      } else {
        auto trial = z;
        trial.insert(std::upper_bound(trial.begin(), trial.end(), x), x);
        ok = detail::purged_on(g.e, trial, m);
      }
      if (!ok) continue;
      in[x] = 1;
      z.insert(std::upper_bound(z.begin(), z.end(), x), x);
    }
    return z;
  };

  std::vector<int> order = cand;
  if (psi)
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return touching[a].size() < touching[b].size(); });
  std::mt19937_64 rng(opt.seed);
  for (int attempt = 0; attempt <= opt.restarts; ++attempt) {
    if (attempt) std::shuffle(order.begin(), order.end(), rng);
    auto z = run(order);
    if (z.size() > res.set.size() && detail::purged_on(g.e, z, m)) res.set = std::move(z);
    if (static_cast<int>(res.set.size()) >= n) break;
  }
  if (psi && static_cast<int>(res.set.size()) < n) {
    psi.reset();
    auto z = run(cand);
    if (z.size() > res.set.size()) res.set = std::move(z);
  }
  res.success = static_cast<int>(res.set.size()) >= n;
  if (mode == Mode::Guaranteed && !res.success) throw std::logic_error("purge fell short at guaranteed size");
  return res;
}

/// For a relation that is i-purged for all i with constant auxiliary functions: the index set I
/// of g-values -1, re-verified as the canonical relation on [N-1].
inline IndexSet er_finalize(const Equivalence& e)
{
  const int k = e.k(), n = e.n();
  if (n < k + 1) throw std::invalid_argument("er_finalize needs N >= k+1");
  IndexSet idx{k, 0};
  for (int i = 1; i <= k; ++i) {
    int value = 0;
    bool constant = true;
    for_each_kset(k + 1, n, [&](const KSet& z) {
      if (!constant) return;
      int v = aux_g(e, i, std::span<const int>(z.begin(), z.end()));
      if (!value) value = v;
      if (v != value) constant = false;
    });
    if (!constant) throw std::invalid_argument("auxiliary function g_" + std::to_string(i) + " is not constant");
    if (auto w = purge_check(e, i)) throw std::invalid_argument("relation is not purged: " + w->str());
    if (value < 0) idx.mask |= 1u << (i - 1);
  }
  std::vector<int> head(n - 1);
  std::iota(head.begin(), head.end(), 1);
  if (!agrees_with(restrict(e, head), idx)) throw std::logic_error("er_finalize certificate failed re-verification");
  return idx;
}

struct EqResult {
  std::optional<std::vector<int>> set;
  std::optional<IndexSet> index;
  PipelineTranscript transcript;
  std::string failed_stage;

  bool ok() const { return set.has_value(); }
};

struct ErOptions {
  std::uint64_t stage_cap = 64;
  DeciderScan scan;
  PurgeOptions purge;
};

/// Last stage for relations governed by triples with monotone g_2^2..g_k^2: synchronise, split
/// on the relation seen through the k-1 largest elements, take every second element, finalise.
inline EqResult er_end_step(const GovernedEq& g, int n, Mode mode = Mode::BestEffort, const DeciderScan& scan = {})
{
  (void)scan;
  const Equivalence& e = g.e;
  const int k = e.k();
  if (k < 2) throw std::invalid_argument("er_end_step needs k >= 2");
  if (n < k) throw std::invalid_argument("er_end_step needs n >= k");
  if (g.arity > 3) throw std::invalid_argument("er_end_step needs a relation governed by triples");
  EqResult res;
  auto fail = [&](const std::string& why) {
    res.failed_stage = "er_end_step:" + why;
    if (mode == Mode::Guaranteed) throw std::logic_error("er_end_step failed at " + why);
    return res;
  };
  if (mode == Mode::Guaranteed && BigInt(g.carrier.size()) < er_end_step_bound(k, n))
    throw std::invalid_argument("carrier below (k-1)!(2n)^(2k)");
  GovernedEq h = g;
  h.arity = 3;
  if (static_cast<int>(h.carrier.size()) < k + 2 * n + 1) return fail("sync");

  std::vector<PhiColouring> fam;
  std::vector<Monotonicity> dirs;
  for (int i = 2; i <= k; ++i) {
    fam.push_back(governed_sign_fn(h, i));
    dirs.push_back(monotonicity(fam.back()));
    if (!is_monotone(dirs.back())) return fail("sync");
  }
  const std::uint64_t want = 4ull * n * n - 1;
  std::optional<std::vector<Elem>> y;
  if (mode == Mode::Guaranteed) {
    y = mono_family_sync(fam, want, Mode::Guaranteed, dirs);
  } else {
    for (std::uint64_t t = std::min<std::uint64_t>(want, fam.front().carrier.size()); t >= 2ull * n + 1 && !y; --t)
      y = mono_family_sync(fam, t, Mode::BestEffort, dirs);
  }
  if (!y) return fail("sync");
  res.transcript.add("mono_family_sync", fam.front().carrier.size(), y->size(), true);

  std::vector<int> ys(y->end() - (k - 1), y->end());
  std::vector<int> rest(y->begin(), y->end() - (k - 1));
  std::map<std::uint32_t, std::vector<int>> classes;
  for (int a : rest) {
    KSet s{a};
    for (int v : ys) s.push_back(v);
    classes[e.label(s)].push_back(a);
  }
  const std::size_t need = static_cast<std::size_t>(2 * n - k + 2);
  std::vector<int> zminus;
  const std::vector<int>* largest = nullptr;
  for (const auto& [label, xs] : classes)
    if (!largest || xs.size() > largest->size() || (xs.size() == largest->size() && xs.front() < largest->front()))
      largest = &xs;
  if (largest && largest->size() >= need) {
    zminus.assign(largest->begin(), largest->begin() + static_cast<std::ptrdiff_t>(need));
  } else if (classes.size() >= need) {
    for (const auto& [label, xs] : classes) zminus.push_back(xs.front());
    std::sort(zminus.begin(), zminus.end());
    zminus.resize(need);
  } else {
    return fail("split");
  }
  std::vector<int> z = zminus;
  z.insert(z.end(), ys.begin(), ys.end());
  std::sort(z.begin(), z.end());
  res.transcript.add("split", rest.size(), z.size(), true);

  std::vector<int> star;
  for (std::size_t t = 0; t < z.size(); t += 2) star.push_back(z[t]);
  IndexSet idx;
  try {
    idx = er_finalize(restrict(e, star));
  } catch (const std::invalid_argument&) {
    res.transcript.add("er_finalize", star.size(), 0, false);
    return fail("finalize");
  }
  star.pop_back();
  if (!agrees_with(restrict(e, star), idx)) throw std::logic_error("er_end_step produced an unverified set");
  res.transcript.add("er_finalize", star.size() + 1, star.size(), true);
  res.set = std::move(star);
  res.index = idx;
  return res;
}

namespace detail {

inline std::optional<GovernedEq> trim_eq(GovernedEq g)
{
  const int k = g.e.k();
  if (static_cast<int>(g.carrier.size()) < 2 * k + 3) return std::nullopt;
  g.carrier = std::vector<int>(g.carrier.begin() + 1, g.carrier.end() - k);
  return g;
}

}  // namespace detail

/// Best-effort run of the equivalence-relation construction: one arity reduction, then for
/// m = k-2..1 a purge and an end-homogenisation carrying the monotone g-functions, then er_end_step.
inline EqResult er_pipeline(const Equivalence& e, int n, const ErOptions& opt = {})
{
  const int k = e.k();
  if (k < 2) throw std::invalid_argument("er_pipeline needs k >= 2");
  if (n < k) throw std::invalid_argument("er_pipeline needs n >= k");
  EqResult res;
  PipelineTranscript& tr = res.transcript;
  auto fail = [&](const std::string& stage) {
    res.failed_stage = stage;
    return res;
  };
  if (e.n() < k + 3) return fail("govern_reduce");
  std::vector<int> all(e.n());
  std::iota(all.begin(), all.end(), 1);
  GovernedEq g{e, all, k + 2};
  {
    auto f = representative_colouring(g);
    auto r = govern_reduce(f, std::min<std::uint64_t>(f.carrier.size(), opt.stage_cap), Mode::BestEffort, 0, opt.scan);
    tr.add("govern_reduce", g.carrier.size(), r.reached, r.cert_a);
    if (!r.cert_a || r.set.empty()) return fail("govern_reduce");
    auto t = detail::trim_eq({e, detail::to_ints(r.set), k + 1});
    if (!t) return fail("govern_reduce");
    g = std::move(*t);
  }
  if (k == 2) tr.add("end_homogenise_skipped", g.carrier.size(), g.carrier.size(), true);
  for (int m = k - 2; m >= 1; --m) {
    const int p = m + 2;
    auto q = purge(g, p, static_cast<int>(std::min<std::uint64_t>(g.carrier.size(), opt.stage_cap)), Mode::BestEffort,
                   opt.purge);
    tr.add("purge", g.carrier.size(), q.set.size(), !q.set.empty());
    if (static_cast<int>(q.set.size()) < 2 * k + 3) return fail("purge");
    GovernedEq gq{e, q.set, m + 3};
    std::vector<PhiColouring> fam;
    std::vector<Monotonicity> dirs;
    for (int i = p; i <= k; ++i) fam.push_back(governed_sign_fn(gq, i));
    const IntervalSet x = fam.front().carrier;
    for (auto& s : fam) {
      dirs.push_back(monotonicity(s));
      if (!is_monotone(dirs.back())) {
        tr.add("end_homogenise", x.size(), 0, false);
        return fail("end_homogenise");
      }
    }
    auto f = with_carrier(representative_colouring(gq), x);
    auto r = end_homogenise(f, fam, std::min<std::uint64_t>(x.size(), opt.stage_cap), Mode::BestEffort, 0, dirs, opt.scan);
    tr.add("end_homogenise", x.size(), r.reached, r.certified());
    if (!r.certified() || r.set.empty()) return fail("end_homogenise");
    auto t = detail::trim_eq({e, detail::to_ints(r.set), m + 2});
    if (!t) return fail("end_homogenise");
    g = std::move(*t);
  }
  auto fin = er_end_step(g, n, Mode::BestEffort, opt.scan);
  for (const auto& s : fin.transcript.stages) tr.stages.push_back(s);
  tr.add("er_end_step", g.carrier.size(), fin.ok() ? fin.set->size() : 0, fin.ok());
  if (!fin.ok()) return fail(fin.failed_stage);
  res.set = fin.set;
  res.index = fin.index;
  return res;
}

/// Uniform labels from [0, classes).
inline Equivalence random_equivalence(int k, int n, int classes, std::uint64_t seed)
{
  if (classes < 1) throw std::invalid_argument("need at least one class");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> d(0, static_cast<std::uint32_t>(classes - 1));
  return Equivalence::from_function(k, n, [&](const KSet&) { return d(rng); });
}

}  // namespace canon

#endif  // CANON_ERDOS_RADO_HPP
