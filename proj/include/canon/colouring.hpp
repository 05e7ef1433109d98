#ifndef CANON_COLOURING_HPP
#define CANON_COLOURING_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "canon/kset.hpp"

namespace canon {

using Elem = std::int64_t;

struct Interval {
  Elem lo = 0, hi = -1;  // closed
  std::uint64_t size() const { return hi < lo ? 0 : static_cast<std::uint64_t>(hi - lo) + 1; }
};

/// A finite set of integers stored as sorted disjoint closed intervals.
class IntervalSet {
 public:
  IntervalSet() = default;

  static IntervalSet range(Elem lo, Elem hi)
  {
    IntervalSet s;
    s.append(lo, hi);
    return s;
  }
  static IntervalSet from_sorted(std::span<const Elem> xs)
  {
    IntervalSet s;
    for (Elem x : xs) s.append(x, x);
    return s;
  }
  static IntervalSet from_ints(std::span<const int> xs)
  {
    IntervalSet s;
    for (int x : xs) s.append(x, x);
    return s;
  }

  // Adds [lo, hi], which must lie above every current element.
  void append(Elem lo, Elem hi)
  {
    if (hi < lo) return;
    if (!iv_.empty() && lo <= iv_.back().hi) throw std::invalid_argument("IntervalSet::append out of order");
    if (!iv_.empty() && lo == iv_.back().hi + 1) {
      iv_.back().hi = hi;
    } else {
      prefix_.push_back(size_);
      iv_.push_back({lo, hi});
    }
    size_ += Interval{lo, hi}.size();
  }

  std::uint64_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const std::vector<Interval>& intervals() const { return iv_; }
  Elem min() const
  {
    if (empty()) throw std::out_of_range("min of empty IntervalSet");
    return iv_.front().lo;
  }
  Elem max() const
  {
    if (empty()) throw std::out_of_range("max of empty IntervalSet");
    return iv_.back().hi;
  }

  // The element with `idx` smaller elements.
  Elem nth(std::uint64_t idx) const
  {
    if (idx >= size_) throw std::out_of_range("IntervalSet::nth");
    auto it = std::upper_bound(prefix_.begin(), prefix_.end(), idx);
    std::size_t t = static_cast<std::size_t>(it - prefix_.begin()) - 1;
    return iv_[t].lo + static_cast<Elem>(idx - prefix_[t]);
  }

  // Number of elements below x.
  std::uint64_t rank(Elem x) const
  {
    auto it = std::upper_bound(iv_.begin(), iv_.end(), x, [](Elem v, const Interval& i) { return v < i.lo; });
    if (it == iv_.begin()) return 0;
    std::size_t t = static_cast<std::size_t>(it - iv_.begin()) - 1;
    if (x > iv_[t].hi) return prefix_[t] + iv_[t].size();
    return prefix_[t] + static_cast<std::uint64_t>(x - iv_[t].lo);
  }

  bool contains(Elem x) const
  {
    auto it = std::upper_bound(iv_.begin(), iv_.end(), x, [](Elem v, const Interval& i) { return v < i.lo; });
    return it != iv_.begin() && x <= std::prev(it)->hi;
  }

  // The `count` smallest elements.
  IntervalSet prefix(std::uint64_t count) const
  {
    IntervalSet out;
    for (const auto& i : iv_) {
      if (count == 0) break;
      std::uint64_t take = std::min(count, i.size());
      out.append(i.lo, i.lo + static_cast<Elem>(take) - 1);
      count -= take;
    }
    return out;
  }

  // Everything except the `count` smallest elements.
  IntervalSet drop(std::uint64_t count) const
  {
    IntervalSet out;
    for (const auto& i : iv_) {
      std::uint64_t skip = std::min(count, i.size());
      count -= skip;
      out.append(i.lo + static_cast<Elem>(skip), i.hi);
    }
    return out;
  }

  IntervalSet drop_top(std::uint64_t count) const { return prefix(size_ > count ? size_ - count : 0); }

  IntervalSet without(Elem x) const
  {
    IntervalSet out;
    for (const auto& i : iv_) {
      if (x < i.lo || x > i.hi) {
        out.append(i.lo, i.hi);
      } else {
        out.append(i.lo, x - 1);
        out.append(x + 1, i.hi);
      }
    }
    return out;
  }

  IntervalSet minus(const IntervalSet& other) const
  {
    IntervalSet out;
    std::size_t t = 0;
    for (const auto& i : iv_) {
      Elem lo = i.lo;
      while (t < other.iv_.size() && other.iv_[t].hi < lo) ++t;
      std::size_t u = t;
      while (lo <= i.hi && u < other.iv_.size() && other.iv_[u].lo <= i.hi) {
        out.append(lo, other.iv_[u].lo - 1);
        lo = std::max(lo, other.iv_[u].hi + 1);
        ++u;
      }
      out.append(lo, i.hi);
    }
    return out;
  }

  IntervalSet unite(const IntervalSet& other) const
  {
    std::vector<Interval> all(iv_);
    all.insert(all.end(), other.iv_.begin(), other.iv_.end());
    std::sort(all.begin(), all.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    IntervalSet out;
    for (const auto& i : all) {
      if (!out.empty() && i.lo <= out.max() + 1) {
        Elem lo = out.max() + 1;
        if (i.hi >= lo) out.append(lo, i.hi);
      } else {
        out.append(i.lo, i.hi);
      }
    }
    return out;
  }

  std::vector<Elem> to_vector(std::uint64_t cap = std::uint64_t{1} << 24) const
  {
    if (size_ > cap) throw std::length_error("IntervalSet too large to list");
    std::vector<Elem> out;
    out.reserve(size_);
    for (const auto& i : iv_)
      for (Elem x = i.lo; x <= i.hi; ++x) out.push_back(x);
    return out;
  }

  friend bool operator==(const IntervalSet& a, const IntervalSet& b)
  {
    if (a.iv_.size() != b.iv_.size()) return false;
    for (std::size_t t = 0; t < a.iv_.size(); ++t)
      if (a.iv_[t].lo != b.iv_[t].lo || a.iv_[t].hi != b.iv_[t].hi) return false;
    return true;
  }

 private:
  std::vector<Interval> iv_;
  std::vector<std::uint64_t> prefix_;
  std::uint64_t size_ = 0;
};

/// A colouring of the sorted r-tuples of a carrier. run_end, when present, reports
/// the largest y such that moving xs[pos] anywhere in [xs[pos], y] keeps the value.
template <class V>
struct Colouring {
  using Value = V;
  int arity = 2;
  IntervalSet carrier;
  std::function<V(std::span<const Elem>)> fn;
  std::function<Elem(std::span<const Elem>, int)> run_end;

  V operator()(std::span<const Elem> xs) const { return fn(xs); }
  V operator()(std::initializer_list<Elem> xs) const { return fn(std::span<const Elem>(xs.begin(), xs.size())); }
  Elem run(std::span<const Elem> xs, int pos) const { return run_end ? run_end(xs, pos) : xs[pos]; }
};

using PhiColouring = Colouring<int>;
using Colour = std::string;
using GammaColouring = Colouring<Colour>;

template <class V>
Colouring<V> with_carrier(Colouring<V> f, IntervalSet carrier)
{
  f.carrier = std::move(carrier);
  return f;
}

inline PhiColouring opposite(const PhiColouring& f)
{
  PhiColouring g = f;
  g.fn = [inner = f.fn](std::span<const Elem> xs) { return -inner(xs); };
  return g;
}

// Table-backed colouring of Z^(r): values indexed by the colex rank of position sets.
template <class V>
Colouring<V> table_colouring(int arity, std::vector<Elem> z, std::vector<V> values)
{
  Colouring<V> f;
  f.arity = arity;
  f.carrier = IntervalSet::from_sorted(z);
  auto zs = std::make_shared<const std::vector<Elem>>(std::move(z));
  auto vs = std::make_shared<const std::vector<V>>(std::move(values));
  f.fn = [zs, vs](std::span<const Elem> xs) {
    KSet pos;
    for (Elem x : xs) {
      auto it = std::lower_bound(zs->begin(), zs->end(), x);
      if (it == zs->end() || *it != x) throw std::out_of_range("table colouring queried off its carrier");
      pos.push_back(static_cast<int>(it - zs->begin()) + 1);
    }
    return vs->at(colex_rank(pos));
  };
  return f;
}

// Visits every sorted r-tuple of xs (r = 0 visits the empty tuple once).
template <class Fn>
void for_each_tuple(std::span<const Elem> xs, int r, Fn&& fn)
{
  std::vector<Elem> buf(static_cast<std::size_t>(r));
  if (r == 0) {
    fn(std::span<const Elem>(buf));
    return;
  }
  const int n = static_cast<int>(xs.size());
  if (r > n) return;
  for_each_kset(r, n, [&](const KSet& s) {
    for (int t = 0; t < r; ++t) buf[t] = xs[s[t] - 1];
    fn(std::span<const Elem>(buf));
  });
}

enum class Monotonicity { Increasing, Decreasing, Neither, Constant };

inline std::string to_string(Monotonicity m)
{
  switch (m) {
    case Monotonicity::Increasing: return "increasing";
    case Monotonicity::Decreasing: return "decreasing";
    case Monotonicity::Neither: return "neither";
    case Monotonicity::Constant: return "constant";
  }
  return "?";
}

inline bool is_monotone(Monotonicity m) { return m != Monotonicity::Neither; }
inline bool allows_increasing(Monotonicity m) { return m == Monotonicity::Increasing || m == Monotonicity::Constant; }
inline bool allows_decreasing(Monotonicity m) { return m == Monotonicity::Decreasing || m == Monotonicity::Constant; }

inline bool monotone_opposite(Monotonicity a, Monotonicity b)
{
  if (!is_monotone(a) || !is_monotone(b)) return false;
  return (allows_increasing(a) && allows_decreasing(b)) || (allows_decreasing(a) && allows_increasing(b));
}

/// Exact classification by scanning every last-coordinate chain of the carrier.
inline Monotonicity monotonicity(const PhiColouring& f, std::uint64_t cap = std::uint64_t{1} << 16)
{
  if (f.arity < 1) throw std::invalid_argument("monotonicity needs arity >= 1");
  auto xs = f.carrier.to_vector(cap);
  const int n = static_cast<int>(xs.size());
  const int r = f.arity;
  bool up = false, down = false;
  std::vector<Elem> buf(r);
  auto scan_chain = [&](int from) {
    int prev = 0;
    for (int y = from; y < n; ++y) {
      buf[r - 1] = xs[y];
      int v = f(buf);
      if (y > from) {
        if (v > prev) up = true;
        if (v < prev) down = true;
      }
      prev = v;
    }
  };
  if (r == 1) {
    scan_chain(0);
  } else if (r <= n) {
    for_each_kset(r - 1, n, [&](const KSet& s) {
      if (up && down) return;
      for (int t = 0; t < r - 1; ++t) buf[t] = xs[s[t] - 1];
      scan_chain(s.back());
    });
  }
  if (up && down) return Monotonicity::Neither;
  if (up) return Monotonicity::Increasing;
  if (down) return Monotonicity::Decreasing;
  return Monotonicity::Constant;
}

inline bool is_monochromatic(const PhiColouring& f, std::span<const Elem> set, int colour)
{
  bool ok = true;
  for_each_tuple(set, f.arity, [&](std::span<const Elem> t) {
    if (ok && f(t) != colour) ok = false;
  });
  return ok;
}

struct MonoSet {
  int colour = 0;
  std::vector<Elem> set;
};

enum class Mode { Guaranteed, BestEffort };

namespace detail {

// Split for an increasing f; the -1 side has size s, the +1 side size t.
inline std::optional<MonoSet> split_increasing(const std::function<int(Elem, Elem)>& f, std::vector<Elem> rest,
                                               std::uint64_t s, std::uint64_t t)
{
  std::vector<Elem> tail;
  while (t > 1) {
    if (rest.empty()) return std::nullopt;
    Elem z = rest.back();
    rest.pop_back();
    std::vector<Elem> neg, keep;
    for (Elem x : rest) (f(x, z) < 0 ? neg : keep).push_back(x);
    if (neg.size() + 1 >= s) {
      MonoSet out{-1, {}};
      if (s > 0) {
        out.set.assign(neg.end() - static_cast<std::ptrdiff_t>(s - 1), neg.end());
        out.set.push_back(z);
      }
      return out;
    }
    tail.push_back(z);
    rest = std::move(keep);
    --t;
  }
  MonoSet out{1, {}};
  if (t == 1) {
    if (rest.empty()) return std::nullopt;
    out.set.push_back(rest.back());
  }
  out.set.insert(out.set.end(), tail.rbegin(), tail.rend());
  return out;
}

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b)
{
  if (a && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

inline std::uint64_t sat_pow(std::uint64_t a, std::uint64_t e)
{
  std::uint64_t r = 1;
  while (e--) r = sat_mul(r, a);
  return r;
}

inline std::uint64_t factorial_sat(std::uint64_t n)
{
  std::uint64_t r = 1;
  for (std::uint64_t i = 2; i <= n; ++i) r = sat_mul(r, i);
  return r;
}

inline Monotonicity direction_of(const PhiColouring& f, const std::vector<Monotonicity>& dirs, std::size_t idx)
{
  return idx < dirs.size() ? dirs[idx] : monotonicity(f);
}

}  // namespace detail

inline std::uint64_t mono_split_bound(std::uint64_t s, std::uint64_t t)
{
  return detail::sat_mul(s ? s - 1 : 0, t ? t - 1 : 0) + 1;
}

/// A -1 set of size s or a +1 set of size t for a monotone pair colouring.
/// dir may be supplied to skip the exhaustive monotonicity scan.
inline std::optional<MonoSet> mono_split(const PhiColouring& f, std::uint64_t s, std::uint64_t t,
                                         Mode mode = Mode::Guaranteed, std::optional<Monotonicity> dir = std::nullopt)
{
  if (f.arity != 2) throw std::invalid_argument("mono_split needs a pair colouring");
  if (s < 1 || t < 1) throw std::invalid_argument("mono_split needs s, t >= 1");
  if (mode == Mode::Guaranteed && f.carrier.size() < mono_split_bound(s, t))
    throw std::invalid_argument("mono_split carrier below (s-1)(t-1)+1");
  Monotonicity m = dir ? *dir : monotonicity(f);
  if (!is_monotone(m)) throw std::invalid_argument("mono_split needs a monotone colouring");
  auto xs = f.carrier.to_vector();
  std::optional<MonoSet> res;
  if (allows_increasing(m)) {
    res = detail::split_increasing([&](Elem a, Elem b) { return f({a, b}); }, std::move(xs), s, t);
  } else {
    res = detail::split_increasing([&](Elem a, Elem b) { return -f({a, b}); }, std::move(xs), t, s);
    if (res) res->colour = -res->colour;
  }
  if (res && !is_monochromatic(f, res->set, res->colour)) throw std::logic_error("mono_split produced a non-monochromatic set");
  return res;
}

inline std::uint64_t mono_family_bound(std::uint64_t members, std::uint64_t n)
{
  return detail::sat_mul(detail::factorial_sat(members), detail::sat_pow(n, members + 1));
}

/// An n-set monochromatic under every member of a family of monotone pair colourings
/// sharing one carrier. Members may be given with known directions.
inline std::optional<std::vector<Elem>> mono_family_sync(const std::vector<PhiColouring>& fs, std::uint64_t n,
                                                         Mode mode = Mode::Guaranteed,
                                                         std::vector<Monotonicity> dirs = {})
{
  if (fs.empty()) throw std::invalid_argument("mono_family_sync needs a nonempty family");
  const IntervalSet& carrier = fs.front().carrier;
  std::vector<int> flip(fs.size());
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].arity != 2) throw std::invalid_argument("mono_family_sync needs pair colourings");
    if (!(fs[i].carrier == carrier)) throw std::invalid_argument("family members must share a carrier");
    Monotonicity m = detail::direction_of(fs[i], dirs, i);
    if (!is_monotone(m)) throw std::invalid_argument("family member " + std::to_string(i) + " is not monotone");
    flip[i] = allows_increasing(m) ? 1 : -1;
    if (m != Monotonicity::Constant) active.push_back(i);
  }
  if (mode == Mode::Guaranteed && carrier.size() < mono_family_bound(fs.size(), n))
    throw std::invalid_argument("mono_family_sync carrier below |I|! n^(|I|+1)");

  std::vector<Elem> x = carrier.to_vector();
  auto g = [&](std::size_t i, Elem a, Elem b) { return flip[i] * fs[i]({a, b}); };

  std::optional<std::vector<Elem>> out;
  while (true) {
    if (active.empty()) {
      if (x.size() >= n) out = std::vector<Elem>(x.end() - static_cast<std::ptrdiff_t>(n), x.end());
      break;
    }
    if (active.size() == 1) {
      std::size_t i = active.front();
      auto r = detail::split_increasing([&](Elem a, Elem b) { return g(i, a, b); }, x, n, n);
      if (r) out = std::move(r->set);
      break;
    }
    const std::uint64_t s = detail::sat_mul(detail::factorial_sat(active.size()), detail::sat_pow(n, active.size()));
    auto fmin = [&](Elem a, Elem b) {
      for (std::size_t i : active)
        if (g(i, a, b) < 0) return -1;
      return 1;
    };
    auto r = detail::split_increasing(fmin, x, s, n);
    if (!r) break;
    if (r->colour > 0) {
      out = std::move(r->set);
      break;
    }
    const std::vector<Elem>& a = r->set;
    Elem z = a.back();
    std::size_t best = 0;
    std::vector<Elem> best_set;
    for (std::size_t t = 0; t < active.size(); ++t) {
      std::vector<Elem> xi;
      for (std::size_t u = 0; u + 1 < a.size(); ++u)
        if (g(active[t], a[u], z) < 0) xi.push_back(a[u]);
      if (t == 0 || xi.size() > best_set.size()) {
        best = t;
        best_set = std::move(xi);
      }
    }
    best_set.push_back(z);
    x = std::move(best_set);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best));
  }
  if (!out) return out;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    std::vector<Elem> pair(2);
    int first = 0;
    bool ok = true;
    for_each_tuple(*out, 2, [&](std::span<const Elem> t) {
      int v = fs[i](t);
      if (!first) first = v;
      if (v != first) ok = false;
    });
    if (!ok) throw std::logic_error("mono_family_sync output not monochromatic for member " + std::to_string(i));
  }
  return out;
}

}  // namespace canon

#endif  // CANON_COLOURING_HPP
