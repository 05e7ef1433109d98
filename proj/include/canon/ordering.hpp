#ifndef CANON_ORDERING_HPP
#define CANON_ORDERING_HPP

#include <compare>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "canon/kset.hpp"

namespace canon {

inline constexpr std::uint64_t kDefaultMaterialiseCap = std::uint64_t{1} << 22;

/// Pure comparator on k-sets; the lazy backing of an Ordering.
class LazyComparator {
 public:
  virtual ~LazyComparator() = default;
  virtual std::strong_ordering compare(const KSet& a, const KSet& b) const = 0;
  virtual std::string tag() const = 0;
};

/// A strict total order on [n]^(k), explicit or lazy.
class Ordering {
 public:
  Ordering() = default;

  static Ordering from_ranks(int k, int n, std::vector<std::uint32_t> ranks)
  {
    if (k < 0 || n < k) throw std::invalid_argument("ordering needs n >= k >= 0");
    if (ranks.size() != binom(n, k)) throw std::invalid_argument("rank table has wrong length");
    std::vector<char> seen(ranks.size(), 0);
    for (auto r : ranks) {
      if (r >= ranks.size() || seen[r]) throw std::invalid_argument("ranks are not a permutation");
      seen[r] = 1;
    }
    Ordering o;
    o.k_ = k;
    o.n_ = n;
    o.ranks_ = std::make_shared<const std::vector<std::uint32_t>>(std::move(ranks));
    return o;
  }

  static Ordering lazy(int k, int n, std::shared_ptr<const LazyComparator> cmp)
  {
    if (k < 0 || n < k) throw std::invalid_argument("ordering needs n >= k >= 0");
    Ordering o;
    o.k_ = k;
    o.n_ = n;
    o.lazy_ = std::move(cmp);
    return o;
  }

  int k() const { return k_; }
  int n() const { return n_; }
  std::uint64_t size() const { return binom(n_, k_); }
  bool is_explicit() const { return ranks_ != nullptr; }
  const std::vector<std::uint32_t>& ranks() const { return *ranks_; }
  const std::shared_ptr<const LazyComparator>& comparator() const { return lazy_; }
  std::string tag() const { return lazy_ ? lazy_->tag() : "explicit"; }

  std::strong_ordering compare(const KSet& a, const KSet& b) const
  {
    if (ranks_) return (*ranks_)[colex_rank(a)] <=> (*ranks_)[colex_rank(b)];
    return lazy_->compare(a, b);
  }
  bool less(const KSet& a, const KSet& b) const { return compare(a, b) < 0; }

 private:
  int k_ = 0, n_ = 0;
  std::shared_ptr<const std::vector<std::uint32_t>> ranks_;
  std::shared_ptr<const LazyComparator> lazy_;
};

namespace detail {

class InducedComparator : public LazyComparator {
 public:
  InducedComparator(Ordering parent, std::vector<int> map) : parent_(std::move(parent)), map_(std::move(map)) {}
  std::strong_ordering compare(const KSet& a, const KSet& b) const override
  {
    return parent_.compare(map_through(a, map_), map_through(b, map_));
  }
  std::string tag() const override { return "induced:" + parent_.tag(); }
  const Ordering& parent() const { return parent_; }
  const std::vector<int>& map() const { return map_; }

 private:
  Ordering parent_;
  std::vector<int> map_;
};

}  // namespace detail

/// Rank of each k-subset of xs (indexed by colex index over [|xs|]) within the induced order.
inline std::vector<std::uint32_t> pattern(const Ordering& o, std::span<const int> xs)
{
  const int k = o.k();
  const int m = static_cast<int>(xs.size());
  std::vector<KSet> sets;
  sets.reserve(binom(m, k));
  for_each_kset(k, m, [&](const KSet& s) { sets.push_back(map_through(s, xs)); });
  std::vector<std::uint32_t> idx(sets.size());
  std::iota(idx.begin(), idx.end(), 0u);
  if (o.is_explicit()) {
    std::vector<std::uint32_t> pr(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) pr[i] = o.ranks()[colex_rank(sets[i])];
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return pr[a] < pr[b]; });
  } else {
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return o.less(sets[a], sets[b]); });
  }
  std::vector<std::uint32_t> ranks(sets.size());
  for (std::uint32_t r = 0; r < idx.size(); ++r) ranks[idx[r]] = r;
  return ranks;
}

inline Ordering materialise(const Ordering& o, std::uint64_t cap = kDefaultMaterialiseCap)
{
  if (o.is_explicit()) return o;
  if (o.size() > cap) throw std::length_error("ordering too large to materialise");
  return Ordering::from_ranks(o.k(), o.n(), pattern(o, iota_set(o.n())));
}

inline void check_subset(std::span<const int> xs, int n)
{
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < 1 || xs[i] > n) throw std::invalid_argument("subset element out of range");
    if (i && xs[i - 1] >= xs[i]) throw std::invalid_argument("subset must be strictly increasing");
  }
}

/// The suborder on X relabelled onto [|X|].
inline Ordering induce(const Ordering& o, std::span<const int> xs)
{
  const int m = static_cast<int>(xs.size());
  if (m < o.k()) throw std::invalid_argument("induce needs |X| >= k");
  check_subset(xs, o.n());
  if (m == o.n()) return o;
  if (o.is_explicit()) return Ordering::from_ranks(o.k(), m, pattern(o, xs));
  std::vector<int> map(xs.begin(), xs.end());
  Ordering parent = o;
  if (auto ind = std::dynamic_pointer_cast<const detail::InducedComparator>(o.comparator())) {
    for (int& v : map) v = ind->map()[v - 1];
    parent = ind->parent();
  }
  return Ordering::lazy(o.k(), m, std::make_shared<detail::InducedComparator>(parent, std::move(map)));
}

inline bool same_pattern(const Ordering& o, std::span<const int> a, std::span<const int> b)
{
  if (a.size() != b.size()) throw std::invalid_argument("same_pattern needs equal sizes");
  if (static_cast<int>(a.size()) < o.k()) throw std::invalid_argument("same_pattern needs |A| >= k");
  return pattern(o, a) == pattern(o, b);
}

/// A partition of [n]^(k) stored as class labels normalised by first occurrence.
class Equivalence {
 public:
  Equivalence() = default;

  static Equivalence from_labels(int k, int n, const std::vector<std::uint32_t>& raw)
  {
    if (k < 0 || n < k) throw std::invalid_argument("equivalence needs n >= k >= 0");
    if (raw.size() != binom(n, k)) throw std::invalid_argument("label table has wrong length");
    Equivalence e;
    e.k_ = k;
    e.n_ = n;
    e.labels_.resize(raw.size());
    std::vector<std::uint32_t> remap;
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] >= remap.size()) remap.resize(raw[i] + 1, UINT32_MAX);
      if (remap[raw[i]] == UINT32_MAX) remap[raw[i]] = next++;
      e.labels_[i] = remap[raw[i]];
    }
    e.classes_ = next;
    return e;
  }

  template <class Fn>
  static Equivalence from_function(int k, int n, Fn&& label_of)
  {
    std::vector<std::uint32_t> raw;
    raw.reserve(binom(n, k));
    for_each_kset(k, n, [&](const KSet& s) { raw.push_back(static_cast<std::uint32_t>(label_of(s))); });
    return from_labels(k, n, raw);
  }

  int k() const { return k_; }
  int n() const { return n_; }
  std::uint32_t num_classes() const { return classes_; }
  const std::vector<std::uint32_t>& labels() const { return labels_; }
  std::uint32_t label(const KSet& s) const { return labels_[colex_rank(s)]; }
  bool equiv(const KSet& a, const KSet& b) const { return label(a) == label(b); }

  friend bool operator==(const Equivalence& a, const Equivalence& b)
  {
    return a.k_ == b.k_ && a.n_ == b.n_ && a.labels_ == b.labels_;
  }

 private:
  int k_ = 0, n_ = 0;
  std::uint32_t classes_ = 0;
  std::vector<std::uint32_t> labels_;
};

inline Equivalence restrict(const Equivalence& e, std::span<const int> xs)
{
  if (static_cast<int>(xs.size()) < e.k()) throw std::invalid_argument("restrict needs |X| >= k");
  check_subset(xs, e.n());
  return Equivalence::from_function(e.k(), static_cast<int>(xs.size()),
                                    [&](const KSet& s) { return e.label(map_through(s, xs)); });
}

}  // namespace canon

#endif  // CANON_ORDERING_HPP
