#ifndef CANON_ORACLE_HPP
#define CANON_ORACLE_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "canon/canonical.hpp"
#include "canon/canonical_eq.hpp"
#include "canon/ordering.hpp"

namespace canon {

struct SearchBudget {
  std::uint64_t node_cap = 50'000'000;
  double time_cap_s = 600.0;

  // CANON_NODE_CAP / CANON_TIME_CAP override the defaults.
  static SearchBudget from_env()
  {
    SearchBudget b;
    if (const char* v = std::getenv("CANON_NODE_CAP")) b.node_cap = std::strtoull(v, nullptr, 10);
    if (const char* v = std::getenv("CANON_TIME_CAP")) b.time_cap_s = std::strtod(v, nullptr);
    return b;
  }
};

enum class Found { Yes, No, Unknown };

struct SearchResult {
  Found found = Found::No;
  std::vector<int> set;
  std::optional<CanonicalSpec> spec;
  std::optional<IndexSet> index;
  std::uint64_t nodes = 0;

  std::string line() const
  {
    std::string s = "RESULT found=";
    s += found == Found::Yes ? "1" : found == Found::No ? "0" : "?";
    s += " size=" + std::to_string(set.size()) + " set=";
    for (std::size_t i = 0; i < set.size(); ++i) s += (i ? "," : "") + std::to_string(set[i]);
    s += " spec=";
    if (spec) s += "\"" + spec->str() + "\"";
    else if (index) s += index->str();
    s += " nodes=" + std::to_string(nodes);
    return s;
  }
};

namespace detail {

/// Hereditary canonicity test for subsets of a fixed ordering.
class SubsetCanonicity {
 public:
  explicit SubsetCanonicity(const Ordering& o) : o_(o)
  {
    const int k = o.k();
    for (int s = k; s < 2 * k + 1; ++s)
      for (const auto& spec : all_specs(k)) patterns_[s].emplace(pattern(gen_canonical(k, s, spec), iota_set(s)), spec);
  }

  // A spec whose associated order the subset carries, if any.
  std::optional<CanonicalSpec> check(const std::vector<int>& xs) const
  {
    const int s = static_cast<int>(xs.size());
    if (s < 2 * o_.k() + 1) {
      auto it = patterns_.find(s);
      if (it == patterns_.end()) return std::nullopt;
      auto p = pattern(o_, xs);
      auto hit = it->second.find(p);
      if (hit == it->second.end()) return std::nullopt;
      return hit->second;
    }
    return is_canonical(induce(o_, xs));
  }

 private:
  const Ordering& o_;
  // first spec in determinism order per pattern
  std::map<int, std::map<std::vector<std::uint32_t>, CanonicalSpec>> patterns_;
};

class Clock {
 public:
  explicit Clock(const SearchBudget& b) : b_(b), start_(std::chrono::steady_clock::now()) {}
  bool exceeded(std::uint64_t nodes) const
  {
    if (nodes > b_.node_cap) return true;
    if ((nodes & 1023) == 0) {
      double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
      if (el > b_.time_cap_s) stopped_ = true;
    }
    return stopped_;
  }

 private:
  SearchBudget b_;
  std::chrono::steady_clock::time_point start_;
  mutable bool stopped_ = false;
};

}  // namespace detail

/// Depth-first search for an n-subset carrying a canonical order; extensions in increasing order.
inline SearchResult search_canonical_subset(const Ordering& o, int n, const SearchBudget& budget = {})
{
  const int k = o.k(), N = o.n();
  if (!(N >= n && n >= k)) throw std::invalid_argument("search needs N >= n >= k");
  detail::SubsetCanonicity canon(o);
  detail::Clock clock(budget);
  SearchResult res;
  std::vector<int> cur;
  bool unknown = false;
  std::function<bool(int)> dfs = [&](int from) -> bool {
    if (static_cast<int>(cur.size()) == n) {
      res.spec = canon.check(cur);
      res.set = cur;
      return true;
    }
    for (int v = from; v <= N - (n - static_cast<int>(cur.size())) + 1; ++v) {
      if (clock.exceeded(++res.nodes)) {
        unknown = true;
        return false;
      }
      cur.push_back(v);
      if (static_cast<int>(cur.size()) <= k || canon.check(cur)) {
        if (dfs(v + 1)) return true;
        if (unknown) return false;
      }
      cur.pop_back();
    }
    return false;
  };
  if (dfs(1)) res.found = Found::Yes;
  else res.found = unknown ? Found::Unknown : Found::No;
  return res;
}

/// Largest canonical subset by branch and bound; the lexicographically smallest among maxima.
inline SearchResult max_canonical_subset(const Ordering& o, const SearchBudget& budget = {})
{
  const int k = o.k(), N = o.n();
  detail::SubsetCanonicity canon(o);
  detail::Clock clock(budget);
  SearchResult res;
  std::vector<int> cur, best = iota_set(std::min(k, N));
  bool unknown = false;
  std::function<void(int)> dfs = [&](int from) {
    if (cur.size() > best.size()) best = cur;
    for (int v = from; v <= N; ++v) {
      if (static_cast<int>(cur.size()) + (N - v + 1) <= static_cast<int>(best.size())) return;
      if (clock.exceeded(++res.nodes)) {
        unknown = true;
        return;
      }
      cur.push_back(v);
      if (static_cast<int>(cur.size()) <= k || canon.check(cur)) dfs(v + 1);
      cur.pop_back();
      if (unknown) return;
    }
  };
  dfs(1);
  res.set = best;
  res.spec = canon.check(best);
  res.found = unknown ? Found::Unknown : Found::Yes;
  return res;
}

/// DFS for an n-subset on which e agrees with some canonical relation.
inline SearchResult search_canonical_eq_subset(const Equivalence& e, int n, const SearchBudget& budget = {})
{
  const int k = e.k(), N = e.n();
  if (!(N >= n && n >= k)) throw std::invalid_argument("search needs N >= n >= k");
  detail::Clock clock(budget);
  SearchResult res;
  std::vector<int> cur;
  bool unknown = false;
  auto ok = [&]() { return static_cast<int>(cur.size()) < k || is_canonical_eq(restrict(e, cur)).has_value(); };
  std::function<bool(int)> dfs = [&](int from) -> bool {
    if (static_cast<int>(cur.size()) == n) {
      res.set = cur;
      res.index = is_canonical_eq(restrict(e, cur));
      return true;
    }
    for (int v = from; v <= N - (n - static_cast<int>(cur.size())) + 1; ++v) {
      if (clock.exceeded(++res.nodes)) {
        unknown = true;
        return false;
      }
      cur.push_back(v);
      if (ok()) {
        if (dfs(v + 1)) return true;
        if (unknown) return false;
      }
      cur.pop_back();
    }
    return false;
  };
  if (dfs(1)) res.found = Found::Yes;
  else res.found = unknown ? Found::Unknown : Found::No;
  return res;
}

namespace detail {

inline int longest_monotone(const std::vector<int>& p, bool increasing)
{
  std::vector<int> tails;
  for (int v : p) {
    int x = increasing ? v : -v;
    auto it = std::lower_bound(tails.begin(), tails.end(), x);
    if (it == tails.end()) tails.push_back(x);
    else *it = x;
  }
  return static_cast<int>(tails.size());
}

}  // namespace detail

inline bool has_monotone_subsequence(const std::vector<int>& p, int n)
{
  return detail::longest_monotone(p, true) >= n || detail::longest_monotone(p, false) >= n;
}

inline constexpr int kL1MaxN = 4;

struct L1Report {
  bool ok = false;
  std::vector<int> lower_witness;    // length (n-1)^2, no monotone n-subsequence
  std::uint64_t upper_checked = 0;   // permutations of length (n-1)^2+1 examined
};

/// Exhaustive check of L^(1)(n) = (n-1)^2+1.
inline L1Report verify_L1(int n, int max_n = kL1MaxN)
{
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (n > max_n) throw std::length_error("verify_L1 refused above n=" + std::to_string(max_n));
  L1Report rep;
  const int lo = (n - 1) * (n - 1);
  std::vector<int> p = iota_set(lo);
  bool found_lower = false;
  do {
    if (!has_monotone_subsequence(p, n)) {
      found_lower = true;
      rep.lower_witness = p;
      break;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  std::vector<int> q = iota_set(lo + 1);
  bool all_upper = true;
  do {
    ++rep.upper_checked;
    if (!has_monotone_subsequence(q, n)) {
      all_upper = false;
      break;
    }
  } while (std::next_permutation(q.begin(), q.end()));
  rep.ok = found_lower && all_upper;
  return rep;
}

}  // namespace canon

#endif  // CANON_ORACLE_HPP
