#ifndef CANON_KSET_HPP
#define CANON_KSET_HPP

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace canon {

inline constexpr int kMaxK = 8;

// Binomial coefficient, saturating at UINT64_MAX.
inline std::uint64_t binom(std::int64_t n, std::int64_t r)
{
  if (r < 0 || n < 0 || r > n) return 0;
  if (r > n - r) r = n - r;
  constexpr int kRows = 4096, kCols = 13;
  static const std::vector<std::uint64_t> table = [] {
    std::vector<std::uint64_t> t(kRows * kCols, 0);
    for (int i = 0; i < kRows; ++i) {
      t[i * kCols] = 1;
      for (int j = 1; j < kCols && j <= i; ++j) {
        std::uint64_t a = t[(i - 1) * kCols + j - 1], b = t[(i - 1) * kCols + j];
        t[i * kCols + j] = (a > UINT64_MAX - b) ? UINT64_MAX : a + b;
      }
    }
    return t;
  }();
  if (n < kRows && r < kCols) return table[n * kCols + r];
  unsigned __int128 acc = 1;
  for (std::int64_t i = 1; i <= r; ++i) {
    acc = acc * static_cast<unsigned __int128>(n - r + i) / static_cast<unsigned __int128>(i);
    if (acc > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(acc);
}

/// A strictly increasing set of positive integers with small fixed capacity.
class KSet {
 public:
  static constexpr int kCapacity = 12;

  KSet() = default;
  KSet(std::initializer_list<int> xs)
  {
    for (int x : xs) push_back(x);
  }
  explicit KSet(std::span<const int> xs)
  {
    for (int x : xs) push_back(x);
  }

  int size() const { return size_; }
  bool empty() const { return size_ == 0; }
  int operator[](int i) const { return e_[i]; }
  int& operator[](int i) { return e_[i]; }
  int front() const { return e_[0]; }
  int back() const { return e_[size_ - 1]; }
  const int* begin() const { return e_.data(); }
  const int* end() const { return e_.data() + size_; }
  int* begin() { return e_.data(); }
  int* end() { return e_.data() + size_; }
  std::span<const int> span() const { return {e_.data(), static_cast<std::size_t>(size_)}; }

  void push_back(int x)
  {
    if (size_ >= kCapacity) throw std::length_error("KSet capacity exceeded");
    e_[size_++] = x;
  }
  void pop_back() { --size_; }

  bool valid() const
  {
    if (size_ > 0 && e_[0] < 1) return false;
    for (int i = 1; i < size_; ++i)
      if (e_[i - 1] >= e_[i]) return false;
    return true;
  }

  bool contains(int x) const { return std::binary_search(begin(), end(), x); }

  // Copy with element at position pos removed.
  KSet without(int pos) const
  {
    KSet r;
    for (int i = 0; i < size_; ++i)
      if (i != pos) r.push_back(e_[i]);
    return r;
  }

  friend bool operator==(const KSet& a, const KSet& b)
  {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }
  friend std::strong_ordering operator<=>(const KSet& a, const KSet& b)
  {
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
  }

  std::string str() const
  {
    std::string s = "{";
    for (int i = 0; i < size_; ++i) {
      if (i) s += ",";
      s += std::to_string(e_[i]);
    }
    return s + "}";
  }

 private:
  std::array<int, kCapacity> e_{};
  int size_ = 0;
};

/// Colex index: sum over j of C(s_j - 1, j) with j counted from 1.
inline std::uint64_t colex_rank(const KSet& s)
{
  std::uint64_t r = 0;
  for (int j = 0; j < s.size(); ++j) r += binom(s[j] - 1, j + 1);
  return r;
}

inline KSet colex_unrank(std::uint64_t idx, int k)
{
  KSet s;
  for (int j = 0; j < k; ++j) s.push_back(0);
  for (int j = k; j >= 1; --j) {
    // largest v with C(v, j) <= idx
    std::int64_t lo = j - 1, hi = j - 1;
    while (binom(hi, j) <= idx) hi = hi * 2 + 1;
    while (lo < hi) {
      std::int64_t mid = (lo + hi + 1) / 2;
      if (binom(mid, j) <= idx) lo = mid;
      else hi = mid - 1;
    }
    s[j - 1] = static_cast<int>(lo + 1);
    idx -= binom(lo, j);
  }
  return s;
}

inline KSet colex_unrank(std::uint64_t idx, int k, int n)
{
  if (idx >= binom(n, k)) throw std::out_of_range("colex index out of range");
  return colex_unrank(idx, k);
}

inline KSet first_kset(int k)
{
  KSet s;
  for (int i = 1; i <= k; ++i) s.push_back(i);
  return s;
}

// Advance to the colex successor within [n]. Returns false past the last set.
inline bool next_colex(KSet& s, int n)
{
  int k = s.size();
  for (int i = 0; i < k; ++i) {
    int limit = (i + 1 < k) ? s[i + 1] : n + 1;
    if (s[i] + 1 < limit) {
      ++s[i];
      for (int j = 0; j < i; ++j) s[j] = j + 1;
      return true;
    }
  }
  return false;
}

// Calls fn(KSet) for every k-subset of [n] in colex order.
template <class Fn>
void for_each_kset(int k, int n, Fn&& fn)
{
  if (k > n || k < 0) return;
  KSet s = first_kset(k);
  do {
    fn(static_cast<const KSet&>(s));
  } while (next_colex(s, n));
}

// Maps a k-subset of [|xs|] through the order-preserving bijection onto xs.
inline KSet map_through(const KSet& s, std::span<const int> xs)
{
  KSet r;
  for (int v : s) r.push_back(xs[v - 1]);
  return r;
}

inline std::vector<int> iota_set(int n)
{
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i + 1;
  return v;
}

}  // namespace canon

#endif  // CANON_KSET_HPP
