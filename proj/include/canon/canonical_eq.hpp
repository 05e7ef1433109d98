#ifndef CANON_CANONICAL_EQ_HPP
#define CANON_CANONICAL_EQ_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "canon/ordering.hpp"

namespace canon {

/// A subset of [k] as a bitmask; bit i-1 stands for index i.
struct IndexSet {
  int k = 0;
  std::uint32_t mask = 0;

  bool contains(int i) const { return mask >> (i - 1) & 1; }
  static IndexSet full(int k) { return {k, (1u << k) - 1}; }

  std::string str() const
  {
    std::string s = "I=";
    bool first = true;
    for (int i = 1; i <= k; ++i)
      if (contains(i)) {
        if (!first) s += ',';
        s += std::to_string(i);
        first = false;
      }
    return s;
  }

  static IndexSet parse(int k, const std::string& text)
  {
    if (text.rfind("I=", 0) != 0) throw std::invalid_argument("index set must look like 'I=1,3'");
    IndexSet r{k, 0};
    std::istringstream is(text.substr(2));
    std::string tok;
    int prev = 0;
    while (std::getline(is, tok, ',')) {
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("bad index '" + tok + "'");
      int v = std::stoi(tok);
      if (v < 1 || v > k || v <= prev) throw std::invalid_argument("indices must be ascending within [k]");
      r.mask |= 1u << (v - 1);
      prev = v;
    }
    return r;
  }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
};

/// The relation identifying k-sets that agree in every position of I.
inline Equivalence canonical_eq(int k, int n, const IndexSet& idx)
{
  if (n < k) throw std::invalid_argument("canonical_eq needs n >= k");
  std::map<std::vector<int>, std::uint32_t> ids;
  std::vector<std::uint32_t> raw;
  raw.reserve(binom(n, k));
  for_each_kset(k, n, [&](const KSet& s) {
    std::vector<int> key;
    for (int i = 1; i <= k; ++i)
      if (idx.contains(i)) key.push_back(s[i - 1]);
    raw.push_back(ids.try_emplace(std::move(key), static_cast<std::uint32_t>(ids.size())).first->second);
  });
  return Equivalence::from_labels(k, n, raw);
}

/// Index sets in the determinism order: decreasing bitmask, so [k] comes first and the empty set last.
inline std::vector<IndexSet> index_sets_in_order(int k)
{
  std::vector<IndexSet> out;
  for (int m = (1 << k) - 1; m >= 0; --m) out.push_back({k, static_cast<std::uint32_t>(m)});
  return out;
}

inline bool agrees_with(const Equivalence& e, const IndexSet& idx)
{
  return e == canonical_eq(e.k(), e.n(), idx);
}

inline std::optional<IndexSet> is_canonical_eq(const Equivalence& e)
{
  for (const auto& idx : index_sets_in_order(e.k()))
    if (agrees_with(e, idx)) return idx;
  return std::nullopt;
}

}  // namespace canon

#endif  // CANON_CANONICAL_EQ_HPP
