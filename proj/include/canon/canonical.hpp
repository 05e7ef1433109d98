#ifndef CANON_CANONICAL_HPP
#define CANON_CANONICAL_HPP

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "canon/kset.hpp"
#include "canon/ordering.hpp"

namespace canon {

using SignVector = std::vector<int>;
using Perm = std::vector<int>;  // sigma(1), ..., sigma(k), values in [k]

struct CanonicalSpec {
  SignVector eps;
  Perm sigma;

  int k() const { return static_cast<int>(eps.size()); }

  std::string str() const
  {
    std::string s = "eps=";
    for (int e : eps) s += e > 0 ? '+' : '-';
    s += " sigma=";
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(sigma[i]);
    }
    return s;
  }

  static CanonicalSpec parse(const std::string& text)
  {
    std::istringstream is(text);
    std::string a, b, extra;
    if (!(is >> a >> b) || (is >> extra) || a.rfind("eps=", 0) != 0 || b.rfind("sigma=", 0) != 0)
      throw std::invalid_argument("spec must look like 'eps=+- sigma=1,2'");
    CanonicalSpec s;
    for (char c : a.substr(4)) {
      if (c != '+' && c != '-') throw std::invalid_argument("eps must use + and -");
      s.eps.push_back(c == '+' ? 1 : -1);
    }
    std::string rest = b.substr(6);
    std::size_t pos = 0;
    while (pos <= rest.size() && !rest.empty()) {
      std::size_t comma = rest.find(',', pos);
      std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("sigma must be comma-separated integers");
      s.sigma.push_back(std::stoi(tok));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    s.validate();
    return s;
  }

  void validate() const
  {
    int k = static_cast<int>(eps.size());
    if (static_cast<int>(sigma.size()) != k) throw std::invalid_argument("eps and sigma lengths differ");
    std::vector<char> seen(k + 1, 0);
    for (int v : sigma) {
      if (v < 1 || v > k || seen[v]) throw std::invalid_argument("sigma is not a permutation");
      seen[v] = 1;
    }
    for (int e : eps)
      if (e != 1 && e != -1) throw std::invalid_argument("eps entries must be +-1");
  }

  friend bool operator==(const CanonicalSpec&, const CanonicalSpec&) = default;
};

inline CanonicalSpec identity_spec(int k)
{
  CanonicalSpec s;
  s.eps.assign(k, 1);
  for (int i = 1; i <= k; ++i) s.sigma.push_back(i);
  return s;
}

/// All k!2^k specs: eps as a +/- string in lexicographic order ('+' first), then sigma lexicographic.
inline std::vector<CanonicalSpec> all_specs(int k)
{
  std::vector<CanonicalSpec> out;
  for (int mask = 0; mask < (1 << k); ++mask) {
    CanonicalSpec s = identity_spec(k);
    for (int i = 0; i < k; ++i) s.eps[i] = (mask >> (k - 1 - i)) & 1 ? -1 : 1;
    do {
      out.push_back(s);
    } while (std::next_permutation(s.sigma.begin(), s.sigma.end()));
  }
  return out;
}

inline std::strong_ordering associated_compare(const CanonicalSpec& spec, const KSet& x, const KSet& y)
{
  if (x.size() != spec.k() || y.size() != spec.k()) throw std::invalid_argument("uniformity mismatch");
  for (int r = 0; r < spec.k(); ++r) {
    int p = spec.sigma[r] - 1;
    long long a = static_cast<long long>(spec.eps[p]) * x[p];
    long long b = static_cast<long long>(spec.eps[p]) * y[p];
    if (a != b) return a <=> b;
  }
  return std::strong_ordering::equal;
}

class CanonicalComparator : public LazyComparator {
 public:
  explicit CanonicalComparator(CanonicalSpec spec) : spec_(std::move(spec)) {}
  std::strong_ordering compare(const KSet& a, const KSet& b) const override
  {
    return associated_compare(spec_, a, b);
  }
  std::string tag() const override { return "canonical"; }
  const CanonicalSpec& spec() const { return spec_; }

 private:
  CanonicalSpec spec_;
};

inline Ordering gen_canonical(int k, int n, const CanonicalSpec& spec)
{
  spec.validate();
  if (spec.k() != k) throw std::invalid_argument("spec uniformity differs from k");
  if (n < k) throw std::invalid_argument("gen_canonical needs n >= k");
  return Ordering::lazy(k, n, std::make_shared<CanonicalComparator>(spec));
}

/// An i-decider given as its k+1 elements; A sits at 0-based positions i-1, i.
struct IDecider {
  int i = 1;
  KSet elems;
};

/// An ij-decider given as its k+2 elements; A at positions i-1, i and B at j, j+1.
struct IJDecider {
  int i = 1, j = 2;
  KSet elems;
};

struct DisagreementWitness {
  int i = 0, j = 0;  // j == 0 for sign disagreements
  KSet first, second;
  std::string str() const
  {
    std::string s = j ? "perm " + std::to_string(i) + "," + std::to_string(j) : "sign " + std::to_string(i);
    return s + " " + first.str() + " vs " + second.str();
  }
};

inline int decider_sign(const Ordering& o, const IDecider& s)
{
  const int k = o.k();
  if (s.elems.size() != k + 1 || !s.elems.valid() || s.i < 1 || s.i > k || s.elems.back() > o.n())
    throw std::invalid_argument("malformed i-decider");
  KSet with_c = s.elems.without(s.i);
  KSet with_d = s.elems.without(s.i - 1);
  return o.less(with_c, with_d) ? 1 : -1;
}

inline int perm_decider_sign(const Ordering& o, const SignVector& eps, const IJDecider& p)
{
  const int k = o.k();
  if (p.elems.size() != k + 2 || !p.elems.valid() || p.i < 1 || p.i >= p.j || p.j > k ||
      p.elems.back() > o.n() || static_cast<int>(eps.size()) != k)
    throw std::invalid_argument("malformed ij-decider");
  const int a1 = p.i - 1, a2 = p.i, b1 = p.j, b2 = p.j + 1;
  int ci = eps[p.i - 1] > 0 ? a1 : a2, di = eps[p.i - 1] > 0 ? a2 : a1;
  int cj = eps[p.j - 1] > 0 ? b1 : b2, dj = eps[p.j - 1] > 0 ? b2 : b1;
  auto build = [&](int keep_a, int keep_b) {
    KSet r;
    for (int t = 0; t < k + 2; ++t) {
      if ((t == a1 || t == a2) && t != keep_a) continue;
      if ((t == b1 || t == b2) && t != keep_b) continue;
      r.push_back(p.elems[t]);
    }
    return r;
  };
  return o.less(build(ci, dj), build(di, cj)) ? 1 : -1;
}

/// Controls whether decider scans are exhaustive or sampled.
struct DeciderScan {
  std::uint64_t exhaustive_cap = 2'000'000;
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 1;
};

namespace detail {

inline KSet random_kset(int k, int n, std::mt19937_64& rng)
{
  std::vector<int> pool;
  std::uniform_int_distribution<int> d(1, n);
  while (static_cast<int>(pool.size()) < k) {
    int v = d(rng);
    if (std::find(pool.begin(), pool.end(), v) == pool.end()) pool.push_back(v);
  }
  std::sort(pool.begin(), pool.end());
  return KSet(pool);
}

// Visits (size)-subsets of [n] exhaustively or by sampling; fn returns false to stop.
template <class Fn>
bool scan_sets(int size, int n, const DeciderScan& scan, std::uint64_t per_set, Fn&& fn)
{
  std::uint64_t total = binom(n, size);
  if (total <= scan.exhaustive_cap / std::max<std::uint64_t>(per_set, 1)) {
    KSet s = first_kset(size);
    do {
      if (!fn(s)) break;
    } while (next_colex(s, n));
    return true;
  }
  std::mt19937_64 rng(scan.seed);
  for (std::uint64_t t = 0; t < scan.samples; ++t)
    if (!fn(random_kset(size, n, rng))) break;
  return false;
}

}  // namespace detail

struct SignResult {
  std::optional<SignVector> eps;
  std::optional<DisagreementWitness> witness;
  bool exhaustive = true;
};

inline SignResult extract_sign(const Ordering& o, const DeciderScan& scan = {})
{
  const int k = o.k(), n = o.n();
  if (n < k + 1) throw std::invalid_argument("extract_sign needs n >= k+1");
  SignResult res;
  SignVector eps(k, 0);
  std::vector<KSet> first(k);
  res.exhaustive = detail::scan_sets(k + 1, n, scan, k, [&](const KSet& s) {
    for (int i = 1; i <= k; ++i) {
      int v = decider_sign(o, {i, s});
      if (eps[i - 1] == 0) {
        eps[i - 1] = v;
        first[i - 1] = s;
      } else if (eps[i - 1] != v) {
        res.witness = DisagreementWitness{i, 0, first[i - 1], s};
        return false;
      }
    }
    return true;
  });
  if (!res.witness) res.eps = eps;
  return res;
}

struct PermResult {
  std::optional<Perm> sigma;
  std::optional<DisagreementWitness> witness;
  bool exhaustive = true;
};

inline int perm_sign_of(const Perm& sigma, int i, int j)
{
  int pi = 0, pj = 0;
  for (int r = 0; r < static_cast<int>(sigma.size()); ++r) {
    if (sigma[r] == i) pi = r;
    if (sigma[r] == j) pj = r;
  }
  return pj > pi ? 1 : -1;
}

/// Sorts the witness sets x_i = {c_i} + {d_j : j != i} built from [2k].
inline Perm perm_from_witness_sets(const Ordering& o, const SignVector& eps)
{
  const int k = o.k();
  std::vector<KSet> xs(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      int lo = 2 * j + 1, hi = 2 * j + 2;
      int c = eps[j] > 0 ? lo : hi, d = eps[j] > 0 ? hi : lo;
      xs[i].push_back(i == j ? c : d);
    }
  }
  Perm sigma(k);
  for (int i = 0; i < k; ++i) sigma[i] = i + 1;
  std::stable_sort(sigma.begin(), sigma.end(), [&](int a, int b) { return o.less(xs[a - 1], xs[b - 1]); });
  return sigma;
}

inline PermResult extract_perm(const Ordering& o, const SignVector& eps, bool check_all = false,
                               const DeciderScan& scan = {})
{
  const int k = o.k(), n = o.n();
  if (n < 2 * k) throw std::invalid_argument("extract_perm needs n >= 2k");
  if (static_cast<int>(eps.size()) != k) throw std::invalid_argument("sign vector length differs from k");
  PermResult res;
  Perm sigma = perm_from_witness_sets(o, eps);
  if (check_all && k >= 2) {
    res.exhaustive = detail::scan_sets(k + 2, n, scan, k * (k - 1) / 2, [&](const KSet& s) {
      for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j)
          if (perm_decider_sign(o, eps, {i, j, s}) != perm_sign_of(sigma, i, j)) {
            KSet ref;
            for (int t = 1; t <= k + 2; ++t) ref.push_back(t);
            res.witness = DisagreementWitness{i, j, ref, s};
            return false;
          }
      return true;
    });
  }
  if (!res.witness) res.sigma = sigma;
  return res;
}

inline bool is_sound_pair(const Ordering& o, const CanonicalSpec& spec, const KSet& x, const KSet& y)
{
  return o.less(x, y) == (associated_compare(spec, x, y) < 0);
}

inline constexpr int kNaiveMaxN = 12;

inline bool is_canonical_naive(const Ordering& o, int max_n = kNaiveMaxN)
{
  const int k = o.k(), n = o.n();
  if (n > max_n) throw std::length_error("definition-direct canonicity check refused above n=" + std::to_string(max_n));
  for (int m = k; m <= n; ++m) {
    std::optional<std::vector<std::uint32_t>> ref;
    bool ok = true;
    for_each_kset(m, n, [&](const KSet& a) {
      if (!ok) return;
      auto p = pattern(o, a.span());
      if (!ref) ref = std::move(p);
      else if (p != *ref) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

// Checks o against the associated order of spec by walking the key-sorted chain.
inline bool matches_spec(const Ordering& o, const CanonicalSpec& spec)
{
  std::vector<KSet> sets;
  sets.reserve(o.size());
  for_each_kset(o.k(), o.n(), [&](const KSet& s) { sets.push_back(s); });
  std::sort(sets.begin(), sets.end(), [&](const KSet& a, const KSet& b) { return associated_compare(spec, a, b) < 0; });
  for (std::size_t t = 1; t < sets.size(); ++t)
    if (!o.less(sets[t - 1], sets[t])) return false;
  return true;
}

/// The spec whose associated ordering equals o, if any.
inline std::optional<CanonicalSpec> is_canonical(const Ordering& o)
{
  const int k = o.k(), n = o.n();
  if (k == 0) return CanonicalSpec{};
  if (n >= 2 * k + 1) {
    KSet base = first_kset(k + 1);
    SignVector eps(k);
    for (int i = 1; i <= k; ++i) eps[i - 1] = decider_sign(o, {i, base});
    CanonicalSpec spec{eps, perm_from_witness_sets(o, eps)};
    if (matches_spec(o, spec)) return spec;
    return std::nullopt;
  }
  if (!is_canonical_naive(o)) return std::nullopt;
  auto target = pattern(o, iota_set(n));
  for (const auto& spec : all_specs(k))
    if (pattern(gen_canonical(k, n, spec), iota_set(n)) == target) return spec;
  return std::nullopt;
}

struct DenseResult {
  std::optional<std::vector<int>> subset;
  std::optional<DisagreementWitness> witness;
  bool exhaustive = true;
};

/// W = {x in [N] : x = 1 mod 2^(k-1)} after checking sign and permutation definiteness.
inline DenseResult dense_canonical_subset(const Ordering& o, const DeciderScan& scan = {})
{
  const int k = o.k(), n = o.n();
  if (n < 2 * k) throw std::invalid_argument("dense_canonical_subset needs n >= 2k");
  DenseResult res;
  auto sr = extract_sign(o, scan);
  if (sr.witness) {
    res.witness = sr.witness;
    return res;
  }
  auto pr = extract_perm(o, *sr.eps, true, scan);
  if (pr.witness) {
    res.witness = pr.witness;
    return res;
  }
  res.exhaustive = sr.exhaustive && pr.exhaustive;
  std::vector<int> w;
  const int step = 1 << std::max(0, k - 1);
  for (int x = 1; x <= n; x += step) w.push_back(x);
  res.subset = std::move(w);
  return res;
}

}  // namespace canon

#endif  // CANON_CANONICAL_HPP
