#ifndef CANON_CANONISE_HPP
#define CANON_CANONISE_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "canon/canonical.hpp"
#include "canon/colouring.hpp"
#include "canon/homogenise.hpp"
#include "canon/ordering.hpp"

namespace canon {

/// Rank sequence of the induced order on xs^(k) in colex order, one byte per rank.
inline Colour pattern_colour(const Ordering& o, std::span<const int> xs)
{
  auto p = pattern(o, xs);
  Colour c(p.size(), '\0');
  for (std::size_t t = 0; t < p.size(); ++t) c[t] = static_cast<char>('0' + p[t]);
  return c;
}

namespace detail {

inline std::vector<int> to_ints(std::span<const Elem> xs)
{
  std::vector<int> out(xs.size());
  for (std::size_t t = 0; t < xs.size(); ++t) out[t] = static_cast<int>(xs[t]);
  return out;
}

inline std::vector<Elem> to_elems(std::span<const int> xs) { return std::vector<Elem>(xs.begin(), xs.end()); }

inline std::vector<int> top_of(const std::vector<int>& c, int count)
{
  if (count > static_cast<int>(c.size())) throw std::invalid_argument("carrier too small for filler elements");
  return std::vector<int>(c.end() - count, c.end());
}

}  // namespace detail

inline GammaColouring associated_colouring(const Ordering& o)
{
  const int k = o.k();
  if (o.n() < k + 2) throw std::invalid_argument("associated colouring needs N >= k+2");
  GammaColouring f;
  f.arity = k + 2;
  f.carrier = IntervalSet::range(1, o.n());
  f.fn = [o](std::span<const Elem> xs) {
    auto v = detail::to_ints(xs);
    return pattern_colour(o, v);
  };
  return f;
}

/// An ordering together with a carrier on which its associated colouring is
/// (claimed to be) governed by arity-sets.
struct GovernedCarrier {
  Ordering o;
  std::vector<int> carrier;
  int arity = 0;
};

/// f(A) compared with f(first arity elements of A + the largest carrier elements
/// above them); exhaustive or sampled.
inline bool verify_governed(const GovernedCarrier& g, const DeciderScan& scan = {})
{
  const int k = g.o.k(), m = g.arity;
  const int n = static_cast<int>(g.carrier.size());
  if (m < 1 || m > k + 2) return false;
  if (n < k + 2) return true;
  bool ok = true;
  std::vector<int> a(k + 2), b(k + 2);
  detail::scan_sets(k + 2, n, scan, binom(k + 2, k), [&](const KSet& pos) {
    for (int t = 0; t < k + 2; ++t) a[t] = g.carrier[pos[t] - 1];
    for (int t = 0; t < m; ++t) b[t] = a[t];
    for (int t = m; t < k + 2; ++t) b[t] = g.carrier[n - (k + 2) + t];
    if (pattern(g.o, a) != pattern(g.o, b)) ok = false;
    return ok;
  });
  return ok;
}

/// The arity-ary colouring f^m(M) = f(M + top k+2-m carrier elements), on the carrier minus those.
inline GammaColouring representative_colouring(const GovernedCarrier& g)
{
  const int k = g.o.k(), m = g.arity;
  auto fill = detail::top_of(g.carrier, k + 2 - m);
  std::vector<int> dom(g.carrier.begin(), g.carrier.end() - (k + 2 - m));
  GammaColouring f;
  f.arity = m;
  f.carrier = IntervalSet::from_ints(dom);
  f.fn = [o = g.o, fill](std::span<const Elem> xs) {
    auto v = detail::to_ints(xs);
    v.insert(v.end(), fill.begin(), fill.end());
    return pattern_colour(o, v);
  };
  return f;
}

/// eps_i^{m-1} on the carrier minus its minimum and the top k+2-m elements.
inline PhiColouring sign_function_from_governing(const GovernedCarrier& g, int i)
{
  const int k = g.o.k(), m = g.arity;
  if (m < 2 || m > k + 1) throw std::invalid_argument("sign functions need governing arity in [2, k+1]");
  if (i < 1 || i > k) throw std::invalid_argument("sign function index out of range");
  const int nfill = k + 2 - m;
  if (static_cast<int>(g.carrier.size()) < nfill + 1) throw std::invalid_argument("carrier too small");
  auto fill = detail::top_of(g.carrier, nfill);
  std::vector<int> dom(g.carrier.begin() + 1, g.carrier.end() - nfill);
  PhiColouring f;
  f.arity = m - 1;
  f.carrier = IntervalSet::from_ints(dom);
  f.fn = [o = g.o, fill, i](std::span<const Elem> xs) {
    auto v = detail::to_ints(xs);
    v.insert(v.end(), fill.begin(), fill.end());
    return decider_sign(o, {i, KSet(v)});
  };
  return f;
}

/// sigma^m_ij on the carrier minus its minimum and the top k+2-m elements.
inline PhiColouring perm_colouring_from_governing(const GovernedCarrier& g, int i, int j)
{
  const int k = g.o.k(), m = g.arity;
  if (m < 2 || m > k + 1) throw std::invalid_argument("permutation colourings need governing arity in [2, k+1]");
  if (i < 1 || i >= j || j > k) throw std::invalid_argument("permutation colouring needs 1 <= i < j <= k");
  const int nfill = k + 2 - m;
  if (static_cast<int>(g.carrier.size()) < nfill + 1) throw std::invalid_argument("carrier too small");
  auto fill = detail::top_of(g.carrier, nfill);
  std::vector<int> dom(g.carrier.begin() + 1, g.carrier.end() - nfill);
  PhiColouring f;
  f.arity = m;
  f.carrier = IntervalSet::from_ints(dom);
  f.fn = [o = g.o, fill, i, j, k](std::span<const Elem> xs) {
    auto v = detail::to_ints(xs);
    std::vector<int> head(v.begin(), v.end() - 1);
    head.insert(head.end(), fill.begin(), fill.end());
    SignVector eps(k, 1);
    eps[i - 1] = decider_sign(o, {i, KSet(head)});
    eps[j - 1] = decider_sign(o, {j, KSet(head)});
    v.insert(v.end(), fill.begin(), fill.end());
    return perm_decider_sign(o, eps, {i, j, KSet(v)});
  };
  return f;
}

struct StageRecord {
  std::string name;
  std::uint64_t in = 0, out = 0;
  bool cert = false;

  std::string line() const
  {
    return "STAGE " + name + " in=" + std::to_string(in) + " out=" + std::to_string(out) + " cert=" + (cert ? "ok" : "fail");
  }
  static StageRecord parse(const std::string& text)
  {
    std::istringstream is(text);
    std::string tag, in, out, cert;
    StageRecord r;
    if (!(is >> tag >> r.name >> in >> out >> cert) || tag != "STAGE" || in.rfind("in=", 0) != 0 ||
        out.rfind("out=", 0) != 0 || (cert != "cert=ok" && cert != "cert=fail"))
      throw std::invalid_argument("malformed stage record: " + text);
    r.in = std::stoull(in.substr(3));
    r.out = std::stoull(out.substr(4));
    r.cert = cert == "cert=ok";
    return r;
  }
};

struct PipelineTranscript {
  std::vector<StageRecord> stages;

  void add(std::string name, std::uint64_t in, std::uint64_t out, bool cert) { stages.push_back({std::move(name), in, out, cert}); }
  std::string str() const
  {
    std::string s;
    for (const auto& r : stages) s += r.line() + "\n";
    return s;
  }
};

struct CanoniseResult {
  std::optional<std::vector<int>> set;
  std::optional<CanonicalSpec> spec;
  PipelineTranscript transcript;
  std::string failed_stage;

  bool ok() const { return set.has_value(); }
};

struct CanoniseOptions {
  std::uint64_t stage_cap = 64;  // best-effort growth limit for intermediate carriers
  DeciderScan scan;
};

namespace detail {

// Verifies (Z, spec) and fills the result; returns false on an unsound candidate.
inline bool accept(CanoniseResult& res, const Ordering& o, std::vector<int> z)
{
  auto got = is_canonical(induce(o, z));
  if (!got) return false;
  res.set = std::move(z);
  res.spec = *got;
  return true;
}

inline std::optional<std::vector<int>> densify(const Ordering& o, const std::vector<int>& zstar, const DeciderScan& scan)
{
  const int k = o.k();
  if (static_cast<int>(zstar.size()) < 2 * k) return std::nullopt;
  auto dense = dense_canonical_subset(induce(o, zstar), scan);
  if (!dense.subset) return std::nullopt;
  std::vector<int> z;
  for (int p : *dense.subset) z.push_back(zstar[p - 1]);
  return z;
}

// One reduction of the governing arity.
inline std::optional<GovernedCarrier> reduce_once(const GovernedCarrier& g, PipelineTranscript& tr,
                                                  const CanoniseOptions& opt)
{
  auto f = representative_colouring(g);
  std::uint64_t target = std::min<std::uint64_t>(f.carrier.size(), opt.stage_cap);
  auto res = govern_reduce(f, target, Mode::BestEffort, 0, opt.scan);
  tr.add("govern_reduce", g.carrier.size(), res.reached, res.cert_a);
  if (!res.cert_a || res.set.empty()) return std::nullopt;
  return GovernedCarrier{g.o, to_ints(res.set), g.arity - 1};
}

}  // namespace detail

/// Last stage: pigeonhole on unary sign opinions, trim, synchronise all pair permutation
/// colourings, then take the dense canonical subset.
inline CanoniseResult final_step(const GovernedCarrier& g, int n, Mode mode = Mode::BestEffort,
                                 const DeciderScan& scan = {})
{
  const Ordering& o = g.o;
  const int k = o.k();
  CanoniseResult res;
  if (g.arity != 2) throw std::invalid_argument("final_step needs an ordering governed by pairs");
  if (k < 2) throw std::invalid_argument("final_step needs k >= 2");
  const std::uint64_t target = (std::uint64_t{1} << (k - 1)) * static_cast<std::uint64_t>(n);
  auto fail = [&](const char* why) {
    res.failed_stage = why;
    if (mode == Mode::Guaranteed) throw std::logic_error(std::string("final_step failed: ") + why);
    return res;
  };
  if (static_cast<int>(g.carrier.size()) < k + 2) return fail("final_step");

  std::vector<PhiColouring> eps;
  for (int i = 1; i <= k; ++i) eps.push_back(sign_function_from_governing(g, i));
  auto dom = eps.front().carrier.to_vector();
  std::map<std::string, std::vector<int>> classes;
  for (Elem x : dom) {
    std::string key;
    for (const auto& e : eps) key += e({x}) > 0 ? '+' : '-';
    classes[key].push_back(static_cast<int>(x));
  }
  std::vector<int> y;
  for (auto& [key, xs] : classes)
    if (xs.size() > y.size()) y = xs;
  if (static_cast<int>(y.size()) < k + 3) return fail("final_step");

  GovernedCarrier gy{o, y, 2};
  std::vector<PhiColouring> fam;
  std::vector<Monotonicity> dirs;
  for (int i = 1; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j) {
      auto s = perm_colouring_from_governing(gy, i, j);
      Monotonicity m = monotonicity(s);
      if (!is_monotone(m)) return fail("final_step");
      fam.push_back(std::move(s));
      dirs.push_back(m);
    }
  auto zstar = mono_family_sync(fam, target, Mode::BestEffort, dirs);
  if (!zstar) return fail("final_step");
  auto z = detail::densify(o, detail::to_ints(*zstar), scan);
  if (!z || static_cast<int>(z->size()) < n) return fail("final_step");
  z->resize(n);
  if (!detail::accept(res, o, *z)) return fail("final_step");
  return res;
}

/// Best-effort run of the upper-bound construction: two governing reductions, k-2
/// end-homogenisation rounds carrying the monotone permutation colourings, then final_step.
inline CanoniseResult canonise_pipeline(const Ordering& o, int n, const CanoniseOptions& opt = {})
{
  const int k = o.k();
  if (k < 2) throw std::invalid_argument("canonise_pipeline needs k >= 2");
  if (n < 1) throw std::invalid_argument("canonise_pipeline needs n >= 1");
  CanoniseResult res;
  PipelineTranscript& tr = res.transcript;
  auto fail = [&](const std::string& stage) {
    res.failed_stage = stage;
    return res;
  };
  if (o.n() < k + 2) return fail("govern_reduce");
  GovernedCarrier g{o, iota_set(o.n()), k + 2};
  for (int step = 0; step < 2; ++step) {
    if (static_cast<int>(g.carrier.size()) < k + 3) return fail("govern_reduce");
    auto next = detail::reduce_once(g, tr, opt);
    if (!next) return fail("govern_reduce");
    g = std::move(*next);
  }
  if (k == 2) tr.add("end_homogenise_skipped", g.carrier.size(), g.carrier.size(), true);
  for (int m = k - 2; m >= 1; --m) {
    const int nc = static_cast<int>(g.carrier.size());
    if (nc < k + 3) return fail("end_homogenise");
    std::vector<int> xs(g.carrier.begin() + 1, g.carrier.end() - k);
    IntervalSet x = IntervalSet::from_ints(xs);
    auto f = with_carrier(representative_colouring(g), x);
    std::vector<PhiColouring> fam;
    std::vector<Monotonicity> dirs;
    bool mono = true;
    for (int i = m + 2; i <= k; ++i)
      for (int j = i + 1; j <= k; ++j) {
        auto s = with_carrier(perm_colouring_from_governing(g, i, j), x);
        Monotonicity d = monotonicity(s);
        if (!is_monotone(d)) mono = false;
        fam.push_back(std::move(s));
        dirs.push_back(d);
      }
    if (!mono) {
      tr.add("end_homogenise", nc, 0, false);
      return fail("end_homogenise");
    }
    std::uint64_t target = std::min<std::uint64_t>(x.size(), opt.stage_cap);
    auto r = end_homogenise(f, fam, target, Mode::BestEffort, 0, dirs, opt.scan);
    tr.add("end_homogenise", nc, r.reached, r.certified());
    if (!r.certified() || r.set.empty()) return fail("end_homogenise");
    g = GovernedCarrier{o, detail::to_ints(r.set), m + 1};
  }
  auto fin = final_step(g, n, Mode::BestEffort, opt.scan);
  tr.add("final_step", g.carrier.size(), fin.set ? fin.set->size() : 0, fin.ok());
  if (!fin.ok()) return fail("final_step");
  res.set = fin.set;
  res.spec = fin.spec;
  return res;
}

/// Monochromatic set for the associated colouring by k+1 governing reductions and a
/// pigeonhole on the unary governor, then the dense canonical subset.
inline CanoniseResult canonise_baseline(const Ordering& o, int n, const CanoniseOptions& opt = {})
{
  const int k = o.k();
  if (k < 1) throw std::invalid_argument("canonise_baseline needs k >= 1");
  CanoniseResult res;
  PipelineTranscript& tr = res.transcript;
  auto fail = [&](const std::string& stage) {
    res.failed_stage = stage;
    return res;
  };
  if (o.n() < k + 2) return fail("govern_reduce");
  GovernedCarrier g{o, iota_set(o.n()), k + 2};
  while (g.arity > 1) {
    if (static_cast<int>(g.carrier.size()) < k + 3) return fail("govern_reduce");
    auto next = detail::reduce_once(g, tr, opt);
    if (!next) return fail("govern_reduce");
    g = std::move(*next);
  }
  auto f = representative_colouring(g);
  std::map<Colour, std::vector<int>> classes;
  for (Elem x : f.carrier.to_vector()) classes[f({x})].push_back(static_cast<int>(x));
  std::vector<int> y;
  for (auto& [c, xs] : classes)
    if (xs.size() > y.size()) y = xs;
  tr.add("pigeonhole", f.carrier.size(), y.size(), true);
  const std::size_t target = (std::size_t{1} << std::max(0, k - 1)) * static_cast<std::size_t>(n);
  if (y.size() < target) return fail("pigeonhole");
  y.resize(target);
  std::optional<std::vector<int>> z;
  if (k == 1) {
    z = y;
  } else {
    z = detail::densify(o, y, opt.scan);
  }
  bool ok = z && static_cast<int>(z->size()) >= n;
  if (ok) {
    z->resize(n);
    ok = detail::accept(res, o, *z);
  }
  tr.add("dense_subset", y.size(), ok ? n : 0, ok);
  if (!ok) return fail("dense_subset");
  return res;
}

}  // namespace canon

#endif  // CANON_CANONISE_HPP
