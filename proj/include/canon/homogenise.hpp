#ifndef CANON_HOMOGENISE_HPP
#define CANON_HOMOGENISE_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "canon/bignum.hpp"
#include "canon/canonical.hpp"
#include "canon/colouring.hpp"
#include "canon/kset.hpp"

namespace canon {

/// f restricted to Z^(arity) is governed by the stored (arity-1)-ary table.
template <class V>
struct GovernCertificate {
  int arity = 0;
  std::vector<Elem> carrier;
  std::vector<V> governor;  // indexed by colex rank of position sets in Z^(arity-1)

  Colouring<V> governing() const { return table_colouring<V>(arity - 1, carrier, governor); }
};

/// Checks f(x_1..x_r) = f'(x_1..x_{r-1}) on Z^(r), exhaustively or by sampling.
template <class V>
bool verify_governs(const Colouring<V>& f, const GovernCertificate<V>& cert, const DeciderScan& scan = {})
{
  const int r = cert.arity;
  const int n = static_cast<int>(cert.carrier.size());
  if (f.arity != r || r < 2) return false;
  if (cert.governor.size() != binom(n, r - 1)) return false;
  if (n < r) return true;
  bool ok = true;
  std::vector<Elem> buf(r);
  detail::scan_sets(r, n, scan, 1, [&](const KSet& pos) {
    for (int t = 0; t < r; ++t) buf[t] = cert.carrier[pos[t] - 1];
    KSet head = pos;
    head.pop_back();
    if (f(buf) != cert.governor[colex_rank(head)]) ok = false;
    return ok;
  });
  return ok;
}

template <class V>
struct HomogeniseResult {
  bool success = false;
  std::uint64_t reached = 0;  // largest secure size
  std::vector<Elem> set;
  GovernCertificate<V> f_cert;
  std::vector<GovernCertificate<int>> g_certs;
  std::vector<Monotonicity> g_dirs, g_prime_dirs;
  bool cert_a = false, cert_b = false, cert_c = false;

  bool certified() const { return cert_a && cert_b && cert_c; }
};

inline Huge end_homogenise_bound(std::uint64_t gamma, std::uint64_t members, std::uint64_t n, int r, int s)
{
  Huge first = Huge::pow(Huge(BigInt(2 * gamma)), Huge(boost::multiprecision::pow(BigInt(n), r - 1)));
  if (members == 0) return first;
  BigInt e = BigInt(members) * boost::multiprecision::pow(BigInt(n), s - 2);
  return Huge::mul(first, Huge::pow(Huge(BigInt(2 * e)), Huge(e)));
}

inline Huge govern_reduce_bound(std::uint64_t gamma, std::uint64_t n, int r)
{
  return Huge::pow(Huge(BigInt(gamma)), Huge(boost::multiprecision::pow(BigInt(n), r - 1)));
}

namespace detail {

inline std::vector<KSet> ksets_of(int size, int n)
{
  std::vector<KSet> out;
  if (size == 0) {
    out.emplace_back();
    return out;
  }
  for_each_kset(size, n, [&](const KSet& s) { out.push_back(s); });
  return out;
}

inline std::vector<Elem> elems_at(const std::vector<Elem>& z, const KSet& pos)
{
  std::vector<Elem> out;
  for (int p : pos) out.push_back(z[p - 1]);
  return out;
}

// Pigeonhole over d in dom on the value tuple (f(Z_t + tail + d))_t; largest class, ties to the smaller tuple.
template <class V>
std::pair<std::vector<V>, IntervalSet> pigeonhole_tail(const Colouring<V>& f, const std::vector<std::vector<Elem>>& heads,
                                                       const std::vector<Elem>& tail, const IntervalSet& dom)
{
  const int r = f.arity;
  std::map<std::vector<V>, std::pair<std::uint64_t, IntervalSet>> classes;
  std::vector<std::vector<Elem>> tuples;
  for (const auto& h : heads) {
    std::vector<Elem> t = h;
    t.insert(t.end(), tail.begin(), tail.end());
    t.push_back(0);
    if (static_cast<int>(t.size()) != r) throw std::logic_error("pigeonhole tuple arity mismatch");
    tuples.push_back(std::move(t));
  }
  std::vector<V> key(heads.size());
  for (const auto& iv : dom.intervals()) {
    Elem y = iv.lo;
    while (y <= iv.hi) {
      Elem e = iv.hi;
      for (std::size_t t = 0; t < tuples.size(); ++t) {
        tuples[t][r - 1] = y;
        key[t] = f(tuples[t]);
        e = std::min(e, f.run(tuples[t], r - 1));
      }
      auto& cls = classes[key];
      cls.first += static_cast<std::uint64_t>(e - y) + 1;
      cls.second.append(y, e);
      y = e + 1;
    }
  }
  if (classes.empty()) return {std::vector<V>(heads.size()), IntervalSet{}};
  auto best = classes.begin();
  for (auto it = classes.begin(); it != classes.end(); ++it)
    if (it->second.first > best->second.first) best = it;
  return {best->first, std::move(best->second.second)};
}

// Elements d' of dom with flip * g(head + d' + top) = -1.
inline IntervalSet negative_part(const PhiColouring& g, int flip, const std::vector<Elem>& head, Elem top,
                                 const IntervalSet& dom)
{
  const int s = g.arity;
  std::vector<Elem> t = head;
  t.push_back(0);
  t.push_back(top);
  IntervalSet out;
  for (const auto& iv : dom.intervals()) {
    Elem y = iv.lo;
    while (y <= iv.hi) {
      t[s - 2] = y;
      Elem e = std::min(iv.hi, g.run(t, s - 2));
      if (flip * g(t) < 0) out.append(y, e);
      y = e + 1;
    }
  }
  return out;
}

// The secure-set construction. With halving == false this is the I = empty variant.
template <class V>
HomogeniseResult<V> secure_construction(const Colouring<V>& f, const std::vector<PhiColouring>& gs,
                                        const std::vector<int>& flip, std::uint64_t n, bool halving,
                                        bool adaptive = false)
{
  const int r = f.arity;
  const int s = gs.empty() ? 0 : gs.front().arity;
  HomogeniseResult<V> res;
  std::vector<Elem> z;
  std::vector<V> ftab;
  std::vector<std::vector<int>> gtab(gs.size());
  IntervalSet a;

  if (!f.carrier.empty() && n > 0) {
    z.push_back(f.carrier.min());
    a = f.carrier.drop(1);
    if (r == 2) {
      auto [key, cls] = pigeonhole_tail<V>(f, std::vector<std::vector<Elem>>(1), {z[0]}, a);
      ftab.push_back(key[0]);
      a = std::move(cls);
    }
  }

  while (!z.empty() && z.size() < n && !a.empty()) {
    const int nu = static_cast<int>(z.size());
    Elem znew = 0;
    IntervalSet dsecond;
    std::vector<std::vector<int>> g_ext(gs.size());

    if (halving) {
      auto zsets = ksets_of(s - 2, nu);
      struct Entry {
        std::size_t i;
        std::size_t zidx;
      };
      std::vector<Entry> L;
      for (std::size_t i = 0; i < gs.size(); ++i)
        for (std::size_t t = 0; t < zsets.size(); ++t) {
          const KSet& zs = zsets[t];
          bool in = zs.contains(nu);
          if (!in) {
            KSet up = zs;
            up.push_back(nu);
            in = gtab[i][colex_rank(up)] > 0;
          }
          if (in) L.push_back({i, t});
        }
      std::vector<char> in_w(L.size(), 0);
      IntervalSet dstar = a;
      bool picked = false;
      std::vector<IntervalSet> xs(L.size());
      auto split = [&](std::uint64_t h) {
        IntervalSet dprime = dstar.prefix(h);
        dsecond = dstar.drop(h);
        IntervalSet uni;
        for (auto& x : xs) x = IntervalSet{};
        if (!dsecond.empty()) {
          Elem top = dsecond.min();
          for (std::size_t t = 0; t < L.size(); ++t) {
            if (in_w[t]) continue;
            xs[t] = negative_part(gs[L[t].i], flip[L[t].i], elems_at(z, zsets[L[t].zidx]), top, dprime);
            uni = uni.unite(xs[t]);
          }
        }
        return dprime.minus(uni);
      };
      while (!dstar.empty()) {
        std::uint64_t half = (dstar.size() + 1) / 2;
        IntervalSet elig;
        if (adaptive)
          for (std::uint64_t h = 1; h < half && elig.empty(); h *= 2) elig = split(h);
        if (elig.empty()) elig = split(half);
        if (!elig.empty()) {
          znew = elig.min();
          picked = true;
          break;
        }
        std::size_t best = L.size();
        for (std::size_t t = 0; t < L.size(); ++t)
          if (!in_w[t] && (best == L.size() || xs[t].size() > xs[best].size())) best = t;
        in_w[best] = 1;
        dstar = std::move(xs[best]);
      }
      if (!picked) break;
      for (std::size_t i = 0; i < gs.size(); ++i) g_ext[i].assign(zsets.size(), -1);
      for (std::size_t t = 0; t < L.size(); ++t)
        if (!in_w[t]) g_ext[L[t].i][L[t].zidx] = 1;
    } else {
      znew = a.min();
      dsecond = a.drop(1);
    }

    std::vector<std::vector<Elem>> heads;
    for (const KSet& zs : ksets_of(r - 2, nu)) heads.push_back(elems_at(z, zs));
    auto [key, cls] = pigeonhole_tail<V>(f, heads, {znew}, dsecond);
    ftab.insert(ftab.end(), key.begin(), key.end());
    for (std::size_t i = 0; i < gs.size(); ++i) gtab[i].insert(gtab[i].end(), g_ext[i].begin(), g_ext[i].end());
    z.push_back(znew);
    a = std::move(cls);
  }

  res.reached = z.size();
  res.success = !z.empty() && z.size() == n;
  res.set = z;
  res.f_cert = {r, z, std::move(ftab)};
  for (std::size_t i = 0; i < gs.size(); ++i) {
    std::vector<int> vals = std::move(gtab[i]);
    for (int& v : vals) v *= flip[i];
    res.g_certs.push_back({s, z, std::move(vals)});
  }
  return res;
}

template <class V>
void certify(HomogeniseResult<V>& res, const Colouring<V>& f, const std::vector<PhiColouring>& gs,
             const std::vector<Monotonicity>& dirs, const DeciderScan& scan)
{
  res.cert_a = verify_governs(f, res.f_cert, scan);
  res.cert_b = true;
  res.cert_c = true;
  res.g_dirs = dirs;
  res.g_prime_dirs.clear();
  for (std::size_t i = 0; i < gs.size(); ++i) {
    res.cert_b = res.cert_b && verify_governs(gs[i], res.g_certs[i], scan);
    Monotonicity m = res.g_certs[i].governor.empty() ? Monotonicity::Constant : monotonicity(res.g_certs[i].governing());
    res.g_prime_dirs.push_back(m);
    res.cert_c = res.cert_c && monotone_opposite(dirs[i], m);
  }
}

}  // namespace detail

/// Shrinks the carrier to n elements on which f becomes governed by an (r-1)-ary
/// colouring and each monotone g_i by an (s-1)-ary one monotone in the opposite direction.
/// Guaranteed mode refuses carriers below the size bound; best-effort runs on anything and
/// reports the largest secure size reached.
template <class V>
HomogeniseResult<V> end_homogenise(const Colouring<V>& f, const std::vector<PhiColouring>& gs, std::uint64_t n,
                                   Mode mode = Mode::Guaranteed, std::uint64_t gamma = 0,
                                   std::vector<Monotonicity> dirs = {}, const DeciderScan& scan = {})
{
  const int r = f.arity;
  if (r < 2) throw std::invalid_argument("end_homogenise needs arity >= 2");
  int s = 0;
  for (const auto& g : gs) {
    if (s && g.arity != s) throw std::invalid_argument("family members must share an arity");
    s = g.arity;
    if (!(g.carrier == f.carrier)) throw std::invalid_argument("family members must share the carrier of f");
  }
  if (!gs.empty() && s < 3) throw std::invalid_argument("end_homogenise needs family arity >= 3");
  if (mode == Mode::Guaranteed) {
    if (gamma == 0) throw std::invalid_argument("guaranteed mode needs the colour count");
    if (n < static_cast<std::uint64_t>(r)) throw std::invalid_argument("guaranteed mode needs n >= r");
    Huge need = gs.empty() ? govern_reduce_bound(gamma, n, r) : end_homogenise_bound(gamma, gs.size(), n, r, s);
    if (Huge(BigInt(f.carrier.size())) < need) throw std::invalid_argument("carrier below the guaranteed size");
  }
  std::vector<int> flip;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (i >= dirs.size()) dirs.push_back(monotonicity(gs[i]));
    if (!is_monotone(dirs[i])) throw std::invalid_argument("family member " + std::to_string(i) + " is not monotone");
    int fl = allows_increasing(dirs[i]) ? 1 : -1;
    // Constant members: flip so the value is +1.
    if (dirs[i] == Monotonicity::Constant && gs[i].carrier.size() >= static_cast<std::uint64_t>(s))
      fl = gs[i](gs[i].carrier.prefix(s).to_vector());
    flip.push_back(fl);
  }
  dirs.resize(gs.size());
  auto res = detail::secure_construction(f, gs, flip, n, !gs.empty(), mode == Mode::BestEffort);
  detail::certify(res, f, gs, dirs, scan);
  if (mode == Mode::Guaranteed && !(res.success && res.certified()))
    throw std::logic_error("end_homogenise failed at guaranteed size (reached " + std::to_string(res.reached) + ")");
  return res;
}

/// The I = empty case: n elements on which f is governed by an (r-1)-ary colouring.
template <class V>
HomogeniseResult<V> govern_reduce(const Colouring<V>& f, std::uint64_t n, Mode mode = Mode::Guaranteed,
                                  std::uint64_t gamma = 0, const DeciderScan& scan = {})
{
  return end_homogenise<V>(f, {}, n, mode, gamma, {}, scan);
}

}  // namespace canon

#endif  // CANON_HOMOGENISE_HPP
