#ifndef CANON_PARAMS_HPP
#define CANON_PARAMS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "canon/bignum.hpp"
#include "canon/kset.hpp"

namespace canon {

inline BigInt factorial_big(std::uint64_t n)
{
  BigInt r = 1;
  for (std::uint64_t i = 2; i <= n; ++i) r *= i;
  return r;
}

inline BigInt bell_big(int n)
{
  std::vector<BigInt> row{1};
  for (int i = 0; i < n; ++i) {
    std::vector<BigInt> next{row.back()};
    for (const auto& v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

/// Number of orderings of [k+2]^(k).
inline BigInt gamma_orderings(int k) { return factorial_big(binom(k + 2, 2)); }

/// Number of equivalence relations on [k+2]^(k).
inline BigInt gamma_equivalences(int k) { return bell_big(static_cast<int>(binom(k + 2, k))); }

/// Exact size the final canonisation step consumes for target n: pigeonhole on the sign
/// opinions, trimming, synchronising C(k,2) pair colourings at size 2^(k-1) n, trimming again.
inline BigInt final_step_requirement(int k, const BigInt& n)
{
  const std::uint64_t members = binom(k, 2);
  BigInt sync = factorial_big(members) * boost::multiprecision::pow(BigInt(1) << (k - 1), static_cast<unsigned>(members + 1)) *
                boost::multiprecision::pow(n, static_cast<unsigned>(members + 1));
  return (BigInt(1) << k) * (sync + k + 1) + k + 1;
}

/// Smallest integer C with C (2k)^(k^2) >= final_step_requirement(k, 2k).
inline BigInt final_step_constant(int k)
{
  BigInt scale = boost::multiprecision::pow(BigInt(2 * k), static_cast<unsigned>(k * k));
  BigInt need = final_step_requirement(k, 2 * k);
  return (need + scale - 1) / scale;
}

struct Recursion {
  std::vector<std::string> names;
  std::vector<Huge> values;

  const Huge& back() const { return values.back(); }
  std::string str() const
  {
    std::string s;
    for (std::size_t t = 0; t < names.size(); ++t) s += names[t] + " = " + values[t].str() + "\n";
    return s;
  }
};

namespace detail {

inline Huge hpow(const Huge& b, const Huge& e) { return Huge::pow(b, e); }
inline Huge hpow(const Huge& b, int e) { return Huge::pow(b, Huge(std::int64_t{e})); }
inline Huge hmul(const Huge& a, const Huge& b) { return Huge::mul(a, b); }
inline Huge hadd(const Huge& a, std::int64_t b) { return Huge::add(a, Huge(b)); }

inline void check_args(int k, int n, int min_n)
{
  if (k < 2) throw std::invalid_argument("parameter recursion needs k >= 2");
  if (n < min_n) throw std::invalid_argument("parameter recursion needs n >= " + std::to_string(min_n));
}

}  // namespace detail

/// N_0, ..., N_k of the ordering recursion.
inline Recursion required_N(int k, int n)
{
  detail::check_args(k, n, k);
  using namespace detail;
  const Huge gamma(gamma_orderings(k));
  const Huge kk(std::int64_t{k} * k);
  Recursion r;
  Huge prev = hadd(Huge(final_step_constant(k) * boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(k * k))), k + 1);
  r.names.push_back("N_0");
  r.values.push_back(prev);
  for (int m = 1; m <= k - 2; ++m) {
    Huge first = hpow(hmul(Huge(2), gamma), hpow(prev, m + 1));
    Huge e = hmul(kk, hpow(prev, m));
    Huge second = hpow(hmul(Huge(2), e), e);
    prev = hadd(hmul(first, second), k + 1);
    r.names.push_back("N_" + std::to_string(m));
    r.values.push_back(prev);
  }
  prev = hpow(gamma, hpow(prev, k));
  r.names.push_back("N_" + std::to_string(k - 1));
  r.values.push_back(prev);
  prev = hpow(gamma, hpow(prev, k + 1));
  r.names.push_back("N_" + std::to_string(k));
  r.values.push_back(prev);
  return r;
}

/// N_0, P_1, N_1, ..., P_{k-2}, N_{k-2}, N_{k-1} of the equivalence-relation recursion.
inline Recursion required_N_er(int k, int n)
{
  detail::check_args(k, n, k);
  using namespace detail;
  const Huge gamma(gamma_equivalences(k));
  const Huge kh(std::int64_t{k});
  Recursion r;
  Huge prev = hadd(Huge(factorial_big(k - 1) * boost::multiprecision::pow(BigInt(2 * n), static_cast<unsigned>(2 * k))), k + 1);
  r.names.push_back("N_0");
  r.values.push_back(prev);
  for (int m = 1; m <= k - 2; ++m) {
    Huge first = hpow(hmul(Huge(2), gamma), hpow(prev, m + 2));
    Huge e = hmul(kh, hpow(prev, m));
    Huge p = hmul(first, hpow(hmul(Huge(2), e), e));
    r.names.push_back("P_" + std::to_string(m));
    r.values.push_back(p);
    prev = hadd(hpow(hmul(Huge(2 * k), p), 2 * k), k + 1);
    r.names.push_back("N_" + std::to_string(m));
    r.values.push_back(prev);
  }
  prev = hpow(gamma, hpow(prev, k + 1));
  r.names.push_back("N_" + std::to_string(k - 1));
  r.values.push_back(prev);
  return r;
}

}  // namespace canon

#endif  // CANON_PARAMS_HPP
