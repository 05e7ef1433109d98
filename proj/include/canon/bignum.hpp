#ifndef CANON_BIGNUM_HPP
#define CANON_BIGNUM_HPP

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace canon {

using BigInt = boost::multiprecision::mpz_int;

inline constexpr std::uint64_t kDefaultBitCap = std::uint64_t{1} << 23;

inline std::uint64_t bit_length(const BigInt& v)
{
  if (v <= 0) return 0;
  return static_cast<std::uint64_t>(boost::multiprecision::msb(v)) + 1;
}

// log2 of a positive big integer from its top 64 bits.
inline long double log2_big(const BigInt& v)
{
  if (v <= 0) throw std::domain_error("log2 of non-positive");
  std::uint64_t bits = bit_length(v);
  if (bits <= 64) return std::log2(static_cast<long double>(static_cast<std::uint64_t>(v)));
  BigInt top = v >> (bits - 64);
  return std::log2(static_cast<long double>(static_cast<std::uint64_t>(top))) + static_cast<long double>(bits - 64);
}

/// A non-negative real of tower scale. The value is t_h(x) = 2^2^...^x (h exponentiations),
/// normalised so that x < 2^62 and, for h >= 1, x >= 62. An exact integer is kept when it
/// fits under the bit cap.
class Huge {
 public:
  Huge() = default;
  Huge(std::int64_t v) : Huge(BigInt(v)) {}  // NOLINT
  Huge(const BigInt& v)  // NOLINT
  {
    if (v < 0) throw std::domain_error("Huge is non-negative");
    exact_ = v;
    if (bit_length(v) <= 62) {
      x_ = static_cast<long double>(static_cast<std::uint64_t>(v));
    } else {
      h_ = 1;
      x_ = log2_big(v);
    }
    normalise();
  }

  static Huge symbolic(int h, long double x)
  {
    Huge r;
    r.h_ = h;
    r.x_ = x;
    r.normalise();
    return r;
  }

  static Huge tower(int i, const BigInt& x, std::uint64_t cap = kDefaultBitCap)
  {
    Huge r(x);
    for (int j = 0; j < i; ++j) r = exp2(r, cap);
    return r;
  }

  bool is_exact() const { return exact_.has_value(); }
  const BigInt& exact() const
  {
    if (!exact_) throw std::logic_error("value is symbolic only");
    return *exact_;
  }
  int level() const { return h_; }
  long double top() const { return x_; }

  static Huge log2(const Huge& v)
  {
    if (v.h_ == 0) {
      if (v.x_ <= 0) throw std::domain_error("log2 of zero");
      return symbolic(0, std::log2(v.x_));
    }
    return symbolic(v.h_ - 1, v.x_);
  }

  static Huge exp2(const Huge& v, std::uint64_t cap = kDefaultBitCap)
  {
    if (v.exact_ && *v.exact_ < cap) {
      BigInt r = 1;
      r <<= static_cast<unsigned>(*v.exact_);
      return Huge(r);
    }
    return symbolic(v.h_ + 1, v.x_);
  }

  static Huge add(const Huge& a, const Huge& b, std::uint64_t cap = kDefaultBitCap)
  {
    if (a.exact_ && b.exact_ && std::max(bit_length(*a.exact_), bit_length(*b.exact_)) < cap)
      return Huge(*a.exact_ + *b.exact_);
    const Huge& hi = a < b ? b : a;
    const Huge& lo = a < b ? a : b;
    if (lo.h_ == 0 && lo.x_ == 0) return strip(hi);
    Huge lh = log2(hi), ll = log2(lo);
    if (lh.h_ > 0) return strip(hi);
    long double d = ll.x_ - lh.x_;
    return exp2(symbolic(0, lh.x_ + std::log2(1 + std::exp2(d))), 0);
  }

  static Huge mul(const Huge& a, const Huge& b, std::uint64_t cap = kDefaultBitCap)
  {
    if (a.exact_ && b.exact_ && bit_length(*a.exact_) + bit_length(*b.exact_) < cap)
      return Huge(*a.exact_ * *b.exact_);
    if (a.is_zero() || b.is_zero()) return Huge(0);
    return exp2(add(log2(a), log2(b), 0), 0);
  }

  static Huge pow(const Huge& base, const Huge& e, std::uint64_t cap = kDefaultBitCap)
  {
    if (base.exact_ && e.exact_) {
      if (*e.exact_ == 0) return Huge(1);
      if (*base.exact_ <= 1) return base;
      std::uint64_t bb = bit_length(*base.exact_);
      if (*e.exact_ < cap && static_cast<long double>(bb) * static_cast<long double>(*e.exact_) < cap)
        return Huge(boost::multiprecision::pow(*base.exact_, static_cast<unsigned>(*e.exact_)));
    }
    if (base.is_zero()) return Huge(0);
    return exp2(mul(e, log2(base), 0), 0);
  }

  bool is_zero() const { return h_ == 0 && x_ == 0; }

  friend bool operator==(const Huge& a, const Huge& b)
  {
    if (a.exact_ && b.exact_) return *a.exact_ == *b.exact_;
    return a.h_ == b.h_ && a.x_ == b.x_;
  }
  friend std::partial_ordering operator<=>(const Huge& a, const Huge& b)
  {
    if (a.exact_ && b.exact_) {
      if (*a.exact_ < *b.exact_) return std::partial_ordering::less;
      if (*a.exact_ > *b.exact_) return std::partial_ordering::greater;
      return std::partial_ordering::equivalent;
    }
    if (a.h_ != b.h_) return a.h_ <=> b.h_;
    return a.x_ <=> b.x_;
  }

  // Decimal when exact and short, otherwise the tower form t_h(x).
  std::string str(std::size_t max_digits = 60) const
  {
    if (exact_) {
      std::string d = exact_->str();
      if (d.size() <= max_digits) return d;
      std::ostringstream os;
      os << "~2^" << static_cast<double>(log2_big(*exact_)) << " (" << d.size() << " digits)";
      return os.str();
    }
    std::ostringstream os;
    os.precision(12);
    os << "t_" << h_ << "(" << static_cast<double>(x_) << ")";
    return os.str();
  }

 private:
  static Huge strip(const Huge& v)
  {
    Huge r = v;
    r.exact_.reset();
    return r;
  }

  void normalise()
  {
    const long double hi = std::ldexp(1.0L, 62);
    while (x_ >= hi) {
      x_ = std::log2(x_);
      ++h_;
    }
    while (h_ > 0 && x_ < 62) {
      x_ = std::exp2(x_);
      --h_;
    }
  }

  std::optional<BigInt> exact_;
  int h_ = 0;
  long double x_ = 0;
};

/// t_i(x), exact under the bit cap, symbolic above it.
inline Huge tower(int i, const BigInt& x, std::uint64_t cap = kDefaultBitCap)
{
  if (i < 0 || x < 0) throw std::invalid_argument("tower needs i >= 0, x >= 0");
  return Huge::tower(i, x, cap);
}

}  // namespace canon

#endif  // CANON_BIGNUM_HPP
