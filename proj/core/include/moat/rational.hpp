#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <string_view>

namespace moat {

namespace detail {

struct BigQ;
struct BigQDeleter {
  void operator()(BigQ* q) const noexcept;
};

inline std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) {
  if (a == 0) return b;
  if (b == 0) return a;
  int shift = __builtin_ctzll(a | b);
  a >>= __builtin_ctzll(a);
  do {
    b >>= __builtin_ctzll(b);
    if (a > b) std::swap(a, b);
    b -= a;
  } while (b != 0);
  return a << shift;
}

inline std::uint64_t abs64(std::int64_t v) {
  return v < 0 ? std::uint64_t(0) - std::uint64_t(v) : std::uint64_t(v);
}

inline bool fits64(__int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace detail

// Exact rational. Values whose reduced numerator and denominator fit in
// int64 stay inline; anything larger moves to a GMP mpq.
class Rational {
 public:
  Rational() = default;
  Rational(int v) : num_(v) {}
  Rational(long v) : num_(v) {}
  Rational(long long v) : num_(v) {}
  Rational(std::int64_t num, std::int64_t den);

  Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
    if (o.big_) copy_big(o);
  }
  Rational(Rational&&) noexcept = default;
  Rational& operator=(const Rational& o) {
    if (this != &o) {
      num_ = o.num_;
      den_ = o.den_;
      if (o.big_) copy_big(o);
      else big_.reset();
    }
    return *this;
  }
  Rational& operator=(Rational&&) noexcept = default;
  ~Rational() = default;

  // Accepts "p", "p/q", "-1.25", "+3/4" with optional surrounding spaces.
  static Rational parse(std::string_view text);

  // "p/q", or "p" when the denominator is 1.
  std::string str() const;
  std::string numerator_str() const;
  std::string denominator_str() const;
  double to_double() const;

  int sign() const;
  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_integer() const;
  bool is_small() const { return !big_; }
  Rational abs() const { return sign() < 0 ? -*this : *this; }
  // Largest integer not above the value; throws if it does not fit int64.
  std::int64_t floor() const;
  std::int64_t ceil() const;
  std::size_t hash() const;

  Rational operator-() const;

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    return compare_slow(a, b) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c;
    if (!a.big_ && !b.big_) {
      if (a.den_ == b.den_) {
        c = a.num_ < b.num_ ? -1 : (a.num_ > b.num_ ? 1 : 0);
      } else {
        __int128 l = static_cast<__int128>(a.num_) * b.den_;
        __int128 r = static_cast<__int128>(b.num_) * a.den_;
        c = l < r ? -1 : (l > r ? 1 : 0);
      }
    } else {
      c = compare_slow(a, b);
    }
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  void copy_big(const Rational& o);
  void set_from_i128(__int128 num, __int128 den);
  static int compare_slow(const Rational& a, const Rational& b);
  void add_slow(const Rational& o, bool subtract);
  void mul_slow(const Rational& o, bool divide);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<detail::BigQ, detail::BigQDeleter> big_;
};

inline Rational& Rational::operator+=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (den_ == o.den_ && den_ == 1) {
      __int128 n = static_cast<__int128>(num_) + o.num_;
      if (detail::fits64(n)) {
        num_ = static_cast<std::int64_t>(n);
        return *this;
      }
    }
    std::uint64_t g = detail::gcd64(std::uint64_t(den_), std::uint64_t(o.den_));
    std::int64_t db = den_ / std::int64_t(g);
    std::int64_t dd = o.den_ / std::int64_t(g);
    __int128 t = static_cast<__int128>(num_) * dd + static_cast<__int128>(o.num_) * db;
    if (t == 0) {
      num_ = 0;
      den_ = 1;
      return *this;
    }
    std::uint64_t g2 = 1;
    if (g != 1) {
      unsigned __int128 at = t < 0 ? static_cast<unsigned __int128>(-t) : static_cast<unsigned __int128>(t);
      std::uint64_t r = at >> 64 ? static_cast<std::uint64_t>(at % g) : static_cast<std::uint64_t>(at) % g;
      g2 = detail::gcd64(r, g);
    }
    __int128 n = g2 == 1 ? t : t / static_cast<__int128>(g2);
    __int128 d = static_cast<__int128>(db) * (o.den_ / std::int64_t(g2));
    if (detail::fits64(n) && detail::fits64(d)) {
      num_ = static_cast<std::int64_t>(n);
      den_ = static_cast<std::int64_t>(d);
      return *this;
    }
    set_from_i128(n, d);
    return *this;
  }
  add_slow(o, false);
  return *this;
}

inline Rational& Rational::operator-=(const Rational& o) {
  if (!big_ && !o.big_ && o.num_ != std::numeric_limits<std::int64_t>::min()) {
    Rational neg;
    neg.num_ = -o.num_;
    neg.den_ = o.den_;
    return *this += neg;
  }
  add_slow(o, true);
  return *this;
}

inline Rational& Rational::operator*=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (num_ == 0 || o.num_ == 0) {
      num_ = 0;
      den_ = 1;
      return *this;
    }
    std::int64_t g1 = std::int64_t(detail::gcd64(detail::abs64(num_), std::uint64_t(o.den_)));
    std::int64_t g2 = std::int64_t(detail::gcd64(detail::abs64(o.num_), std::uint64_t(den_)));
    __int128 n = static_cast<__int128>(num_ / g1) * (o.num_ / g2);
    __int128 d = static_cast<__int128>(den_ / g2) * (o.den_ / g1);
    if (detail::fits64(n) && detail::fits64(d)) {
      num_ = static_cast<std::int64_t>(n);
      den_ = static_cast<std::int64_t>(d);
      return *this;
    }
    set_from_i128(n, d);
    return *this;
  }
  mul_slow(o, false);
  return *this;
}

inline Rational& Rational::operator/=(const Rational& o) {
  if (!big_ && !o.big_ && o.num_ != 0 && o.num_ != std::numeric_limits<std::int64_t>::min()) {
    Rational inv;
    inv.num_ = o.num_ < 0 ? -o.den_ : o.den_;
    inv.den_ = o.num_ < 0 ? -o.num_ : o.num_;
    return *this *= inv;
  }
  mul_slow(o, true);
  return *this;
}

inline Rational Rational::operator-() const {
  if (!big_ && num_ != std::numeric_limits<std::int64_t>::min()) {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  return Rational(0) - *this;
}

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace moat

template <>
struct std::hash<moat::Rational> {
  std::size_t operator()(const moat::Rational& r) const noexcept { return r.hash(); }
};
