#include "moat/rational.hpp"

#include <gmp.h>

#include <cctype>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace moat {

namespace detail {

struct BigQ {
  mpq_t q;
  BigQ() { mpq_init(q); }
  ~BigQ() { mpq_clear(q); }
  BigQ(const BigQ&) = delete;
  BigQ& operator=(const BigQ&) = delete;
};

void BigQDeleter::operator()(BigQ* q) const noexcept { delete q; }

namespace {

void set_mpz_i128(mpz_t z, __int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  std::uint64_t hi = static_cast<std::uint64_t>(u >> 64);
  std::uint64_t lo = static_cast<std::uint64_t>(u);
  mpz_set_ui(z, static_cast<unsigned long>(hi));
  mpz_mul_2exp(z, z, 64);
  mpz_add_ui(z, z, static_cast<unsigned long>(lo));
  if (neg) mpz_neg(z, z);
}

void set_mpq_small(mpq_t q, std::int64_t num, std::int64_t den) {
  mpz_set_si(mpq_numref(q), static_cast<long>(num));
  mpz_set_si(mpq_denref(q), static_cast<long>(den));
}

bool fits_long(const mpz_t z) { return mpz_fits_slong_p(z) != 0; }

}  // namespace
}  // namespace detail

using detail::BigQ;

namespace {

// Load either representation into a scratch mpq.
struct View {
  BigQ tmp;
  const mpq_t* ptr;
  View(const BigQ* big, std::int64_t num, std::int64_t den) {
    if (big) {
      ptr = &big->q;
    } else {
      detail::set_mpq_small(tmp.q, num, den);
      ptr = &tmp.q;
    }
  }
};

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  set_from_i128(num, den);
}

void Rational::copy_big(const Rational& o) {
  if (!big_) big_.reset(new BigQ());
  mpq_set(big_->q, o.big_->q);
}

void Rational::set_from_i128(__int128 num, __int128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  unsigned __int128 a = num < 0 ? static_cast<unsigned __int128>(-num) : static_cast<unsigned __int128>(num);
  unsigned __int128 b = static_cast<unsigned __int128>(den);
  unsigned __int128 x = a, y = b;
  while (y != 0) {
    unsigned __int128 t = x % y;
    x = y;
    y = t;
  }
  if (x > 1) {
    num /= static_cast<__int128>(x);
    den /= static_cast<__int128>(x);
  }
  if (num == 0) den = 1;
  if (detail::fits64(num) && detail::fits64(den)) {
    big_.reset();
    num_ = static_cast<std::int64_t>(num);
    den_ = static_cast<std::int64_t>(den);
    return;
  }
  if (!big_) big_.reset(new BigQ());
  detail::set_mpz_i128(mpq_numref(big_->q), num);
  detail::set_mpz_i128(mpq_denref(big_->q), den);
  mpq_canonicalize(big_->q);
}

namespace {

void assign_mpq(std::unique_ptr<BigQ, detail::BigQDeleter>& big, std::int64_t& num, std::int64_t& den,
                const mpq_t q) {
  if (detail::fits_long(mpq_numref(q)) && detail::fits_long(mpq_denref(q))) {
    num = mpz_get_si(mpq_numref(q));
    den = mpz_get_si(mpq_denref(q));
    big.reset();
    return;
  }
  if (!big) big.reset(new BigQ());
  if (&big->q[0] != &q[0]) mpq_set(big->q, q);
}

}  // namespace

void Rational::add_slow(const Rational& o, bool subtract) {
  View a(big_.get(), num_, den_);
  View b(o.big_.get(), o.num_, o.den_);
  BigQ r;
  if (subtract) mpq_sub(r.q, *a.ptr, *b.ptr);
  else mpq_add(r.q, *a.ptr, *b.ptr);
  assign_mpq(big_, num_, den_, r.q);
}

void Rational::mul_slow(const Rational& o, bool divide) {
  View a(big_.get(), num_, den_);
  View b(o.big_.get(), o.num_, o.den_);
  BigQ r;
  if (divide) {
    if (mpq_sgn(*b.ptr) == 0) throw std::domain_error("division by zero");
    mpq_div(r.q, *a.ptr, *b.ptr);
  } else {
    mpq_mul(r.q, *a.ptr, *b.ptr);
  }
  assign_mpq(big_, num_, den_, r.q);
}

int Rational::compare_slow(const Rational& a, const Rational& b) {
  View x(a.big_.get(), a.num_, a.den_);
  View y(b.big_.get(), b.num_, b.den_);
  int c = mpq_cmp(*x.ptr, *y.ptr);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

Rational Rational::parse(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  std::string s(text.substr(b, e - b));
  auto bad = [&]() { return std::invalid_argument("malformed rational: '" + std::string(text) + "'"); };
  if (s.empty()) throw bad();

  auto check_int = [&](const std::string& t, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && i < t.size() && (t[i] == '+' || t[i] == '-')) ++i;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };

  std::string num, den = "1";
  auto slash = s.find('/');
  auto dot = s.find('.');
  if (slash != std::string::npos) {
    num = s.substr(0, slash);
    den = s.substr(slash + 1);
    if (!check_int(num, true) || !check_int(den, false)) throw bad();
  } else if (dot != std::string::npos) {
    std::string ip = s.substr(0, dot);
    std::string fp = s.substr(dot + 1);
    std::string sign;
    if (!ip.empty() && (ip[0] == '+' || ip[0] == '-')) {
      sign = ip.substr(0, 1);
      ip = ip.substr(1);
    }
    if (ip.empty() && fp.empty()) throw bad();
    if (!ip.empty() && !check_int(ip, false)) throw bad();
    if (!fp.empty() && !check_int(fp, false)) throw bad();
    num = sign + (ip.empty() ? "0" : ip) + fp;
    den = "1" + std::string(fp.size(), '0');
  } else {
    num = s;
    if (!check_int(num, true)) throw bad();
  }
  if (num[0] == '+') num = num.substr(1);

  BigQ q;
  if (mpz_set_str(mpq_numref(q.q), num.c_str(), 10) != 0) throw bad();
  if (mpz_set_str(mpq_denref(q.q), den.c_str(), 10) != 0) throw bad();
  if (mpz_sgn(mpq_denref(q.q)) == 0) throw std::domain_error("rational with zero denominator");
  mpq_canonicalize(q.q);
  Rational r;
  assign_mpq(r.big_, r.num_, r.den_, q.q);
  return r;
}

std::string Rational::numerator_str() const {
  if (!big_) return std::to_string(num_);
  char* p = mpz_get_str(nullptr, 10, mpq_numref(big_->q));
  std::string s(p);
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(p, s.size() + 1);
  return s;
}

std::string Rational::denominator_str() const {
  if (!big_) return std::to_string(den_);
  char* p = mpz_get_str(nullptr, 10, mpq_denref(big_->q));
  std::string s(p);
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(p, s.size() + 1);
  return s;
}

std::string Rational::str() const {
  if (is_integer()) return numerator_str();
  return numerator_str() + "/" + denominator_str();
}

double Rational::to_double() const {
  if (!big_) return static_cast<double>(num_) / static_cast<double>(den_);
  return mpq_get_d(big_->q);
}

int Rational::sign() const {
  if (!big_) return num_ < 0 ? -1 : (num_ > 0 ? 1 : 0);
  return mpq_sgn(big_->q);
}

bool Rational::is_integer() const {
  if (!big_) return den_ == 1;
  return mpz_cmp_ui(mpq_denref(big_->q), 1) == 0;
}

std::int64_t Rational::floor() const {
  if (!big_) {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }
  mpz_t z;
  mpz_init(z);
  mpz_fdiv_q(z, mpq_numref(big_->q), mpq_denref(big_->q));
  if (!mpz_fits_slong_p(z)) {
    mpz_clear(z);
    throw std::overflow_error("floor out of int64 range");
  }
  std::int64_t v = mpz_get_si(z);
  mpz_clear(z);
  return v;
}

std::int64_t Rational::ceil() const { return -(-*this).floor(); }

std::size_t Rational::hash() const {
  if (!big_) {
    std::size_t h = std::hash<std::int64_t>()(num_);
    return h ^ (std::hash<std::int64_t>()(den_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
  return std::hash<std::string>()(str());
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace moat
