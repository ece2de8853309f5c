#pragma once

#include "polyspace/errors.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace polyspace {

using Integer = mpz_class;

/// Exact rational in lowest terms, positive denominator, zero stored as 0/1.
class Rational {
public:
  Rational() = default;
  Rational(long v) : q_(v) {}
  Rational(int v) : q_(static_cast<long>(v)) {}
  Rational(const Integer &v) : q_(v) {}
  Rational(const Integer &num, const Integer &den) {
    if (den == 0)
      throw ValidationError("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  /// Accepts "p" or "p/q", optional leading minus.
  static Rational parse(std::string_view text) {
    auto fail = [&](const std::string &why) {
      throw ValidationError("bad rational '" + std::string(text) + "': " + why);
    };
    if (text.empty())
      fail("empty");
    std::string s(text);
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    auto digits = [](const std::string &d, bool allow_sign) {
      std::size_t i = (allow_sign && !d.empty() && d[0] == '-') ? 1 : 0;
      if (i == d.size())
        return false;
      return std::all_of(d.begin() + static_cast<long>(i), d.end(),
                         [](char c) { return c >= '0' && c <= '9'; });
    };
    if (!digits(num, true))
      fail("numerator is not an integer");
    if (!digits(den, false))
      fail("denominator is not a positive integer");
    Integer n(num, 10), d(den, 10);
    if (d == 0)
      fail("zero denominator");
    return Rational(n, d);
  }

  Integer numerator() const { return q_.get_num(); }
  Integer denominator() const { return q_.get_den(); }
  const mpq_class &raw() const { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }

  std::string str() const { return q_.get_str(10); }

  Rational &operator+=(const Rational &o) { q_ += o.q_; return *this; }
  Rational &operator-=(const Rational &o) { q_ -= o.q_; return *this; }
  Rational &operator*=(const Rational &o) { q_ *= o.q_; return *this; }
  Rational &operator/=(const Rational &o) {
    if (o.is_zero())
      throw std::domain_error("rational division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational &b) { return a += b; }
  friend Rational operator-(Rational a, const Rational &b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational &b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational &b) { return a /= b; }
  friend Rational operator-(const Rational &a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational &a, const Rational &b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational &a, const Rational &b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.str(); }

private:
  mpq_class q_{0};
};

/// 2-adic valuation; the zero element has infinite valuation.
class Valuation {
public:
  static Valuation infinite() { return Valuation(); }
  explicit Valuation(long v) : v_(v) {}

  bool is_infinite() const { return !v_.has_value(); }
  long value() const {
    if (!v_)
      throw std::domain_error("valuation of zero is infinite");
    return *v_;
  }

  friend Valuation operator+(const Valuation &a, const Valuation &b) {
    if (a.is_infinite() || b.is_infinite())
      return infinite();
    return Valuation(*a.v_ + *b.v_);
  }
  friend bool operator==(const Valuation &, const Valuation &) = default;
  friend std::strong_ordering operator<=>(const Valuation &a, const Valuation &b) {
    if (a.is_infinite() || b.is_infinite())
      return a.is_infinite() <=> b.is_infinite();
    return *a.v_ <=> *b.v_;
  }
  friend std::ostream &operator<<(std::ostream &os, const Valuation &v) {
    return v.is_infinite() ? os << "inf" : os << *v.v_;
  }

private:
  Valuation() = default;
  std::optional<long> v_;
};

inline Valuation nu2(const Integer &x) {
  if (x == 0)
    return Valuation::infinite();
  return Valuation(static_cast<long>(mpz_scan1(x.get_mpz_t(), 0)));
}

inline Valuation nu2(const Rational &x) {
  if (x.is_zero())
    return Valuation::infinite();
  return Valuation(nu2(x.numerator()).value() - nu2(x.denominator()).value());
}

/// Number of ones in the binary expansion.
constexpr int alpha(std::uint64_t m) { return std::popcount(m); }

inline Integer factorial(long n) {
  Integer f = 1;
  for (long i = 2; i <= n; ++i)
    f *= i;
  return f;
}

/// Generalized binomial a(a-1)...(a-k+1)/k!, any integer a.
inline Integer binom(long a, long k) {
  if (k < 0)
    return 0;
  Integer num = 1;
  for (long i = 0; i < k; ++i)
    num *= (a - i);
  Integer q;
  mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), factorial(k).get_mpz_t());
  return q;
}

inline Rational pow2(long e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  return e >= 0 ? Rational(p) : Rational(Integer(1), p);
}

/// Power series in one variable truncated above `degree`.
class TruncatedSeries {
public:
  explicit TruncatedSeries(int degree) : c_(static_cast<std::size_t>(degree) + 1) {
    if (degree < 0)
      throw ValidationError("negative truncation degree");
  }
  TruncatedSeries(int degree, const std::vector<Rational> &coeffs) : TruncatedSeries(degree) {
    for (std::size_t i = 0; i < coeffs.size() && i < c_.size(); ++i)
      c_[i] = coeffs[i];
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Rational &operator[](int i) const { return c_.at(static_cast<std::size_t>(i)); }
  Rational &operator[](int i) { return c_.at(static_cast<std::size_t>(i)); }
  const std::vector<Rational> &coefficients() const { return c_; }

  static TruncatedSeries one(int degree) {
    TruncatedSeries s(degree);
    s[0] = 1;
    return s;
  }

  TruncatedSeries &operator+=(const TruncatedSeries &o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i)
      c_[i] += o.c_[i];
    return *this;
  }
  TruncatedSeries &operator-=(const TruncatedSeries &o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i)
      c_[i] -= o.c_[i];
    return *this;
  }
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries &b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries &b) { return a -= b; }

  friend TruncatedSeries operator*(const TruncatedSeries &a, const TruncatedSeries &b) {
    a.check(b);
    TruncatedSeries r(a.degree());
    for (int i = 0; i <= a.degree(); ++i) {
      if (a[i].is_zero())
        continue;
      for (int j = 0; i + j <= a.degree(); ++j)
        if (!b[j].is_zero())
          r[i + j] += a[i] * b[j];
    }
    return r;
  }
  friend TruncatedSeries operator*(const Rational &s, TruncatedSeries a) {
    for (auto &c : a.c_)
      c *= s;
    return a;
  }
  friend bool operator==(const TruncatedSeries &, const TruncatedSeries &) = default;

private:
  void check(const TruncatedSeries &o) const {
    if (o.c_.size() != c_.size())
      throw std::invalid_argument("truncated series of different degrees");
  }
  std::vector<Rational> c_;
};

/// Multiplicative inverse of a series with constant term 1.
inline TruncatedSeries series_inverse(const TruncatedSeries &s) {
  if (s[0] != Rational(1))
    throw std::invalid_argument("series_inverse: constant term must be 1");
  TruncatedSeries r(s.degree());
  r[0] = 1;
  for (int i = 1; i <= s.degree(); ++i) {
    Rational acc;
    for (int j = 1; j <= i; ++j)
      acc -= s[j] * r[i - j];
    r[i] = acc;
  }
  return r;
}

/// base^e for any integer e; base must have constant term exactly 1.
inline TruncatedSeries series_pow(const TruncatedSeries &base, long e) {
  if (base[0] != Rational(1))
    throw std::invalid_argument("series_pow: constant term must be 1");
  TruncatedSeries b = e < 0 ? series_inverse(base) : base;
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  TruncatedSeries r = TruncatedSeries::one(base.degree());
  while (k) {
    if (k & 1)
      r = r * b;
    k >>= 1;
    if (k)
      b = b * b;
  }
  return r;
}

/// 1 + c·x truncated at `degree`.
inline TruncatedSeries one_plus(const Rational &c, int degree) {
  TruncatedSeries s = TruncatedSeries::one(degree);
  if (degree >= 1)
    s[1] = c;
  return s;
}

} // namespace polyspace
