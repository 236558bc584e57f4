#pragma once

// Exact integer and rational helpers on top of GMP.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "dilatree/errors.hpp"

namespace dilatree {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt pow2(unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

inline BigInt pow4(unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 4, e);
  return r;
}

inline BigInt shift_left(const BigInt& x, unsigned long s) {
  BigInt r;
  mpz_mul_2exp(r.get_mpz_t(), x.get_mpz_t(), s);
  return r;
}

/// Number of bits of |x|; 0 for x == 0.
inline long bit_length(const BigInt& x) {
  if (sgn(x) == 0) return 0;
  return static_cast<long>(mpz_sizeinbase(x.get_mpz_t(), 2));
}

inline BigInt isqrt(const BigInt& x) {
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
  return r;
}

inline BigInt floor_of(const Rational& r) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline BigInt ceil_of(const Rational& r) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Exact square root when `r` is the square of a rational.
inline std::optional<Rational> exact_sqrt(const Rational& r) {
  if (sgn(r) < 0) return std::nullopt;
  if (!mpz_perfect_square_p(r.get_num_mpz_t()) || !mpz_perfect_square_p(r.get_den_mpz_t())) {
    return std::nullopt;
  }
  return make_rational(isqrt(r.get_num()), isqrt(r.get_den()));
}

/// True when the denominator is a power of two.
inline bool is_dyadic(const Rational& r) {
  const BigInt& d = r.get_den();
  return mpz_popcount(d.get_mpz_t()) == 1;
}

/// Canonical decimal form: "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline std::string to_string(const BigInt& x) { return x.get_str(); }

inline BigInt parse_bigint(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InvalidInput("empty integer");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) throw InvalidInput("malformed integer '" + s + "'");
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw InvalidInput("malformed integer '" + s + "'");
  }
  if (s[0] == '+') s.erase(0, 1);
  return BigInt(s, 10);
}

/// Parses "p", "-p" or "p/q". Decimal points are rejected on purpose.
inline Rational parse_rational(std::string_view text) {
  std::size_t slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_bigint(text));
  BigInt num = parse_bigint(text.substr(0, slash));
  BigInt den = parse_bigint(text.substr(slash + 1));
  if (sgn(den) == 0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
  return make_rational(num, den);
}

}  // namespace dilatree
