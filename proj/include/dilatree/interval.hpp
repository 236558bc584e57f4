#pragma once

// Dyadic numbers and certified enclosures built from them.
//
// A Dyadic is m * 2^e with m an arbitrary-precision integer, so sums and
// products of dyadics are exact. Rounding happens only in square roots and
// divisions, always outward.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "dilatree/errors.hpp"
#include "dilatree/numeric.hpp"

namespace dilatree {

class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(BigInt mantissa, long exponent) : mant_(std::move(mantissa)), exp_(exponent) {}
  explicit Dyadic(long v) : mant_(v), exp_(0) {}

  const BigInt& mantissa() const noexcept { return mant_; }
  long exponent() const noexcept { return exp_; }
  int sign() const { return sgn(mant_); }

  Rational to_rational() const {
    if (exp_ >= 0) return Rational(shift_left(mant_, static_cast<unsigned long>(exp_)));
    return make_rational(mant_, pow2(static_cast<unsigned long>(-exp_)));
  }

  double to_double() const {
    if (sgn(mant_) == 0) return 0.0;
    long e2 = 0;
    double d = mpz_get_d_2exp(&e2, mant_.get_mpz_t());
    return std::ldexp(d, static_cast<int>(std::clamp(e2 + exp_, -100000L, 100000L)));
  }

  /// Largest dyadic with `frac_bits` fractional bits that is <= r.
  static Dyadic floor_of(const Rational& r, long frac_bits) {
    return Dyadic(dilatree::floor_of(scaled(r, frac_bits)), -frac_bits);
  }
  static Dyadic ceil_of(const Rational& r, long frac_bits) {
    return Dyadic(dilatree::ceil_of(scaled(r, frac_bits)), -frac_bits);
  }
  /// Nearest dyadic with `frac_bits` fractional bits (ties round up).
  static Dyadic nearest(const Rational& r, long frac_bits) {
    Rational s = scaled(r, frac_bits) + Rational(1, 2);
    return Dyadic(dilatree::floor_of(s), -frac_bits);
  }

  friend Dyadic operator-(const Dyadic& a) { return Dyadic(BigInt(-a.mant_), a.exp_); }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    if (a.exp_ == b.exp_) return Dyadic(BigInt(a.mant_ + b.mant_), a.exp_);
    if (a.exp_ < b.exp_) {
      return Dyadic(BigInt(a.mant_ + shift_left(b.mant_, static_cast<unsigned long>(b.exp_ - a.exp_))), a.exp_);
    }
    return Dyadic(BigInt(shift_left(a.mant_, static_cast<unsigned long>(a.exp_ - b.exp_)) + b.mant_), b.exp_);
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(BigInt(a.mant_ * b.mant_), a.exp_ + b.exp_);
  }
  friend Dyadic operator*(const Dyadic& a, const BigInt& k) { return Dyadic(BigInt(a.mant_ * k), a.exp_); }

  friend int compare(const Dyadic& a, const Dyadic& b) {
    if (a.exp_ == b.exp_) return cmp(a.mant_, b.mant_);
    if (a.exp_ < b.exp_) {
      return cmp(a.mant_, shift_left(b.mant_, static_cast<unsigned long>(b.exp_ - a.exp_)));
    }
    return cmp(shift_left(a.mant_, static_cast<unsigned long>(a.exp_ - b.exp_)), b.mant_);
  }
  friend int compare(const Dyadic& a, const Rational& r) {
    // a.mant * 2^exp vs num/den, den > 0
    BigInt lhs = a.mant_ * r.get_den();
    BigInt rhs = r.get_num();
    if (a.exp_ >= 0) {
      lhs = shift_left(lhs, static_cast<unsigned long>(a.exp_));
    } else {
      rhs = shift_left(rhs, static_cast<unsigned long>(-a.exp_));
    }
    return cmp(lhs, rhs);
  }

  friend bool operator==(const Dyadic& a, const Dyadic& b) { return compare(a, b) == 0; }
  friend bool operator<(const Dyadic& a, const Dyadic& b) { return compare(a, b) < 0; }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return compare(a, b) <= 0; }
  friend bool operator>(const Dyadic& a, const Dyadic& b) { return compare(a, b) > 0; }
  friend bool operator>=(const Dyadic& a, const Dyadic& b) { return compare(a, b) >= 0; }

  /// a / b rounded toward -inf (floor) or +inf (ceil), keeping at least
  /// `precision` significant bits. Requires b != 0.
  static Dyadic divide(const Dyadic& a, const Dyadic& b, int precision, bool round_up) {
    BigInt na = a.mant_;
    BigInt nb = b.mant_;
    if (sgn(nb) == 0) throw InvalidInput("division by zero interval endpoint");
    if (sgn(nb) < 0) {
      na = -na;
      nb = -nb;
    }
    long s = std::max(0L, static_cast<long>(precision) + 2 + bit_length(nb) - bit_length(na));
    BigInt num = shift_left(na, static_cast<unsigned long>(s));
    BigInt q;
    if (round_up) {
      mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), nb.get_mpz_t());
    } else {
      mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), nb.get_mpz_t());
    }
    return Dyadic(std::move(q), a.exp_ - b.exp_ - s);
  }

 private:
  static Rational scaled(const Rational& r, long frac_bits) {
    if (frac_bits >= 0) return Rational(r * Rational(pow2(static_cast<unsigned long>(frac_bits))));
    return Rational(r / Rational(pow2(static_cast<unsigned long>(-frac_bits))));
  }

  BigInt mant_ = 0;
  long exp_ = 0;
};

/// Closed interval [lo, hi] guaranteed to contain the quantity it encloses.
struct Interval {
  Dyadic lo;
  Dyadic hi;
  int bits = 0;

  static Interval exact(const Dyadic& v, int bits) { return Interval{v, v, bits}; }
  static Interval exact(long v, int bits) { return exact(Dyadic(v), bits); }

  Dyadic width() const { return hi - lo; }
  bool is_point() const { return lo == hi; }
  bool contains(const Rational& r) const { return compare(lo, r) <= 0 && compare(hi, r) >= 0; }
  bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
  double midpoint() const { return 0.5 * (lo.to_double() + hi.to_double()); }

  friend Interval operator+(const Interval& a, const Interval& b) {
    return Interval{a.lo + b.lo, a.hi + b.hi, std::min(a.bits, b.bits)};
  }
  Interval& operator+=(const Interval& b) {
    lo = lo + b.lo;
    hi = hi + b.hi;
    bits = std::min(bits, b.bits);
    return *this;
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    return Interval{a.lo - b.hi, a.hi - b.lo, std::min(a.bits, b.bits)};
  }
};

/// Enclosure of num/den for num >= 0 and den > 0 (den.lo must be positive).
inline Interval ratio(const Interval& num, const Interval& den, int bits) {
  if (den.lo.sign() <= 0) throw InvalidInput("ratio: denominator interval not positive");
  return Interval{Dyadic::divide(num.lo, den.hi, bits + 2, false),
                  Dyadic::divide(num.hi, den.lo, bits + 2, true), bits};
}

inline Interval max_of(const Interval& a, const Interval& b) {
  return Interval{std::max(a.lo, b.lo), std::max(a.hi, b.hi), std::min(a.bits, b.bits)};
}

inline Interval min_of(const Interval& a, const Interval& b) {
  return Interval{std::min(a.lo, b.lo), std::min(a.hi, b.hi), std::min(a.bits, b.bits)};
}

/// Certified enclosure of sqrt(r) with width <= 2^(-bits-1) * hi.
inline Interval sqrt_interval(const Rational& r, int bits) {
  if (sgn(r) < 0) throw InvalidInput("sqrt of negative rational");
  if (sgn(r) == 0) return Interval::exact(0, bits);
  const BigInt& num = r.get_num();
  const BigInt& den = r.get_den();
  // choose e with floor(r * 4^e) >= 4^(bits+1), so the root has >= bits+1 bits
  long log2r = bit_length(num) - bit_length(den);
  long e = (2L * (bits + 1) - log2r + 3) / 2 + 1;
  for (;;) {
    BigInt scaled_num = num;
    BigInt scaled_den = den;
    if (e >= 0) {
      scaled_num = shift_left(num, static_cast<unsigned long>(2 * e));
    } else {
      scaled_den = shift_left(den, static_cast<unsigned long>(-2 * e));
    }
    BigInt quot;
    BigInt rem;
    mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), scaled_num.get_mpz_t(), scaled_den.get_mpz_t());
    BigInt root = isqrt(quot);
    if (bit_length(root) <= bits + 1) {
      e += 2;
      continue;
    }
    bool exact = sgn(rem) == 0 && root * root == quot;
    Dyadic lo(root, -e);
    Dyadic hi = exact ? lo : Dyadic(BigInt(root + 1), -e);
    return Interval{lo, hi, bits};
  }
}

/// Escalating-precision schedule for certified comparisons.
struct PrecisionPolicy {
  int start_bits = 64;
  int max_bits = 4096;

  std::vector<int> levels() const {
    std::vector<int> out;
    for (int b = start_bits; b <= max_bits; b *= 2) out.push_back(b);
    if (out.empty() || out.back() != max_bits) out.push_back(max_bits);
    return out;
  }

  /// Default policy with the cap taken from DILATREE_MAX_BITS when set.
  static PrecisionPolicy from_environment() {
    PrecisionPolicy p;
    if (const char* env = std::getenv("DILATREE_MAX_BITS")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end != env && *end == '\0' && v >= 8) {
        p.max_bits = static_cast<int>(v);
        p.start_bits = std::min(p.start_bits, p.max_bits);
      }
    }
    return p;
  }
};

}  // namespace dilatree
