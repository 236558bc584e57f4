#pragma once

// Exact planar primitives over rational coordinates.

#include <algorithm>
#include <string>

#include "dilatree/errors.hpp"
#include "dilatree/interval.hpp"
#include "dilatree/numeric.hpp"

namespace dilatree {

struct Point {
  Rational x;
  Rational y;

  friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
  /// Lexicographic (x, then y); used only for deterministic ordering.
  friend bool operator<(const Point& a, const Point& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
};

inline Point operator+(const Point& a, const Point& b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(const Rational& s, const Point& p) { return {s * p.x, s * p.y}; }

inline Point mirror_x(const Point& p) { return {-p.x, p.y}; }

struct Segment {
  Point a;
  Point b;

  Segment(Point from, Point to) : a(std::move(from)), b(std::move(to)) {
    if (a == b) throw InvalidInput("degenerate segment");
  }
};

inline Rational squared_distance(const Point& p, const Point& q) {
  Rational dx = p.x - q.x;
  Rational dy = p.y - q.y;
  return dx * dx + dy * dy;
}

inline Rational dot(const Point& u, const Point& v) { return u.x * v.x + u.y * v.y; }
inline Rational cross(const Point& u, const Point& v) { return u.x * v.y - u.y * v.x; }

/// Enclosure of |pq| of relative width at most 2^(1-bits).
inline Interval distance_interval(const Point& p, const Point& q, int bits) {
  if (bits < 8) throw InvalidInput("distance_interval: bits must be >= 8");
  return sqrt_interval(squared_distance(p, q), bits);
}

enum class Orientation { Clockwise, CounterClockwise, Collinear };

inline Orientation orientation(const Point& a, const Point& b, const Point& c) {
  int s = sgn(cross(b - a, c - a));
  if (s > 0) return Orientation::CounterClockwise;
  if (s < 0) return Orientation::Clockwise;
  return Orientation::Collinear;
}

namespace detail {

inline int orient_sign(const Point& a, const Point& b, const Point& c) { return sgn(cross(b - a, c - a)); }

// p lies on the closed segment ab, given that a, b, p are collinear
inline bool within_box(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

}  // namespace detail

/// Interior crossing, or a collinear overlap of positive length. Touching at a
/// shared endpoint (or an endpoint lying on the other segment) is not a crossing.
inline bool segments_properly_cross(const Segment& s1, const Segment& s2) {
  using detail::orient_sign;
  int o1 = orient_sign(s1.a, s1.b, s2.a);
  int o2 = orient_sign(s1.a, s1.b, s2.b);
  int o3 = orient_sign(s2.a, s2.b, s1.a);
  int o4 = orient_sign(s2.a, s2.b, s1.b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 != 0 || o2 != 0) return false;
  // all four collinear: project on the dominant axis and measure the overlap
  bool use_x = s1.a.x != s1.b.x;
  auto key = [use_x](const Point& p) -> const Rational& { return use_x ? p.x : p.y; };
  Rational lo1 = std::min(key(s1.a), key(s1.b));
  Rational hi1 = std::max(key(s1.a), key(s1.b));
  Rational lo2 = std::min(key(s2.a), key(s2.b));
  Rational hi2 = std::max(key(s2.a), key(s2.b));
  return std::min(hi1, hi2) > std::max(lo1, lo2);
}

struct CircleIntersection {
  Point point;          // dyadic approximation of the upper intersection
  Rational residual1;   // |sqdist(point, c1) - r1_sq|
  Rational residual2;   // |sqdist(point, c2) - r2_sq|
  bool tangent = false;
};

/// Intersection of two circles on the left side of the directed line c1 -> c2,
/// approximated by a point with bits+2 fractional binary digits, within
/// 2^-bits of the true intersection.
inline CircleIntersection circle_intersection_upper(const Point& c1, const Rational& r1_sq, const Point& c2,
                                                    const Rational& r2_sq, int bits) {
  if (bits < 8) throw InvalidInput("circle_intersection_upper: bits must be >= 8");
  if (sgn(r1_sq) <= 0 || sgn(r2_sq) <= 0) throw InvalidInput("circle radii must be positive");
  Point d = c2 - c1;
  Rational dist_sq = dot(d, d);
  if (sgn(dist_sq) == 0) throw NoIntersection("concentric circles");
  Rational m = dist_sq + r1_sq - r2_sq;
  Rational disc = 4 * dist_sq * r1_sq - m * m;
  if (sgn(disc) < 0) throw NoIntersection("circles are disjoint or nested");

  // point = c1 + lambda * d + t * perp(d), perp(d) = (-dy, dx)
  Rational lambda = m / (2 * dist_sq);
  Rational t_sq = disc / (4 * dist_sq * dist_sq);
  Point base = c1 + lambda * d;

  // each coordinate is b + coef * sqrt(t_sq) = b +/- sqrt(coef^2 t_sq); both
  // terms are floored to 2^-frac, so the per-coordinate error is < 2^-(bits+1)
  long frac = bits + 2;
  auto coordinate = [&](const Rational& b, const Rational& coef) -> Rational {
    Rational arg = coef * coef * t_sq;
    Rational scaled = arg * Rational(pow4(static_cast<unsigned long>(frac)));
    BigInt root = isqrt(floor_of(scaled));
    BigInt whole = floor_of(Rational(b * Rational(pow2(static_cast<unsigned long>(frac)))));
    BigInt mant = sgn(coef) >= 0 ? BigInt(whole + root) : BigInt(whole - root);
    return Dyadic(mant, -frac).to_rational();
  };
  CircleIntersection out;
  out.tangent = sgn(disc) == 0;
  out.point = Point{coordinate(base.x, -d.y), coordinate(base.y, d.x)};
  out.residual1 = abs(squared_distance(out.point, c1) - r1_sq);
  out.residual2 = abs(squared_distance(out.point, c2) - r2_sq);
  return out;
}

}  // namespace dilatree
