#pragma once

// The PARTITION gadget: an 8n+8 point set whose minimum spanning-tree
// dilation is at most 3/2 exactly when the integers split evenly, plus its
// integer-coordinate form with threshold P/Q.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dilatree/dilation.hpp"
#include "dilatree/geometry.hpp"
#include "dilatree/network.hpp"
#include "dilatree/numeric.hpp"

namespace dilatree {

struct PartitionInstance {
  std::vector<BigInt> alphas_dot;

  PartitionInstance() = default;
  explicit PartitionInstance(std::vector<BigInt> a) : alphas_dot(std::move(a)) {
    if (alphas_dot.empty()) throw InvalidInput("partition instance needs at least one integer");
    for (const BigInt& x : alphas_dot) {
      if (x < 1) throw InvalidInput("partition integers must be positive");
    }
  }

  int n() const { return static_cast<int>(alphas_dot.size()); }
  BigInt sigma_dot() const {
    BigInt s = 0;
    for (const BigInt& x : alphas_dot) s += x;
    return s;
  }
};

/// Canonical index scheme: q1, q2, a_1..a_{n+1}, b_1..b_n, c_1..c_n,
/// d_1..d_n, p1, p2, then the mirrors of everything from a_1 on in the same
/// order.
class GadgetLayout {
 public:
  explicit GadgetLayout(int n = 1) : n_(n) {
    if (n < 1) throw InvalidInput("gadget needs n >= 1");
  }

  int n() const { return n_; }
  std::size_t size() const { return static_cast<std::size_t>(8 * n_ + 8); }

  Index q1() const { return 0; }
  Index q2() const { return 1; }
  Index a(int i, bool primed = false) const { return side(2 + (i - 1), primed, i, n_ + 1); }
  Index b(int i, bool primed = false) const { return side(n_ + 3 + (i - 1), primed, i, n_); }
  Index c(int i, bool primed = false) const { return side(2 * n_ + 3 + (i - 1), primed, i, n_); }
  Index d(int i, bool primed = false) const { return side(3 * n_ + 3 + (i - 1), primed, i, n_); }
  Index p1(bool primed = false) const { return side(4 * n_ + 3, primed, 1, 1); }
  Index p2(bool primed = false) const { return side(4 * n_ + 4, primed, 1, 1); }

  Index mirror(Index x) const {
    if (x < 2) return x;
    return x < 4 * n_ + 5 ? x + 4 * n_ + 3 : x - (4 * n_ + 3);
  }
  bool is_primed(Index x) const { return x >= 4 * n_ + 5; }

  /// Index i such that x is d_i or d_i', or 0 when x is not a d point.
  int d_index(Index x) const {
    Index base = is_primed(x) ? mirror(x) : x;
    if (base >= d(1) && base <= d(n_)) return base - d(1) + 1;
    return 0;
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out(size());
    out[0] = "q1";
    out[1] = "q2";
    for (bool primed : {false, true}) {
      std::string tick = primed ? "'" : "";
      for (int i = 1; i <= n_ + 1; ++i) out[static_cast<std::size_t>(a(i, primed))] = "a" + std::to_string(i) + tick;
      for (int i = 1; i <= n_; ++i) {
        out[static_cast<std::size_t>(b(i, primed))] = "b" + std::to_string(i) + tick;
        out[static_cast<std::size_t>(c(i, primed))] = "c" + std::to_string(i) + tick;
        out[static_cast<std::size_t>(d(i, primed))] = "d" + std::to_string(i) + tick;
      }
      out[static_cast<std::size_t>(p1(primed))] = "p1" + tick;
      out[static_cast<std::size_t>(p2(primed))] = "p2" + tick;
    }
    return out;
  }

  /// The 6n+6 edges forced at dilation 8/5, sorted.
  EdgeList critical_list() const {
    EdgeList out;
    for (bool primed : {false, true}) {
      out.emplace_back(q1(), a(1, primed));
      out.emplace_back(a(n_ + 1, primed), p1(primed));
      out.emplace_back(p1(primed), p2(primed));
      for (int i = 1; i <= n_; ++i) {
        out.emplace_back(a(i, primed), b(i, primed));
        out.emplace_back(b(i, primed), c(i, primed));
        out.emplace_back(d(i, primed), a(i + 1, primed));
      }
    }
    return sorted_edges(std::move(out));
  }

  /// Critical edges, one alternation choice per index and side (true means
  /// c_i d_i, false means c_i a_{i+1}), and q2 joined to `anchor`.
  EdgeList tree_edges(const std::vector<bool>& right, const std::vector<bool>& left, Index anchor) const {
    if (right.size() != static_cast<std::size_t>(n_) || left.size() != static_cast<std::size_t>(n_)) {
      throw InvalidInput("alternation masks must have one entry per index");
    }
    if (anchor == q2() || anchor < 0 || anchor >= static_cast<Index>(size())) {
      throw InvalidInput("q2 anchor must be another gadget point");
    }
    EdgeList out = critical_list();
    for (int i = 1; i <= n_; ++i) {
      std::size_t k = static_cast<std::size_t>(i - 1);
      out.emplace_back(c(i), right[k] ? d(i) : a(i + 1));
      out.emplace_back(c(i, true), left[k] ? d(i, true) : a(i + 1, true));
    }
    out.emplace_back(q2(), anchor);
    return sorted_edges(std::move(out));
  }

 private:
  Index side(Index base, bool primed, int i, int hi) const {
    if (i < 1 || i > hi) throw InvalidInput("gadget index out of range");
    return primed ? base + 4 * n_ + 3 : base;
  }

  int n_;
};

/// Circle data defining d_i: |c_i d_i| = 9*4^(i-1) + alpha_i, |d_i a_{i+1}| = 2*4^(i-1).
struct DCircle {
  Point c;
  Rational r1_sq;
  Point a_next;
  Rational r2_sq;
};

struct Gadget {
  PartitionInstance instance;
  GadgetLayout layout;
  std::vector<Rational> alphas;
  Rational sigma_total;
  Rational xi;
  PointSet points;
  std::vector<DCircle> d_defs;
  int d_bits = 0;  // |d_i - stored d_i| < 2^-d_bits

  int n() const { return layout.n(); }
  const Point& at(Index i) const { return points[i]; }
};

/// Smallest integer k > 4n + 22 + log2(n) + log2(sigma_dot).
inline long default_k(const PartitionInstance& inst) {
  BigInt prod = BigInt(inst.n()) * inst.sigma_dot();
  return 4L * inst.n() + 22 + bit_length(prod);
}

/// xi = 1 / (4^(n+4) sigma_dot).
inline Rational gadget_xi(const PartitionInstance& inst) {
  return make_rational(BigInt(1), BigInt(pow4(static_cast<unsigned long>(inst.n() + 4)) * inst.sigma_dot()));
}

/// P/Q = 3/2 + xi/2, unreduced as P = 3*4^(n+4)*sigma_dot + 1, Q = 2*4^(n+4)*sigma_dot.
inline Threshold gadget_threshold(const PartitionInstance& inst) {
  BigInt base = pow4(static_cast<unsigned long>(inst.n() + 4)) * inst.sigma_dot();
  return Threshold(BigInt(3 * base + 1), BigInt(2 * base));
}

namespace detail {

inline Point dir43(const Rational& s) { return Point{4 * s, 3 * s}; }

inline Rational four_pow(int e) { return Rational(pow4(static_cast<unsigned long>(e))); }

// Exact coordinates of every point except the d's (left as origin here).
inline std::vector<Point> gadget_exact_points(const GadgetLayout& L) {
  const int n = L.n();
  std::vector<Point> pts(L.size(), Point{Rational(0), Rational(0)});
  const Point a1{Rational(5, 2), Rational(0)};
  for (int i = 1; i <= n + 1; ++i) {
    pts[static_cast<std::size_t>(L.a(i))] = a1 + dir43(four_pow(i - 1) - 1);
  }
  for (int i = 1; i <= n; ++i) {
    Rational unit = four_pow(i - 1);
    Point b = pts[static_cast<std::size_t>(L.a(i))] + dir43(unit / 5);
    pts[static_cast<std::size_t>(L.b(i))] = b;
    pts[static_cast<std::size_t>(L.c(i))] = b + dir43(3 * unit / 5);
  }
  Rational reach = four_pow(n) / 9 - Rational(179, 1800);
  const Point& an = pts[static_cast<std::size_t>(L.a(n + 1))];
  pts[static_cast<std::size_t>(L.p1())] = an + Point{3 * reach, -4 * reach};
  pts[static_cast<std::size_t>(L.p2())] = an + Point{12 * reach, -16 * reach};
  pts[static_cast<std::size_t>(L.q2())] = Point{Rational(0), -Rational(25, 9) * four_pow(n) + Rational(11, 18)};
  return pts;
}

inline void mirror_right_half(const GadgetLayout& L, std::vector<Point>& pts) {
  for (Index x = 2; x < 4 * L.n() + 5; ++x) {
    pts[static_cast<std::size_t>(L.mirror(x))] = mirror_x(pts[static_cast<std::size_t>(x)]);
  }
}

inline std::vector<DCircle> d_circles(const GadgetLayout& L, const std::vector<Point>& pts,
                                      const std::vector<Rational>& alphas) {
  std::vector<DCircle> out;
  for (int i = 1; i <= L.n(); ++i) {
    Rational r1 = 9 * four_pow(i - 1) + alphas[static_cast<std::size_t>(i - 1)];
    Rational r2 = 2 * four_pow(i - 1);
    out.push_back({pts[static_cast<std::size_t>(L.c(i))], r1 * r1, pts[static_cast<std::size_t>(L.a(i + 1))], r2 * r2});
  }
  return out;
}

inline std::vector<Rational> scaled_alphas(const PartitionInstance& inst) {
  std::vector<Rational> out;
  BigInt den = 10 * inst.sigma_dot();
  for (const BigInt& a : inst.alphas_dot) out.push_back(make_rational(a, den));
  return out;
}

}  // namespace detail

/// Builds the gadget with every d_i approximated to within 2^-d_bits.
/// d_bits = 0 picks default_k + 8. The stored d_i carry 2n+8 guard bits past
/// d_bits so that the circle residuals stay below 2^(4-d_bits) even for the
/// large outer circles.
inline Gadget build_gadget(const PartitionInstance& inst, int d_bits = 0) {
  if (inst.alphas_dot.empty()) throw InvalidInput("partition instance needs at least one integer");
  if (d_bits == 0) d_bits = static_cast<int>(default_k(inst)) + 8;
  if (d_bits < 32) throw InvalidInput("d_bits must be >= 32");
  Gadget g;
  g.instance = inst;
  g.layout = GadgetLayout(inst.n());
  g.alphas = detail::scaled_alphas(inst);
  g.sigma_total = 0;
  for (const Rational& a : g.alphas) g.sigma_total += a;
  g.xi = gadget_xi(inst);
  g.d_bits = d_bits;

  std::vector<Point> pts = detail::gadget_exact_points(g.layout);
  g.d_defs = detail::d_circles(g.layout, pts, g.alphas);
  const int inner_bits = d_bits + 2 * inst.n() + 8;
  for (int i = 1; i <= inst.n(); ++i) {
    const DCircle& dc = g.d_defs[static_cast<std::size_t>(i - 1)];
    CircleIntersection hit = circle_intersection_upper(dc.c, dc.r1_sq, dc.a_next, dc.r2_sq, inner_bits);
    if (hit.tangent) throw NoIntersection("d circle is tangent");
    pts[static_cast<std::size_t>(g.layout.d(i))] = hit.point;
  }
  detail::mirror_right_half(g.layout, pts);
  g.points = PointSet(std::move(pts), g.layout.labels());
  return g;
}

/// d*_i = c_i + (9*4^(i-1)/5)(4,3), the point on a_i a_{i+1} at distance 2*4^(i-1) from a_{i+1}.
inline Point auxiliary_dstar(const Gadget& g, int i, bool primed = false) {
  if (i < 1 || i > g.n()) throw InvalidInput("auxiliary_dstar: index out of range");
  Point p = g.at(g.layout.c(i)) + detail::dir43(9 * detail::four_pow(i - 1) / 5);
  return primed ? mirror_x(p) : p;
}

inline EdgeList gadget_tree(const Gadget& g, const std::vector<bool>& right, const std::vector<bool>& left,
                            Index anchor) {
  return g.layout.tree_edges(right, left, anchor);
}

/// Standard tree for index set A (1-based): c_i d_i and c_i' a_{i+1}' for i in
/// A, c_i a_{i+1} and c_i' d_i' otherwise, plus q1 q2.
inline Tree standard_tree(const Gadget& g, const std::set<int>& A) {
  std::vector<bool> right(static_cast<std::size_t>(g.n()), false);
  for (int i : A) {
    if (i < 1 || i > g.n()) throw InvalidInput("standard_tree: index outside 1..n");
    right[static_cast<std::size_t>(i - 1)] = true;
  }
  std::vector<bool> left(right.size());
  for (std::size_t k = 0; k < right.size(); ++k) left[k] = !right[k];
  return Tree(g.layout.size(), gadget_tree(g, right, left, g.layout.q1()));
}

/// Length of a gadget edge as the construction defines it: exact where the
/// squared distance is a rational square, and the prescribed circle radii for
/// c_i d_i and d_i a_{i+1}. Other edges at d points have no symbolic length.
inline std::optional<Rational> ledger_length(const Gadget& g, const Edge& e) {
  const GadgetLayout& L = g.layout;
  int du = L.d_index(e.u);
  int dv = L.d_index(e.v);
  if (du == 0 && dv == 0) return exact_sqrt(squared_distance(g.at(e.u), g.at(e.v)));
  if (du != 0 && dv != 0) return std::nullopt;
  Index dpt = du != 0 ? e.u : e.v;
  Index other = du != 0 ? e.v : e.u;
  int i = du != 0 ? du : dv;
  bool primed = L.is_primed(dpt);
  if (other == L.c(i, primed)) return 9 * detail::four_pow(i - 1) + g.alphas[static_cast<std::size_t>(i - 1)];
  if (other == L.a(i + 1, primed)) return 2 * detail::four_pow(i - 1);
  return std::nullopt;
}

/// Symbolic tree distance between u and v, if every edge on the path has a
/// ledger length.
inline std::optional<Rational> symbolic_path_length(const Gadget& g, const Tree& t, Index u, Index v) {
  Rational total = 0;
  for (const Edge& e : t.path(u, v)) {
    std::optional<Rational> len = ledger_length(g, e);
    if (!len) return std::nullopt;
    total += *len;
  }
  return total;
}

struct IntegerInstance {
  PartitionInstance instance;
  long k = 0;
  PointSet points;  // integer coordinates, scaled by 1800 * 2^k
  BigInt P;
  BigInt Q;
  Rational epsilon_bound;  // |d_i - rounded d_i| <= epsilon_bound before scaling

  int n() const { return instance.n(); }
  GadgetLayout layout() const { return GadgetLayout(instance.n()); }
  BigInt scale() const { return BigInt(1800) * pow2(static_cast<unsigned long>(k)); }
  Threshold threshold() const { return Threshold(P, Q); }
};

/// Rounds each d_i to k fractional bits and scales everything by 1800 * 2^k.
inline IntegerInstance integerize(const Gadget& g, std::optional<long> k = std::nullopt) {
  long kk = k.value_or(default_k(g.instance));
  if (kk < 1) throw InvalidInput("integerize: k must be positive");
  if (g.d_bits < kk) {
    throw PrecisionInsufficient("gadget d points carry " + std::to_string(g.d_bits) + " bits, k = " +
                                std::to_string(kk) + " requested");
  }
  const GadgetLayout& L = g.layout;
  Rational scale(BigInt(BigInt(1800) * pow2(static_cast<unsigned long>(kk))));
  std::vector<Point> pts;
  for (Index x = 0; x < static_cast<Index>(L.size()); ++x) {
    Point p = g.at(x);
    if (L.d_index(x) != 0) {
      p = Point{Dyadic::nearest(p.x, kk).to_rational(), Dyadic::nearest(p.y, kk).to_rational()};
    }
    Point s{p.x * scale, p.y * scale};
    if (s.x.get_den() != 1 || s.y.get_den() != 1) {
      throw Error("integerize: coordinate of " + g.points.label(x) + " is not integral after scaling");
    }
    pts.push_back(std::move(s));
  }
  Threshold th = gadget_threshold(g.instance);
  IntegerInstance ii;
  ii.instance = g.instance;
  ii.k = kk;
  ii.points = PointSet(std::move(pts), L.labels());
  ii.P = th.p;
  ii.Q = th.q;
  ii.epsilon_bound = make_rational(BigInt(1), pow2(static_cast<unsigned long>(kk)));
  return ii;
}

/// Rational-coordinate gadget recovered from an integer instance. The d
/// points are within 2^-k of the true ones; d_bits is lowered to k-2n-2 so the
/// residual bound of the gadget invariant still applies to them.
inline Gadget to_gadget(const IntegerInstance& ii) {
  Gadget g;
  g.instance = ii.instance;
  g.layout = ii.layout();
  if (ii.points.size() != g.layout.size()) throw InvalidInput("instance point count does not match 8n+8");
  g.alphas = detail::scaled_alphas(ii.instance);
  g.sigma_total = 0;
  for (const Rational& a : g.alphas) g.sigma_total += a;
  g.xi = gadget_xi(ii.instance);
  g.d_bits = static_cast<int>(ii.k) - 2 * ii.n() - 2;
  Rational inv = make_rational(BigInt(1), ii.scale());
  std::vector<Point> pts;
  for (const Point& p : ii.points.points()) pts.push_back(Point{p.x * inv, p.y * inv});
  g.d_defs = detail::d_circles(g.layout, detail::gadget_exact_points(g.layout), g.alphas);
  g.points = PointSet(std::move(pts), g.layout.labels());
  return g;
}

}  // namespace dilatree
