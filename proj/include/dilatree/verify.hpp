#pragma once

// Certified checks of the gadget's geometric claims, and of the dilation of
// its standard trees.

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dilatree/dilation.hpp"
#include "dilatree/gadget.hpp"

namespace dilatree {

struct LemmaCheck {
  std::string name;
  bool passed = true;
  std::string detail;  // first failure, empty when passed
};

struct LemmaReport {
  std::vector<LemmaCheck> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const LemmaCheck& c) { return c.passed; });
  }
  const LemmaCheck* find(const std::string& name) const {
    for (const LemmaCheck& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

namespace detail {

class CheckBuilder {
 public:
  CheckBuilder(LemmaReport& r, std::string name) : report_(r) { check_.name = std::move(name); }
  ~CheckBuilder() { report_.checks.push_back(std::move(check_)); }
  CheckBuilder(const CheckBuilder&) = delete;
  CheckBuilder& operator=(const CheckBuilder&) = delete;

  void require(bool ok, const std::string& what) {
    if (!ok && check_.passed) {
      check_.passed = false;
      check_.detail = what;
    }
  }

 private:
  LemmaReport& report_;
  LemmaCheck check_;
};

inline Rational dyadic_unit(long bits) { return make_rational(BigInt(1), pow2(static_cast<unsigned long>(bits))); }

}  // namespace detail

/// Runs every structural check on a gadget. Failures are recorded, not thrown.
inline LemmaReport verify_gadget(const Gadget& g, int bits = 256) {
  using detail::four_pow;
  const GadgetLayout& L = g.layout;
  const int n = g.n();
  auto P = [&g](Index x) -> const Point& { return g.at(x); };
  auto sq = [&g](Index x, Index y) { return squared_distance(g.at(x), g.at(y)); };
  auto lbl = [&g](Index x) { return g.points.label(x); };
  LemmaReport report;
  const Rational slack = detail::dyadic_unit(g.d_bits);

  {
    detail::CheckBuilder c(report, "distance identities");
    auto expect = [&](Index x, Index y, const Rational& len) {
      c.require(sq(x, y) == len * len, "|" + lbl(x) + lbl(y) + "| != " + to_string(len));
    };
    for (bool primed : {false, true}) {
      for (int i = 1; i <= n; ++i) {
        Rational u = four_pow(i - 1);
        expect(L.a(i, primed), L.a(i + 1, primed), 15 * u);
        expect(L.a(i, primed), L.b(i, primed), u);
        expect(L.b(i, primed), L.c(i, primed), 3 * u);
        expect(L.c(i, primed), L.a(i + 1, primed), 11 * u);
      }
      expect(L.a(1, primed), L.a(n + 1, primed), 5 * (four_pow(n) - 1));
      expect(L.a(n + 1, primed), L.p1(primed), Rational(5, 9) * four_pow(n) - Rational(179, 360));
      expect(L.a(n + 1, primed), L.p2(primed), Rational(5, 9) * four_pow(n + 1) - Rational(179, 90));
      expect(L.q2(), L.p2(primed), Rational(5, 3) * four_pow(n + 1) - Rational(101, 30));
    }
    expect(L.q1(), L.a(1), Rational(5, 2));
    expect(L.q1(), L.q2(), Rational(25, 9) * four_pow(n) - Rational(11, 18));
    // q2 p2 runs parallel to a_1 a_{n+1}
    c.require(sgn(cross(P(L.p2()) - P(L.q2()), P(L.a(n + 1)) - P(L.a(1)))) == 0, "q2p2 not parallel to a1a_{n+1}");
  }

  {
    detail::CheckBuilder c(report, "line and mirror structure");
    for (int i = 1; i <= n; ++i) {
      for (Index x : {L.b(i), L.c(i), L.a(i + 1)}) {
        c.require(orientation(P(L.a(1)), P(L.a(n + 1)), P(x)) == Orientation::Collinear,
                  lbl(x) + " is off the slope-3/4 line");
      }
    }
    c.require(sgn(P(L.q1()).x) == 0 && sgn(P(L.q1()).y) == 0, "q1 is not the origin");
    c.require(sgn(P(L.q2()).x) == 0, "q2 is off the y-axis");
    for (Index x = 2; x < 4 * n + 5; ++x) {
      c.require(P(L.mirror(x)) == mirror_x(P(x)), lbl(L.mirror(x)) + " is not the mirror of " + lbl(x));
      c.require(sgn(P(x).x) > 0, lbl(x) + " is not right of the y-axis");
    }
  }

  {
    detail::CheckBuilder c(report, "alpha scaling");
    Rational sum = 0;
    for (const Rational& a : g.alphas) {
      sum += a;
      c.require(sgn(a) > 0 && a <= Rational(1, 10), "alpha outside (0, 1/10]");
    }
    c.require(sum == Rational(1, 10) && g.sigma_total == sum, "alphas do not sum to 1/10");
    c.require(g.xi == gadget_xi(g.instance), "xi mismatch");
    Threshold th = gadget_threshold(g.instance);
    c.require(th.value() == Rational(3, 2) + g.xi / 2, "P/Q != 3/2 + xi/2");
  }

  {
    detail::CheckBuilder c(report, "d residuals");
    const Rational bound = detail::dyadic_unit(g.d_bits - 4);
    for (int i = 1; i <= n; ++i) {
      const DCircle& dc = g.d_defs[static_cast<std::size_t>(i - 1)];
      const Point& d = P(L.d(i));
      c.require(dc.c == P(L.c(i)) && dc.a_next == P(L.a(i + 1)), "d circle centres disagree with the points");
      c.require(abs(squared_distance(d, dc.c) - dc.r1_sq) < bound, "residual at c" + std::to_string(i));
      c.require(abs(squared_distance(d, dc.a_next) - dc.r2_sq) < bound, "residual at a" + std::to_string(i + 1));
    }
  }

  {
    detail::CheckBuilder c(report, "d side and height");
    for (int i = 1; i <= n; ++i) {
      const Point& d = P(L.d(i));
      c.require(orientation(P(L.a(1)), P(L.a(n + 1)), d) == Orientation::CounterClockwise,
                "d" + std::to_string(i) + " is not above the line a1 a_{n+1}");
      c.require(d.y + slack < P(L.a(i + 1)).y, "d" + std::to_string(i) + " is not below a" + std::to_string(i + 1));
    }
  }

  {
    detail::CheckBuilder c(report, "angle at a_{i+1} (prescribed lengths)");
    for (int i = 1; i <= n; ++i) {
      Rational u = four_pow(i - 1);
      Rational ca = 11 * u;
      Rational da = 2 * u;
      Rational cd = 9 * u + g.alphas[static_cast<std::size_t>(i - 1)];
      Rational cosine = (ca * ca + da * da - cd * cd) / (2 * ca * da);
      Rational bound = 1 - 1 / (22 * u);
      c.require(cosine > bound && bound >= Rational(21, 22), "cosine bound fails at i=" + std::to_string(i));
    }
  }

  {
    detail::CheckBuilder c(report, "angle at a_{i+1} (coordinates)");
    for (int i = 1; i <= n; ++i) {
      Rational A = sq(L.c(i), L.a(i + 1));
      Rational B = sq(L.d(i), L.a(i + 1));
      Rational C = sq(L.c(i), L.d(i));
      Rational num = A + B - C;
      Rational t = 1 - 1 / (22 * four_pow(i - 1));
      // num / (2 sqrt(A B)) > t, with t > 0
      c.require(sgn(num) > 0 && num * num > t * t * 4 * A * B, "cos at a" + std::to_string(i + 1) + " too small");
    }
  }

  {
    detail::CheckBuilder c(report, "c_i d_i slope");
    const Rational bound = Rational(68, 91);
    for (int i = 1; i <= n; ++i) {
      Rational dx = P(L.d(i)).x - P(L.c(i)).x;
      c.require(sgn(dx) > 0 && dx * dx > bound * bound * sq(L.c(i), L.d(i)),
                "c" + std::to_string(i) + "d" + std::to_string(i) + " is too steep");
    }
  }

  {
    detail::CheckBuilder c(report, "critical set at 8/5");
    EdgeList got = critical_edges(g.points, BigInt(8), BigInt(5));
    EdgeList want = L.critical_list();
    if (got != want) {
      std::ostringstream why;
      why << "found " << got.size() << " critical edges, expected " << want.size();
      for (const Edge& e : got) {
        if (!std::binary_search(want.begin(), want.end(), e)) {
          why << "; extra " << lbl(e.u) << lbl(e.v);
          break;
        }
      }
      for (const Edge& e : want) {
        if (!std::binary_search(got.begin(), got.end(), e)) {
          why << "; missing " << lbl(e.u) << lbl(e.v);
          break;
        }
      }
      c.require(false, why.str());
    }
  }

  {
    detail::CheckBuilder c(report, "alternation detour via b_i");
    const Rational delta_sq(64, 25);
    for (bool primed : {false, true}) {
      for (int i = 1; i <= n; ++i) {
        Index b = L.b(i, primed);
        Index cc = L.c(i, primed);
        Index d = L.d(i, primed);
        c.require(detail::root_sum_exceeds(sq(d, b), sq(b, cc), delta_sq * sq(cc, d)),
                  "|" + lbl(d) + lbl(b) + "| + |" + lbl(b) + lbl(cc) + "| <= 8/5 |" + lbl(cc) + lbl(d) + "|");
      }
    }
  }

  {
    detail::CheckBuilder c(report, "auxiliary d* points");
    for (int i = 1; i <= n; ++i) {
      Point ds = auxiliary_dstar(g, i);
      Rational u = four_pow(i - 1);
      c.require(orientation(P(L.a(1)), P(L.a(n + 1)), ds) == Orientation::Collinear, "d*" + std::to_string(i) +
                                                                                         " off the line");
      c.require(squared_distance(ds, P(L.a(i + 1))) == 4 * u * u, "|d*a| != 2*4^(i-1)");
      // |d_i d*_i| < sqrt(4^i / 11) + 2^(1 - d_bits)
      Interval lhs = sqrt_interval(squared_distance(P(L.d(i)), ds), bits);
      Interval rhs = sqrt_interval(four_pow(i) / 11, bits);
      Rational lim = rhs.lo.to_rational() + 2 * slack;
      c.require(lhs.hi.to_rational() < lim, "|d" + std::to_string(i) + " d*| too large");
    }
  }

  {
    detail::CheckBuilder c(report, "uncovered index bound");
    const Rational target = Rational(3, 2) + Rational(1, 256);
    for (int i = 1; i <= n; ++i) {
      Rational v = four_pow(i);
      c.require((11 * v - 5) / (Rational(36, 5) * v - 3) > target, "bound fails at i=" + std::to_string(i));
    }
    c.require(g.xi <= Rational(1, 256), "xi exceeds 1/256");
  }

  return report;
}

inline LemmaReport verify_gadget(const IntegerInstance& ii, int bits = 256) {
  LemmaReport r = verify_gadget(to_gadget(ii), bits);
  detail::CheckBuilder c(r, "integer instance");
  const int n = ii.n();
  // k > 4n + 22 + log2(n * sigma_dot)
  c.require(ii.k > 4L * n + 22 &&
                pow2(static_cast<unsigned long>(ii.k - 4L * n - 22)) > BigInt(n) * ii.instance.sigma_dot(),
            "k too small");
  Threshold th = gadget_threshold(ii.instance);
  c.require(ii.P == th.p && ii.Q == th.q, "P/Q mismatch");
  const long max_bits = 2L * n + ii.k + 15;
  for (const Point& p : ii.points.points()) {
    c.require(p.x.get_den() == 1 && p.y.get_den() == 1, "non-integer coordinate");
    c.require(bit_length(p.x.get_num()) <= max_bits && bit_length(p.y.get_num()) <= max_bits,
              "coordinate exceeds 2n+k+15 bits");
  }
  return r;
}

/// Outcome of certifying one standard tree.
struct StandardTreeCheck {
  Tree tree;
  std::optional<Rational> symbolic_p2q2;        // d_T(p2,q2)/|p2q2| from prescribed lengths
  std::optional<Rational> symbolic_p2q2_prime;
  DilationReport report;                        // certified global maximum
  bool others_strict = true;                    // every other pair certified < 3/2
  std::optional<Edge> offending_pair;
};

/// Builds the standard tree for A and certifies its dilation profile: the two
/// q2-p2 pairs are measured symbolically, every other pair must come out
/// strictly below 3/2.
inline StandardTreeCheck certify_standard_tree(const Gadget& g, const std::set<int>& A,
                                               const PrecisionPolicy& policy = {}) {
  const GadgetLayout& L = g.layout;
  StandardTreeCheck out{standard_tree(g, A), std::nullopt, std::nullopt, {}, true, std::nullopt};
  const Tree& t = out.tree;
  DistanceTable table(g.points);

  auto symbolic_ratio = [&](Index u, Index v) -> std::optional<Rational> {
    std::optional<Rational> path = symbolic_path_length(g, t, u, v);
    std::optional<Rational> dist = exact_sqrt(table.squared(u, v));
    if (!path || !dist) return std::nullopt;
    return *path / *dist;
  };
  out.symbolic_p2q2 = symbolic_ratio(L.p2(), L.q2());
  out.symbolic_p2q2_prime = symbolic_ratio(L.p2(true), L.q2());
  out.report = tree_dilation(table, t, policy);

  const Threshold three_halves(BigInt(3), BigInt(2));
  const auto n = static_cast<Index>(t.size());
  const Edge skip1(L.q2(), L.p2());
  const Edge skip2(L.q2(), L.p2(true));
  std::vector<Edge> open;
  const int base = policy.start_bits;
  for (Index u = 0; u < n && out.others_strict; ++u) {
    std::vector<Interval> dist = detail::distances_from(table, t, u, base);
    for (Index v = u + 1; v < n; ++v) {
      Edge e(u, v);
      if (e == skip1 || e == skip2 || t.has_edge(u, v)) continue;
      const Interval& path = dist[static_cast<std::size_t>(v)];
      if (path.hi * three_halves.q < table.distance(u, v, base).lo * three_halves.p) continue;
      open.push_back(e);
    }
  }
  for (const Edge& e : open) {
    EdgeList path = t.path(e.u, e.v);
    bool done = false;
    for (int level : policy.levels()) {
      if (level <= base) continue;
      Interval len = detail::sum_lengths(table, path, level);
      if (len.hi * three_halves.q < table.distance(e.u, e.v, level).lo * three_halves.p) {
        done = true;
        break;
      }
    }
    if (!done) {
      out.others_strict = false;
      out.offending_pair = e;
      break;
    }
  }
  return out;
}

/// Largest certified |Delta_T(u,v) - Delta'_T(u,v)| over all pairs, for one
/// tree on two equally sized point sets (upper bound at `bits`).
inline Rational dilation_shift_bound(const PointSet& a, const PointSet& b, const Tree& t, int bits) {
  if (a.size() != b.size() || a.size() != t.size()) throw InvalidInput("point sets and tree sizes differ");
  DistanceTable ta(a);
  DistanceTable tb(b);
  Rational worst = 0;
  const auto n = static_cast<Index>(t.size());
  for (Index u = 0; u < n; ++u) {
    std::vector<Interval> da = detail::distances_from(ta, t, u, bits);
    std::vector<Interval> db = detail::distances_from(tb, t, u, bits);
    for (Index v = u + 1; v < n; ++v) {
      Interval ra = detail::ratio_or_one(ta, t, u, v, da[static_cast<std::size_t>(v)], bits);
      Interval rb = detail::ratio_or_one(tb, t, u, v, db[static_cast<std::size_t>(v)], bits);
      Rational up = (ra.hi - rb.lo).to_rational();
      Rational down = (rb.hi - ra.lo).to_rational();
      worst = std::max({worst, up, down});
    }
  }
  return worst;
}

}  // namespace dilatree
