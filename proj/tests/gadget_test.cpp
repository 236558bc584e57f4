#include <gtest/gtest.h>

#include <random>

#include "dilatree/gadget.hpp"
#include "dilatree/verify.hpp"
#include "test_support.hpp"

using namespace dilatree;
using testing_support::decimal;
using testing_support::q;

namespace {

PartitionInstance inst(std::initializer_list<long> a) {
  std::vector<BigInt> v;
  for (long x : a) v.emplace_back(x);
  return PartitionInstance(v);
}

Point pt(long xn, long xd, long yn, long yd) { return Point{q(xn, xd), q(yn, yd)}; }

bool has(const Tree& t, Index u, Index v) { return t.has_edge(u, v); }

}  // namespace

TEST(Gadget, SmallInstanceCoordinates) {
  Gadget g = build_gadget(inst({1}));
  const GadgetLayout& L = g.layout;
  EXPECT_EQ(g.points.size(), 16U);
  EXPECT_EQ(g.at(L.a(1)), pt(5, 2, 0, 1));
  EXPECT_EQ(g.at(L.a(2)), pt(29, 2, 9, 1));
  EXPECT_EQ(g.at(L.b(1)), pt(33, 10, 3, 5));
  EXPECT_EQ(g.at(L.c(1)), pt(57, 10, 12, 5));
  EXPECT_EQ(g.at(L.q2()), pt(0, 1, -21, 2));
  EXPECT_EQ(g.at(L.q1()), pt(0, 1, 0, 1));
  EXPECT_EQ(g.at(L.a(1, true)), pt(-5, 2, 0, 1));
  EXPECT_EQ(g.points.label(L.c(1, true)), "c1'");
  EXPECT_EQ(squared_distance(g.at(L.q1()), g.at(L.b(1))), q(1125, 100));
  EXPECT_EQ(squared_distance(g.at(L.q2()), g.at(L.p2())), q(233 * 233, 100));
}

TEST(Gadget, DPointMatchesHighPrecisionOracle) {
  Gadget g = build_gadget(inst({1}), 160);
  // independently solved to 60 digits
  Rational x = decimal("12.6251776694335185191417185608026775575252258376242224669925341");
  Rational y = decimal("8.30355098620985409568982979771764204451182009528891549855540785");
  const Point& d = g.at(g.layout.d(1));
  Rational tol = make_rational(BigInt(1), pow2(160));
  EXPECT_LT(abs(d.x - x), tol);
  EXPECT_LT(abs(d.y - y), tol);
  EXPECT_EQ(g.at(g.layout.d(1, true)), mirror_x(d));
}

TEST(Gadget, AlphasSumToOneTenth) {
  for (auto a : {inst({1}), inst({3, 1, 4, 1, 5}), inst({7, 7, 2})}) {
    Gadget g = build_gadget(a);
    Rational s = 0;
    for (const Rational& x : g.alphas) s += x;
    EXPECT_EQ(s, q(1, 10));
    EXPECT_EQ(g.sigma_total, q(1, 10));
  }
}

TEST(Gadget, RejectsBadInput) {
  EXPECT_THROW(PartitionInstance(std::vector<BigInt>{}), InvalidInput);
  EXPECT_THROW(inst({1, 0}), InvalidInput);
  EXPECT_THROW(build_gadget(inst({1}), 16), InvalidInput);
}

TEST(Gadget, AuxiliaryPoint) {
  Gadget g = build_gadget(inst({1}));
  Point ds = auxiliary_dstar(g, 1);
  EXPECT_EQ(ds, pt(129, 10, 39, 5));
  EXPECT_EQ(squared_distance(ds, g.at(g.layout.a(2))), q(4));
  EXPECT_THROW(auxiliary_dstar(g, 2), InvalidInput);

  Gadget g2 = build_gadget(inst({2, 5, 3}));
  for (int i = 1; i <= 3; ++i) {
    EXPECT_EQ(orientation(g2.at(g2.layout.a(1)), g2.at(g2.layout.a(4)), auxiliary_dstar(g2, i)),
              Orientation::Collinear);
  }
  // |d_2 d*_2| < sqrt(16/11) ~ 1.2060
  Interval gap = distance_interval(g2.at(g2.layout.d(2)), auxiliary_dstar(g2, 2), 64);
  EXPECT_LT(gap.hi.to_double(), 1.2060);
}

TEST(Gadget, IntegerizeSmallest) {
  Gadget g = build_gadget(inst({1}));
  EXPECT_EQ(default_k(g.instance), 27);
  IntegerInstance ii = integerize(g);
  EXPECT_EQ(ii.k, 27);
  EXPECT_EQ(ii.P, BigInt(3073));
  EXPECT_EQ(ii.Q, BigInt(2048));
  BigInt s = BigInt(1800) * pow2(27);
  EXPECT_EQ(ii.points[g.layout.a(1)], (Point{Rational(BigInt(s * 5 / 2)), q(0)}));
  for (const Point& p : ii.points.points()) {
    EXPECT_EQ(p.x.get_den(), 1);
    EXPECT_EQ(p.y.get_den(), 1);
    EXPECT_LE(bit_length(p.x.get_num()), 2 + 27 + 15);
    EXPECT_LE(bit_length(p.y.get_num()), 2 + 27 + 15);
  }
  EXPECT_EQ(ii.epsilon_bound, make_rational(BigInt(1), pow2(27)));
}

TEST(Gadget, ThresholdForTwoEqualIntegers) {
  Gadget g = build_gadget(inst({1, 1}));
  EXPECT_EQ(g.xi, q(1, 8192));
  IntegerInstance ii = integerize(g);
  EXPECT_EQ(make_rational(ii.P, ii.Q), q(3, 2) + q(1, 16384));
}

TEST(Gadget, IntegerizeNeedsEnoughBits) {
  Gadget g = build_gadget(inst({1}), 32);
  EXPECT_THROW(integerize(g, 40), PrecisionInsufficient);
  EXPECT_NO_THROW(integerize(g, 32));
}

TEST(Gadget, RoundedPointsStayClose) {
  Gadget g = build_gadget(inst({4, 1, 3}));
  IntegerInstance ii = integerize(g);
  Gadget back = to_gadget(ii);
  for (int i = 1; i <= 3; ++i) {
    Point a = g.at(g.layout.d(i));
    Point b = back.at(back.layout.d(i));
    Rational gap = squared_distance(a, b);
    EXPECT_LE(gap, ii.epsilon_bound * ii.epsilon_bound);
  }
  for (Index x = 0; x < static_cast<Index>(g.layout.size()); ++x) {
    if (g.layout.d_index(x) == 0) {
      EXPECT_EQ(g.at(x), back.at(x));
    }
  }
}

TEST(StandardTree, SingleIndex) {
  Gadget g = build_gadget(inst({1}));
  const GadgetLayout& L = g.layout;
  Tree t = standard_tree(g, {1});
  EXPECT_EQ(t.edges().size(), 15U);
  EXPECT_TRUE(has(t, L.c(1), L.d(1)));
  EXPECT_TRUE(has(t, L.c(1, true), L.a(2, true)));
  EXPECT_TRUE(has(t, L.q1(), L.q2()));
  EXPECT_FALSE(has(t, L.c(1), L.a(2)));
}

TEST(StandardTree, EmptySetChoosesMirrorSide) {
  Gadget g = build_gadget(inst({1, 2}));
  const GadgetLayout& L = g.layout;
  Tree t = standard_tree(g, {});
  for (int i = 1; i <= 2; ++i) {
    EXPECT_TRUE(has(t, L.c(i), L.a(i + 1)));
    EXPECT_TRUE(has(t, L.c(i, true), L.d(i, true)));
  }
  EXPECT_FALSE(tree_has_crossing(g.points, t));
  EXPECT_THROW(standard_tree(g, {3}), InvalidInput);
}

TEST(StandardTree, CrossingFreeForEveryChoice) {
  Gadget g = build_gadget(inst({1, 2, 3}));
  for (int m = 0; m < 8; ++m) {
    std::set<int> A;
    for (int i = 0; i < 3; ++i) {
      if (m >> i & 1) A.insert(i + 1);
    }
    EXPECT_FALSE(tree_has_crossing(g.points, standard_tree(g, A))) << m;
  }
}

TEST(Ledger, PathLengthAcrossTheRightHalf) {
  Gadget g = build_gadget(inst({1, 1}));
  const GadgetLayout& L = g.layout;
  Tree t = standard_tree(g, {1});
  // a1 to a2 detours through d1: 15 + alpha_1
  EXPECT_EQ(symbolic_path_length(g, t, L.a(1), L.a(2)), q(15) + q(1, 20));
  Interval enclosed = tree_path_length(g.points, t, L.a(1), L.a(2), 128);
  EXPECT_TRUE(enclosed.lo.to_double() < 15.05 + 1e-9 && enclosed.hi.to_double() > 15.05 - 1e-9);
  EXPECT_EQ(ledger_length(g, Edge(L.b(1), L.d(1))), std::nullopt);
}

TEST(Verify, AllChecksPassForSmallInstances) {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 5; ++n) {
    std::vector<BigInt> a;
    for (int i = 0; i < n; ++i) a.emplace_back(testing_support::uniform(rng, 1, 9));
    Gadget g = build_gadget(PartitionInstance(a));
    LemmaReport r = verify_gadget(g);
    for (const LemmaCheck& c : r.checks) EXPECT_TRUE(c.passed) << "n=" << n << " " << c.name << ": " << c.detail;
  }
}

TEST(Verify, CriticalSetSize) {
  Gadget g = build_gadget(inst({1, 1, 1}));
  EXPECT_EQ(critical_edges(g.points, BigInt(8), BigInt(5)).size(), 24U);
  EXPECT_EQ(g.layout.critical_list().size(), 24U);
}

TEST(Verify, DetectsReflectedDPoint) {
  Gadget g = build_gadget(inst({1, 2}));
  std::vector<Point> pts = g.points.points();
  const GadgetLayout& L = g.layout;
  // reflect d1 across the line through a1 with direction (4,3)
  Point a1 = g.at(L.a(1));
  Point rel = pts[static_cast<std::size_t>(L.d(1))] - a1;
  Rational t = dot(rel, Point{q(4), q(3)}) / 25;
  Point foot = a1 + t * Point{q(4), q(3)};
  pts[static_cast<std::size_t>(L.d(1))] = foot + foot - pts[static_cast<std::size_t>(L.d(1))];
  pts[static_cast<std::size_t>(L.d(1, true))] = mirror_x(pts[static_cast<std::size_t>(L.d(1))]);
  g.points = PointSet(pts, L.labels());
  LemmaReport r = verify_gadget(g);
  ASSERT_NE(r.find("d side and height"), nullptr);
  EXPECT_FALSE(r.find("d side and height")->passed);
  EXPECT_TRUE(r.find("distance identities")->passed);
  EXPECT_FALSE(r.all_passed());
}

TEST(Verify, IntegerInstancePasses) {
  IntegerInstance ii = integerize(build_gadget(inst({2, 3, 5})));
  LemmaReport r = verify_gadget(ii);
  for (const LemmaCheck& c : r.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}

TEST(StandardTreeDilation, ExactThreeHalves) {
  Gadget g = build_gadget(inst({1, 1}), 256);
  StandardTreeCheck c = certify_standard_tree(g, {1});
  ASSERT_TRUE(c.symbolic_p2q2.has_value());
  ASSERT_TRUE(c.symbolic_p2q2_prime.has_value());
  EXPECT_EQ(*c.symbolic_p2q2, q(3, 2));
  EXPECT_EQ(*c.symbolic_p2q2_prime, q(3, 2));
  EXPECT_TRUE(c.others_strict);
  const GadgetLayout& L = g.layout;
  EXPECT_TRUE(c.report.witness == Edge(L.q2(), L.p2()) || c.report.witness == Edge(L.q2(), L.p2(true)));
  EXPECT_TRUE(c.report.value.contains(q(3, 2)) || abs(c.report.value.lo.to_rational() - q(3, 2)) < q(1, 1000000));
}

TEST(StandardTreeDilation, UnbalancedSetMissesThreeHalves) {
  Gadget g = build_gadget(inst({1, 2}), 256);
  StandardTreeCheck c = certify_standard_tree(g, {2});
  ASSERT_TRUE(c.symbolic_p2q2.has_value());
  EXPECT_GT(*c.symbolic_p2q2, q(3, 2));
  EXPECT_LT(*c.symbolic_p2q2_prime, q(3, 2));
}

TEST(Perturbation, ShiftStaysUnderBound) {
  Gadget g = build_gadget(inst({1, 2}));
  std::vector<Point> moved = g.points.points();
  Rational eps = make_rational(BigInt(1), pow2(40));
  Rational step = make_rational(BigInt(1), pow2(42));
  for (int i = 1; i <= 2; ++i) {
    for (bool primed : {false, true}) {
      auto& p = moved[static_cast<std::size_t>(g.layout.d(i, primed))];
      p = Point{p.x + step, p.y - step};
    }
  }
  Tree t = standard_tree(g, {1});
  Rational shift = dilation_shift_bound(g.points, PointSet(moved), t, 128);
  EXPECT_LT(shift, Rational(BigInt(pow4(8) * 2)) * eps);
  EXPECT_GT(shift, q(0));
}
