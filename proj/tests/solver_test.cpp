#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "dilatree/solver.hpp"
#include "test_support.hpp"

using namespace dilatree;
using testing_support::q;

namespace {

PointSet pts(std::initializer_list<std::pair<long, long>> xy) {
  std::vector<Point> v;
  for (auto [x, y] : xy) v.push_back(Point{q(x), q(y)});
  return PointSet(v);
}

PointSet unit_square() { return pts({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

PointSet random_points(std::mt19937_64& rng, int n, int range) {
  for (;;) {
    std::vector<Point> v;
    for (int i = 0; i < n; ++i) {
      v.push_back(Point{q(testing_support::uniform(rng, 0, range)), q(testing_support::uniform(rng, 0, range))});
    }
    try {
      return PointSet(v);
    } catch (const InvalidInput&) {
    }
  }
}

struct BruteForce {
  EdgeList best;
  DilationReport report;
  std::vector<std::pair<EdgeList, DilationReport>> all;
};

// Exhaustive oracle: every labeled tree, certified comparison against the best.
BruteForce brute_force(const DistanceTable& table, bool crossing_free = false) {
  BruteForce bf;
  enumerate_spanning_trees(table.size(), [&](const EdgeList& edges) {
    if (crossing_free && has_crossing(table.points(), edges)) return;
    Tree t(table.size(), edges);
    bf.all.emplace_back(edges, tree_dilation(table, t));
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < bf.all.size(); ++i) {
    const auto& [edges, rep] = bf.all[i];
    const auto& [best_edges, best_rep] = bf.all[best];
    RouteSet a{rep.witness, {Tree(table.size(), edges).path(rep.witness.u, rep.witness.v)}};
    RouteSet b{best_rep.witness, {Tree(table.size(), best_edges).path(best_rep.witness.u, best_rep.witness.v)}};
    int c = compare_routes(table, a, b);
    if (c < 0 || (c == 0 && edges < best_edges)) best = i;
  }
  bf.best = bf.all[best].first;
  bf.report = bf.all[best].second;
  return bf;
}

}  // namespace

TEST(Enumerate, Counts) {
  for (std::size_t n : {2U, 3U, 4U, 5U, 6U}) {
    std::set<EdgeList> seen;
    enumerate_spanning_trees(n, [&](const EdgeList& edges) {
      EXPECT_NO_THROW(Tree(n, edges));
      seen.insert(edges);
    });
    EXPECT_EQ(seen.size(), spanning_tree_count(n)) << n;
  }
  EXPECT_EQ(spanning_tree_count(5), 125U);
  EXPECT_EQ(spanning_tree_count(3), 3U);
  EXPECT_EQ(spanning_tree_count(2), 1U);
}

TEST(Enumerate, SizeLimits) {
  EXPECT_THROW(enumerate_spanning_trees(10, [](const EdgeList&) {}), SizeTooLarge);
  EXPECT_THROW(enumerate_spanning_trees(1, [](const EdgeList&) {}), InvalidInput);
}

TEST(Mdst, CollinearPointsGiveThePath) {
  SolverResult r = mdst_exact(pts({{0, 0}, {2, 0}, {1, 0}}));
  EXPECT_EQ(r.edges, (EdgeList{{0, 2}, {1, 2}}));
  EXPECT_TRUE(r.report.value.is_point());
  EXPECT_TRUE(r.report.value.contains(1));
}

TEST(Mdst, UnitSquareMatchesExhaustiveOracle) {
  DistanceTable table(unit_square());
  SolverResult r = mdst_exact(table);
  BruteForce bf = brute_force(table);
  EXPECT_EQ(r.edges, bf.best);
  EXPECT_EQ(r.edges, (EdgeList{{0, 1}, {0, 2}, {0, 3}}));
  EXPECT_TRUE(r.tied);
  EXPECT_TRUE(r.report.value.overlaps(bf.report.value));
  EXPECT_LE(compare(r.report.value.lo, testing_support::decimal("2.41421356237309505")), 0);
  EXPECT_GE(compare(r.report.value.hi, testing_support::decimal("2.41421356237309504")), 0);
  int ties = 0;
  for (const auto& [edges, rep] : bf.all) ties += rep.value.overlaps(r.report.value) ? 1 : 0;
  EXPECT_EQ(ties, 8);
}

TEST(Mdst, RandomSetsAgreeWithOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 12; ++trial) {
    DistanceTable table(random_points(rng, 5 + trial % 2, 64));
    SolverResult r = mdst_exact(table);
    BruteForce bf = brute_force(table);
    EXPECT_TRUE(r.report.value.overlaps(bf.report.value));
    EXPECT_EQ(r.edges, bf.best);
  }
}

TEST(Mdst, PruningNeverChangesTheOptimum) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 8; ++trial) {
    DistanceTable table(random_points(rng, 6, 64));
    SolverOptions plain;
    plain.branch_and_bound = false;
    SolverResult with = mdst_exact(table);
    SolverResult without = mdst_exact(table, plain);
    EXPECT_EQ(with.edges, without.edges);
    EXPECT_TRUE(with.report.value.overlaps(without.report.value));
    EXPECT_EQ(without.trees_examined, spanning_tree_count(6));
    EXPECT_LE(with.trees_examined, without.trees_examined);
  }
}

TEST(Mdst, RequiredEdgesAreKept) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 8; ++trial) {
    DistanceTable table(random_points(rng, 6, 64));
    SolverOptions opts;
    opts.required_edges = {{0, 5}, {1, 4}};
    SolverResult r = mdst_exact(table, opts);
    EXPECT_TRUE(std::binary_search(r.edges.begin(), r.edges.end(), Edge(0, 5)));
    EXPECT_TRUE(std::binary_search(r.edges.begin(), r.edges.end(), Edge(1, 4)));
    // and it is the best among trees that contain them
    SolverOptions plain = opts;
    plain.branch_and_bound = false;
    EXPECT_EQ(mdst_exact(table, plain).edges, r.edges);
  }
}

TEST(Mdst, RequiredEdgeErrors) {
  SolverOptions cyc;
  cyc.required_edges = {{0, 1}, {1, 2}, {0, 2}};
  EXPECT_THROW(mdst_exact(unit_square(), cyc), InvalidInput);
  SolverOptions crossing;
  crossing.crossing_free = true;
  crossing.required_edges = {{0, 2}, {1, 3}};
  EXPECT_THROW(mdst_exact(unit_square(), crossing), Infeasible);
}

TEST(Mdst, SizeCap) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(mdst_exact(random_points(rng, 10, 100)), SizeTooLarge);
  SolverOptions small;
  small.max_points = 4;
  EXPECT_THROW(mdst_exact(random_points(rng, 5, 100), small), SizeTooLarge);
  SolverOptions capped;
  capped.branch_and_bound = false;
  capped.enumeration_cap = 3;
  EXPECT_THROW(mdst_exact(random_points(rng, 5, 100), capped), SizeTooLarge);
}

TEST(Mdst, CrossingFreeFilter) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    DistanceTable table(random_points(rng, 6, 64));
    SolverOptions opts;
    opts.crossing_free = true;
    SolverResult r = mdst_exact(table, opts);
    EXPECT_FALSE(has_crossing(table.points(), r.edges));
    EXPECT_EQ(r.edges, brute_force(table, true).best);
  }
}

TEST(Mdst, FiveSetWithCrossingOptimum) {
  // found by the witness search; a=0, b=1, c=2, d=3, e=4
  PointSet ps = pts({{-83, -119}, {0, 0}, {16, 0}, {23, -9}, {443, -173}});
  SolverResult r = mdst_exact(ps);
  EXPECT_EQ(r.edges, (EdgeList{{0, 1}, {1, 2}, {1, 4}, {2, 3}}));
  EXPECT_TRUE(tree_has_crossing(ps, Tree(5, r.edges)));
  SolverOptions cf;
  cf.crossing_free = true;
  SolverResult best_free = mdst_exact(ps, cf);
  EXPECT_LT(r.report.value.hi, best_free.report.value.lo);
}

TEST(Structure, CollinearPath) {
  SolverResult r = min_dilation_structure(pts({{0, 0}, {2, 0}, {1, 0}}), Mode::Path);
  EXPECT_EQ(r.edges, (EdgeList{{0, 2}, {1, 2}}));
  EXPECT_TRUE(r.report.value.contains(1));
}

TEST(Structure, SquareTourIsThePerimeter) {
  SolverResult r = min_dilation_structure(unit_square(), Mode::Tour);
  EXPECT_EQ(r.edges, (EdgeList{{0, 1}, {0, 3}, {1, 2}, {2, 3}}));
  EXPECT_EQ(r.trees_examined + r.pruned, 3U);
  EXPECT_LE(compare(r.report.value.lo, testing_support::decimal("1.41421356237309505")), 0);
  EXPECT_GE(compare(r.report.value.hi, testing_support::decimal("1.41421356237309504")), 0);
}

TEST(Structure, TriangleTourHasEveryPairAdjacent) {
  // the only tour on three points is the triangle itself, so every pair is an edge
  SolverResult r = min_dilation_structure(pts({{0, 0}, {1000, 0}, {500, 866}}), Mode::Tour);
  EXPECT_TRUE(r.report.value.is_point());
  EXPECT_TRUE(r.report.value.contains(1));
  EXPECT_EQ(r.edges.size(), 3U);
}

TEST(Structure, NearEquilateralPathDetour) {
  // the best open path leaves one pair with a two-side detour
  SolverResult r = min_dilation_structure(pts({{0, 0}, {1000, 0}, {500, 866}}), Mode::Path);
  EXPECT_NEAR(r.report.value.midpoint(), 2.0, 2e-3);
}

TEST(Structure, PathMatchesPermutationBruteForce) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    DistanceTable table(random_points(rng, 6, 50));
    SolverResult r = min_dilation_structure(table, Mode::Path);
    std::vector<Index> perm(6);
    std::iota(perm.begin(), perm.end(), 0);
    Interval best_value{Dyadic(1000), Dyadic(1000), 64};
    do {
      if (perm.front() > perm.back()) continue;
      EdgeList edges;
      for (std::size_t i = 1; i < perm.size(); ++i) edges.emplace_back(perm[i - 1], perm[i]);
      Interval v = graph_dilation(table, edges, 64);
      if (v.hi < best_value.lo) best_value = v;
      if (v.overlaps(best_value)) best_value = min_of(best_value, v);
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_TRUE(r.report.value.overlaps(best_value));
    EXPECT_EQ(r.edges.size(), 5U);
    EXPECT_TRUE(graph_dilation(table, r.edges, 64).overlaps(r.report.value));
  }
}

TEST(Structure, TourMatchesBruteForceWithPruningOff) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 4; ++trial) {
    DistanceTable table(random_points(rng, 6, 50));
    SolverOptions plain;
    plain.branch_and_bound = false;
    SolverResult a = min_dilation_structure(table, Mode::Tour);
    SolverResult b = min_dilation_structure(table, Mode::Tour, plain);
    EXPECT_EQ(a.edges, b.edges);
    EXPECT_EQ(b.trees_examined, 60U);  // 5!/2
    EXPECT_TRUE(graph_dilation(table, a.edges, 64).overlaps(a.report.value));
  }
}

TEST(Structure, Limits) {
  std::mt19937_64 rng(10);
  EXPECT_THROW(min_dilation_structure(random_points(rng, 11, 100), Mode::Path), SizeTooLarge);
  EXPECT_THROW(min_dilation_structure(pts({{0, 0}, {1, 0}}), Mode::Tour), InvalidInput);
}

TEST(Uncross, UnitSquare) {
  PointSet ps = unit_square();
  Tree crossing(4, {{0, 2}, {1, 3}, {2, 3}});
  ASSERT_TRUE(tree_has_crossing(ps, crossing));
  Tree fixed = uncross_four(ps, crossing);
  EXPECT_FALSE(tree_has_crossing(ps, fixed));
  DistanceTable table(ps);
  EXPECT_LE(tree_dilation(table, fixed).value.lo, tree_dilation(table, crossing).value.hi);
}

TEST(Uncross, Errors) {
  PointSet ps = unit_square();
  EXPECT_THROW(uncross_four(ps, Tree(4, {{0, 1}, {1, 2}, {2, 3}})), NotCrossing);
  // non-convex: (1,1) is inside the triangle of the others, so nothing can cross
  PointSet inner = pts({{0, 0}, {4, 0}, {1, 1}, {0, 4}});
  EXPECT_THROW(uncross_four(inner, Tree(4, {{0, 1}, {1, 2}, {2, 3}})), NotCrossing);
  // collinear overlap counts as a crossing but is not the convex normal form
  PointSet line = pts({{0, 0}, {2, 0}, {1, 0}, {3, 0}});
  EXPECT_THROW(uncross_four(line, Tree(4, {{0, 1}, {2, 3}, {1, 3}})), NotApplicable);
  EXPECT_THROW(uncross_four(pts({{0, 0}, {1, 0}, {0, 1}}), Tree(3, {{0, 1}, {0, 2}})), InvalidInput);
}

TEST(Uncross, RandomConvexQuads) {
  std::mt19937_64 rng(13);
  int done = 0;
  for (int trial = 0; trial < 400 && done < 25; ++trial) {
    PointSet ps = random_points(rng, 4, 40);
    if (!detail::strictly_convex_quad(ps)) continue;
    DistanceTable table(ps);
    enumerate_spanning_trees(4, [&](const EdgeList& edges) {
      Tree t(4, edges);
      if (!tree_has_crossing(ps, t)) return;
      Tree fixed = uncross_four(ps, t);
      EXPECT_FALSE(tree_has_crossing(ps, fixed));
      EXPECT_LE(tree_dilation(table, fixed).value.lo, tree_dilation(table, t).value.hi);
    });
    ++done;
  }
  EXPECT_EQ(done, 25);
}
