#pragma once

// Randomized search for five-point sets whose minimum-dilation spanning tree
// must have an edge crossing, with exhaustive exact verification.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "dilatree/dilation.hpp"
#include "dilatree/solver.hpp"

namespace dilatree {

struct FiveWitness {
  PointSet points;
  EdgeList optimum;                 // best tree; it has a crossing
  DilationReport optimum_report;
  EdgeList best_crossing_free;      // best tree without crossings
  DilationReport crossing_free_report;
  EdgeList critical;                // edges critical at the optimum's upper bound
  std::uint64_t candidates = 0;     // candidates drawn before this one was accepted
};

/// Exact check over all 125 labeled trees: the optimum has a crossing and
/// every crossing-free tree is certified strictly worse. Ties or precision
/// trouble mean "not a witness".
inline std::optional<FiveWitness> verify_five_witness(const PointSet& ps, const PrecisionPolicy& policy = {}) {
  if (ps.size() != 5) throw InvalidInput("five-point witness needs exactly five points");
  DistanceTable table(ps);
  struct Entry {
    EdgeList edges;
    DilationReport report;
    RouteSet witness;
    bool crossing;
  };
  std::vector<Entry> all;
  try {
    enumerate_spanning_trees(5, [&](const EdgeList& edges) {
      Tree t(5, edges);
      DilationReport rep = tree_dilation(table, t, policy);
      all.push_back({edges, rep, RouteSet{rep.witness, {t.path(rep.witness.u, rep.witness.v)}}, has_crossing(ps, edges)});
    });
    const Entry* best_cross = nullptr;
    const Entry* best_free = nullptr;
    for (const Entry& e : all) {
      const Entry*& slot = e.crossing ? best_cross : best_free;
      if (!slot || compare_routes(table, e.witness, slot->witness, policy) < 0) slot = &e;
    }
    if (!best_cross || !best_free) return std::nullopt;
    if (compare_routes(table, best_free->witness, best_cross->witness, policy) <= 0) return std::nullopt;
    FiveWitness w{ps, best_cross->edges, best_cross->report, best_free->edges, best_free->report, {}, 0};
    Threshold th = Threshold::from_rational(best_cross->report.value.hi.to_rational());
    w.critical = critical_edges(table, th.p, th.q);
    return w;
  } catch (const PrecisionExhausted&) {
    return std::nullopt;
  }
}

/// Structural reading of the five-point example: at least three critical
/// edges that form a simple path inside the optimum, and a crossing pair of
/// optimum edges that are not both critical.
inline bool has_chain_crossing_structure(const FiveWitness& w) {
  if (w.critical.size() < 3) return false;
  for (const Edge& e : w.critical) {
    if (!std::binary_search(w.optimum.begin(), w.optimum.end(), e)) return false;
  }
  std::vector<int> degree(5, 0);
  for (const Edge& e : w.critical) {
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }
  int ends = 0;
  for (int d : degree) {
    if (d > 2) return false;
    ends += d == 1 ? 1 : 0;
  }
  // a forest with max degree 2 and exactly two ends is a single path
  if (ends != 2) return false;
  auto crossings = crossing_pairs(w.points, w.optimum);
  if (crossings.empty()) return false;
  for (const auto& [x, y] : crossings) {
    bool cx = std::binary_search(w.critical.begin(), w.critical.end(), x);
    bool cy = std::binary_search(w.critical.begin(), w.critical.end(), y);
    if (cx && cy) return false;
  }
  return true;
}

namespace detail {

// Floating-point screen over the 125 trees: crossing-free optimum minus
// crossing optimum. Positive values are candidates for exact verification.
class FiveScreen {
 public:
  FiveScreen() {
    const std::array<Edge, 10> all = {Edge(0, 1), Edge(0, 2), Edge(0, 3), Edge(0, 4), Edge(1, 2),
                                      Edge(1, 3), Edge(1, 4), Edge(2, 3), Edge(2, 4), Edge(3, 4)};
    enumerate_spanning_trees(5, [&](const EdgeList& edges) {
      Tree t(5, edges);
      TreeShape shape;
      for (const Edge& e : edges) shape.edges.push_back(edge_id(e));
      for (std::size_t p = 0; p < all.size(); ++p) {
        unsigned mask = 0;
        for (const Edge& e : t.path(all[p].u, all[p].v)) mask |= 1U << edge_id(e);
        shape.path_mask[p] = mask;
      }
      trees_.push_back(shape);
    });
  }

  double margin(const std::array<std::array<double, 2>, 5>& p) const {
    std::array<double, 10> len{};
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) {
        len[static_cast<std::size_t>(edge_id(Edge(i, j)))] = std::hypot(p[i][0] - p[j][0], p[i][1] - p[j][1]);
      }
    }
    for (double l : len) {
      if (l < 1e-9) return -std::numeric_limits<double>::infinity();
    }
    std::array<std::array<bool, 10>, 10> cross{};
    for (int a = 0; a < 10; ++a) {
      for (int b = a + 1; b < 10; ++b) cross[a][b] = cross[b][a] = crosses(p, a, b);
    }
    double best_free = std::numeric_limits<double>::infinity();
    double best_cross = std::numeric_limits<double>::infinity();
    for (const TreeShape& t : trees_) {
      double dil = 1.0;
      for (int pr = 0; pr < 10; ++pr) {
        double path = 0.0;
        for (int e = 0; e < 10; ++e) {
          if (t.path_mask[static_cast<std::size_t>(pr)] >> e & 1U) path += len[static_cast<std::size_t>(e)];
        }
        dil = std::max(dil, path / len[static_cast<std::size_t>(pr)]);
      }
      bool has_cross = false;
      for (std::size_t i = 0; i < t.edges.size() && !has_cross; ++i) {
        for (std::size_t j = i + 1; j < t.edges.size(); ++j) {
          if (cross[t.edges[i]][t.edges[j]]) has_cross = true;
        }
      }
      double& slot = has_cross ? best_cross : best_free;
      slot = std::min(slot, dil);
    }
    return best_free - best_cross;
  }

 private:
  struct TreeShape {
    std::vector<int> edges;
    std::array<unsigned, 10> path_mask{};
  };

  static int edge_id(const Edge& e) {
    static const int ids[5][5] = {{-1, 0, 1, 2, 3}, {0, -1, 4, 5, 6}, {1, 4, -1, 7, 8}, {2, 5, 7, -1, 9},
                                  {3, 6, 8, 9, -1}};
    return ids[e.u][e.v];
  }

  static bool crosses(const std::array<std::array<double, 2>, 5>& p, int a, int b) {
    static const int ends[10][2] = {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};
    int p1 = ends[a][0], p2 = ends[a][1], q1 = ends[b][0], q2 = ends[b][1];
    if (p1 == q1 || p1 == q2 || p2 == q1 || p2 == q2) return false;
    auto orient = [&p](int i, int j, int k) {
      return (p[j][0] - p[i][0]) * (p[k][1] - p[i][1]) - (p[j][1] - p[i][1]) * (p[k][0] - p[i][0]);
    };
    return orient(p1, p2, q1) * orient(p1, p2, q2) < 0 && orient(q1, q2, p1) * orient(q1, q2, p2) < 0;
  }

  std::vector<TreeShape> trees_;
};

}  // namespace detail

/// Searches integer five-point sets shaped like a bent chain a-b-c-d with a
/// far point e behind the chain, so that the edge be has to cross cd. Each
/// restart samples such a shape and refines it by annealing integer moves on
/// the floating-point margin; positive-margin sets are verified exactly.
/// `budget` counts candidate point sets.
inline std::optional<FiveWitness> witness_search_five(std::uint64_t seed, std::uint64_t budget,
                                                      const PrecisionPolicy& policy = {}) {
  using Coords = std::array<std::array<double, 2>, 5>;
  static const detail::FiveScreen screen;
  std::mt19937_64 rng(seed);
  auto uni = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  const double scale = 16.0;

  auto sample = [&]() {
    double s = uni(0.3, 3.0);
    double theta = uni(-2.5, 2.5);
    double frac = uni(0.05, 0.95);
    double reach = uni(1.5, 60.0);
    double r = uni(0.5, 30.0);
    double alpha = uni(-std::numbers::pi, std::numbers::pi);
    std::array<double, 2> b{0.0, 0.0};
    std::array<double, 2> c{1.0, 0.0};
    std::array<double, 2> d{c[0] + s * std::cos(theta), c[1] + s * std::sin(theta)};
    std::array<double, 2> x{c[0] + frac * (d[0] - c[0]), c[1] + frac * (d[1] - c[1])};
    double norm = std::hypot(x[0], x[1]);
    std::array<double, 2> e{reach * x[0] / norm, reach * x[1] / norm};
    std::array<double, 2> a{r * std::cos(alpha), r * std::sin(alpha)};
    Coords out{a, b, c, d, e};
    for (auto& pt : out) {
      pt[0] = std::round(pt[0] * scale);
      pt[1] = std::round(pt[1] * scale);
    }
    return out;
  };
  auto to_points = [](const Coords& c) {
    std::vector<Point> v;
    for (const auto& pt : c) {
      v.push_back(Point{Rational(static_cast<long>(pt[0])), Rational(static_cast<long>(pt[1]))});
    }
    return v;
  };

  std::uint64_t used = 0;
  auto try_exact = [&](const Coords& c) -> std::optional<FiveWitness> {
    std::vector<Point> v = to_points(c);
    try {
      PointSet ps(v, {"a", "b", "c", "d", "e"});
      std::optional<FiveWitness> w = verify_five_witness(ps, policy);
      if (w) w->candidates = used;
      return w;
    } catch (const InvalidInput&) {
      return std::nullopt;
    }
  };

  while (used < budget) {
    Coords cur = sample();
    ++used;
    double cur_margin = screen.margin(cur);
    if (cur_margin > 0) {
      if (auto w = try_exact(cur)) return w;
    }
    // short annealing walk from this restart
    double temperature = 0.02;
    for (int step = 0; step < 60 && used < budget; ++step, temperature *= 0.93) {
      Coords next = cur;
      auto& pt = next[std::uniform_int_distribution<std::size_t>(0, 4)(rng)];
      pt[std::uniform_int_distribution<std::size_t>(0, 1)(rng)] += std::uniform_int_distribution<int>(-3, 3)(rng);
      ++used;
      double m = screen.margin(next);
      if (!(m > -std::numeric_limits<double>::infinity())) continue;
      if (m >= cur_margin || uni(0.0, 1.0) < std::exp((m - cur_margin) / temperature)) {
        cur = next;
        cur_margin = m;
        if (cur_margin > 0) {
          if (auto w = try_exact(cur)) return w;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace dilatree
