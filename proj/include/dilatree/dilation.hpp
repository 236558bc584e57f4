#pragma once

// Graph distances, pair and global dilation of geometric trees, certified
// threshold comparison, critical edges and crossing detection.

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "dilatree/errors.hpp"
#include "dilatree/geometry.hpp"
#include "dilatree/interval.hpp"
#include "dilatree/network.hpp"

namespace dilatree {

enum class Verdict { AtMost, Greater };

inline const char* to_string(Verdict v) { return v == Verdict::AtMost ? "AtMost" : "Greater"; }

/// Dilation threshold P/Q kept as two integers.
struct Threshold {
  BigInt p;
  BigInt q;

  Threshold(BigInt num, BigInt den) : p(std::move(num)), q(std::move(den)) {
    if (q < 1) throw InvalidInput("threshold denominator must be >= 1");
    if (p < q) throw InvalidInput("threshold must be >= 1 (dilation is never below 1)");
  }
  static Threshold from_rational(const Rational& r) { return Threshold(r.get_num(), r.get_den()); }
  Rational value() const { return make_rational(p, q); }
};

/// Pairwise squared distances of a point set plus memoized certified distances.
class DistanceTable {
 public:
  explicit DistanceTable(PointSet ps) : ps_(std::move(ps)), n_(ps_.size()), sq_(n_ * n_), exact_(n_ * n_) {
    for (std::size_t u = 0; u < n_; ++u) {
      for (std::size_t v = u + 1; v < n_; ++v) {
        Rational s = squared_distance(ps_[static_cast<Index>(u)], ps_[static_cast<Index>(v)]);
        std::optional<Rational> root = exact_sqrt(s);
        sq_[u * n_ + v] = s;
        sq_[v * n_ + u] = s;
        exact_[u * n_ + v] = root;
        exact_[v * n_ + u] = std::move(root);
      }
    }
  }

  std::size_t size() const noexcept { return n_; }
  const PointSet& points() const noexcept { return ps_; }
  const Rational& squared(Index u, Index v) const { return sq_[slot(u, v)]; }
  const std::optional<Rational>& exact_length(Index u, Index v) const { return exact_[slot(u, v)]; }

  const Interval& distance(Index u, Index v, int bits) const {
    auto& level = cache_[bits];
    if (level.empty()) level.resize(n_ * n_);
    std::optional<Interval>& slot_value = level[slot(std::min(u, v), std::max(u, v))];
    if (!slot_value) {
      if (const auto& root = exact_length(u, v); root && is_dyadic(*root)) {
        slot_value = Interval::exact(Dyadic::floor_of(*root, bit_length(root->get_den()) - 1), bits);
      } else {
        slot_value = sqrt_interval(squared(u, v), bits);
      }
    }
    return *slot_value;
  }

 private:
  std::size_t slot(Index u, Index v) const {
    return static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v);
  }

  PointSet ps_;
  std::size_t n_;
  std::vector<Rational> sq_;
  std::vector<std::optional<Rational>> exact_;
  mutable std::map<int, std::vector<std::optional<Interval>>> cache_;
};

namespace detail {

inline void check_pair(const DistanceTable& table, Index u, Index v) {
  auto n = static_cast<Index>(table.size());
  if (u < 0 || v < 0 || u >= n || v >= n) throw InvalidInput("pair index out of range");
  if (u == v) throw InvalidInput("pair dilation needs two distinct points");
}

inline void check_tree(const DistanceTable& table, const Tree& t) {
  if (t.size() != table.size()) throw InvalidInput("tree and point set sizes differ");
}

inline Interval sum_lengths(const DistanceTable& table, const EdgeList& path, int bits) {
  Interval total = Interval::exact(0, bits);
  for (const Edge& e : path) total += table.distance(e.u, e.v, bits);
  return total;
}

/// Exact test of sqrt(c) < sqrt(a) + sqrt(b) for non-negative rationals.
inline bool root_sum_exceeds(const Rational& a, const Rational& b, const Rational& c) {
  Rational gap = c - a - b;
  if (sgn(gap) < 0) return true;
  return 4 * a * b > gap * gap;
}

// Certified distances from `root` to every vertex of the tree.
inline std::vector<Interval> distances_from(const DistanceTable& table, const Tree& t, Index root, int bits) {
  std::vector<Interval> dist(t.size());
  std::vector<bool> seen(t.size(), false);
  dist[static_cast<std::size_t>(root)] = Interval::exact(0, bits);
  seen[static_cast<std::size_t>(root)] = true;
  std::vector<Index> stack{root};
  while (!stack.empty()) {
    Index x = stack.back();
    stack.pop_back();
    for (Index y : t.neighbours(x)) {
      if (seen[static_cast<std::size_t>(y)]) continue;
      seen[static_cast<std::size_t>(y)] = true;
      dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + table.distance(x, y, bits);
      stack.push_back(y);
    }
  }
  return dist;
}

inline Interval ratio_or_one(const DistanceTable& table, const Tree& t, Index u, Index v, const Interval& path,
                             int bits) {
  if (t.has_edge(u, v)) return Interval::exact(1, bits);
  return ratio(path, table.distance(u, v, bits), bits);
}

}  // namespace detail

/// Exact sum of square roots of non-negative rationals, kept as
/// sum c_k * sqrt(r_k) with no two radicands differing by a rational square
/// factor. Square roots of distinct squarefree integers are linearly
/// independent over the rationals, so two such sums are equal exactly when
/// their groups match term by term.
class SurdSum {
 public:
  void add_sqrt(const Rational& r) { add(Rational(1), r); }

  void add(const Rational& coef, const Rational& r) {
    if (sgn(r) < 0) throw InvalidInput("negative radicand");
    if (sgn(r) == 0 || sgn(coef) == 0) return;
    for (auto& [radicand, c] : terms_) {
      if (std::optional<Rational> k = exact_sqrt(Rational(r / radicand))) {
        c += coef * *k;
        return;
      }
    }
    terms_.emplace_back(r, coef);
  }

  friend bool operator==(const SurdSum& a, const SurdSum& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (const auto& [ra, ca] : a.terms_) {
      bool matched = false;
      for (const auto& [rb, cb] : b.terms_) {
        if (std::optional<Rational> k = exact_sqrt(Rational(ra / rb))) {
          if (ca * *k != cb) return false;
          matched = true;
          break;
        }
      }
      if (!matched) return false;
    }
    return true;
  }

 private:
  std::vector<std::pair<Rational, Rational>> terms_;
};

inline SurdSum route_length_surd(const DistanceTable& table, const EdgeList& route) {
  SurdSum s;
  for (const Edge& e : route) s.add_sqrt(table.squared(e.u, e.v));
  return s;
}

// path length / |uv| = sum over edges of sqrt(|e|^2 / |uv|^2)
inline SurdSum route_ratio_surd(const DistanceTable& table, const EdgeList& route, Index u, Index v) {
  SurdSum s;
  const Rational& d = table.squared(u, v);
  for (const Edge& e : route) s.add_sqrt(Rational(table.squared(e.u, e.v) / d));
  return s;
}

/// A point pair together with the candidate routes between them in some
/// network; the network distance is the shortest route. Trees and open paths
/// have one route per pair, tours have two arcs.
struct RouteSet {
  Edge pair;
  std::vector<EdgeList> routes;
};

inline Interval route_dilation(const DistanceTable& table, const RouteSet& rs, int bits) {
  for (const EdgeList& r : rs.routes) {
    if (r.size() == 1) return Interval::exact(1, bits);
  }
  Interval best = detail::sum_lengths(table, rs.routes.front(), bits);
  for (std::size_t i = 1; i < rs.routes.size(); ++i) best = min_of(best, detail::sum_lengths(table, rs.routes[i], bits));
  best.bits = bits;
  return ratio(best, table.distance(rs.pair.u, rs.pair.v, bits), bits);
}

/// Exact value of the pair dilation when every length involved is rational.
inline std::optional<Rational> exact_route_value(const DistanceTable& table, const RouteSet& rs) {
  for (const EdgeList& r : rs.routes) {
    if (r.size() == 1) return Rational(1);
  }
  const auto& direct = table.exact_length(rs.pair.u, rs.pair.v);
  if (!direct) return std::nullopt;
  std::optional<Rational> best;
  for (const EdgeList& r : rs.routes) {
    Rational total = 0;
    for (const Edge& e : r) {
      const auto& len = table.exact_length(e.u, e.v);
      if (!len) return std::nullopt;
      total += *len;
    }
    if (!best || total < *best) best = total;
  }
  return Rational(*best / *direct);
}

/// Index of a shortest route of the set; equal-length routes are resolved
/// exactly, others by escalating precision.
inline std::size_t shortest_route(const DistanceTable& table, const RouteSet& rs, const PrecisionPolicy& policy) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < rs.routes.size(); ++i) {
    if (route_length_surd(table, rs.routes[i]) == route_length_surd(table, rs.routes[best])) continue;
    bool decided = false;
    for (int bits : policy.levels()) {
      Interval a = detail::sum_lengths(table, rs.routes[i], bits);
      Interval b = detail::sum_lengths(table, rs.routes[best], bits);
      if (a.hi < b.lo) {
        best = i;
        decided = true;
        break;
      }
      if (b.hi < a.lo) {
        decided = true;
        break;
      }
    }
    if (!decided) throw PrecisionExhausted("route lengths cannot be separated at the precision cap", policy.max_bits);
  }
  return best;
}

/// Exact equality of two pair dilations.
inline bool provably_equal(const DistanceTable& table, const RouteSet& a, const RouteSet& b,
                           const PrecisionPolicy& policy = {}) {
  std::optional<Rational> va = exact_route_value(table, a);
  std::optional<Rational> vb = exact_route_value(table, b);
  if (va && vb) return *va == *vb;
  const EdgeList& ra = a.routes[shortest_route(table, a, policy)];
  const EdgeList& rb = b.routes[shortest_route(table, b, policy)];
  return route_ratio_surd(table, ra, a.pair.u, a.pair.v) == route_ratio_surd(table, rb, b.pair.u, b.pair.v);
}

/// Certified three-way comparison of two pair dilations (possibly from
/// different networks on the same points): -1, 0 (exactly equal) or 1.
/// Throws PrecisionExhausted when distinct values cannot be separated.
inline int compare_routes(const DistanceTable& table, const RouteSet& a, const RouteSet& b,
                          const PrecisionPolicy& policy = {}) {
  std::optional<Rational> va = exact_route_value(table, a);
  std::optional<Rational> vb = exact_route_value(table, b);
  if (va && vb) return cmp(*va, *vb) < 0 ? -1 : (*va == *vb ? 0 : 1);
  if (provably_equal(table, a, b, policy)) return 0;
  for (int bits : policy.levels()) {
    Interval ia = route_dilation(table, a, bits);
    Interval ib = route_dilation(table, b, bits);
    if (ia.hi < ib.lo) return -1;
    if (ib.hi < ia.lo) return 1;
  }
  throw PrecisionExhausted("pair dilations of (" + std::to_string(a.pair.u) + "," + std::to_string(a.pair.v) +
                               ") and (" + std::to_string(b.pair.u) + "," + std::to_string(b.pair.v) +
                               ") cannot be separated at the precision cap",
                           policy.max_bits);
}

inline Interval tree_path_length(const DistanceTable& table, const Tree& t, Index u, Index v, int bits) {
  detail::check_tree(table, t);
  detail::check_pair(table, u, v);
  return detail::sum_lengths(table, t.path(u, v), bits);
}

inline Interval tree_path_length(const PointSet& ps, const Tree& t, Index u, Index v, int bits) {
  return tree_path_length(DistanceTable(ps), t, u, v, bits);
}

inline Interval pair_dilation(const DistanceTable& table, const Tree& t, Index u, Index v, int bits) {
  detail::check_tree(table, t);
  detail::check_pair(table, u, v);
  if (t.has_edge(u, v)) return Interval::exact(1, bits);
  return ratio(detail::sum_lengths(table, t.path(u, v), bits), table.distance(u, v, bits), bits);
}

inline Interval pair_dilation(const PointSet& ps, const Tree& t, Index u, Index v, int bits) {
  return pair_dilation(DistanceTable(ps), t, u, v, bits);
}

/// Exact verdict for a single pair when the path lengths allow it: all lengths
/// rational, a single edge, or a two-edge path (squared form).
inline std::optional<Verdict> exact_pair_verdict(const DistanceTable& table, const EdgeList& path, Index u, Index v,
                                                 const Threshold& th) {
  if (path.size() == 1) return Verdict::AtMost;  // ratio is exactly 1 <= P/Q
  if (std::optional<Rational> value = exact_route_value(table, RouteSet{Edge(u, v), {path}})) {
    return *value <= th.value() ? Verdict::AtMost : Verdict::Greater;
  }
  if (path.size() == 2) {
    Rational q2 = Rational(th.q * th.q);
    Rational p2 = Rational(th.p * th.p);
    bool greater = detail::root_sum_exceeds(q2 * table.squared(path[0].u, path[0].v),
                                            q2 * table.squared(path[1].u, path[1].v), p2 * table.squared(u, v));
    return greater ? Verdict::Greater : Verdict::AtMost;
  }
  return std::nullopt;
}

/// Interval test of path/|uv| against P/Q; nullopt when the interval straddles.
inline std::optional<Verdict> interval_pair_verdict(const Interval& path, const Interval& dist, const Threshold& th) {
  if (path.hi * th.q <= dist.lo * th.p) return Verdict::AtMost;
  if (path.lo * th.q > dist.hi * th.p) return Verdict::Greater;
  return std::nullopt;
}

struct DilationReport {
  Interval value;
  Edge witness;
  std::optional<Verdict> threshold_verdict;
  int precision_used = 0;
  bool tied = false;
};

struct ThresholdResult {
  Verdict verdict = Verdict::AtMost;
  Edge witness;  // pair certifying Greater; for AtMost the pair decided last
  int precision_used = 0;
};

/// Certified decision of max pair dilation <= P/Q. Pairs in `probes` are
/// tested first (useful when the same pair keeps failing across many trees).
inline ThresholdResult compare_to_threshold(const DistanceTable& table, const Tree& t, const Threshold& th,
                                            const PrecisionPolicy& policy = {}, const EdgeList& probes = {}) {
  detail::check_tree(table, t);
  const int bits = policy.start_bits;
  std::vector<Edge> straddling;
  auto decide_pair = [&](Index u, Index v, const Interval& path) -> std::optional<Verdict> {
    if (t.has_edge(u, v)) return Verdict::AtMost;
    return interval_pair_verdict(path, table.distance(u, v, bits), th);
  };

  for (const Edge& pr : probes) {
    Interval path = detail::sum_lengths(table, t.path(pr.u, pr.v), bits);
    if (decide_pair(pr.u, pr.v, path) == Verdict::Greater) return {Verdict::Greater, pr, bits};
  }

  const auto n = static_cast<Index>(t.size());
  for (Index u = 0; u < n; ++u) {
    std::vector<Interval> dist = detail::distances_from(table, t, u, bits);
    for (Index v = u + 1; v < n; ++v) {
      std::optional<Verdict> verdict = decide_pair(u, v, dist[static_cast<std::size_t>(v)]);
      if (verdict == Verdict::Greater) return {Verdict::Greater, Edge(u, v), bits};
      if (!verdict) straddling.emplace_back(u, v);
    }
  }

  int used = bits;
  for (const Edge& pr : straddling) {
    EdgeList path = t.path(pr.u, pr.v);
    std::optional<Verdict> verdict = exact_pair_verdict(table, path, pr.u, pr.v, th);
    for (int level : policy.levels()) {
      if (verdict) break;
      if (level <= bits) continue;
      used = std::max(used, level);
      verdict = interval_pair_verdict(detail::sum_lengths(table, path, level), table.distance(pr.u, pr.v, level), th);
    }
    if (!verdict) {
      throw PrecisionExhausted("pair (" + table.points().label(pr.u) + ", " + table.points().label(pr.v) +
                                   ") straddles threshold " + to_string(th.value()) + " at the precision cap",
                               policy.max_bits);
    }
    if (*verdict == Verdict::Greater) return {Verdict::Greater, pr, used};
  }
  Edge last = straddling.empty() ? Edge(0, n > 1 ? 1 : 0) : straddling.back();
  return {Verdict::AtMost, last, used};
}

inline ThresholdResult compare_to_threshold(const PointSet& ps, const Tree& t, const Threshold& th,
                                            const PrecisionPolicy& policy = {}) {
  return compare_to_threshold(DistanceTable(ps), t, th, policy);
}

/// Maximum of the pair dilations over all pairs of a network, given the
/// initial enclosures at policy.start_bits and a way to list routes per pair.
/// Candidate pairs that cannot be separated are refined at doubling precision;
/// pairs still inseparable at the cap (or provably equal) are reported as
/// tied, with the lexicographically smallest as witness.
template <class RoutesOf>
DilationReport maximize_pair_dilation(const DistanceTable& table, std::vector<std::pair<Edge, Interval>> cand,
                                      RoutesOf&& routes_of, const PrecisionPolicy& policy) {
  if (cand.empty()) throw InvalidInput("dilation needs at least two points");
  std::sort(cand.begin(), cand.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  int bits = policy.start_bits;
  auto prune = [&cand]() {
    Dyadic best_lo = cand.front().second.lo;
    for (const auto& c : cand) best_lo = std::max(best_lo, c.second.lo);
    std::erase_if(cand, [&best_lo](const auto& c) { return c.second.hi < best_lo; });
  };
  auto all_equal = [&]() {
    RouteSet first{cand.front().first, routes_of(cand.front().first)};
    for (std::size_t i = 1; i < cand.size(); ++i) {
      if (!provably_equal(table, first, RouteSet{cand[i].first, routes_of(cand[i].first)}, policy)) return false;
    }
    return true;
  };

  prune();
  for (int level : policy.levels()) {
    if (cand.size() <= 1 || all_equal()) break;
    if (level <= bits) continue;
    bits = level;
    for (auto& c : cand) c.second = route_dilation(table, RouteSet{c.first, routes_of(c.first)}, bits);
    prune();
  }

  DilationReport report;
  report.witness = cand.front().first;
  report.value = cand.front().second;
  for (const auto& c : cand) report.value = max_of(report.value, c.second);
  report.value.bits = bits;
  report.precision_used = bits;
  report.tied = cand.size() > 1;
  return report;
}

inline DilationReport tree_dilation(const DistanceTable& table, const Tree& t, const PrecisionPolicy& policy = {},
                                    std::optional<Threshold> threshold = std::nullopt) {
  detail::check_tree(table, t);
  const auto n = static_cast<Index>(t.size());
  if (n < 2) throw InvalidInput("dilation needs at least two points");
  const int bits = policy.start_bits;

  std::vector<std::pair<Edge, Interval>> cand;
  for (Index u = 0; u < n; ++u) {
    std::vector<Interval> dist = detail::distances_from(table, t, u, bits);
    for (Index v = u + 1; v < n; ++v) {
      cand.emplace_back(Edge(u, v), detail::ratio_or_one(table, t, u, v, dist[static_cast<std::size_t>(v)], bits));
    }
  }
  DilationReport report = maximize_pair_dilation(
      table, std::move(cand), [&t](const Edge& e) { return std::vector<EdgeList>{t.path(e.u, e.v)}; }, policy);
  if (threshold) {
    ThresholdResult r = compare_to_threshold(table, t, *threshold, policy);
    report.threshold_verdict = r.verdict;
    report.precision_used = std::max(report.precision_used, r.precision_used);
  }
  return report;
}

inline DilationReport tree_dilation(const PointSet& ps, const Tree& t, const PrecisionPolicy& policy = {},
                                    std::optional<Threshold> threshold = std::nullopt) {
  return tree_dilation(DistanceTable(ps), t, policy, std::move(threshold));
}

/// Edges uv with delta*|uv| < |uw| + |wv| for every other point w (exact).
inline EdgeList critical_edges(const DistanceTable& table, const BigInt& delta_p, const BigInt& delta_q) {
  if (table.size() < 3) throw InvalidInput("critical_edges needs at least three points");
  if (sgn(delta_q) <= 0 || delta_p <= delta_q) throw InvalidInput("critical_edges needs delta > 1");
  const auto n = static_cast<Index>(table.size());
  Rational delta_sq = make_rational(BigInt(delta_p * delta_p), BigInt(delta_q * delta_q));
  EdgeList out;
  for (Index u = 0; u < n; ++u) {
    for (Index v = u + 1; v < n; ++v) {
      Rational target = delta_sq * table.squared(u, v);
      bool critical = true;
      for (Index w = 0; w < n && critical; ++w) {
        if (w == u || w == v) continue;
        critical = detail::root_sum_exceeds(table.squared(u, w), table.squared(w, v), target);
      }
      if (critical) out.emplace_back(u, v);
    }
  }
  return out;
}

inline EdgeList critical_edges(const PointSet& ps, const BigInt& delta_p, const BigInt& delta_q) {
  return critical_edges(DistanceTable(ps), delta_p, delta_q);
}

/// All pairs of vertex-disjoint edges that properly cross.
inline std::vector<std::pair<Edge, Edge>> crossing_pairs(const PointSet& ps, const EdgeList& edges) {
  std::vector<std::pair<Edge, Edge>> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      if (edges[i].shares_endpoint(edges[j])) continue;
      if (segments_properly_cross(ps.segment(edges[i]), ps.segment(edges[j]))) out.emplace_back(edges[i], edges[j]);
    }
  }
  return out;
}

inline bool has_crossing(const PointSet& ps, const EdgeList& edges) {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      if (edges[i].shares_endpoint(edges[j])) continue;
      if (segments_properly_cross(ps.segment(edges[i]), ps.segment(edges[j]))) return true;
    }
  }
  return false;
}

inline bool tree_has_crossing(const PointSet& ps, const Tree& t) { return has_crossing(ps, t.edges()); }

/// Dilation enclosure of an arbitrary connected graph: Dijkstra once on the
/// lower endpoints and once on the upper endpoints of the edge lengths.
inline Interval graph_dilation(const DistanceTable& table, const EdgeList& edges, int bits) {
  const std::size_t n = table.size();
  auto adj = adjacency(n, edges);
  auto shortest = [&](Index src, bool upper) {
    std::vector<std::optional<Dyadic>> best(n);
    using Item = std::pair<Dyadic, Index>;
    auto later = [](const Item& a, const Item& b) { return a.first > b.first; };
    std::priority_queue<Item, std::vector<Item>, decltype(later)> pq(later);
    best[static_cast<std::size_t>(src)] = Dyadic(0);
    pq.emplace(Dyadic(0), src);
    while (!pq.empty()) {
      auto [d, x] = pq.top();
      pq.pop();
      if (*best[static_cast<std::size_t>(x)] < d) continue;
      for (Index y : adj[static_cast<std::size_t>(x)]) {
        const Interval& w = table.distance(x, y, bits);
        Dyadic nd = d + (upper ? w.hi : w.lo);
        auto& slot = best[static_cast<std::size_t>(y)];
        if (!slot || nd < *slot) {
          slot = nd;
          pq.emplace(nd, y);
        }
      }
    }
    return best;
  };
  Interval result = Interval::exact(1, bits);
  for (Index u = 0; u < static_cast<Index>(n); ++u) {
    auto lo = shortest(u, false);
    auto hi = shortest(u, true);
    for (Index v = u + 1; v < static_cast<Index>(n); ++v) {
      if (!lo[static_cast<std::size_t>(v)]) throw InvalidInput("graph is not connected");
      Interval path{*lo[static_cast<std::size_t>(v)], *hi[static_cast<std::size_t>(v)], bits};
      result = max_of(result, ratio(path, table.distance(u, v, bits), bits));
    }
  }
  return result;
}

}  // namespace dilatree
