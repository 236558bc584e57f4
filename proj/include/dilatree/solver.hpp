#pragma once

// Exact minimum-dilation spanning trees, paths and tours on small point sets,
// plus the exhaustive Pruefer enumeration used to cross-check them and the
// four-point uncrossing swap.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dilatree/dilation.hpp"
#include "dilatree/errors.hpp"
#include "dilatree/network.hpp"

namespace dilatree {

enum class Mode { Tree, Path, Tour };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::Tree: return "tree";
    case Mode::Path: return "path";
    case Mode::Tour: return "tour";
  }
  return "?";
}

struct SolverOptions {
  Mode mode = Mode::Tree;
  bool crossing_free = false;
  EdgeList required_edges;
  std::size_t max_points = 9;
  PrecisionPolicy policy;
  std::optional<std::uint64_t> enumeration_cap;
  bool branch_and_bound = true;
};

struct SolverResult {
  Mode mode = Mode::Tree;
  EdgeList edges;  // sorted
  DilationReport report;
  std::uint64_t trees_examined = 0;
  std::uint64_t pruned = 0;
  bool tied = false;  // another admissible structure provably has the same dilation
};

/// Labeled tree of a Pruefer sequence over vertices 0..n-1 (n = seq.size()+2).
inline EdgeList prufer_decode(const std::vector<Index>& seq) {
  const std::size_t n = seq.size() + 2;
  std::vector<int> degree(n, 1);
  for (Index x : seq) ++degree[static_cast<std::size_t>(x)];
  EdgeList edges;
  for (Index x : seq) {
    std::size_t leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    edges.emplace_back(static_cast<Index>(leaf), x);
    --degree[leaf];
    --degree[static_cast<std::size_t>(x)];
  }
  std::vector<Index> last;
  for (std::size_t v = 0; v < n; ++v) {
    if (degree[v] == 1) last.push_back(static_cast<Index>(v));
  }
  edges.emplace_back(last[0], last[1]);
  return sorted_edges(std::move(edges));
}

/// Calls visit(edges) once for each of the n^(n-2) labeled spanning trees.
template <class Visit>
void enumerate_spanning_trees(std::size_t n, Visit&& visit) {
  if (n < 2) throw InvalidInput("spanning tree enumeration needs n >= 2");
  if (n > 9) throw SizeTooLarge("spanning tree enumeration is limited to n <= 9");
  std::vector<Index> seq(n - 2, 0);
  for (;;) {
    visit(prufer_decode(seq));
    std::size_t pos = 0;
    while (pos < seq.size() && ++seq[pos] == static_cast<Index>(n)) seq[pos++] = 0;
    if (pos == seq.size()) break;
  }
}

inline std::uint64_t spanning_tree_count(std::size_t n) {
  std::uint64_t c = 1;
  for (std::size_t i = 2; i < n; ++i) c *= n;
  return c;
}

namespace detail {

// Union-find with rollback; members are kept per root for pair enumeration.
class RollbackUnionFind {
 public:
  explicit RollbackUnionFind(std::size_t n) : parent_(n), members_(n) {
    for (std::size_t i = 0; i < n; ++i) {
      parent_[i] = static_cast<Index>(i);
      members_[i] = {static_cast<Index>(i)};
    }
  }
  Index find(Index x) const {
    while (parent_[static_cast<std::size_t>(x)] != x) x = parent_[static_cast<std::size_t>(x)];
    return x;
  }
  const std::vector<Index>& members(Index root) const { return members_[static_cast<std::size_t>(root)]; }
  void unite(Index ra, Index rb) {
    auto& ma = members_[static_cast<std::size_t>(ra)];
    auto& mb = members_[static_cast<std::size_t>(rb)];
    if (ma.size() < mb.size()) std::swap(ra, rb);
    auto& big = members_[static_cast<std::size_t>(ra)];
    auto& small = members_[static_cast<std::size_t>(rb)];
    history_.push_back({rb, small.size()});
    big.insert(big.end(), small.begin(), small.end());
    parent_[static_cast<std::size_t>(rb)] = ra;
  }
  void undo() {
    auto [child, count] = history_.back();
    history_.pop_back();
    Index root = parent_[static_cast<std::size_t>(child)];
    auto& big = members_[static_cast<std::size_t>(root)];
    big.resize(big.size() - count);
    parent_[static_cast<std::size_t>(child)] = child;
  }

 private:
  std::vector<Index> parent_;
  std::vector<std::vector<Index>> members_;
  std::vector<std::pair<Index, std::size_t>> history_;
};

inline void validate_required(std::size_t n, const EdgeList& required) {
  RollbackUnionFind uf(n);
  for (const Edge& e : required) {
    if (e.u < 0 || static_cast<std::size_t>(e.v) >= n || e.u == e.v) throw InvalidInput("required edge out of range");
    Index ra = uf.find(e.u);
    Index rb = uf.find(e.v);
    if (ra == rb) throw InvalidInput("required edges contain a cycle or a repeated edge");
    uf.unite(ra, rb);
  }
}

inline bool contains_edge(const EdgeList& sorted, const Edge& e) {
  return std::binary_search(sorted.begin(), sorted.end(), e);
}

// Incumbent bookkeeping shared by the tree and path/tour searches.
struct Incumbent {
  std::optional<EdgeList> edges;
  DilationReport report;
  RouteSet witness;
  bool tied = false;

  // Returns true when the incumbent changed.
  bool offer(const DistanceTable& table, EdgeList cand_edges, const DilationReport& rep, RouteSet cand_witness,
             const PrecisionPolicy& policy) {
    std::sort(cand_edges.begin(), cand_edges.end());
    int c = -1;
    if (edges) {
      if (rep.value.hi < report.value.lo) {
        c = -1;
      } else if (report.value.hi < rep.value.lo) {
        c = 1;
      } else {
        c = compare_routes(table, cand_witness, witness, policy);
      }
    }
    if (c > 0) return false;
    if (c == 0) {
      tied = true;
      if (!(cand_edges < *edges)) return false;
    } else {
      tied = false;
    }
    edges = std::move(cand_edges);
    report = rep;
    witness = std::move(cand_witness);
    return true;
  }

  // Certified: some determined pair already exceeds the incumbent.
  bool beaten_by(const Interval& path, const Interval& dist) const {
    return edges && path.lo > report.value.hi * dist.hi;
  }
};

class TreeSearch {
 public:
  TreeSearch(const DistanceTable& table, const SolverOptions& opts)
      : table_(table), opts_(opts), n_(table.size()), uf_(n_), path_(n_ * n_),
        required_sorted_(sorted_edges(opts.required_edges)) {
    for (Index u = 0; u < static_cast<Index>(n_); ++u) {
      for (Index v = u + 1; v < static_cast<Index>(n_); ++v) edges_.emplace_back(u, v);
    }
    std::stable_sort(edges_.begin(), edges_.end(), [this](const Edge& a, const Edge& b) {
      return table_.squared(a.u, a.v) < table_.squared(b.u, b.v);
    });
    forced_.assign(edges_.size(), false);
    required_.assign(edges_.size(), false);
    for (std::size_t i = 0; i < edges_.size(); ++i) required_[i] = contains_edge(required_sorted_, edges_[i]);
  }

  SolverResult run() {
    dfs(0, n_);
    if (!best_.edges) throw Infeasible("no spanning tree satisfies the constraints");
    SolverResult out;
    out.mode = Mode::Tree;
    out.edges = *best_.edges;
    out.report = best_.report;
    out.trees_examined = examined_;
    out.pruned = pruned_;
    out.tied = best_.tied;
    return out;
  }

 private:
  int bits() const { return opts_.policy.start_bits; }
  Interval& path(Index a, Index b) { return path_[static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b)]; }

  bool crosses_chosen(const Edge& e) const {
    const PointSet& ps = table_.points();
    for (const Edge& f : chosen_) {
      if (!f.shares_endpoint(e) && segments_properly_cross(ps.segment(e), ps.segment(f))) return true;
    }
    return false;
  }

  // Connectivity of the chosen edges plus every undecided edge from index i on.
  bool still_connectable(std::size_t from) const {
    RollbackUnionFind uf(n_);
    std::size_t comps = n_;
    auto join = [&](const Edge& e) {
      Index ra = uf.find(e.u);
      Index rb = uf.find(e.v);
      if (ra != rb) {
        uf.unite(ra, rb);
        --comps;
      }
    };
    for (const Edge& e : chosen_) join(e);
    for (std::size_t i = from; i < edges_.size() && comps > 1; ++i) join(edges_[i]);
    return comps == 1;
  }

  // Merges the components of e, filling path lengths of the new pairs. Returns
  // false (after undoing) when a new pair already certifiably beats the incumbent.
  bool include(const Edge& e, Index ru, Index rv) {
    const Interval& len = table_.distance(e.u, e.v, bits());
    const auto& cu = uf_.members(ru);
    const auto& cv = uf_.members(rv);
    bool ok = true;
    for (Index x : cu) {
      Interval xu = x == e.u ? Interval::exact(0, bits()) : path(x, e.u);
      for (Index y : cv) {
        Interval total = xu + len;
        if (y != e.v) total += path(e.v, y);
        path(x, y) = total;
        path(y, x) = total;
        if (ok && opts_.branch_and_bound && !(x == e.u && y == e.v) &&
            best_.beaten_by(total, table_.distance(x, y, bits()))) {
          ok = false;
        }
      }
    }
    uf_.unite(ru, rv);
    chosen_.push_back(e);
    if (!ok) {
      uf_.undo();
      chosen_.pop_back();
    }
    return ok;
  }

  void dfs(std::size_t i, std::size_t components) {
    if (components == 1) {
      leaf(i);
      return;
    }
    if (i == edges_.size() || edges_.size() - i < components - 1) return;
    const Edge& e = edges_[i];
    Index ru = uf_.find(e.u);
    Index rv = uf_.find(e.v);
    if (ru == rv) {
      if (required_[i]) return;
      dfs(i + 1, components);
      return;
    }
    if (!(opts_.crossing_free && crosses_chosen(e))) {
      if (include(e, ru, rv)) {
        dfs(i + 1, components - 1);
        uf_.undo();
        chosen_.pop_back();
      } else {
        ++pruned_;
      }
    }
    if (required_[i]) return;
    if (opts_.branch_and_bound && forced_[i]) {
      ++pruned_;
      return;
    }
    if (!still_connectable(i + 1)) return;
    dfs(i + 1, components);
  }

  void leaf(std::size_t next) {
    for (std::size_t j = next; j < edges_.size(); ++j) {
      if (required_[j]) return;
      if (opts_.branch_and_bound && forced_[j]) {
        ++pruned_;
        return;
      }
    }
    if (opts_.branch_and_bound) {
      for (Index u = 0; u < static_cast<Index>(n_); ++u) {
        for (Index v = u + 1; v < static_cast<Index>(n_); ++v) {
          if (best_.beaten_by(path(u, v), table_.distance(u, v, bits()))) {
            ++pruned_;
            return;
          }
        }
      }
    }
    ++examined_;
    if (opts_.enumeration_cap && examined_ > *opts_.enumeration_cap) {
      throw SizeTooLarge("enumeration cap of " + std::to_string(*opts_.enumeration_cap) + " trees reached");
    }
    Tree t(n_, chosen_);
    DilationReport rep = tree_dilation(table_, t, opts_.policy);
    RouteSet w{rep.witness, {t.path(rep.witness.u, rep.witness.v)}};
    if (best_.offer(table_, chosen_, rep, std::move(w), opts_.policy) && opts_.branch_and_bound) refresh_forced();
  }

  // Edges that are critical at the incumbent's upper bound must be in every
  // tree that could still match or beat it.
  void refresh_forced() {
    if (n_ < 3 || best_.report.value.hi <= Dyadic(1)) return;
    Threshold th = Threshold::from_rational(best_.report.value.hi.to_rational());
    EdgeList crit = critical_edges(table_, th.p, th.q);
    for (std::size_t i = 0; i < edges_.size(); ++i) forced_[i] = contains_edge(crit, edges_[i]);
  }

  const DistanceTable& table_;
  const SolverOptions& opts_;
  std::size_t n_;
  RollbackUnionFind uf_;
  std::vector<Interval> path_;
  EdgeList edges_;
  EdgeList chosen_;
  EdgeList required_sorted_;
  std::vector<bool> forced_;
  std::vector<bool> required_;
  Incumbent best_;
  std::uint64_t examined_ = 0;
  std::uint64_t pruned_ = 0;
};

// Hamiltonian paths (first < last) or tours (start at 0, second < last).
class OrderSearch {
 public:
  OrderSearch(const DistanceTable& table, const SolverOptions& opts, Mode mode)
      : table_(table), opts_(opts), mode_(mode), n_(table.size()), used_(n_, false),
        required_sorted_(sorted_edges(opts.required_edges)) {}

  SolverResult run() {
    if (mode_ == Mode::Tour) {
      place(0);
    } else {
      for (Index s = 0; s < static_cast<Index>(n_); ++s) place(s);
    }
    if (!best_.edges) throw Infeasible("no spanning " + std::string(to_string(mode_)) + " satisfies the constraints");
    SolverResult out;
    out.mode = mode_;
    out.edges = *best_.edges;
    out.report = best_.report;
    out.trees_examined = examined_;
    out.pruned = pruned_;
    out.tied = best_.tied;
    return out;
  }

 private:
  int bits() const { return opts_.policy.start_bits; }

  EdgeList structure_edges() const {
    EdgeList out;
    for (std::size_t i = 1; i < order_.size(); ++i) out.emplace_back(order_[i - 1], order_[i]);
    if (mode_ == Mode::Tour) out.emplace_back(order_.back(), order_.front());
    return out;
  }

  bool crosses(const Edge& e, const EdgeList& others) const {
    const PointSet& ps = table_.points();
    for (const Edge& f : others) {
      if (!f.shares_endpoint(e) && segments_properly_cross(ps.segment(e), ps.segment(f))) return true;
    }
    return false;
  }

  void place(Index x) {
    const std::size_t k = order_.size();
    Interval step = Interval::exact(0, bits());
    if (k > 0) {
      Edge e(order_.back(), x);
      if (opts_.crossing_free) {
        EdgeList so_far = structure_edges();
        if (crosses(e, so_far)) return;
      }
      step = table_.distance(order_.back(), x, bits());
    }
    prefix_.push_back(k == 0 ? step : prefix_.back() + step);
    order_.push_back(x);
    used_[static_cast<std::size_t>(x)] = true;

    bool alive = true;
    if (mode_ == Mode::Path && opts_.branch_and_bound) {
      for (std::size_t j = 0; j + 1 < k && alive; ++j) {
        Interval along{prefix_[k].lo - prefix_[j].lo, prefix_[k].hi - prefix_[j].hi, bits()};
        if (best_.beaten_by(along, table_.distance(order_[j], x, bits()))) alive = false;
      }
    }
    if (!alive) {
      ++pruned_;
    } else if (order_.size() == n_) {
      complete();
    } else {
      for (Index y = 0; y < static_cast<Index>(n_); ++y) {
        if (!used_[static_cast<std::size_t>(y)]) place(y);
      }
    }
    used_[static_cast<std::size_t>(x)] = false;
    order_.pop_back();
    prefix_.pop_back();
  }

  std::vector<EdgeList> routes(const Edge& pair) const {
    std::size_t i = position(pair.u);
    std::size_t j = position(pair.v);
    if (i > j) std::swap(i, j);
    EdgeList forward;
    for (std::size_t s = i; s < j; ++s) forward.emplace_back(order_[s], order_[s + 1]);
    if (mode_ == Mode::Path) return {forward};
    EdgeList around;
    for (std::size_t s = j; s < n_; ++s) around.emplace_back(order_[s], order_[(s + 1) % n_]);
    for (std::size_t s = 0; s < i; ++s) around.emplace_back(order_[s], order_[s + 1]);
    return {forward, around};
  }

  std::size_t position(Index v) const {
    return static_cast<std::size_t>(std::find(order_.begin(), order_.end(), v) - order_.begin());
  }

  void complete() {
    if (mode_ == Mode::Path && order_.front() > order_.back()) return;
    if (mode_ == Mode::Tour && n_ >= 3 && order_[1] > order_.back()) return;
    EdgeList edges = structure_edges();
    if (mode_ == Mode::Tour && opts_.crossing_free && crosses(edges.back(), EdgeList(edges.begin(), edges.end() - 1))) {
      return;
    }
    EdgeList sorted = sorted_edges(edges);
    for (const Edge& r : required_sorted_) {
      if (!contains_edge(sorted, r)) return;
    }

    Interval total = prefix_.back();
    if (mode_ == Mode::Tour) total += table_.distance(order_.back(), order_.front(), bits());
    std::vector<std::pair<Edge, Interval>> cand;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        Edge pr(order_[i], order_[j]);
        Interval along{prefix_[j].lo - prefix_[i].lo, prefix_[j].hi - prefix_[i].hi, bits()};
        bool adjacent = j == i + 1 || (mode_ == Mode::Tour && i == 0 && j + 1 == n_);
        Interval d = along;
        if (mode_ == Mode::Tour) d = min_of(along, Interval{total.lo - along.lo, total.hi - along.hi, bits()});
        if (opts_.branch_and_bound && !adjacent && best_.beaten_by(d, table_.distance(pr.u, pr.v, bits()))) {
          ++pruned_;
          return;
        }
        cand.emplace_back(pr, adjacent ? Interval::exact(1, bits()) : ratio(d, table_.distance(pr.u, pr.v, bits()), bits()));
      }
    }
    ++examined_;
    if (opts_.enumeration_cap && examined_ > *opts_.enumeration_cap) {
      throw SizeTooLarge("enumeration cap of " + std::to_string(*opts_.enumeration_cap) + " structures reached");
    }
    DilationReport rep =
        maximize_pair_dilation(table_, std::move(cand), [this](const Edge& e) { return routes(e); }, opts_.policy);
    RouteSet w{rep.witness, routes(rep.witness)};
    best_.offer(table_, edges, rep, std::move(w), opts_.policy);
  }

  const DistanceTable& table_;
  const SolverOptions& opts_;
  Mode mode_;
  std::size_t n_;
  std::vector<bool> used_;
  std::vector<Index> order_;
  std::vector<Interval> prefix_;
  EdgeList required_sorted_;
  Incumbent best_;
  std::uint64_t examined_ = 0;
  std::uint64_t pruned_ = 0;
};

inline void check_required_crossings(const PointSet& ps, const EdgeList& required) {
  if (has_crossing(ps, required)) throw Infeasible("required edges cross each other");
}

}  // namespace detail

/// Exhaustive minimum-dilation Hamiltonian path or tour.
inline SolverResult min_dilation_structure(const DistanceTable& table, Mode mode, const SolverOptions& opts = {}) {
  if (mode == Mode::Tree) throw InvalidInput("min_dilation_structure handles path and tour modes only");
  const std::size_t n = table.size();
  if (n > 10) throw SizeTooLarge("path/tour search is limited to 10 points");
  if (n < 2 || (mode == Mode::Tour && n < 3)) throw InvalidInput("too few points for a spanning " + std::string(to_string(mode)));
  detail::validate_required(n, opts.required_edges);
  for (const Edge& e : opts.required_edges) {
    std::size_t deg = 0;
    for (const Edge& f : opts.required_edges) deg += f.touches(e.u) ? 1 : 0;
    if (deg > 2) throw Infeasible("required edges give a vertex degree above two");
  }
  if (opts.crossing_free) detail::check_required_crossings(table.points(), opts.required_edges);
  return detail::OrderSearch(table, opts, mode).run();
}

inline SolverResult min_dilation_structure(const PointSet& ps, Mode mode, const PrecisionPolicy& policy = {}) {
  SolverOptions opts;
  opts.mode = mode;
  opts.policy = policy;
  return min_dilation_structure(DistanceTable(ps), mode, opts);
}

/// Certified minimum-dilation spanning structure. Tree mode runs an edge
/// include/exclude search in order of increasing length (the first complete
/// tree is a minimum spanning tree), pruning on determined pairs and on edges
/// that are critical at the incumbent's dilation.
inline SolverResult mdst_exact(const DistanceTable& table, const SolverOptions& opts = {}) {
  const std::size_t n = table.size();
  if (opts.mode != Mode::Tree) return min_dilation_structure(table, opts.mode, opts);
  if (opts.max_points < 2) throw InvalidInput("max_points must be >= 2");
  if (n > opts.max_points) {
    throw SizeTooLarge("tree search is limited to " + std::to_string(opts.max_points) + " points, got " +
                       std::to_string(n));
  }
  if (n < 2) throw InvalidInput("need at least two points");
  detail::validate_required(n, opts.required_edges);
  if (opts.crossing_free) detail::check_required_crossings(table.points(), opts.required_edges);
  return detail::TreeSearch(table, opts).run();
}

inline SolverResult mdst_exact(const PointSet& ps, const SolverOptions& opts = {}) {
  return mdst_exact(DistanceTable(ps), opts);
}

namespace detail {

inline bool strictly_convex_quad(const PointSet& ps) {
  for (Index i = 0; i < 4; ++i) {
    std::vector<Index> rest;
    for (Index j = 0; j < 4; ++j) {
      if (j != i) rest.push_back(j);
    }
    int o1 = orient_sign(ps[rest[0]], ps[rest[1]], ps[rest[2]]);
    if (o1 == 0) return false;
    // i strictly inside the triangle of the others means not convex
    int a = orient_sign(ps[rest[0]], ps[rest[1]], ps[i]);
    int b = orient_sign(ps[rest[1]], ps[rest[2]], ps[i]);
    int c = orient_sign(ps[rest[2]], ps[rest[0]], ps[i]);
    if (a == o1 && b == o1 && c == o1) return false;
  }
  return true;
}

}  // namespace detail

/// Four-point uncrossing: with crossing edges ad, bc and third edge cd,
/// replace bc by bd when |bd| < |bc|, otherwise ad by ac (one of the two holds
/// in convex position). The result is checked to be no worse, pair by pair.
inline Tree uncross_four(const PointSet& ps, const Tree& t, const PrecisionPolicy& policy = {}) {
  if (ps.size() != 4 || t.size() != 4) throw InvalidInput("uncross_four needs exactly four points");
  auto crossings = crossing_pairs(ps, t.edges());
  if (crossings.empty()) throw NotCrossing("tree has no edge crossing");
  if (!detail::strictly_convex_quad(ps)) throw NotApplicable("points are not in strictly convex position");
  auto [x, y] = crossings.front();
  Edge third;
  for (const Edge& e : t.edges()) {
    if (e != x && e != y) third = e;
  }
  // third joins d (on x) and c (on y)
  Index d = x.touches(third.u) ? third.u : third.v;
  Index c = third.u == d ? third.v : third.u;
  if (!y.touches(c)) std::swap(x, y), std::swap(c, d);
  Index a = x.u == d ? x.v : x.u;
  Index b = y.u == c ? y.v : y.u;

  DistanceTable table(ps);
  EdgeList edges;
  if (table.squared(b, d) < table.squared(b, c)) {
    edges = {Edge(a, d), Edge(b, d), Edge(c, d)};
  } else if (table.squared(a, c) < table.squared(a, d)) {
    edges = {Edge(a, c), Edge(b, c), Edge(c, d)};
  } else {
    throw NotApplicable("neither swap shortens a crossing edge");
  }
  Tree out(4, sorted_edges(edges));
  if (tree_has_crossing(ps, out)) throw NotApplicable("swap did not remove the crossing");

  // certify: every pair of the new tree is at most the old dilation
  DilationReport old_rep = tree_dilation(table, t, policy);
  RouteSet old_witness{old_rep.witness, {t.path(old_rep.witness.u, old_rep.witness.v)}};
  for (Index u = 0; u < 4; ++u) {
    for (Index v = u + 1; v < 4; ++v) {
      RouteSet now{Edge(u, v), {out.path(u, v)}};
      RouteSet before{Edge(u, v), {t.path(u, v)}};
      if (sorted_edges(now.routes[0]) == sorted_edges(before.routes[0])) continue;
      if (compare_routes(table, now, before, policy) <= 0) continue;
      if (compare_routes(table, now, old_witness, policy) <= 0) continue;
      throw Error("uncross_four: swapped tree could not be certified no worse");
    }
  }
  return out;
}

}  // namespace dilatree
