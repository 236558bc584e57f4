#pragma once

// PARTITION: a subset-sum oracle, and the decision through gadget trees.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "dilatree/dilation.hpp"
#include "dilatree/gadget.hpp"

namespace dilatree {

struct PartitionSolution {
  std::set<int> A;        // 1-based indices
  std::set<int> A_prime;

  friend bool operator==(const PartitionSolution&, const PartitionSolution&) = default;
};

inline bool is_valid_partition(const PartitionInstance& inst, const PartitionSolution& s) {
  const int n = inst.n();
  std::vector<int> seen(static_cast<std::size_t>(n + 1), 0);
  BigInt left = 0;
  BigInt right = 0;
  for (int i : s.A) {
    if (i < 1 || i > n) return false;
    ++seen[static_cast<std::size_t>(i)];
    left += inst.alphas_dot[static_cast<std::size_t>(i - 1)];
  }
  for (int i : s.A_prime) {
    if (i < 1 || i > n) return false;
    ++seen[static_cast<std::size_t>(i)];
    right += inst.alphas_dot[static_cast<std::size_t>(i - 1)];
  }
  for (int i = 1; i <= n; ++i) {
    if (seen[static_cast<std::size_t>(i)] != 1) return false;
  }
  return left == right;
}

/// Subset-sum dynamic program up to sigma/2 with back-pointers.
inline std::optional<PartitionSolution> partition_oracle(const PartitionInstance& inst) {
  const BigInt total = inst.sigma_dot();
  if (total > 1000000) throw SumTooLarge("partition oracle limited to sums <= 10^6, got " + total.get_str());
  const long sum = total.get_si();
  if (sum % 2 != 0) return std::nullopt;
  const long target = sum / 2;
  const int n = inst.n();
  // from[s] = 1-based item that first reached sum s (0: unreached)
  std::vector<int> from(static_cast<std::size_t>(target + 1), 0);
  std::vector<bool> reach(static_cast<std::size_t>(target + 1), false);
  reach[0] = true;
  for (int i = 1; i <= n; ++i) {
    long a = inst.alphas_dot[static_cast<std::size_t>(i - 1)].get_si();
    for (long s = target; s >= a; --s) {
      if (!reach[static_cast<std::size_t>(s)] && reach[static_cast<std::size_t>(s - a)]) {
        reach[static_cast<std::size_t>(s)] = true;
        from[static_cast<std::size_t>(s)] = i;
      }
    }
  }
  if (!reach[static_cast<std::size_t>(target)]) return std::nullopt;
  PartitionSolution sol;
  for (long s = target; s > 0;) {
    int i = from[static_cast<std::size_t>(s)];
    sol.A.insert(i);
    s -= inst.alphas_dot[static_cast<std::size_t>(i - 1)].get_si();
  }
  for (int i = 1; i <= n; ++i) {
    if (!sol.A.count(i)) sol.A_prime.insert(i);
  }
  return sol;
}

struct DecideResult {
  std::optional<PartitionSolution> solution;
  EdgeList tree;                  // witness tree when a solution was found
  std::uint64_t trees_examined = 0;
  int precision_used = 0;
};

/// Searches the gadget tree family (critical edges, one alternation choice
/// per index on each side, q2 joined to any other point) for a tree certified
/// at most P/Q. Anchors are tried with q1 first; for each anchor the 4^n
/// alternation masks run in Gray-code order. A tree found is decoded as
/// A = {i : c_i d_i in tree}, A' = {i : c_i' d_i' in tree}.
inline DecideResult decide_partition(const PointSet& ps, const PartitionInstance& inst, const Threshold& th,
                                     const PrecisionPolicy& policy = {}) {
  const int n = inst.n();
  if (n > 12) throw SizeTooLarge("decide_partition enumerates 4^n masks; n <= 12 supported");
  GadgetLayout L(n);
  if (ps.size() != L.size()) throw InvalidInput("point set size does not match 8n+8");
  DistanceTable table(ps);

  std::vector<Index> anchors{L.q1()};
  for (Index x = 0; x < static_cast<Index>(L.size()); ++x) {
    if (x != L.q1() && x != L.q2()) anchors.push_back(x);
  }
  const std::uint64_t masks = std::uint64_t{1} << (2 * n);
  DecideResult out;
  EdgeList probes;
  std::vector<bool> right(static_cast<std::size_t>(n));
  std::vector<bool> left(static_cast<std::size_t>(n));
  for (Index anchor : anchors) {
    for (std::uint64_t m = 0; m < masks; ++m) {
      std::uint64_t gray = m ^ (m >> 1);
      for (int i = 0; i < n; ++i) {
        right[static_cast<std::size_t>(i)] = (gray >> i) & 1U;
        left[static_cast<std::size_t>(i)] = (gray >> (n + i)) & 1U;
      }
      Tree t(L.size(), L.tree_edges(right, left, anchor));
      ++out.trees_examined;
      ThresholdResult r = compare_to_threshold(table, t, th, policy, probes);
      out.precision_used = std::max(out.precision_used, r.precision_used);
      if (r.verdict == Verdict::Greater) {
        if (std::find(probes.begin(), probes.end(), r.witness) == probes.end()) {
          probes.insert(probes.begin(), r.witness);
          if (probes.size() > 8) probes.pop_back();
        }
        continue;
      }
      PartitionSolution sol;
      for (int i = 1; i <= n; ++i) {
        if (right[static_cast<std::size_t>(i - 1)]) sol.A.insert(i);
        if (left[static_cast<std::size_t>(i - 1)]) sol.A_prime.insert(i);
      }
      out.solution = std::move(sol);
      out.tree = t.edges();
      return out;
    }
  }
  return out;
}

inline DecideResult decide_partition(const Gadget& g, const PrecisionPolicy& policy = {}) {
  return decide_partition(g.points, g.instance, gadget_threshold(g.instance), policy);
}

inline DecideResult decide_partition(const IntegerInstance& ii, const PrecisionPolicy& policy = {}) {
  return decide_partition(ii.points, ii.instance, ii.threshold(), policy);
}

}  // namespace dilatree
