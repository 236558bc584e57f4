#pragma once

// Command driver shared by the dilatree executable and the tests. Parsing of
// argv lives in tools/; run() takes an already parsed configuration.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dilatree/io.hpp"
#include "dilatree/svg.hpp"
#include "dilatree/witness.hpp"

namespace dilatree {

enum ExitCode : int { kSuccess = 0, kNo = 1, kUsage = 2, kUndecided = 3 };

struct CommandConfig {
  std::string subcommand;  // gen verify decide dilation mdst oracle witness5 svg
  std::string input;
  std::string tree;
  std::string output;
  std::vector<std::string> alphas;
  std::optional<std::string> threshold;  // "P/Q"
  int start_bits = 64;
  std::optional<int> max_bits;  // overrides DILATREE_MAX_BITS
  int d_bits = 0;
  std::optional<long> k;
  bool gadget = false;  // gen: write the rational gadget instead of the integer instance
  std::string mode = "tree";
  bool crossing_free = false;
  std::vector<std::string> required;  // "u-v"
  std::size_t max_points = 9;
  bool no_branch_and_bound = false;
  std::uint64_t seed = 1;
  std::uint64_t budget = 1000000;
};

namespace detail {

inline PrecisionPolicy policy_of(const CommandConfig& c) {
  PrecisionPolicy p = PrecisionPolicy::from_environment();
  if (c.max_bits) p.max_bits = *c.max_bits;
  p.start_bits = std::min(c.start_bits, p.max_bits);
  if (p.start_bits < 8) throw InvalidInput("precision must be at least 8 bits");
  return p;
}

inline Threshold parse_threshold(const std::string& text) {
  if (text.find('.') != std::string::npos) throw InvalidInput("threshold must be a rational P/Q, not a decimal");
  Rational r = parse_rational(text);
  return Threshold(r.get_num(), r.get_den());
}

inline void need_input(const CommandConfig& c, const std::string& path, const char* flag) {
  if (path.empty()) throw InvalidInput(c.subcommand + " needs " + flag);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw IoError("no such file: " + path);
}

inline void check_output(const std::string& path) {
  if (path.empty()) return;
  std::filesystem::path parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty() && !std::filesystem::is_directory(parent, ec)) {
    throw IoError("output directory does not exist: " + parent.string());
  }
}

inline void emit(const CommandConfig& c, std::ostream& out, const std::string& text) {
  if (c.output.empty()) {
    out << text;
  } else {
    write_text_file(c.output, text);
  }
}

inline PartitionInstance alphas_of(const CommandConfig& c) {
  if (c.alphas.empty()) throw InvalidInput(c.subcommand + " needs --alphas");
  std::vector<BigInt> a;
  for (const std::string& s : c.alphas) a.push_back(parse_bigint(s));
  return PartitionInstance(std::move(a));
}

// Instance files carry "scale"; gadget files carry "d_bits".
inline bool is_gadget_file(const Json& j) { return j.is_object() && j.contains("d_bits"); }

inline EdgeList parse_required(const std::vector<std::string>& items) {
  EdgeList out;
  for (const std::string& s : items) {
    std::size_t dash = s.find('-');
    if (dash == std::string::npos) throw InvalidInput("required edge must look like u-v, got '" + s + "'");
    BigInt u = parse_bigint(s.substr(0, dash));
    BigInt v = parse_bigint(s.substr(dash + 1));
    if (!u.fits_sint_p() || !v.fits_sint_p() || u == v) throw InvalidInput("bad required edge '" + s + "'");
    out.emplace_back(static_cast<Index>(u.get_si()), static_cast<Index>(v.get_si()));
  }
  return out;
}

inline int cmd_gen(const CommandConfig& c, std::ostream& out) {
  check_output(c.output);
  Gadget g = build_gadget(alphas_of(c), c.d_bits);
  if (c.gadget) {
    emit(c, out, dump(gadget_to_json(g)));
  } else {
    emit(c, out, dump(instance_to_json(integerize(g, c.k))));
  }
  return kSuccess;
}

inline int cmd_verify(const CommandConfig& c, std::ostream& out) {
  need_input(c, c.input, "--input");
  check_output(c.output);
  Json j = parse_json(read_text_file(c.input), c.input);
  LemmaReport r = is_gadget_file(j) ? verify_gadget(gadget_from_json(j)) : verify_gadget(instance_from_json(j));
  for (const LemmaCheck& ch : r.checks) {
    out << (ch.passed ? "PASS  " : "FAIL  ") << ch.name;
    if (!ch.passed) out << "  (" << ch.detail << ")";
    out << "\n";
  }
  out << (r.all_passed() ? "all checks passed\n" : "some checks failed\n");
  if (!c.output.empty()) write_text_file(c.output, dump(lemma_report_to_json(r)));
  return r.all_passed() ? kSuccess : kNo;
}

inline int cmd_decide(const CommandConfig& c, std::ostream& out) {
  need_input(c, c.input, "--input");
  check_output(c.output);
  Json j = parse_json(read_text_file(c.input), c.input);
  PrecisionPolicy policy = policy_of(c);
  DecideResult r = is_gadget_file(j) ? decide_partition(gadget_from_json(j), policy)
                                     : decide_partition(instance_from_json(j), policy);
  out << (r.solution ? "YES" : "NO") << "  trees examined: " << r.trees_examined << "\n";
  if (r.solution) {
    out << "A:";
    for (int i : r.solution->A) out << " " << i;
    out << "\nA':";
    for (int i : r.solution->A_prime) out << " " << i;
    out << "\n";
  }
  if (!c.output.empty()) write_text_file(c.output, dump(decide_to_json(r)));
  return r.solution ? kSuccess : kNo;
}

inline int cmd_dilation(const CommandConfig& c, std::ostream& out) {
  need_input(c, c.input, "--input");
  need_input(c, c.tree, "--tree");
  check_output(c.output);
  std::optional<Threshold> th;
  if (c.threshold) th = parse_threshold(*c.threshold);
  PointSet ps = points_from_json(parse_json(read_text_file(c.input), c.input));
  Tree t(ps.size(), edges_from_json(parse_json(read_text_file(c.tree), c.tree)));
  DilationReport r = tree_dilation(ps, t, policy_of(c), th);
  Json j = report_to_json(r, ps);
  out << "dilation in [" << to_string(r.value.lo.to_rational()) << ", " << to_string(r.value.hi.to_rational())
      << "] ~ " << r.value.midpoint() << "\nwitness: " << ps.label(r.witness.u) << " " << ps.label(r.witness.v)
      << "\n";
  if (r.threshold_verdict) out << "threshold " << to_string(th->value()) << ": " << to_string(*r.threshold_verdict) << "\n";
  if (!c.output.empty()) write_text_file(c.output, dump(j));
  return r.threshold_verdict == Verdict::Greater ? kNo : kSuccess;
}

inline int cmd_mdst(const CommandConfig& c, std::ostream& out) {
  need_input(c, c.input, "--input");
  check_output(c.output);
  SolverOptions opts;
  if (c.mode == "tree") {
    opts.mode = Mode::Tree;
  } else if (c.mode == "path") {
    opts.mode = Mode::Path;
  } else if (c.mode == "tour") {
    opts.mode = Mode::Tour;
  } else {
    throw InvalidInput("unknown mode '" + c.mode + "'");
  }
  opts.crossing_free = c.crossing_free;
  opts.required_edges = parse_required(c.required);
  opts.max_points = c.max_points;
  opts.branch_and_bound = !c.no_branch_and_bound;
  opts.policy = policy_of(c);
  PointSet ps = points_from_json(parse_json(read_text_file(c.input), c.input));
  SolverResult r = mdst_exact(ps, opts);
  out << to_string(r.mode) << " dilation ~ " << r.report.value.midpoint() << (r.tied ? " (tied)" : "") << "\nedges:";
  for (const Edge& e : r.edges) out << " " << ps.label(e.u) << "-" << ps.label(e.v);
  out << "\n";
  if (!c.output.empty()) write_text_file(c.output, dump(solver_result_to_json(r, ps)));
  return kSuccess;
}

inline int cmd_oracle(const CommandConfig& c, std::ostream& out) {
  check_output(c.output);
  std::optional<PartitionSolution> s = partition_oracle(alphas_of(c));
  emit(c, out, dump(partition_to_json(s)));
  return s ? kSuccess : kNo;
}

inline int cmd_witness5(const CommandConfig& c, std::ostream& out) {
  check_output(c.output);
  std::optional<FiveWitness> w = witness_search_five(c.seed, c.budget, policy_of(c));
  if (!w) {
    out << "none\n";
    return kUndecided;
  }
  Json j;
  j["points"] = points_to_json(w->points);
  j["edges"] = edges_to_json(w->optimum);
  j["crossing_free_edges"] = edges_to_json(w->best_crossing_free);
  j["critical"] = edges_to_json(w->critical);
  j["dilation"] = interval_to_json(w->optimum_report.value);
  j["crossing_free_dilation"] = interval_to_json(w->crossing_free_report.value);
  j["candidates"] = w->candidates;
  emit(c, out, dump(j));
  return kSuccess;
}

inline int cmd_svg(const CommandConfig& c, std::ostream& out) {
  need_input(c, c.input, "--input");
  if (!c.tree.empty()) need_input(c, c.tree, "--tree");
  check_output(c.output);
  PointSet ps = points_from_json(parse_json(read_text_file(c.input), c.input));
  EdgeList edges;
  if (!c.tree.empty()) edges = edges_from_json(parse_json(read_text_file(c.tree), c.tree));
  emit(c, out, render_svg(ps, edges));
  return kSuccess;
}

}  // namespace detail

/// Runs one subcommand. Exit codes: 0 success or YES, 1 certified NO,
/// 2 usage or I/O error, 3 precision exhausted or undecided.
inline int run(const CommandConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.subcommand == "gen") return detail::cmd_gen(c, out);
    if (c.subcommand == "verify") return detail::cmd_verify(c, out);
    if (c.subcommand == "decide") return detail::cmd_decide(c, out);
    if (c.subcommand == "dilation") return detail::cmd_dilation(c, out);
    if (c.subcommand == "mdst") return detail::cmd_mdst(c, out);
    if (c.subcommand == "oracle") return detail::cmd_oracle(c, out);
    if (c.subcommand == "witness5") return detail::cmd_witness5(c, out);
    if (c.subcommand == "svg") return detail::cmd_svg(c, out);
    err << "unknown subcommand '" << c.subcommand << "'\n";
    return kUsage;
  } catch (const PrecisionExhausted& e) {
    err << "undecided: " << e.what() << "\n";
    return kUndecided;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace dilatree
