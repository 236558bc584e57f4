#pragma once

// JSON file formats. Big integers and rationals travel as decimal strings
// ("12", "-7/3"); plain JSON integers are accepted on input as well.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dilatree/gadget.hpp"
#include "dilatree/partition.hpp"
#include "dilatree/solver.hpp"
#include "dilatree/verify.hpp"

namespace dilatree {

using Json = nlohmann::ordered_json;

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(what + ": " + e.what());
  }
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw IoError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline Rational rational_from(const Json& v) {
  if (v.is_number_integer()) return Rational(BigInt(std::to_string(v.get<long long>()), 10));
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const InvalidInput& e) {
      throw IoError(e.what());
    }
  }
  throw IoError("expected an integer or a rational string, got " + v.dump());
}

inline BigInt integer_from(const Json& v) {
  Rational r = rational_from(v);
  if (r.get_den() != 1) throw IoError("expected an integer, got " + v.dump());
  return r.get_num();
}

inline Json integer_json(const BigInt& x) {
  if (x.fits_slong_p()) return Json(x.get_si());
  return Json(x.get_str());
}

inline Json index_set(const std::set<int>& s) { return Json(std::vector<int>(s.begin(), s.end())); }

}  // namespace detail

inline Json points_to_json(const PointSet& ps) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    Json p;
    if (ps.has_labels()) p["label"] = ps.labels()[i];
    p["x"] = to_string(ps.points()[i].x);
    p["y"] = to_string(ps.points()[i].y);
    arr.push_back(std::move(p));
  }
  return arr;
}

/// Reads {"points": [...]}; entries are {"label"?, "x", "y"} or [x, y].
inline PointSet points_from_json(const Json& j) {
  const Json& arr = detail::field(j, "points");
  if (!arr.is_array()) throw IoError("'points' must be an array");
  std::vector<Point> pts;
  std::vector<std::string> labels;
  bool any_label = false;
  for (const Json& p : arr) {
    if (p.is_array() && p.size() == 2) {
      pts.push_back(Point{detail::rational_from(p[0]), detail::rational_from(p[1])});
      labels.emplace_back();
      continue;
    }
    pts.push_back(Point{detail::rational_from(detail::field(p, "x")), detail::rational_from(detail::field(p, "y"))});
    if (p.contains("label")) {
      labels.push_back(p.at("label").get<std::string>());
      any_label = true;
    } else {
      labels.emplace_back();
    }
  }
  if (any_label) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i].empty()) labels[i] = std::to_string(i);
    }
  } else {
    labels.clear();
  }
  return PointSet(std::move(pts), std::move(labels));
}

inline Json edges_to_json(const EdgeList& edges) {
  Json arr = Json::array();
  for (const Edge& e : edges) arr.push_back(Json::array({e.u, e.v}));
  return arr;
}

inline EdgeList edges_from_json(const Json& j) {
  const Json& arr = detail::field(j, "edges");
  if (!arr.is_array()) throw IoError("'edges' must be an array");
  EdgeList out;
  for (const Json& e : arr) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw IoError("edges must be [u, v] integer pairs");
    }
    int u = e[0].get<int>();
    int v = e[1].get<int>();
    if (u == v) throw IoError("self-loop in edge list");
    out.emplace_back(u, v);
  }
  return sorted_edges(std::move(out));
}

inline Json instance_to_json(const IntegerInstance& ii) {
  Json j;
  Json alphas = Json::array();
  for (const BigInt& a : ii.instance.alphas_dot) alphas.push_back(detail::integer_json(a));
  j["alphas_dot"] = std::move(alphas);
  j["k"] = ii.k;
  j["P"] = ii.P.get_str();
  j["Q"] = ii.Q.get_str();
  j["scale"] = "1800*2^k";
  j["points"] = points_to_json(ii.points);
  return j;
}

inline PartitionInstance partition_from_json(const Json& j) {
  const Json& arr = detail::field(j, "alphas_dot");
  if (!arr.is_array()) throw IoError("'alphas_dot' must be an array");
  std::vector<BigInt> a;
  for (const Json& x : arr) a.push_back(detail::integer_from(x));
  return PartitionInstance(std::move(a));
}

inline IntegerInstance instance_from_json(const Json& j) {
  IntegerInstance ii;
  ii.instance = partition_from_json(j);
  const Json& k = detail::field(j, "k");
  if (!k.is_number_integer() || k.get<long>() < 1) throw IoError("'k' must be a positive integer");
  ii.k = k.get<long>();
  if (detail::field(j, "scale") != "1800*2^k") throw IoError("unsupported scale " + j.at("scale").dump());
  ii.P = detail::integer_from(detail::field(j, "P"));
  ii.Q = detail::integer_from(detail::field(j, "Q"));
  Threshold th = gadget_threshold(ii.instance);
  if (ii.P != th.p || ii.Q != th.q) throw IoError("P/Q does not match 3/2 + xi/2 for these integers");
  ii.points = points_from_json(j);
  GadgetLayout L = ii.layout();
  if (ii.points.size() != L.size() || ii.points.labels() != L.labels()) {
    throw IoError("instance points are not the canonical 8n+8 gadget layout");
  }
  for (const Point& p : ii.points.points()) {
    if (p.x.get_den() != 1 || p.y.get_den() != 1) throw IoError("instance coordinates must be integers");
  }
  ii.epsilon_bound = make_rational(BigInt(1), pow2(static_cast<unsigned long>(ii.k)));
  return ii;
}

/// Rational-coordinate gadget, with the circle data behind each d point.
inline Json gadget_to_json(const Gadget& g) {
  Json j;
  Json alphas = Json::array();
  for (const BigInt& a : g.instance.alphas_dot) alphas.push_back(detail::integer_json(a));
  j["alphas_dot"] = std::move(alphas);
  j["d_bits"] = g.d_bits;
  j["points"] = points_to_json(g.points);
  Json defs = Json::array();
  for (std::size_t i = 0; i < g.d_defs.size(); ++i) {
    const DCircle& dc = g.d_defs[i];
    defs.push_back(Json{{"i", i + 1},
                        {"center1", Json::array({to_string(dc.c.x), to_string(dc.c.y)})},
                        {"r1_sq", to_string(dc.r1_sq)},
                        {"center2", Json::array({to_string(dc.a_next.x), to_string(dc.a_next.y)})},
                        {"r2_sq", to_string(dc.r2_sq)}});
  }
  j["d_defs"] = std::move(defs);
  return j;
}

inline Gadget gadget_from_json(const Json& j) {
  PartitionInstance inst = partition_from_json(j);
  const Json& bits = detail::field(j, "d_bits");
  if (!bits.is_number_integer()) throw IoError("'d_bits' must be an integer");
  Gadget g;
  g.instance = inst;
  g.layout = GadgetLayout(inst.n());
  g.alphas = detail::scaled_alphas(inst);
  g.sigma_total = 0;
  for (const Rational& a : g.alphas) g.sigma_total += a;
  g.xi = gadget_xi(inst);
  g.d_bits = bits.get<int>();
  g.points = points_from_json(j);
  if (g.points.size() != g.layout.size() || g.points.labels() != g.layout.labels()) {
    throw IoError("gadget points are not the canonical 8n+8 layout");
  }
  g.d_defs = detail::d_circles(g.layout, detail::gadget_exact_points(g.layout), g.alphas);
  return g;
}

inline Json interval_to_json(const Interval& v) {
  return Json{{"lo", to_string(v.lo.to_rational())},
              {"hi", to_string(v.hi.to_rational())},
              {"approx", v.midpoint()},
              {"bits", v.bits}};
}

inline Json report_to_json(const DilationReport& r, const PointSet& ps) {
  Json j;
  j["value"] = interval_to_json(r.value);
  j["witness"] = Json::array({r.witness.u, r.witness.v});
  j["witness_labels"] = Json::array({ps.label(r.witness.u), ps.label(r.witness.v)});
  if (r.threshold_verdict) j["threshold_verdict"] = to_string(*r.threshold_verdict);
  j["precision_used"] = r.precision_used;
  j["tied"] = r.tied;
  return j;
}

inline Json solver_result_to_json(const SolverResult& r, const PointSet& ps) {
  Json j;
  j["mode"] = to_string(r.mode);
  j["edges"] = edges_to_json(r.edges);
  j["dilation"] = report_to_json(r.report, ps);
  j["trees_examined"] = r.trees_examined;
  j["pruned"] = r.pruned;
  j["tied"] = r.tied;
  return j;
}

inline Json lemma_report_to_json(const LemmaReport& r) {
  Json checks = Json::array();
  for (const LemmaCheck& c : r.checks) {
    Json one{{"name", c.name}, {"passed", c.passed}};
    if (!c.passed) one["detail"] = c.detail;
    checks.push_back(std::move(one));
  }
  return Json{{"all_passed", r.all_passed()}, {"checks", std::move(checks)}};
}

inline Json decide_to_json(const DecideResult& r) {
  Json j;
  j["verdict"] = r.solution ? "YES" : "NO";
  if (r.solution) {
    j["A"] = detail::index_set(r.solution->A);
    j["A_prime"] = detail::index_set(r.solution->A_prime);
    j["edges"] = edges_to_json(r.tree);
  }
  j["trees_examined"] = r.trees_examined;
  j["precision_used"] = r.precision_used;
  return j;
}

inline Json partition_to_json(const std::optional<PartitionSolution>& s) {
  Json j;
  j["verdict"] = s ? "YES" : "NO";
  if (s) {
    j["A"] = detail::index_set(s->A);
    j["A_prime"] = detail::index_set(s->A_prime);
  }
  return j;
}

}  // namespace dilatree
