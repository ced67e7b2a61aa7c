#include "qpmut/serialize.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "qpmut/error.hpp"

namespace qpmut {

Json to_json(const Degree& d) {
  Json j = Json::array();
  for (auto x : d.components()) j.push_back(x);
  return j;
}

Json to_json(const PathSum& s) {
  Json j = Json::array();
  for (const auto& [p, c] : s.terms()) j.push_back({{"coeff", to_string(c)}, {"path", p.arrows}});
  return j;
}

namespace {

Json horizon_json(const std::optional<std::size_t>& h) { return h ? Json(*h) : Json(nullptr); }

Json pair_json(const std::vector<std::pair<ArrowId, ArrowId>>& pairs) {
  Json j = Json::array();
  for (const auto& [a, b] : pairs) j.push_back({a, b});
  return j;
}

}  // namespace

Json to_json(const QPState& qp) {
  const Quiver& q = qp.quiver;
  Json j;
  j["grading"] = {{"rank", q.grading().rank}, {"potential_degree", to_json(q.grading().potential_degree)}};
  Json vs = Json::array();
  for (const auto& v : q.vertices()) vs.push_back({{"id", v.id}, {"label", v.label}});
  j["vertices"] = std::move(vs);
  Json as = Json::array();
  for (const auto& a : q.arrows()) {
    as.push_back({{"id", a.id}, {"name", a.name}, {"source", a.source}, {"target", a.target},
                  {"degree", to_json(a.degree)}});
  }
  j["arrows"] = std::move(as);
  Json terms = Json::array();
  for (const auto& [w, c] : qp.potential.terms()) terms.push_back({{"coeff", to_string(c)}, {"cycle", w.arrows()}});
  j["potential"] = std::move(terms);
  j["length_cap"] = qp.potential.length_cap() ? Json(*qp.potential.length_cap()) : Json(nullptr);
  j["exact"] = qp.potential.exact();
  j["faithful_horizon"] = horizon_json(qp.faithful_horizon);
  return j;
}

Json to_json(const MutationReport& r) {
  Json j;
  j["vertex"] = r.vertex ? Json(*r.vertex) : Json(nullptr);
  Json added = Json::array();
  for (const auto& a : r.arrows_added) {
    added.push_back({{"id", a.id}, {"name", a.name}, {"source", a.source}, {"target", a.target},
                     {"degree", to_json(a.degree)}, {"in_arrow", a.in_arrow}, {"out_arrow", a.out_arrow}});
  }
  j["arrows_added"] = std::move(added);
  Json reversed = Json::array();
  for (const auto& a : r.arrows_reversed) {
    reversed.push_back({{"id", a.id}, {"old_name", a.old_name}, {"new_name", a.new_name}, {"source", a.source},
                        {"target", a.target}, {"old_degree", to_json(a.old_degree)},
                        {"new_degree", to_json(a.new_degree)}});
  }
  j["arrows_reversed"] = std::move(reversed);
  Json blocks = Json::array();
  for (const auto& b : r.trivial_blocks) {
    Json m = Json::array();
    for (const auto& row : b.matrix) {
      Json jr = Json::array();
      for (const auto& x : row) jr.push_back(to_string(x));
      m.push_back(std::move(jr));
    }
    blocks.push_back({{"first", b.first}, {"second", b.second}, {"row_arrows", b.row_arrows},
                      {"col_arrows", b.col_arrows}, {"matrix", std::move(m)}, {"rank", b.rank},
                      {"deleted", b.deleted}});
  }
  j["trivial_blocks"] = std::move(blocks);
  j["deleted_arrow_count"] = r.deleted_arrow_count();
  j["substitution_rounds"] = r.substitution_rounds;
  if (!r.substitution_log.empty()) {
    Json log = Json::array();
    for (const auto& s : r.substitution_log) log.push_back({{"arrow", s.arrow}, {"replacement", to_json(s.replacement)}});
    j["substitution_log"] = std::move(log);
  }
  j["truncated_reduction"] = r.truncated_reduction;
  j["exact"] = r.exact;
  return j;
}

Json to_json(const ObstructionCertificate& c) {
  return Json{{"u", c.u},
              {"v", c.v},
              {"a", c.a},
              {"b", c.b},
              {"degree_a", to_json(c.degree_a)},
              {"degree_b", to_json(c.degree_b)},
              {"degree_sum", to_json(c.degree_sum)},
              {"potential_degree", to_json(c.potential_degree)},
              {"matching", pair_json(c.matching)}};
}

Json to_json(const Witness& w) {
  Json j{{"sequence", w.sequence}, {"kind", w.is_loop ? "loop" : "two-cycle"},
         {"u", w.u},               {"v", w.v},
         {"a", w.a},               {"b", w.b}};
  j["certificate"] = w.certificate ? to_json(*w.certificate) : Json(nullptr);
  return j;
}

Json to_json(const SearchReport& r, bool with_timing) {
  Json j;
  j["root_spec"] = r.root_spec;
  j["depth_requested"] = r.depth_requested;
  j["depth_reached"] = r.depth_reached;
  j["nodes_explored"] = r.nodes_explored;
  j["nodes_pruned"] = r.nodes_pruned;
  j["status"] = to_string(r.status);
  j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  j["inconclusive_reason"] = r.inconclusive_reason.empty() ? Json(nullptr) : Json(r.inconclusive_reason);
  j["all_exact"] = r.all_exact;
  if (with_timing) j["wall_time_ms"] = r.wall_time.count();
  Json nodes = Json::array();
  for (const auto& n : r.nodes) {
    nodes.push_back({{"id", n.id},
                     {"parent", n.parent ? Json(*n.parent) : Json(nullptr)},
                     {"vertex", n.vertex ? Json(*n.vertex) : Json(nullptr)},
                     {"sequence", n.sequence},
                     {"depth", n.depth},
                     {"arrow_count", n.arrow_count},
                     {"exact", n.exact},
                     {"faithful_horizon", horizon_json(n.faithful_horizon)},
                     {"inconclusive", n.inconclusive}});
  }
  j["nodes"] = std::move(nodes);
  Json pruned = Json::array();
  for (const auto& e : r.pruned_edges) {
    pruned.push_back({{"parent", e.parent}, {"vertex", e.vertex}, {"merged_into", e.merged_into}});
  }
  j["pruned_edges"] = std::move(pruned);
  return j;
}

Json to_json(const DimensionTable& t) {
  Json j;
  j["functional"] = t.functional;
  j["max_degree"] = t.max_degree;
  j["exact_up_to"] = t.exact_up_to;
  j["totals"] = t.totals();
  Json entries = Json::array();
  for (const auto& [d, dim] : t.dims) {
    entries.push_back({{"degree", to_json(d)}, {"weight", d.dot(t.functional)}, {"dim", dim}});
  }
  j["by_degree"] = std::move(entries);
  return j;
}

Json to_json(const LambdaReport& r) {
  return Json{{"type", r.type},
              {"delta_dot_lambda", to_string(r.delta_dot_lambda)},
              {"delta_condition", r.delta_condition},
              {"lambda_nonzero", r.lambda_nonzero},
              {"dynkin_roots_checked", r.dynkin_roots_checked},
              {"failing_roots", r.failing_roots},
              {"dynkin_condition", r.dynkin_condition},
              {"all_hold", r.all_hold()}};
}

// ------------------------------------------------------------------ input

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Parse, where + ": " + what);
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

std::int64_t integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<std::int64_t>();
}

int small_int(const Json& j, const std::string& where) {
  const auto x = integer(j, where);
  if (x < INT32_MIN || x > INT32_MAX) fail(where, "integer out of range");
  return static_cast<int>(x);
}

const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

Degree degree(const Json& j, std::size_t rank, const std::string& where) {
  array(j, where);
  if (j.size() != rank) fail(where, "expected " + std::to_string(rank) + " components");
  std::vector<std::int64_t> c;
  for (std::size_t k = 0; k < j.size(); ++k) c.push_back(integer(j[k], where + "[" + std::to_string(k) + "]"));
  return Degree(std::move(c));
}

std::optional<std::size_t> optional_size(const Json& obj, const char* key, std::optional<std::size_t> fallback,
                                         const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (it->is_null()) return std::nullopt;
  const auto x = integer(*it, where + "." + key);
  if (x < 0) fail(where + "." + key, "expected a non-negative integer");
  return static_cast<std::size_t>(x);
}

}  // namespace

QPState qp_from_json(const Json& j) {
  const std::string root = "$";
  if (!j.is_object()) fail(root, "expected an object");
  const Json& g = field(j, "grading", root);
  const auto rank_raw = integer(field(g, "rank", "$.grading"), "$.grading.rank");
  if (rank_raw < 0 || rank_raw > 64) fail("$.grading.rank", "rank out of range");
  const auto rank = static_cast<std::size_t>(rank_raw);
  Quiver q(Grading{rank, degree(field(g, "potential_degree", "$.grading"), rank, "$.grading.potential_degree")});

  const Json& vs = array(field(j, "vertices", root), "$.vertices");
  for (std::size_t k = 0; k < vs.size(); ++k) {
    const std::string where = "$.vertices[" + std::to_string(k) + "]";
    const int id = small_int(field(vs[k], "id", where), where + ".id");
    std::string label = std::to_string(id);
    if (auto it = vs[k].find("label"); it != vs[k].end()) {
      if (!it->is_string()) fail(where + ".label", "expected a string");
      label = it->get<std::string>();
    }
    try {
      q.add_vertex(id, std::move(label));
    } catch (const Error& e) {
      fail(where, e.what());
    }
  }

  const Json& as = array(field(j, "arrows", root), "$.arrows");
  for (std::size_t k = 0; k < as.size(); ++k) {
    const std::string where = "$.arrows[" + std::to_string(k) + "]";
    Arrow a;
    a.id = small_int(field(as[k], "id", where), where + ".id");
    const Json& name = field(as[k], "name", where);
    if (!name.is_string()) fail(where + ".name", "expected a string");
    a.name = name.get<std::string>();
    a.source = small_int(field(as[k], "source", where), where + ".source");
    a.target = small_int(field(as[k], "target", where), where + ".target");
    a.degree = degree(field(as[k], "degree", where), rank, where + ".degree");
    try {
      q.add_arrow(std::move(a));
    } catch (const Error& e) {
      fail(where, e.what());
    }
  }

  const LengthCap cap = optional_size(j, "length_cap", kDefaultLengthCap, root);
  Potential w(cap);
  const Json& terms = array(field(j, "potential", root), "$.potential");
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::string where = "$.potential[" + std::to_string(k) + "]";
    const Json& coeff = field(terms[k], "coeff", where);
    Rational c;
    try {
      if (coeff.is_string()) {
        c = parse_rational(coeff.get<std::string>());
      } else if (coeff.is_number_integer()) {
        c = Rational(std::to_string(coeff.get<std::int64_t>()));
      } else {
        fail(where + ".coeff", "expected a fraction string");
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Parse || std::string(e.what()).starts_with("$")) throw;
      fail(where + ".coeff", e.what());
    }
    const Json& cyc = array(field(terms[k], "cycle", where), where + ".cycle");
    Path p;
    for (std::size_t m = 0; m < cyc.size(); ++m) {
      p.arrows.push_back(small_int(cyc[m], where + ".cycle[" + std::to_string(m) + "]"));
    }
    CyclicWord word;
    try {
      word = canonical_cycle(q, p);
      if (word.length() < 2) fail(where + ".cycle", "potential words must have length >= 2");
      if (w.coefficient(word) != 0) fail(where + ".cycle", "duplicate cycle");
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Parse) throw;
      fail(where + ".cycle", e.what());
    }
    if (cap && word.length() > *cap) fail(where + ".cycle", "word longer than the length cap");
    w.add(word, c);
  }

  bool exact = true;
  if (auto it = j.find("exact"); it != j.end()) {
    if (!it->is_boolean()) fail("$.exact", "expected a boolean");
    exact = it->get<bool>();
  }
  w.set_exact(exact);
  QPState qp{std::move(q), std::move(w), std::nullopt};
  if (!exact) {
    qp.faithful_horizon = optional_size(j, "faithful_horizon", cap, root);
    if (!qp.faithful_horizon) qp.faithful_horizon = cap;
    if (!qp.faithful_horizon) fail("$.faithful_horizon", "inexact potential without a horizon or cap");
  } else if (auto it = j.find("faithful_horizon"); it != j.end() && !it->is_null()) {
    fail("$.faithful_horizon", "must be null for an exact potential");
  }
  try {
    validate(qp);
  } catch (const Error& e) {
    fail(root, e.what());
  }
  return qp;
}

Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < upto; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("column "); pos != std::string::npos) {
      if (auto colon = what.find(": ", pos); colon != std::string::npos) what = what.substr(colon + 2);
    }
    throw Error(ErrorKind::Parse,
                "malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
  }
}

QPState qp_from_text(std::string_view text) { return qp_from_json(parse_json_text(text)); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string to_text(const DimensionTable& t, std::string_view title) {
  std::ostringstream out;
  out << title << " (functional";
  for (auto f : t.functional) out << " " << f;
  out << ", exact up to " << t.exact_up_to << ")\n";
  std::size_t width = 6;
  for (const auto& [d, dim] : t.dims) width = std::max(width, d.str().size());
  out << std::left << std::setw(static_cast<int>(width)) << "degree" << "  " << std::right << std::setw(6) << "weight"
      << "  " << std::setw(8) << "dim" << "\n";
  for (const auto& [d, dim] : t.dims) {
    out << std::left << std::setw(static_cast<int>(width)) << d.str() << "  " << std::right << std::setw(6)
        << d.dot(t.functional) << "  " << std::setw(8) << dim << "\n";
  }
  out << "totals:";
  for (auto x : t.totals()) out << " " << x;
  out << "\n";
  return out.str();
}

std::string to_text(const SearchReport& r) {
  std::ostringstream out;
  out << "root: " << (r.root_spec.empty() ? "<qp>" : r.root_spec) << "\n";
  out << "status: " << to_string(r.status);
  if (r.status == SearchStatus::Clean) out << " to depth " << r.depth_reached;
  out << "\n";
  out << "depth reached: " << r.depth_reached << " of " << r.depth_requested << "\n";
  out << "nodes explored: " << r.nodes_explored << ", pruned: " << r.nodes_pruned << "\n";
  out << "all exact: " << (r.all_exact ? "yes" : "no") << "\n";
  if (!r.inconclusive_reason.empty()) out << "reason: " << r.inconclusive_reason << "\n";
  if (r.witness) {
    const Witness& w = *r.witness;
    out << "witness: sequence [";
    for (std::size_t k = 0; k < w.sequence.size(); ++k) out << (k ? " " : "") << w.sequence[k];
    out << "], " << (w.is_loop ? "loop" : "two-cycle") << " at " << w.u << " -> " << w.v << " arrows " << w.a << ", "
        << w.b << "\n";
    if (w.certificate) {
      const auto& c = *w.certificate;
      out << "certificate: " << c.degree_a.str() << " + " << c.degree_b.str() << " = " << c.degree_sum.str()
          << " != " << c.potential_degree.str() << "\n";
    }
  }
  return out.str();
}

}  // namespace qpmut
