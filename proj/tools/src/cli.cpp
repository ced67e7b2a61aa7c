#include "qpmut/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qpmut/error.hpp"
#include "qpmut/serialize.hpp"

namespace qpmut::cli {

namespace {

struct Options {
  std::string input;
  std::string output;
  std::string format = "json";
  int vertex = -1;
  std::size_t depth = 1;
  std::optional<std::size_t> length_cap;
  std::int64_t max_degree = 4;
  unsigned threads = 1;
  std::size_t node_cap = SearchLimits{}.node_cap;
  std::size_t time_cap_ms = 0;
  bool no_prune = false;
  bool report = false;
  bool timing = false;
  std::string tree;
  std::vector<std::int64_t> functional;
  bool length_grading = false;
};

struct Loaded {
  QPState qp;
  std::string spec;  // generator spec or file name
  std::optional<GeneratorSpec> generator;
};

std::string read_all(std::istream& in) {
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Loaded load(const Options& o, std::istream& in) {
  Loaded l;
  if (!o.input.empty() && o.input != "-" && looks_like_generator_spec(o.input)) {
    l.generator = parse_generator_spec(o.input);
    l.qp = generate(*l.generator, o.length_cap.value_or(default_length_cap()));
    l.spec = o.input;
    return l;
  }
  std::string text;
  if (o.input.empty() || o.input == "-") {
    text = read_all(in);
    l.spec = "<stdin>";
  } else {
    std::ifstream f(o.input);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open input '" + o.input + "'");
    text = read_all(f);
    l.spec = o.input;
  }
  l.qp = qp_from_text(text);
  if (o.length_cap && l.qp.potential.length_cap() != o.length_cap) {
    Potential w(*o.length_cap);
    w.set_exact(l.qp.potential.exact());
    for (const auto& [word, c] : l.qp.potential.terms()) w.add(word, c);
    if (!w.exact()) {
      l.qp.faithful_horizon = std::min(l.qp.faithful_horizon.value_or(*o.length_cap), *o.length_cap);
    }
    l.qp.potential = std::move(w);
  }
  return l;
}

std::string qp_text(const QPState& qp) {
  const Quiver& q = qp.quiver;
  std::ostringstream out;
  out << q.vertices().size() << " vertices, " << q.arrows().size() << " arrows, r = "
      << q.grading().potential_degree.str() << "\n";
  for (const auto& a : q.arrows()) {
    out << "  " << a.id << "  " << a.name << " : " << a.source << " -> " << a.target << "  " << a.degree.str() << "\n";
  }
  out << "W =";
  if (qp.potential.empty()) out << " 0";
  for (const auto& [w, c] : qp.potential.terms()) {
    out << "\n  " << (c > 0 ? "+" : "") << to_string(c) << " ";
    for (std::size_t k = 0; k < w.arrows().size(); ++k) out << (k ? " " : "") << q.arrow(w.arrows()[k]).name;
  }
  out << "\n";
  if (!qp.potential.exact()) out << "inexact, faithful up to length " << *qp.faithful_horizon << "\n";
  const auto l = loops(q);
  const auto t = two_cycles(q);
  out << l.size() << " loops, " << t.size() << " two-cycles\n";
  return out.str();
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.output.empty() || o.output == "-") {
    out << text;
    return;
  }
  std::ofstream f(o.output);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open output '" + o.output + "'");
  f << text;
}

void check_format(const Options& o, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (o.format == f) return;
  throw Error(ErrorKind::InvalidArgument, "format '" + o.format + "' not available for this subcommand");
}

void emit_qp(const Options& o, std::ostream& out, const QPState& qp, const MutationReport* report) {
  check_format(o, {"json", "text"});
  if (o.format == "text") {
    emit(o, out, qp_text(qp));
  } else if (report && o.report) {
    emit(o, out, dump(Json{{"qp", to_json(qp)}, {"report", to_json(*report)}}));
  } else {
    emit(o, out, dump(to_json(qp)));
  }
}

int cmd_generate(const Options& o, std::istream& in, std::ostream& out) {
  if (o.input.empty() || !looks_like_generator_spec(o.input)) {
    throw Error(ErrorKind::InvalidArgument, "generate needs a spec such as mckay:n=5,w=1,2,2");
  }
  emit_qp(o, out, load(o, in).qp, nullptr);
  return kOk;
}

int cmd_mutate(const Options& o, std::istream& in, std::ostream& out) {
  if (o.vertex < 0) throw Error(ErrorKind::InvalidArgument, "mutate needs --vertex");
  auto [qp, report] = mutate(load(o, in).qp, o.vertex);
  report.vertex = o.vertex;
  emit_qp(o, out, qp, &report);
  return kOk;
}

int cmd_reduce(const Options& o, std::istream& in, std::ostream& out) {
  auto [qp, report] = reduce(load(o, in).qp);
  emit_qp(o, out, qp, &report);
  return kOk;
}

int cmd_obstruct(const Options& o, std::istream& in, std::ostream& out) {
  check_format(o, {"json", "text"});
  const auto cert = degree_obstruction(load(o, in).qp);
  if (o.format == "text") {
    std::ostringstream s;
    if (cert) {
      s << "certificate: arrows " << cert->a << " (" << cert->u << " -> " << cert->v << ") and " << cert->b << " ("
        << cert->v << " -> " << cert->u << ")\n"
        << "degrees " << cert->degree_a.str() << " + " << cert->degree_b.str() << " = " << cert->degree_sum.str()
        << " != " << cert->potential_degree.str() << "\n";
    } else {
      s << "no certificate\n";
    }
    emit(o, out, s.str());
  } else {
    emit(o, out, dump(Json{{"certificate", cert ? to_json(*cert) : Json(nullptr)}}));
  }
  return kOk;
}

int cmd_search(const Options& o, std::istream& in, std::ostream& out) {
  check_format(o, {"json", "text", "dot"});
  const Loaded l = load(o, in);
  SearchLimits limits;
  limits.node_cap = o.node_cap;
  limits.time_cap = std::chrono::milliseconds(o.time_cap_ms);
  limits.length_cap = o.length_cap.value_or(l.qp.potential.length_cap().value_or(default_length_cap()));
  limits.threads = o.threads;
  limits.prune = !o.no_prune;
  const SearchReport r = explore(l.qp, o.depth, limits, l.spec);
  if (o.format == "dot") {
    emit(o, out, to_dot(r));
  } else if (o.format == "text") {
    emit(o, out, to_text(r));
  } else {
    emit(o, out, dump(to_json(r, o.timing)));
  }
  if (!o.tree.empty()) {
    std::ofstream f(o.tree);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open tree output '" + o.tree + "'");
    f << to_dot(r);
  }
  switch (r.status) {
    case SearchStatus::Witness: return kWitness;
    case SearchStatus::Inconclusive: return kInconclusive;
    case SearchStatus::Clean: return kOk;
  }
  return kOk;
}

int cmd_dims(const Options& o, std::istream& in, std::ostream& out, bool hh0) {
  check_format(o, {"json", "text"});
  QPState qp = load(o, in).qp;
  if (o.length_grading) qp = with_length_grading(qp);
  DimsOptions d;
  if (!o.functional.empty()) d.functional = o.functional;
  d.threads = o.threads;
  const DimensionTable t = hh0 ? hh0_dims(qp, o.max_degree, d) : graded_dims(qp, o.max_degree, d);
  if (o.format == "text") {
    emit(o, out, to_text(t, hh0 ? "HH0" : "Jacobian algebra"));
  } else {
    emit(o, out, dump(to_json(t)));
  }
  return kOk;
}

int cmd_validate(const Options& o, std::istream& in, std::ostream& out) {
  check_format(o, {"json", "text"});
  const Loaded l = load(o, in);
  Json j;
  j["valid"] = true;
  j["vertices"] = l.qp.quiver.vertices().size();
  j["arrows"] = l.qp.quiver.arrows().size();
  j["loops"] = loops(l.qp.quiver).size();
  j["two_cycles"] = two_cycles(l.qp.quiver).size();
  const auto hom = is_homogeneous(l.qp.quiver, l.qp.potential);
  j["homogeneous"] = hom.has_value();
  j["potential_degree"] = hom ? to_json(*hom) : Json(nullptr);
  j["exact"] = l.qp.potential.exact();
  if (l.generator) {
    if (const auto* m = std::get_if<McKaySpec>(&*l.generator)) {
      j["gcd_condition"] = gcd_condition(*m);
    } else {
      j["lambda"] = to_json(validate_lambda(std::get<PreprojectiveSpec>(*l.generator)));
    }
  }
  if (o.format == "text") {
    std::ostringstream s;
    for (const auto& [k, v] : j.items()) s << k << ": " << v.dump() << "\n";
    emit(o, out, s.str());
  } else {
    emit(o, out, dump(j));
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graded quivers with potentials: mutation, reduction, obstruction, search, dimensions", "qpmut"};
  app.require_subcommand(1);
  Options o;

  auto input = [&](CLI::App* c) {
    c->add_option("input", o.input, "generator spec, QP JSON file, or - for stdin");
    c->add_option("-o,--output", o.output, "output path (default stdout)");
    c->add_option("--format", o.format, "json | text | dot")->check(CLI::IsMember({"json", "text", "dot"}));
    c->add_option("--length-cap", o.length_cap, "word length cap L (default 16, env QPMUT_LENGTH_CAP)")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  };

  auto* generate = app.add_subcommand("generate", "build a QP from a generator spec");
  input(generate);
  auto* mutate_cmd = app.add_subcommand("mutate", "mutate at a vertex and reduce");
  input(mutate_cmd);
  mutate_cmd->add_option("--vertex", o.vertex, "vertex id")->required();
  mutate_cmd->add_flag("--report", o.report, "wrap output with the mutation report");
  auto* reduce_cmd = app.add_subcommand("reduce", "splitting-theorem reduction");
  input(reduce_cmd);
  reduce_cmd->add_flag("--report", o.report, "wrap output with the reduction report");
  auto* obstruct = app.add_subcommand("obstruct", "degree obstruction certificate");
  input(obstruct);
  auto* search = app.add_subcommand("search", "breadth-first search of the mutation class");
  input(search);
  search->add_option("--depth", o.depth, "depth bound");
  search->add_option("--node-cap", o.node_cap, "maximum number of tree nodes");
  search->add_option("--time-cap", o.time_cap_ms, "time cap in milliseconds (0 = none)");
  search->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 256u));
  search->add_flag("--no-prune", o.no_prune, "do not merge isomorphic nodes");
  search->add_flag("--timing", o.timing, "include wall time in the JSON report");
  search->add_option("--tree", o.tree, "also write the mutation tree as DOT to this path");
  CLI::App* dims_cmds[2];
  dims_cmds[0] = app.add_subcommand("dims", "graded dimensions of the Jacobian algebra");
  dims_cmds[1] = app.add_subcommand("hh0", "graded dimensions of HH0 = J / [J, J]");
  for (auto* c : dims_cmds) {
    input(c);
    c->add_option("--max-degree", o.max_degree, "largest functional value");
    c->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 256u));
    c->add_option("--functional", o.functional, "positive functional on degrees")->delimiter(',');
    c->add_flag("--length-grading", o.length_grading, "regrade every arrow to degree 1");
  }
  auto* validate_cmd = app.add_subcommand("validate", "structural checks and generator conditions");
  input(validate_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kFailure;
  }

  try {
    if (generate->parsed()) return cmd_generate(o, in, out);
    if (mutate_cmd->parsed()) return cmd_mutate(o, in, out);
    if (reduce_cmd->parsed()) return cmd_reduce(o, in, out);
    if (obstruct->parsed()) return cmd_obstruct(o, in, out);
    if (search->parsed()) return cmd_search(o, in, out);
    if (dims_cmds[0]->parsed()) return cmd_dims(o, in, out, false);
    if (dims_cmds[1]->parsed()) return cmd_dims(o, in, out, true);
    if (validate_cmd->parsed()) return cmd_validate(o, in, out);
  } catch (const Error& e) {
    err << "qpmut: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    err << "qpmut: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace qpmut::cli
