#include "qpmut/canonical.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace qpmut {

namespace {

using Signature = std::vector<std::int64_t>;

// Vertices and arrows as dense indices; every invariant used for refinement
// is expressed through colours and ranks, never through ids.
struct Graph {
  std::size_t nv = 0;
  std::size_t na = 0;
  std::vector<std::size_t> src, tgt;
  std::vector<std::int64_t> degree_rank;
  std::vector<std::string> degree_text;
  struct Word {
    std::vector<std::size_t> arrows;
    std::int64_t coeff_rank;
    std::string coeff_text;
  };
  std::vector<Word> words;
  std::vector<std::vector<std::size_t>> words_of;  // per arrow, indices into words
  std::map<std::vector<std::size_t>, std::int64_t> word_set;  // least rotation -> coeff rank
  std::string header;
};

std::vector<std::size_t> least(std::vector<std::size_t> w) {
  std::vector<std::size_t> best = w;
  for (std::size_t k = 1; k < w.size(); ++k) {
    std::rotate(w.begin(), w.begin() + 1, w.end());
    if (w < best) best = w;
  }
  return best;
}

// Swapping parallel arrows a and b is an automorphism when it fixes W.
bool twins(const Graph& g, std::size_t a, std::size_t b) {
  if (g.src[a] != g.src[b] || g.tgt[a] != g.tgt[b] || g.degree_rank[a] != g.degree_rank[b]) return false;
  for (std::size_t x : {a, b}) {
    for (std::size_t k : g.words_of[x]) {
      std::vector<std::size_t> w = g.words[k].arrows;
      for (auto& y : w) y = y == a ? b : y == b ? a : y;
      auto it = g.word_set.find(least(std::move(w)));
      if (it == g.word_set.end() || it->second != g.words[k].coeff_rank) return false;
    }
  }
  return true;
}

Graph build(const QPState& qp) {
  const Quiver& q = qp.quiver;
  Graph g;
  g.nv = q.vertices().size();
  g.na = q.arrows().size();
  std::map<VertexId, std::size_t> vidx;
  for (const auto& v : q.vertices()) vidx.emplace(v.id, vidx.size());
  std::map<ArrowId, std::size_t> aidx;
  std::map<Degree, std::int64_t> degrees;
  for (const auto& a : q.arrows()) {
    aidx.emplace(a.id, aidx.size());
    degrees.emplace(a.degree, 0);
  }
  std::int64_t k = 0;
  for (auto& [d, r] : degrees) r = k++;
  for (const auto& a : q.arrows()) {
    g.src.push_back(vidx.at(a.source));
    g.tgt.push_back(vidx.at(a.target));
    g.degree_rank.push_back(degrees.at(a.degree));
    g.degree_text.push_back(a.degree.str());
  }
  std::map<Rational, std::int64_t> coeffs;
  for (const auto& [w, c] : qp.potential.terms()) coeffs.emplace(c, 0);
  k = 0;
  for (auto& [c, r] : coeffs) r = k++;
  for (const auto& [w, c] : qp.potential.terms()) {
    Graph::Word word;
    for (ArrowId a : w.arrows()) word.arrows.push_back(aidx.at(a));
    word.coeff_rank = coeffs.at(c);
    word.coeff_text = to_string(c);
    g.words.push_back(std::move(word));
  }
  g.words_of.resize(g.na);
  for (std::size_t k = 0; k < g.words.size(); ++k) {
    for (std::size_t a : g.words[k].arrows)
      if (g.words_of[a].empty() || g.words_of[a].back() != k) g.words_of[a].push_back(k);
    g.word_set.emplace(least(g.words[k].arrows), g.words[k].coeff_rank);
  }
  std::ostringstream h;
  h << "r" << q.grading().potential_degree.str() << ";v" << g.nv << ";a" << g.na << ";";
  g.header = h.str();
  return g;
}

// Colours: [0, nv) for vertices, [nv, nv + na) for arrows, in one array so
// cells of both kinds refine together.
using Colouring = std::vector<std::int64_t>;

std::size_t count_cells(const Colouring& c) {
  std::vector<std::int64_t> s(c);
  std::sort(s.begin(), s.end());
  return static_cast<std::size_t>(std::unique(s.begin(), s.end()) - s.begin());
}

void recolour(Colouring& c, const std::vector<Signature>& sigs) {
  std::map<Signature, std::int64_t> order;
  for (const auto& s : sigs) order.emplace(s, 0);
  std::int64_t k = 0;
  for (auto& [s, r] : order) r = k++;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = order.at(sigs[i]);
}

void refine(const Graph& g, Colouring& c) {
  std::size_t cells = count_cells(c);
  for (;;) {
    std::vector<Signature> sigs(g.nv + g.na);
    for (std::size_t i = 0; i < sigs.size(); ++i) sigs[i].push_back(c[i]);
    std::vector<std::vector<Signature>> vert_nb(g.nv), arrow_words(g.na);
    for (std::size_t a = 0; a < g.na; ++a) {
      const auto ca = c[g.nv + a];
      vert_nb[g.src[a]].push_back({0, ca, c[g.tgt[a]]});
      vert_nb[g.tgt[a]].push_back({1, ca, c[g.src[a]]});
      sigs[g.nv + a].push_back(c[g.src[a]]);
      sigs[g.nv + a].push_back(c[g.tgt[a]]);
    }
    for (const auto& w : g.words) {
      const std::size_t n = w.arrows.size();
      for (std::size_t j = 0; j < n; ++j) {
        Signature s{w.coeff_rank};
        for (std::size_t k = 0; k < n; ++k) s.push_back(c[g.nv + w.arrows[(j + k) % n]]);
        arrow_words[w.arrows[j]].push_back(std::move(s));
      }
    }
    auto append = [](Signature& out, std::vector<Signature>& items) {
      std::sort(items.begin(), items.end());
      for (const auto& item : items) {
        out.push_back(static_cast<std::int64_t>(item.size()));
        out.insert(out.end(), item.begin(), item.end());
      }
    };
    for (std::size_t v = 0; v < g.nv; ++v) append(sigs[v], vert_nb[v]);
    for (std::size_t a = 0; a < g.na; ++a) append(sigs[g.nv + a], arrow_words[a]);
    recolour(c, sigs);
    const std::size_t next = count_cells(c);
    if (next == cells) return;
    cells = next;
  }
}

std::string serialize(const Graph& g, const Colouring& c) {
  // Discrete colouring: vertex colours are 0..nv-1, arrow colours nv..nv+na-1.
  std::vector<std::size_t> arrow_at(g.na);
  for (std::size_t a = 0; a < g.na; ++a) arrow_at[static_cast<std::size_t>(c[g.nv + a]) - g.nv] = a;
  std::string out = g.header;
  for (std::size_t k = 0; k < g.na; ++k) {
    const std::size_t a = arrow_at[k];
    out += std::to_string(c[g.src[a]]) + ">" + std::to_string(c[g.tgt[a]]) + g.degree_text[a] + ",";
  }
  out += ";";
  std::vector<std::string> terms;
  for (const auto& w : g.words) {
    std::vector<ArrowId> relabeled;
    for (std::size_t a : w.arrows) relabeled.push_back(static_cast<ArrowId>(c[g.nv + a] - static_cast<std::int64_t>(g.nv)));
    std::string t = w.coeff_text + ":";
    const CyclicWord cw = CyclicWord::from_closed(std::move(relabeled));
    for (ArrowId a : cw.arrows()) t += std::to_string(a) + ".";
    terms.push_back(std::move(t));
  }
  std::sort(terms.begin(), terms.end());
  for (const auto& t : terms) out += t + ";";
  return out;
}

struct Searcher {
  const Graph& g;
  std::size_t leaf_cap;
  std::size_t leaves = 0;
  std::optional<std::string> best;
  bool complete = true;

  void run(Colouring c) {
    refine(g, c);
    // Always finish one leaf so the key stays a faithful serialization.
    if (leaves >= leaf_cap && best) {
      complete = false;
      return;
    }
    // First smallest non-singleton cell.
    std::map<std::int64_t, std::vector<std::size_t>> cells;
    for (std::size_t i = 0; i < c.size(); ++i) cells[c[i]].push_back(i);
    const std::vector<std::size_t>* target = nullptr;
    for (const auto& [colour, members] : cells) {
      if (members.size() > 1 && (!target || members.size() < target->size())) target = &members;
    }
    if (!target) {
      ++leaves;
      std::string s = serialize(g, c);
      if (!best || s < *best) best = std::move(s);
      return;
    }
    const std::size_t first = target->front();
    for (std::size_t x : *target) {
      // A twin of the first arrow gives the same leaves up to that swap.
      if (x != first && first >= g.nv && twins(g, first - g.nv, x - g.nv)) continue;
      Colouring next(c.size());
      for (std::size_t i = 0; i < c.size(); ++i) next[i] = 2 * c[i] + (i == x ? 0 : 1);
      run(std::move(next));
      if (!complete) return;
    }
  }
};

}  // namespace

CanonicalKey canonical_key(const QPState& qp, std::size_t leaf_cap) {
  const Graph g = build(qp);
  Colouring c(g.nv + g.na, 0);
  // Vertices come before arrows in colour order; arrows start split by degree.
  for (std::size_t a = 0; a < g.na; ++a) c[g.nv + a] = 1 + g.degree_rank[a];
  Searcher s{g, std::max<std::size_t>(leaf_cap, 1), 0, std::nullopt, true};
  s.run(std::move(c));
  return CanonicalKey{s.best.value_or(g.header), s.complete};
}

}  // namespace qpmut
