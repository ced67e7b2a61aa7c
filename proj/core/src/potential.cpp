#include "qpmut/potential.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>

#include "qpmut/error.hpp"

namespace qpmut {

std::size_t default_length_cap() {
  const char* env = std::getenv("QPMUT_LENGTH_CAP");
  if (!env) return kDefaultLengthCap;
  std::size_t cap = 0;
  const char* end = env + std::strlen(env);
  auto [ptr, ec] = std::from_chars(env, end, cap);
  if (ec != std::errc() || ptr != end || cap < 2) return kDefaultLengthCap;
  return cap;
}

std::size_t least_rotation(std::span<const ArrowId> s) {
  const std::size_t n = s.size();
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    const ArrowId x = s[(i + k) % n];
    const ArrowId y = s[(j + k) % n];
    if (x == y) {
      ++k;
      continue;
    }
    if (x > y)
      i += k + 1;
    else
      j += k + 1;
    if (i == j) ++j;
    k = 0;
  }
  return std::min(i, j);
}

CyclicWord CyclicWord::from_closed(std::vector<ArrowId> arrows) {
  CyclicWord w;
  if (arrows.size() > 1) {
    const std::size_t r = least_rotation(arrows);
    std::rotate(arrows.begin(), arrows.begin() + static_cast<std::ptrdiff_t>(r), arrows.end());
  }
  w.arrows_ = std::move(arrows);
  return w;
}

bool CyclicWord::contains(ArrowId a) const {
  return std::find(arrows_.begin(), arrows_.end(), a) != arrows_.end();
}

std::size_t CyclicWord::count(ArrowId a) const {
  return static_cast<std::size_t>(std::count(arrows_.begin(), arrows_.end(), a));
}

CyclicWord canonical_cycle(const Quiver& quiver, const Path& path) {
  if (path.empty()) throw Error(ErrorKind::NotACycle, "not a cycle: empty path");
  check_path(quiver, path);
  if (!is_closed(quiver, path)) throw Error(ErrorKind::NotACycle, "not a cycle");
  return CyclicWord::from_closed(path.arrows);
}

// ---------------------------------------------------------------- PathSum

PathSum PathSum::single(Path path, Rational coeff) {
  PathSum s;
  s.add(path, coeff);
  return s;
}

Rational PathSum::coefficient(const Path& path) const {
  auto it = terms_.find(path);
  return it == terms_.end() ? Rational(0) : it->second;
}

void PathSum::add(const Path& path, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(path, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

void PathSum::add(const PathSum& other, const Rational& scale) {
  for (const auto& [p, c] : other.terms_) add(p, c * scale);
}

PathSum PathSum::scaled(const Rational& factor) const {
  PathSum out;
  if (factor == 0) return out;
  out.terms_ = terms_;
  for (auto& [p, c] : out.terms_) c *= factor;
  return out;
}

// -------------------------------------------------------------- Potential

Rational Potential::coefficient(const CyclicWord& word) const {
  auto it = terms_.find(word);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Potential::add(const CyclicWord& word, const Rational& coeff) {
  if (word.length() < 2) {
    throw Error(ErrorKind::InvalidArgument, "potential words must have length >= 2");
  }
  if (coeff == 0) return;
  if (length_cap_ && word.length() > *length_cap_) {
    exact_ = false;
    return;
  }
  auto [it, inserted] = terms_.try_emplace(word, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

void Potential::set(const CyclicWord& word, const Rational& coeff) {
  terms_.erase(word);
  add(word, coeff);
}

Potential Potential::scaled(const Rational& factor) const {
  Potential out(length_cap_);
  out.exact_ = exact_;
  if (factor == 0) return out;
  out.terms_ = terms_;
  for (auto& [w, c] : out.terms_) c *= factor;
  return out;
}

Potential Potential::combined(const Rational& c, const Potential& other) const {
  Potential out = scaled(c);
  if (!other.length_cap_) {
    // keep this cap
  } else if (!out.length_cap_ || *other.length_cap_ < *out.length_cap_) {
    out.length_cap_ = other.length_cap_;
  }
  out.exact_ = exact_ && other.exact_;
  for (const auto& [w, k] : other.terms_) out.add(w, k);
  return out;
}

// ------------------------------------------------------------ operations

void validate(const QPState& qp) {
  const Quiver& q = qp.quiver;
  for (const auto& a : q.arrows()) {
    if (!q.has_vertex(a.source) || !q.has_vertex(a.target)) {
      throw Error(ErrorKind::VertexAbsent, "arrow '" + a.name + "' has a dangling endpoint");
    }
  }
  for (const auto& [w, c] : qp.potential.terms()) {
    if (w.length() < 2) throw Error(ErrorKind::InvalidArgument, "potential word of length < 2");
    if (c == 0) throw Error(ErrorKind::InvalidArgument, "zero coefficient stored");
    const Path p{w.arrows()};
    check_path(q, p);
    if (!is_closed(q, p)) throw Error(ErrorKind::NotACycle, "potential word is not a cycle");
    if (CyclicWord::from_closed(w.arrows()) != w) {
      throw Error(ErrorKind::InvalidArgument, "potential word not in canonical rotation");
    }
    if (qp.potential.length_cap() && w.length() > *qp.potential.length_cap()) {
      throw Error(ErrorKind::InvalidArgument, "potential word exceeds the length cap");
    }
  }
  if (qp.potential.exact() != !qp.faithful_horizon.has_value()) {
    throw Error(ErrorKind::InvalidArgument, "faithful horizon inconsistent with the exact flag");
  }
  if (qp.faithful_horizon && qp.potential.length_cap() && *qp.faithful_horizon > *qp.potential.length_cap()) {
    throw Error(ErrorKind::InvalidArgument, "faithful horizon exceeds the length cap");
  }
}

std::optional<Degree> is_homogeneous(const Quiver& quiver, const Potential& w) {
  std::optional<Degree> common;
  for (const auto& [word, c] : w.terms()) {
    Degree d = path_degree(quiver, word.arrows());
    if (!common) {
      common = std::move(d);
    } else if (*common != d) {
      return std::nullopt;
    }
  }
  return common;
}

PathSum cyclic_derivative(const Quiver& quiver, const Potential& w, ArrowId a) {
  quiver.arrow(a);
  PathSum out;
  for (const auto& [word, c] : w.terms()) {
    const auto& s = word.arrows();
    const std::size_t n = s.size();
    for (std::size_t j = 0; j < n; ++j) {
      if (s[j] != a) continue;
      Path p;
      p.arrows.reserve(n - 1);
      for (std::size_t k = 1; k < n; ++k) p.arrows.push_back(s[(j + k) % n]);
      out.add(p, c);
    }
  }
  return out;
}

namespace {

struct Option {
  std::vector<ArrowId> arrows;
  Rational coeff;
};

struct Expander {
  const std::vector<const std::vector<Option>*>& choices;
  const std::vector<std::size_t>& min_rest;
  LengthCap cap;
  Potential& out;
  std::vector<ArrowId> buffer;

  void run(std::size_t pos, const Rational& coeff) {
    if (pos == choices.size()) {
      out.add(CyclicWord::from_closed(buffer), coeff);
      return;
    }
    if (cap && buffer.size() + min_rest[pos] > *cap) {
      out.mark_inexact();
      return;
    }
    for (const Option& opt : *choices[pos]) {
      const std::size_t mark = buffer.size();
      buffer.insert(buffer.end(), opt.arrows.begin(), opt.arrows.end());
      run(pos + 1, coeff * opt.coeff);
      buffer.resize(mark);
    }
  }
};

}  // namespace

Potential substitute(const Quiver& quiver, const Potential& w, const Substitution& sigma, LengthCap cap) {
  std::map<ArrowId, std::vector<Option>> options;
  std::map<ArrowId, std::size_t> min_len;
  for (const auto& [a, sum] : sigma) {
    const Arrow& arrow = quiver.arrow(a);
    auto& opts = options[a];
    std::size_t shortest = SIZE_MAX;
    for (const auto& [p, c] : sum.terms()) {
      if (p.empty()) throw Error(ErrorKind::EndpointMismatch, "substitution by an empty path");
      check_path(quiver, p);
      if (path_source(quiver, p) != arrow.source || path_target(quiver, p) != arrow.target) {
        throw Error(ErrorKind::EndpointMismatch,
                    "substitution for arrow '" + arrow.name + "' does not match its endpoints");
      }
      opts.push_back(Option{p.arrows, c});
      shortest = std::min(shortest, p.length());
    }
    min_len[a] = opts.empty() ? 0 : shortest;
  }

  Potential out(cap);
  out.set_exact(w.exact());
  std::vector<std::vector<Option>> singles;
  for (const auto& [word, c] : w.terms()) {
    const auto& s = word.arrows();
    bool touched = false;
    for (ArrowId a : s) touched = touched || options.contains(a);
    if (!touched) {
      out.add(word, c);
      continue;
    }
    singles.assign(s.size(), {});
    std::vector<const std::vector<Option>*> choices(s.size());
    std::vector<std::size_t> min_rest(s.size() + 1, 0);
    bool vanishes = false;
    for (std::size_t k = 0; k < s.size(); ++k) {
      auto it = options.find(s[k]);
      if (it == options.end()) {
        singles[k].push_back(Option{{s[k]}, Rational(1)});
        choices[k] = &singles[k];
      } else {
        choices[k] = &it->second;
        vanishes = vanishes || it->second.empty();
      }
    }
    if (vanishes) continue;
    for (std::size_t k = s.size(); k-- > 0;) {
      auto it = min_len.find(s[k]);
      min_rest[k] = min_rest[k + 1] + (it == min_len.end() ? 1 : it->second);
    }
    Expander ex{choices, min_rest, cap, out, {}};
    ex.buffer.reserve(min_rest[0]);
    ex.run(0, c);
  }
  return out;
}

}  // namespace qpmut
