#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "qpmut/quiver.hpp"
#include "qpmut/rational.hpp"

namespace qpmut {

/// Length cap for potentials; nullopt means unbounded.
using LengthCap = std::optional<std::size_t>;

inline constexpr std::size_t kDefaultLengthCap = 16;

/// kDefaultLengthCap unless QPMUT_LENGTH_CAP holds an integer >= 2.
std::size_t default_length_cap();

/// Closed path up to rotation, stored as its lexicographically least rotation.
class CyclicWord {
 public:
  CyclicWord() = default;

  /// Rotation-minimal representative of `arrows`; the caller guarantees the
  /// sequence is closed.
  static CyclicWord from_closed(std::vector<ArrowId> arrows);

  const std::vector<ArrowId>& arrows() const { return arrows_; }
  std::size_t length() const { return arrows_.size(); }
  bool contains(ArrowId a) const;
  std::size_t count(ArrowId a) const;

  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;
  friend auto operator<=>(const CyclicWord&, const CyclicWord&) = default;

 private:
  std::vector<ArrowId> arrows_;
};

/// Index of the least rotation of `word` (first one on ties).
std::size_t least_rotation(std::span<const ArrowId> word);

/// Throws Error(NotACycle) unless `path` is closed and nonempty.
CyclicWord canonical_cycle(const Quiver& quiver, const Path& path);

/// Finite linear combination of paths with rational coefficients.
class PathSum {
 public:
  using Terms = std::map<Path, Rational>;

  PathSum() = default;
  static PathSum single(Path path, Rational coeff = 1);

  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coefficient(const Path& path) const;

  void add(const Path& path, const Rational& coeff);
  void add(const PathSum& other, const Rational& scale = 1);
  PathSum scaled(const Rational& factor) const;

  friend bool operator==(const PathSum&, const PathSum&) = default;

 private:
  Terms terms_;
};

/// Finite sum of cyclic words of length >= 2 with nonzero rational
/// coefficients, plus truncation metadata.
class Potential {
 public:
  using Terms = std::map<CyclicWord, Rational>;

  Potential() = default;
  explicit Potential(LengthCap cap) : length_cap_(cap) {}

  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coefficient(const CyclicWord& word) const;

  LengthCap length_cap() const { return length_cap_; }
  void set_length_cap(LengthCap cap) { length_cap_ = cap; }
  bool exact() const { return exact_; }
  void mark_inexact() { exact_ = false; }
  void set_exact(bool exact) { exact_ = exact; }

  /// Adds c * word. Words longer than the cap are discarded and clear the
  /// exact flag; zero sums are erased. Throws on words of length < 2.
  void add(const CyclicWord& word, const Rational& coeff);
  void set(const CyclicWord& word, const Rational& coeff);
  void erase(const CyclicWord& word) { terms_.erase(word); }

  Potential scaled(const Rational& factor) const;
  /// c * this + other; caps and exactness combine conservatively.
  Potential combined(const Rational& c, const Potential& other) const;

  friend bool operator==(const Potential&, const Potential&) = default;

 private:
  Terms terms_;
  LengthCap length_cap_ = kDefaultLengthCap;
  bool exact_ = true;
};

/// The unit that mutation transforms. `faithful_horizon` bounds the word
/// lengths that are guaranteed exact; nullopt means every length is exact.
struct QPState {
  Quiver quiver;
  Potential potential;
  std::optional<std::size_t> faithful_horizon;

  friend bool operator==(const QPState&, const QPState&) = default;
};

/// Checks every structural invariant (arrows of W in the quiver, closed words,
/// length >= 2, horizon consistent with exactness). Throws on violation.
void validate(const QPState& qp);

/// Common degree of all terms; nullopt when degrees differ or W = 0.
std::optional<Degree> is_homogeneous(const Quiver& quiver, const Potential& w);

/// Sum over occurrences of `a` of the word read cyclically from the position
/// after the deleted occurrence; every path runs target(a) -> source(a).
PathSum cyclic_derivative(const Quiver& quiver, const Potential& w, ArrowId a);

/// Arrow -> replacement. Arrows absent from the map are fixed.
using Substitution = std::map<ArrowId, PathSum>;

/// Multilinear expansion of every word under `sigma`, recanonicalized.
/// Words longer than `cap` are dropped and clear the exact flag. Throws
/// Error(EndpointMismatch) if some replacement path does not run
/// source(a) -> target(a).
Potential substitute(const Quiver& quiver, const Potential& w, const Substitution& sigma,
                     LengthCap cap);

}  // namespace qpmut
