#pragma once

#include <cstddef>
#include <string>

#include "qpmut/potential.hpp"

namespace qpmut {

/// Opaque isomorphism key. Equal keys imply the QPs are related by a
/// relabeling of vertices and arrows that preserves endpoints, degrees and
/// potential coefficients.
struct CanonicalKey {
  std::string form;
  /// True when the backtracking search ran to completion, so isomorphic QPs
  /// are guaranteed to share the key.
  bool complete = true;

  friend bool operator==(const CanonicalKey& a, const CanonicalKey& b) { return a.form == b.form; }
  friend auto operator<=>(const CanonicalKey& a, const CanonicalKey& b) { return a.form <=> b.form; }
};

/// Colour refinement on vertices and arrows, then individualization over the
/// stabilized cells, keeping the lexicographically least serialization.
/// `leaf_cap` bounds the number of leaves visited.
CanonicalKey canonical_key(const QPState& qp, std::size_t leaf_cap = 50000);

}  // namespace qpmut
