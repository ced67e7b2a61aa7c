#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "qpmut/rational.hpp"

namespace qpmut {

using SparseRow = std::map<std::size_t, Rational>;

/// Incremental row echelon form over Q. Rows are reduced against the stored
/// pivots on insertion; `rank()` is the dimension of the span.
class RowEchelon {
 public:
  /// Returns true if `row` was independent of the rows inserted so far.
  bool insert(SparseRow row);
  std::size_t rank() const { return pivots_.size(); }

 private:
  // pivot column -> normalized row with leading coefficient 1
  std::map<std::size_t, SparseRow> pivots_;
};

std::size_t rank(std::vector<SparseRow> rows);

/// Rank of a dense matrix.
std::size_t rank(const std::vector<std::vector<Rational>>& matrix);

}  // namespace qpmut
