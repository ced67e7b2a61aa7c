#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "qpmut/potential.hpp"

namespace qpmut {

/// Dimension per degree vector, for all degrees whose value under the positive
/// functional is at most `max_degree`.
struct DimensionTable {
  std::vector<std::int64_t> functional;
  std::int64_t max_degree = 0;
  /// Functional values up to which the entries are guaranteed exact.
  std::int64_t exact_up_to = 0;
  std::map<Degree, std::int64_t> dims;

  /// Sums over degree vectors with the same functional value, 0..max_degree.
  std::vector<std::int64_t> totals() const;
  std::int64_t at(const Degree& d) const;
};

struct DimsOptions {
  /// Defaults to the all-ones functional of the grading rank.
  std::optional<std::vector<std::int64_t>> functional;
  unsigned threads = 1;
};

/// Graded dimensions of the Jacobian algebra: paths of each degree modulo the
/// span of p * d_a W * q, by exact elimination. Throws
/// Error(NonPositiveGrading) when some arrow is not positive under the
/// functional and Error(NotHomogeneous) for an inhomogeneous potential.
DimensionTable graded_dims(const QPState& qp, std::int64_t max_degree, const DimsOptions& options = {});

/// Graded dimensions of HH_0 = Lambda / [Lambda, Lambda]: cyclic words of each
/// degree modulo the cyclic images of the relations.
DimensionTable hh0_dims(const QPState& qp, std::int64_t max_degree, const DimsOptions& options = {});

/// Same quiver and potential with every arrow in degree 1 (rank-1 grading);
/// r becomes the common word length when W is homogeneous in length.
QPState with_length_grading(const QPState& qp);

}  // namespace qpmut
