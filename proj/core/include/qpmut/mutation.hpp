#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpmut/potential.hpp"

namespace qpmut {

struct AddedArrow {
  ArrowId id;
  std::string name;
  VertexId source;
  VertexId target;
  Degree degree;
  ArrowId in_arrow;   // a : u -> i
  ArrowId out_arrow;  // b : i -> v
};

struct ReversedArrow {
  ArrowId id;
  std::string old_name;
  std::string new_name;
  VertexId source;  // after reversal
  VertexId target;
  Degree old_degree;
  Degree new_degree;
};

/// Quadratic part between two vertices (or the loops at one vertex when
/// first == second). For u != v the matrix rows are the arrows u -> v and the
/// columns the arrows v -> u; for loops it is the symmetric Gram matrix.
struct TrivialBlock {
  VertexId first;
  VertexId second;
  std::vector<ArrowId> row_arrows;
  std::vector<ArrowId> col_arrows;
  std::vector<std::vector<Rational>> matrix;
  std::size_t rank = 0;
  std::vector<ArrowId> deleted;
};

/// One substitution step of the reduction, logged for export.
struct SubstitutionStep {
  ArrowId arrow;
  PathSum replacement;  // arrow -> replacement
};

struct MutationReport {
  std::optional<VertexId> vertex;
  std::vector<AddedArrow> arrows_added;
  std::vector<ReversedArrow> arrows_reversed;
  std::vector<TrivialBlock> trivial_blocks;
  std::size_t substitution_rounds = 0;
  std::vector<SubstitutionStep> substitution_log;
  bool truncated_reduction = false;
  bool exact = true;

  std::size_t deleted_arrow_count() const;
};

struct ReduceOptions {
  /// Phase-2 rounds per trivial pair before giving up with a truncated result.
  std::size_t round_cap = 64;
  /// Record every substitution in the report.
  bool log_substitutions = false;
};

/// DWZ premutation at `i`: composites [ab] for every a: u -> i, b: i -> v,
/// reversal of the arrows at i, and W' = [W] + sum (composite, b*, a*).
/// Throws Error(VertexAbsent) or Error(MutationUndefined).
std::pair<QPState, MutationReport> premutate(const QPState& qp, VertexId i);

/// Splitting-theorem reduction: exact linear elimination of the quadratic
/// part followed by iterated higher-order substitution.
std::pair<QPState, MutationReport> reduce(const QPState& qp, const ReduceOptions& options = {});

/// reduce o premutate with merged report.
std::pair<QPState, MutationReport> mutate(const QPState& qp, VertexId i,
                                          const ReduceOptions& options = {});

/// Replays a mutation sequence from `root`.
QPState replay(const QPState& root, const std::vector<VertexId>& sequence,
               const ReduceOptions& options = {});

struct ObstructionCertificate {
  VertexId u;
  VertexId v;
  ArrowId a;  // u -> v
  ArrowId b;  // v -> u
  Degree degree_a;
  Degree degree_b;
  Degree degree_sum;
  Degree potential_degree;
  std::vector<std::pair<ArrowId, ArrowId>> matching;
};

/// Degree obstruction: per vertex pair, delete a maximum matching of opposite
/// arrows whose degrees sum to r; a survivor on both sides certifies a
/// two-cycle in the reduced quiver. Throws Error(NotHomogeneous) when W is
/// not homogeneous of the grading's degree.
std::optional<ObstructionCertificate> degree_obstruction(const QPState& qp);

/// Regrading that shifts every arrow by shift * (1[source = v] - 1[target = v]).
Degree gauge_shift(const Arrow& arrow, VertexId v, const Degree& shift);

}  // namespace qpmut
