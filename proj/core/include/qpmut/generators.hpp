#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qpmut/potential.hpp"

namespace qpmut {

/// Cyclic group Z/n acting on a three dimensional space with the given
/// weights. The weights must sum to zero mod n.
struct McKaySpec {
  int n = 0;
  std::array<int, 3> weights{};
};

/// McKay quiver of Z/n with arrows x{k}@{l} : l -> l + a_k of degree e_k in
/// the Z^3 monomial grading, and the signed sum of its index-distinct
/// three-cycles (sign + on cyclic rotations of (1,2,3)).
QPState mckay_cyclic(const McKaySpec& spec, LengthCap cap = kDefaultLengthCap);

/// Every weight coprime to n.
bool gcd_condition(const McKaySpec& spec);

enum class DynkinFamily { A, D, E };

/// Extended Dynkin diagram with vertex 0 the extending vertex.
struct ExtendedDynkin {
  DynkinFamily family = DynkinFamily::A;
  int n = 0;
  std::string label;                           // "A~2", "D~4", "E~6"
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;      // oriented first -> second
  std::vector<int> delta;                      // indecomposable imaginary root
};

/// Throws Error(InvalidArgument) for an unknown label.
ExtendedDynkin extended_dynkin(std::string_view label);

struct PreprojectiveSpec {
  std::string type;
  std::vector<Rational> lambda;
};

/// Double quiver of the extended Dynkin graph plus a loop t{i} per vertex,
/// Z-graded with doubled arrows in degree 1, loops in degree 2, r = 4, and
/// W = (sum t_i)(sum [a, a*]) - sum (1/2) lambda_i t_i^2.
QPState deformed_preprojective(const PreprojectiveSpec& spec, LengthCap cap = kDefaultLengthCap);

/// Reduces away the loops of a deformed preprojective QP. Throws
/// Error(LoopsNotRemovable) when some loop square has coefficient zero.
QPState eliminate_loops(const QPState& qp);

/// Closed form sum_i (1/lambda_i) e_i [a,a*][b,b*] on the double quiver arrows
/// of `qp` (arrow ids as produced by deformed_preprojective).
Potential preprojective_closed_form(const PreprojectiveSpec& spec, const Quiver& quiver);

struct LambdaReport {
  std::string type;
  Rational delta_dot_lambda;
  bool delta_condition = false;          // delta . lambda == 0
  bool lambda_nonzero = false;           // every lambda_i != 0
  std::size_t dynkin_roots_checked = 0;
  std::vector<std::vector<int>> failing_roots;  // alpha with alpha . lambda == 0
  bool dynkin_condition = false;
  bool all_hold() const { return delta_condition && dynkin_condition; }
};

LambdaReport validate_lambda(const PreprojectiveSpec& spec);

/// Positive roots of the Dynkin part (vertex 0 removed), as full-length
/// vectors with alpha_0 = 0, by closure of simple roots under reflections.
std::vector<std::vector<int>> dynkin_positive_roots(const ExtendedDynkin& diagram);

/// `mckay:n=5,w=1,2,2` or `preproj:type=A~2,lambda=1,1,-2`.
using GeneratorSpec = std::variant<McKaySpec, PreprojectiveSpec>;
GeneratorSpec parse_generator_spec(std::string_view text);
bool looks_like_generator_spec(std::string_view text);
QPState generate(const GeneratorSpec& spec, LengthCap cap = kDefaultLengthCap);

}  // namespace qpmut
