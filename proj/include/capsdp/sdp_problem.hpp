#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "capsdp/rational.hpp"

namespace capsdp {

struct BlockSpec {
  std::string label;
  int size = 0;
  bool operator==(const BlockSpec&) const = default;
};

// Coefficient of the symmetric entry (row, col) of a PSD block, row <= col.
// The term denotes the symmetric matrix A with A(row,col) = A(col,row) =
// coef, so off-diagonal terms contribute 2 * coef * X(row, col) to A . X.
struct MatrixTerm {
  int block = 0;
  int row = 0;
  int col = 0;
  Rational coef;
  bool operator==(const MatrixTerm&) const = default;
};

struct ScalarTerm {
  int var = 0;
  Rational coef;
  bool operator==(const ScalarTerm&) const = default;
};

struct LinearForm {
  std::vector<MatrixTerm> matrix_terms;
  std::vector<ScalarTerm> scalar_terms;
  bool empty() const { return matrix_terms.empty() && scalar_terms.empty(); }
  bool operator==(const LinearForm&) const = default;
};

struct EqualityConstraint {
  LinearForm lhs;
  Rational rhs;
  // Which identity the row belongs to ("diagonal" / "offdiagonal" for cap
  // problems) and a human readable label of the matched monomial.
  std::string group;
  std::string tag;
};

/// minimize objective . (X, scalars) + objective_offset
/// subject to lhs_i . (X, scalars) = rhs_i, every block X_b PSD, scalars free.
struct SdpProblem {
  std::vector<BlockSpec> blocks;
  std::vector<std::string> scalar_vars;
  LinearForm objective;
  Rational objective_offset;
  std::vector<EqualityConstraint> constraints;

  int find_block(const std::string& label) const;
  /// Throws std::invalid_argument when a term references an undeclared block
  /// or entry, or a block has nonpositive size.
  void validate() const;
};

nlohmann::json to_json(const SdpProblem& problem);

}  // namespace capsdp
