#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "capsdp/sdp_problem.hpp"

namespace capsdp {

enum class SolveStatus { kOptimal, kNearOptimal, kInfeasible, kNumericalFailure };

std::string status_name(SolveStatus status);

struct SolverConfig {
  double tolerance = 1e-8;
  int max_iterations = 100;
  std::string backend = "ipm";
  // Echo iteration log lines to stderr while solving.
  bool verbose = false;

  void validate() const;
};

struct SolveResiduals {
  // max |lhs - rhs| over the original rows, in the rows' own units.
  double primal_eq = 0;
  // Relative dual residual ||C - Z - A^T y|| / (1 + ||C||) of the reduced problem.
  double dual_eq = 0;
  double min_eigenvalue = 0;
  // |primal - dual| / (1 + |primal| + |dual|).
  double duality_gap = 0;
};

struct SdpSolution {
  std::vector<Eigen::MatrixXd> block_values;
  std::vector<double> scalars;
  double objective_value = 0;
  double dual_objective = 0;
  SolveStatus status = SolveStatus::kNumericalFailure;
  SolveResiduals residuals;
  int iterations = 0;
  std::string backend;
  std::string message;
  std::vector<std::string> log;

  bool usable() const {
    return status == SolveStatus::kOptimal || status == SolveStatus::kNearOptimal;
  }
};

// ---------------------------------------------------------------------------
// Standard form handed to backends: minimize C . X subject to A_i . X = b_i,
// X block-diagonal PSD. Free scalars and redundant rows are removed exactly
// before conversion to floating point.

struct SparseSym {
  std::vector<int> row;
  std::vector<int> col;  // row <= col, symmetric semantics as in MatrixTerm
  std::vector<double> val;
  std::size_t nnz() const { return val.size(); }
};

struct BlockEntries {
  int block = 0;
  SparseSym entries;
};

struct StandardForm {
  std::vector<int> block_sizes;
  std::vector<std::vector<BlockEntries>> a;  // per constraint
  Eigen::VectorXd b;
  std::vector<SparseSym> c;  // per block
  int num_constraints() const { return static_cast<int>(a.size()); }
};

struct StandardSolution {
  std::vector<Eigen::MatrixXd> x;
  std::vector<Eigen::MatrixXd> z;
  Eigen::VectorXd y;
  double primal_objective = 0;
  double dual_objective = 0;
  double rel_primal = 0;
  double rel_dual = 0;
  double rel_gap = 0;
  SolveStatus status = SolveStatus::kNumericalFailure;
  int iterations = 0;
  std::string message;
  std::vector<std::string> log;
};

using Backend = std::function<StandardSolution(const StandardForm&, const SolverConfig&)>;

void register_backend(const std::string& name, Backend backend);
std::vector<std::string> registered_backends();

/// Nesterov-Todd primal-dual predictor-corrector method with a dense Schur
/// complement.
StandardSolution solve_reference_ipm(const StandardForm& form, const SolverConfig& config);

/// Exact reduction of an SdpProblem to standard form.
struct Reduction {
  StandardForm form;
  std::vector<int> kept_rows;  // indices of original constraints kept
  std::vector<double> row_scale;
  // Eliminated free scalars, in elimination order: var = (rhs - rest) / coef
  struct Pivot {
    int var = 0;
    int row = 0;  // -1 when the variable appears nowhere
    LinearForm form;  // the pivot row after earlier substitutions
    Rational rhs;
  };
  std::vector<Pivot> pivots;
  Rational objective_offset;
  bool infeasible = false;
  bool unbounded = false;
  std::string message;
};

Reduction reduce(const SdpProblem& problem);

/// lhs . (X, scalars) evaluated in double precision.
double evaluate_form(const LinearForm& form, const std::vector<Eigen::MatrixXd>& blocks,
                     const std::vector<double>& scalars);

SdpSolution solve(const SdpProblem& problem, const SolverConfig& config = {});

nlohmann::json to_json(const SdpSolution& solution, bool include_log = false);

}  // namespace capsdp
