#include "capsdp/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace capsdp {

std::string status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kNearOptimal: return "near-optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kNumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(tolerance > 0)) throw std::invalid_argument("SolverConfig: tolerance must be positive");
  if (max_iterations <= 0) throw std::invalid_argument("SolverConfig: max_iterations must be positive");
}

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, Backend>& registry() {
  static std::map<std::string, Backend> r{{"ipm", solve_reference_ipm}};
  return r;
}

// Sparse exact row over global column indices. Matrix entries of block b at
// (i, j) map to offset[b] + packed(i, j); scalars follow all blocks.
using SparseRow = std::map<long, Rational>;

struct ColumnMap {
  std::vector<long> offset;
  long scalar_base = 0;

  explicit ColumnMap(const SdpProblem& p) {
    long at = 0;
    for (const auto& b : p.blocks) {
      offset.push_back(at);
      at += static_cast<long>(b.size) * (b.size + 1) / 2;
    }
    scalar_base = at;
  }
  // column-major packed upper triangle
  long matrix(const MatrixTerm& t) const {
    return offset[t.block] + static_cast<long>(t.col) * (t.col + 1) / 2 + t.row;
  }
  long scalar(int var) const { return scalar_base + var; }
};

SparseRow to_row(const LinearForm& form, const ColumnMap& cols) {
  SparseRow row;
  for (const auto& t : form.matrix_terms) row[cols.matrix(t)] += t.coef;
  for (const auto& t : form.scalar_terms) row[cols.scalar(t.var)] += t.coef;
  for (auto it = row.begin(); it != row.end();) it = sgn(it->second) == 0 ? row.erase(it) : ++it;
  return row;
}

// row += s * other, dropping cancelled entries
void axpy(SparseRow& row, const Rational& s, const SparseRow& other) {
  for (const auto& [c, v] : other) {
    auto [it, inserted] = row.try_emplace(c, 0);
    it->second += s * v;
    if (sgn(it->second) == 0) row.erase(it);
  }
}

}  // namespace

void register_backend(const std::string& name, Backend backend) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  registry()[name] = std::move(backend);
}

std::vector<std::string> registered_backends() {
  std::lock_guard<std::mutex> lock(registry_mutex());
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) names.push_back(k);
  return names;
}

Reduction reduce(const SdpProblem& problem) {
  problem.validate();
  Reduction red;
  const ColumnMap cols(problem);
  const int m = static_cast<int>(problem.constraints.size());
  std::vector<SparseRow> rows(m);
  std::vector<Rational> rhs(m);
  for (int i = 0; i < m; ++i) {
    rows[i] = to_row(problem.constraints[i].lhs, cols);
    rhs[i] = problem.constraints[i].rhs;
  }
  SparseRow objective = to_row(problem.objective, cols);
  red.objective_offset = problem.objective_offset;
  std::vector<bool> alive(m, true);
  // column -> (block, row, col) for matrix columns
  std::vector<int> col_block;
  std::vector<int> col_i, col_j;
  col_block.reserve(cols.scalar_base);
  for (std::size_t b = 0; b < problem.blocks.size(); ++b) {
    const int s = problem.blocks[b].size;
    for (int j = 0; j < s; ++j)
      for (int i = 0; i <= j; ++i) {
        col_block.push_back(static_cast<int>(b));
        col_i.push_back(i);
        col_j.push_back(j);
      }
  }
  auto to_form = [&](const SparseRow& row) {
    LinearForm f;
    for (const auto& [c, v] : row) {
      if (c >= cols.scalar_base) {
        f.scalar_terms.push_back({static_cast<int>(c - cols.scalar_base), v});
      } else {
        f.matrix_terms.push_back({col_block[c], col_i[c], col_j[c], v});
      }
    }
    return f;
  };

  // Free scalars: solve a row for the variable and substitute everywhere.
  for (int var = 0; var < static_cast<int>(problem.scalar_vars.size()); ++var) {
    const long col = cols.scalar(var);
    int pivot = -1;
    for (int i = 0; i < m; ++i) {
      if (!alive[i] || !rows[i].count(col)) continue;
      if (pivot < 0 || rows[i].size() < rows[pivot].size()) pivot = i;
    }
    if (pivot < 0) {
      if (objective.count(col)) {
        red.unbounded = true;
        red.message = "free variable " + problem.scalar_vars[var] + " is unconstrained";
        return red;
      }
      red.pivots.push_back({var, -1, {}, 0});
      continue;
    }
    const Rational coef = rows[pivot].at(col);
    auto eliminate = [&](SparseRow& target, Rational* target_rhs, bool is_objective) {
      auto it = target.find(col);
      if (it == target.end()) return;
      const Rational s = -it->second / coef;
      axpy(target, s, rows[pivot]);
      // target . x = t_rhs becomes target' . x = t_rhs + s * rhs_pivot; for
      // the objective the constant moves into the offset.
      if (is_objective) {
        red.objective_offset -= s * rhs[pivot];
      } else {
        *target_rhs -= s * rhs[pivot];
      }
    };
    for (int i = 0; i < m; ++i)
      if (i != pivot && alive[i]) eliminate(rows[i], &rhs[i], false);
    eliminate(objective, nullptr, true);
    alive[pivot] = false;
    red.pivots.push_back({var, pivot, to_form(rows[pivot]), rhs[pivot]});
  }

  // Exact elimination to find a maximal independent subset of rows. Pivot
  // columns are chosen with the fewest occurrences to limit fill-in.
  std::map<long, int> occurrences;
  for (int i = 0; i < m; ++i)
    if (alive[i])
      for (const auto& [c, v] : rows[i]) ++occurrences[c];
  struct Echelon {
    long col;
    SparseRow row;
    Rational rhs;
  };
  std::vector<Echelon> echelon;
  for (int i = 0; i < m; ++i) {
    if (!alive[i]) continue;
    SparseRow r = rows[i];
    Rational b = rhs[i];
    for (const auto& e : echelon) {
      auto it = r.find(e.col);
      if (it == r.end()) continue;
      const Rational s = -it->second / e.row.at(e.col);
      axpy(r, s, e.row);
      b += s * e.rhs;
    }
    if (r.empty()) {
      if (sgn(b) != 0) {
        red.infeasible = true;
        red.message = "constraint " + std::to_string(i) + " (" + problem.constraints[i].tag +
                      ") is inconsistent with earlier rows";
        return red;
      }
      alive[i] = false;
      continue;
    }
    long best = r.begin()->first;
    for (const auto& [c, v] : r)
      if (occurrences[c] < occurrences[best]) best = c;
    echelon.push_back({best, std::move(r), std::move(b)});
  }

  // Floating-point standard form over the surviving rows, each scaled to unit
  // max-abs coefficient.
  StandardForm& form = red.form;
  for (const auto& blk : problem.blocks) form.block_sizes.push_back(blk.size);
  auto to_block_entries = [&](const SparseRow& row, double scale) {
    std::map<int, SparseSym> per_block;
    for (const auto& [c, v] : row) {
      if (c >= cols.scalar_base) throw std::logic_error("reduce: scalar left after elimination");
      SparseSym& s = per_block[col_block[c]];
      s.row.push_back(col_i[c]);
      s.col.push_back(col_j[c]);
      s.val.push_back(to_double(v) * scale);
    }
    return per_block;
  };
  std::vector<double> bvals;
  for (int i = 0; i < m; ++i) {
    if (!alive[i]) continue;
    double mx = 0;
    for (const auto& [c, v] : rows[i]) mx = std::max(mx, std::abs(to_double(v)));
    const double scale = 1.0 / mx;
    std::vector<BlockEntries> entries;
    for (auto& [b, s] : to_block_entries(rows[i], scale)) entries.push_back({b, std::move(s)});
    form.a.push_back(std::move(entries));
    bvals.push_back(to_double(rhs[i]) * scale);
    red.kept_rows.push_back(i);
    red.row_scale.push_back(scale);
  }
  form.b = Eigen::Map<Eigen::VectorXd>(bvals.data(), static_cast<Eigen::Index>(bvals.size()));
  form.c.assign(problem.blocks.size(), SparseSym{});
  for (auto& [b, s] : to_block_entries(objective, 1.0)) form.c[b] = std::move(s);
  return red;
}

double evaluate_form(const LinearForm& form, const std::vector<Eigen::MatrixXd>& blocks,
                     const std::vector<double>& scalars) {
  double acc = 0;
  for (const auto& t : form.matrix_terms) {
    const double x = blocks[t.block](t.row, t.col);
    acc += to_double(t.coef) * x * (t.row == t.col ? 1.0 : 2.0);
  }
  for (const auto& t : form.scalar_terms) acc += to_double(t.coef) * scalars[t.var];
  return acc;
}

SdpSolution solve(const SdpProblem& problem, const SolverConfig& config) {
  config.validate();
  Backend backend;
  {
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto it = registry().find(config.backend);
    if (it == registry().end()) throw std::invalid_argument("unknown backend " + config.backend);
    backend = it->second;
  }
  SdpSolution sol;
  sol.backend = config.backend;
  const Reduction red = reduce(problem);
  if (red.infeasible || red.unbounded) {
    sol.status = SolveStatus::kInfeasible;
    sol.message = red.message;
    return sol;
  }
  StandardSolution std_sol;
  if (red.form.num_constraints() == 0 && red.form.block_sizes.empty()) {
    std_sol.status = SolveStatus::kOptimal;
  } else {
    std_sol = backend(red.form, config);
  }
  sol.status = std_sol.status;
  sol.iterations = std_sol.iterations;
  sol.message = std_sol.message;
  sol.log = std_sol.log;
  sol.block_values = std_sol.x;
  if (sol.block_values.size() != problem.blocks.size()) {
    sol.block_values.clear();
    for (const auto& b : problem.blocks) sol.block_values.push_back(Eigen::MatrixXd::Zero(b.size, b.size));
  }

  // Recover eliminated scalars in reverse elimination order.
  sol.scalars.assign(problem.scalar_vars.size(), 0.0);
  for (auto it = red.pivots.rbegin(); it != red.pivots.rend(); ++it) {
    if (it->row < 0) continue;
    double coef = 0;
    LinearForm rest = it->form;
    rest.scalar_terms.clear();
    for (const auto& t : it->form.scalar_terms) {
      if (t.var == it->var) {
        coef += to_double(t.coef);
      } else {
        rest.scalar_terms.push_back(t);
      }
    }
    sol.scalars[it->var] = (to_double(it->rhs) - evaluate_form(rest, sol.block_values, sol.scalars)) / coef;
  }

  sol.objective_value = evaluate_form(problem.objective, sol.block_values, sol.scalars) +
                        to_double(problem.objective_offset);
  sol.dual_objective = std_sol.dual_objective + to_double(red.objective_offset);
  double primal = 0;
  for (const auto& c : problem.constraints) {
    primal = std::max(primal, std::abs(evaluate_form(c.lhs, sol.block_values, sol.scalars) -
                                       to_double(c.rhs)));
  }
  sol.residuals.primal_eq = primal;
  sol.residuals.dual_eq = std_sol.rel_dual;
  sol.residuals.duality_gap = std_sol.rel_gap;
  double mineig = std::numeric_limits<double>::infinity();
  for (const auto& x : sol.block_values) {
    if (x.size() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x, Eigen::EigenvaluesOnly);
    mineig = std::min(mineig, es.eigenvalues()(0));
  }
  sol.residuals.min_eigenvalue = std::isfinite(mineig) ? mineig : 0.0;
  return sol;
}

nlohmann::json to_json(const SdpSolution& solution, bool include_log) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& x : solution.block_values) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      nlohmann::json r = nlohmann::json::array();
      for (Eigen::Index j = 0; j < x.cols(); ++j) r.push_back(x(i, j));
      rows.push_back(r);
    }
    blocks.push_back(rows);
  }
  nlohmann::json j = {
      {"status", status_name(solution.status)},
      {"backend", solution.backend},
      {"iterations", solution.iterations},
      {"objective_value", solution.objective_value},
      {"dual_objective", solution.dual_objective},
      {"scalars", solution.scalars},
      {"residuals",
       {{"primal_eq", solution.residuals.primal_eq},
        {"dual_eq", solution.residuals.dual_eq},
        {"min_eigenvalue", solution.residuals.min_eigenvalue},
        {"duality_gap", solution.residuals.duality_gap}}},
      {"block_values", blocks},
  };
  if (!solution.message.empty()) j["message"] = solution.message;
  if (include_log) j["log"] = solution.log;
  return j;
}

}  // namespace capsdp
