#include "capsdp/sdp_problem.hpp"

#include <stdexcept>

namespace capsdp {

int SdpProblem::find_block(const std::string& label) const {
  for (std::size_t b = 0; b < blocks.size(); ++b)
    if (blocks[b].label == label) return static_cast<int>(b);
  return -1;
}

namespace {

void validate_form(const SdpProblem& p, const LinearForm& form, const std::string& where) {
  for (const auto& t : form.matrix_terms) {
    if (t.block < 0 || t.block >= static_cast<int>(p.blocks.size())) {
      throw std::invalid_argument(where + ": reference to undeclared block " +
                                  std::to_string(t.block));
    }
    const int s = p.blocks[t.block].size;
    if (t.row < 0 || t.col < t.row || t.col >= s) {
      throw std::invalid_argument(where + ": entry (" + std::to_string(t.row) + "," +
                                  std::to_string(t.col) + ") outside block " +
                                  p.blocks[t.block].label);
    }
  }
  for (const auto& t : form.scalar_terms) {
    if (t.var < 0 || t.var >= static_cast<int>(p.scalar_vars.size())) {
      throw std::invalid_argument(where + ": reference to undeclared scalar variable");
    }
  }
}

nlohmann::json form_json(const LinearForm& form) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : form.matrix_terms)
    terms.push_back({t.block, t.row, t.col, to_string(t.coef)});
  nlohmann::json scalars = nlohmann::json::array();
  for (const auto& t : form.scalar_terms) scalars.push_back({t.var, to_string(t.coef)});
  return {{"matrix_terms", terms}, {"scalar_terms", scalars}};
}

}  // namespace

void SdpProblem::validate() const {
  for (const auto& b : blocks)
    if (b.size <= 0) throw std::invalid_argument("block " + b.label + " has nonpositive size");
  validate_form(*this, objective, "objective");
  for (std::size_t i = 0; i < constraints.size(); ++i)
    validate_form(*this, constraints[i].lhs, "constraint " + std::to_string(i));
}

nlohmann::json to_json(const SdpProblem& problem) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : problem.blocks) blocks.push_back({{"label", b.label}, {"size", b.size}});
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : problem.constraints) {
    nlohmann::json row = form_json(c.lhs);
    row["rhs"] = to_string(c.rhs);
    row["group"] = c.group;
    row["tag"] = c.tag;
    rows.push_back(row);
  }
  return {{"blocks", blocks},
          {"scalar_vars", problem.scalar_vars},
          {"objective", form_json(problem.objective)},
          {"objective_offset", to_string(problem.objective_offset)},
          {"constraints", rows}};
}

}  // namespace capsdp
