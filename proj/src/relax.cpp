#include "capsdp/relax.hpp"

#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace capsdp {

void CapParams::validate() const {
  if (n < 3) throw std::invalid_argument("CapParams: n must be >= 3");
  if (cos_theta < -1 || cos_theta >= 1) {
    throw std::invalid_argument("CapParams: cos_theta must lie in [-1, 1)");
  }
  if (cos_phi <= -1 || cos_phi > 1) {
    throw std::invalid_argument("CapParams: cos_phi must lie in (-1, 1]");
  }
  if (d < 1) throw std::invalid_argument("CapParams: d must be >= 1");
  if (N < 2) throw std::invalid_argument("CapParams: N must be >= 2");
}

std::string basis_name(PolyBasis basis) {
  return basis == PolyBasis::kChebyshev ? "chebyshev" : "monomial";
}

std::string gram_rule_name(GramDegreeRule rule) {
  return rule == GramDegreeRule::kMultiplierCap ? "multiplier-cap" : "match-zonal";
}

int CapParams::sos_degree() const {
  return gram_rule == GramDegreeRule::kMultiplierCap ? N : std::max(2 * d, N);
}

DomainSystem DomainSystem::build(const CapParams& params) {
  DomainSystem sys;
  // -(u - c)(u - 1) = -u^2 + (1 + c) u - c
  const Rational c = params.cos_phi;
  sys.p = UniPoly({Rational(-c), Rational(1 + c), Rational(-1)});
  sys.p_i[0] = TriPoly::from_uni(sys.p, 0);
  sys.p_i[1] = TriPoly::from_uni(sys.p, 1);
  // -(t + 1)(t - cos theta) = -t^2 + (cos theta - 1) t + cos theta
  const Rational ct = params.cos_theta;
  sys.p_i[2] = TriPoly::from_uni(UniPoly({ct, Rational(ct - 1), Rational(-1)}), 2);
  TriPoly p4 = TriPoly::constant(1);
  p4.add_term({1, 1, 1}, 2);
  p4.add_term({2, 0, 0}, -1);
  p4.add_term({0, 2, 0}, -1);
  p4.add_term({0, 0, 2}, -1);
  sys.p_i[3] = p4;
  return sys;
}

std::vector<Exponent3> monomial_basis(int num_vars, int max_total_degree) {
  if (num_vars != 1 && num_vars != 3) throw std::invalid_argument("monomial_basis: 1 or 3 variables");
  std::vector<Exponent3> out;
  for (int deg = 0; deg <= max_total_degree; ++deg) {
    if (num_vars == 1) {
      out.push_back({deg, 0, 0});
      continue;
    }
    for (int a = deg; a >= 0; --a)
      for (int b = deg - a; b >= 0; --b) out.push_back({a, b, deg - a - b});
  }
  return out;
}

std::string monomial_label(const Exponent3& e) {
  if (e.total() == 0) return "1";
  std::ostringstream os;
  const char* names[3] = {"u", "v", "t"};
  const int exps[3] = {e.u, e.v, e.t};
  bool first = true;
  for (int i = 0; i < 3; ++i) {
    if (exps[i] == 0) continue;
    if (!first) os << "*";
    first = false;
    os << names[i];
    if (exps[i] > 1) os << "^" << exps[i];
  }
  return os.str();
}

std::string basis_label(const Exponent3& e, PolyBasis basis) {
  if (basis == PolyBasis::kMonomial) return monomial_label(e);
  std::ostringstream os;
  os << "T(" << e.u << "," << e.v << "," << e.t << ")";
  return os.str();
}

namespace {

using EntryKey = std::tuple<int, int, int>;

struct RowAccumulator {
  std::map<EntryKey, Rational> entries;
  std::map<int, Rational> scalars;
  Rational rhs;
};

class IdentityBuilder {
 public:
  IdentityBuilder(std::string group, bool fold_mirrors, PolyBasis basis)
      : group_(std::move(group)), fold_(fold_mirrors), basis_(basis) {}

  // Adds a polynomial given in monomial form.
  void add_entry_monomial(int block, int row, int col, const TriPoly& poly) {
    add_entry_poly(block, row, col, basis_ == PolyBasis::kChebyshev ? to_chebyshev(poly) : poly);
  }

  void add_entry_poly(int block, int row, int col, const TriPoly& poly) {
    for (const auto& [e, c] : poly.terms()) rows_[key(e)].entries[{block, row, col}] += c;
  }
  void add_scalar(const Exponent3& e, int var, const Rational& c) { rows_[key(e)].scalars[var] += c; }
  void add_rhs(const Exponent3& e, const Rational& c) { rows_[key(e)].rhs += c; }

  void emit(SdpProblem& problem) const {
    for (const auto& [e, acc] : rows_) {
      EqualityConstraint row;
      for (const auto& [k, c] : acc.entries) {
        if (sgn(c) == 0) continue;
        row.lhs.matrix_terms.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), c});
      }
      for (const auto& [var, c] : acc.scalars)
        if (sgn(c) != 0) row.lhs.scalar_terms.push_back({var, c});
      if (row.lhs.empty()) {
        if (sgn(acc.rhs) != 0) {
          throw std::logic_error("relaxation row " + basis_label(e, basis_) + " reads 0 = nonzero");
        }
        continue;
      }
      row.rhs = acc.rhs;
      row.group = group_;
      row.tag = basis_label(e, basis_);
      if (fold_ && e.u != e.v) row.tag += " + " + basis_label(e.swapped(), basis_);
      problem.constraints.push_back(std::move(row));
    }
  }

 private:
  Exponent3 key(const Exponent3& e) const {
    return (fold_ && e.u < e.v) ? e.swapped() : e;
  }

  std::string group_;
  bool fold_;
  PolyBasis basis_;
  std::map<Exponent3, RowAccumulator, GrlexLess> rows_;
};

int add_block(SdpProblem& problem, std::string label, int size) {
  problem.blocks.push_back({std::move(label), size});
  return static_cast<int>(problem.blocks.size()) - 1;
}

void add_gram(CapRelaxation& relax, IdentityBuilder& builder, const std::string& label,
              int num_vars, int basis_degree, const TriPoly& multiplier, bool diagonal) {
  if (basis_degree < 0) return;
  GramInfo g;
  g.label = label;
  g.basis = monomial_basis(num_vars, basis_degree);
  g.multiplier = multiplier;
  g.diagonal_identity = diagonal;
  g.block = add_block(relax.problem, label, static_cast<int>(g.basis.size()));
  const int s = static_cast<int>(g.basis.size());
  const bool cheb = relax.params.basis == PolyBasis::kChebyshev;
  const TriPoly mult = cheb ? to_chebyshev(multiplier) : multiplier;
  for (int a = 0; a < s; ++a) {
    for (int b = a; b < s; ++b) {
      if (!cheb) {
        builder.add_entry_poly(g.block, a, b, multiplier.shifted(g.basis[a] + g.basis[b]));
        continue;
      }
      TriPoly ta, tb;
      ta.add_term(g.basis[a], 1);
      tb.add_term(g.basis[b], 1);
      builder.add_entry_poly(g.block, a, b, chebyshev_product(mult, chebyshev_product(ta, tb)));
    }
  }
  relax.grams.push_back(std::move(g));
}

TriPoly diag_embed(const UniPoly& p) { return TriPoly::from_uni(p, 0); }

}  // namespace

CapRelaxation build_cap_sdp(const CapParams& params) {
  params.validate();
  CapRelaxation relax;
  relax.params = params;
  SdpProblem& problem = relax.problem;
  const ZonalFamily family(params.n, params.d, Normalization::kUnnormalized);
  const DomainSystem domain = DomainSystem::build(params);

  problem.scalar_vars = {"M"};
  relax.m_var = 0;
  problem.objective.scalar_terms.push_back({relax.m_var, Rational(1)});

  IdentityBuilder diag("diagonal", false, params.basis);
  IdentityBuilder offdiag("offdiagonal", params.symmetry_reduction, params.basis);

  for (int k = 0; k <= params.d; ++k) {
    const int s = family.block_size(k);
    const int block = add_block(problem, "F" + std::to_string(k), s);
    relax.f_blocks.push_back(block);
    TriPoly trace;
    for (int i = 0; i < s; ++i) {
      for (int j = i; j < s; ++j) {
        const TriPoly& entry = family.exact_sym_entry(k, i, j);
        offdiag.add_entry_monomial(block, i, j, entry);
        diag.add_entry_monomial(block, i, j, diag_embed(restrict_diagonal(entry)));
      }
      trace += family.exact_sym_entry(k, i, i);
    }
    relax.trace_sup_offdiagonal.push_back(trace.coefficient_l1());
    relax.trace_sup_diagonal.push_back(diag_embed(restrict_diagonal(trace)).coefficient_l1());
  }

  const int dd = params.sos_degree();
  add_gram(relax, diag, "q0", 1, dd / 2, TriPoly::constant(1), true);
  if (dd >= 2) add_gram(relax, diag, "q1", 1, (dd - 2) / 2, diag_embed(domain.p), true);
  diag.add_scalar({0, 0, 0}, relax.m_var, Rational(-1));

  const int od = params.sos_degree();
  add_gram(relax, offdiag, "r0", 3, od / 2, TriPoly::constant(1), false);
  for (int i = 0; i < 3; ++i) {
    if (od >= 2) {
      add_gram(relax, offdiag, "r" + std::to_string(i + 1), 3, (od - 2) / 2, domain.p_i[i], false);
    }
  }
  if (od >= 3) add_gram(relax, offdiag, "r4", 3, (od - 3) / 2, domain.p_i[3], false);
  offdiag.add_rhs({0, 0, 0}, Rational(-1));

  diag.emit(problem);
  offdiag.emit(problem);
  problem.validate();
  return relax;
}

CapRelaxation assemble_distance_lp_comparison(const CapParams& params) {
  params.validate();
  CapRelaxation relax;
  relax.params = params;
  SdpProblem& problem = relax.problem;
  const auto gegen = gegenbauer_sequence(params.n, params.d);
  const int degree = params.d + (params.d % 2);

  IdentityBuilder lp("lp", false, params.basis);
  for (int k = 1; k <= params.d; ++k) {
    const int block = add_block(problem, "f" + std::to_string(k), 1);
    relax.f_blocks.push_back(block);
    problem.objective.matrix_terms.push_back({block, 0, 0, Rational(1)});
    lp.add_entry_monomial(block, 0, 0, diag_embed(gegen[k]));
  }
  // (x + 1)(cos theta - x) >= 0 on [-1, cos theta]
  const Rational ct = params.cos_theta;
  const UniPoly g({ct, Rational(ct - 1), Rational(-1)});
  add_gram(relax, lp, "s0", 1, degree / 2, TriPoly::constant(1), true);
  add_gram(relax, lp, "s1", 1, (degree - 2) / 2, diag_embed(g), true);
  lp.add_rhs({0, 0, 0}, Rational(-1));
  lp.emit(problem);
  problem.validate();
  return relax;
}

}  // namespace capsdp
