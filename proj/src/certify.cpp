#include "capsdp/certify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

namespace capsdp {

namespace {

using TermMap = std::map<Exponent3, Rational, GrlexLess>;

TriPoly from_terms(const TermMap& terms) {
  TriPoly out;
  for (const auto& [e, c] : terms) out.add_term(e, c);
  return out;
}

// b^T G b for a Gram block in its own basis, expanded in monomials.
TriPoly expand_gram(const Eigen::MatrixXd& g, const std::vector<Exponent3>& basis,
                    PolyBasis kind) {
  const int s = static_cast<int>(basis.size());
  TermMap acc;
  const Rational eighth(1, 8);
  for (int a = 0; a < s; ++a) {
    for (int b = a; b < s; ++b) {
      if (g(a, b) == 0.0) continue;
      Rational c = rational_from_double(g(a, b));
      if (a != b) c *= 2;
      if (kind == PolyBasis::kMonomial) {
        acc[basis[a] + basis[b]] += c;
        continue;
      }
      // T_x T_y = (T_{x+y} + T_{|x-y|}) / 2 in each coordinate.
      const Exponent3& x = basis[a];
      const Exponent3& y = basis[b];
      const int us[2] = {x.u + y.u, std::abs(x.u - y.u)};
      const int vs[2] = {x.v + y.v, std::abs(x.v - y.v)};
      const int ts[2] = {x.t + y.t, std::abs(x.t - y.t)};
      const Rational part = c * eighth;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int l = 0; l < 2; ++l) acc[Exponent3{us[i], vs[j], ts[l]}] += part;
    }
  }
  TriPoly out = from_terms(acc);
  return kind == PolyBasis::kMonomial ? out : from_chebyshev(out);
}

double max_abs_coefficient(const TriPoly& f) {
  double m = 0.0;
  for (const auto& [e, c] : f.terms()) m = std::max(m, std::abs(to_double(c)));
  return m;
}

IdentityAudit audit_identity(const std::string& group, const TriPoly& residual,
                             const TriPoly& matched) {
  IdentityAudit a;
  a.group = group;
  a.max_abs = max_abs_coefficient(residual);
  a.l1 = residual.coefficient_l1();
  a.scale = std::max(1.0, max_abs_coefficient(matched));
  std::vector<ResidualTerm> terms;
  for (const auto& [e, c] : residual.terms()) terms.push_back({monomial_label(e), to_double(c)});
  std::sort(terms.begin(), terms.end(), [](const ResidualTerm& x, const ResidualTerm& y) {
    return std::abs(x.value) > std::abs(y.value);
  });
  if (terms.size() > 5) terms.resize(5);
  a.largest = std::move(terms);
  return a;
}

BlockAudit audit_block(const std::string& label, const Eigen::MatrixXd& x) {
  BlockAudit b;
  b.label = label;
  b.size = static_cast<int>(x.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x, Eigen::EigenvaluesOnly);
  b.min_eigenvalue = es.eigenvalues().minCoeff();
  b.max_eigenvalue = es.eigenvalues().maxCoeff();
  // Backward error of the symmetric eigensolver, with room to spare.
  const double err = 16.0 * b.size * std::numeric_limits<double>::epsilon() *
                     std::max(std::abs(b.min_eigenvalue), std::abs(b.max_eigenvalue));
  b.deficit = std::max(0.0, err - b.min_eigenvalue);
  return b;
}

void add_check(BoundCertificate& cert, std::string name, double value, double tolerance,
               bool passed) {
  if (!passed && cert.failure.empty()) cert.failure = name;
  cert.checks.push_back({std::move(name), value, tolerance, passed});
}

}  // namespace

BoundCertificate verify_certificate(const SdpSolution& solution, const CapRelaxation& relaxation,
                                    const CertifyOptions& options) {
  BoundCertificate cert;
  cert.params = relaxation.params;
  cert.solver_status = status_name(solution.status);
  add_check(cert, "solver_status", solution.usable() ? 1.0 : 0.0, 1.0, solution.usable());

  const SdpProblem& problem = relaxation.problem;
  bool shape_ok = solution.block_values.size() == problem.blocks.size() &&
                  solution.scalars.size() == problem.scalar_vars.size() &&
                  relaxation.m_var >= 0 &&
                  static_cast<int>(relaxation.f_blocks.size()) == relaxation.params.d + 1;
  for (std::size_t b = 0; shape_ok && b < problem.blocks.size(); ++b) {
    const auto& x = solution.block_values[b];
    shape_ok = x.rows() == problem.blocks[b].size && x.cols() == problem.blocks[b].size;
  }
  add_check(cert, "structure", shape_ok ? 1.0 : 0.0, 1.0, shape_ok);
  if (!shape_ok) return cert;

  bool finite = true;
  for (const auto& x : solution.block_values) finite = finite && x.allFinite();
  for (double s : solution.scalars) finite = finite && std::isfinite(s);
  add_check(cert, "finite", finite ? 1.0 : 0.0, 1.0, finite);
  if (!finite) return cert;

  cert.m = solution.scalars[relaxation.m_var];
  cert.reported_bound = 1.0 + cert.m;

  // Blocks are symmetrized before auditing so the audit sees the matrix the
  // identities are expanded from.
  std::vector<Eigen::MatrixXd> x;
  for (const auto& v : solution.block_values) x.push_back(0.5 * (v + v.transpose()));

  double worst_psd = 0.0;
  std::vector<double> deficit(x.size(), 0.0);
  for (std::size_t b = 0; b < x.size(); ++b) {
    const BlockAudit a = audit_block(problem.blocks[b].label, x[b]);
    worst_psd = std::min(worst_psd, a.min_eigenvalue / std::max(1.0, a.max_eigenvalue));
    deficit[b] = a.deficit;
    cert.blocks.push_back(a);
  }
  add_check(cert, "psd", worst_psd, -options.psd_tolerance, worst_psd >= -options.psd_tolerance);

  const CapParams& params = relaxation.params;
  const ZonalFamily family(params.n, params.d, Normalization::kUnnormalized);
  cert.matrix_coefficients.d = params.d;
  TriPoly f;
  for (int k = 0; k <= params.d; ++k) {
    const Eigen::MatrixXd& fk = x[relaxation.f_blocks[k]];
    cert.matrix_coefficients.matrices.push_back(fk);
    for (int i = 0; i < fk.rows(); ++i)
      for (int j = i; j < fk.cols(); ++j) {
        if (fk(i, j) == 0.0) continue;
        Rational c = rational_from_double(fk(i, j));
        if (i != j) c *= 2;
        f += family.exact_sym_entry(k, i, j).scaled(c);
      }
  }

  const Rational m_exact = rational_from_double(cert.m);
  TriPoly diag_rhs = TriPoly::constant(m_exact);
  TriPoly off_rhs = TriPoly::constant(Rational(-1));
  MarginAnalysis& margin = cert.margin;
  for (const GramInfo& g : relaxation.grams) {
    const Eigen::MatrixXd& gm = x[g.block];
    cert.sos_witnesses.emplace_back(g.label, gm);
    const TriPoly s = expand_gram(gm, g.basis, params.basis) * g.multiplier;
    const double shift =
        deficit[g.block] * static_cast<double>(g.basis.size()) * g.multiplier.coefficient_l1();
    if (g.diagonal_identity) {
      diag_rhs -= s;
      margin.gram_shift_diagonal += shift;
    } else {
      off_rhs -= s;
      margin.gram_shift_offdiagonal += shift;
    }
  }

  const TriPoly f_diag = TriPoly::from_uni(restrict_diagonal(f), 0);
  const TriPoly e_diag = f_diag - diag_rhs;
  TriPoly e_off = f - off_rhs;
  if (params.symmetry_reduction) e_off = (e_off + swap_uv(e_off)).scaled(Rational(1, 2));

  cert.identities.push_back(audit_identity("diagonal", e_diag, f_diag));
  cert.identities.push_back(audit_identity("offdiagonal", e_off, f));
  for (const auto& id : cert.identities) {
    const double rel = id.max_abs / id.scale;
    add_check(cert, "identity_" + id.group, rel, options.identity_tolerance,
              rel <= options.identity_tolerance);
  }

  for (int k = 0; k <= params.d; ++k) {
    const double dk = deficit[relaxation.f_blocks[k]];
    margin.zonal_shift_diagonal += dk * relaxation.trace_sup_diagonal[k];
    margin.zonal_shift_offdiagonal += dk * relaxation.trace_sup_offdiagonal[k];
  }
  margin.residual_diagonal = cert.identities[0].l1;
  margin.residual_offdiagonal = cert.identities[1].l1;
  margin.eta_diagonal =
      margin.residual_diagonal + margin.zonal_shift_diagonal + margin.gram_shift_diagonal;
  margin.eta_offdiagonal =
      margin.residual_offdiagonal + margin.zonal_shift_offdiagonal + margin.gram_shift_offdiagonal;

  const bool margin_ok = margin.eta_offdiagonal < 1.0 && std::isfinite(margin.eta_diagonal);
  add_check(cert, "margin", margin.eta_offdiagonal, 1.0, margin_ok);
  cert.bound = margin_ok ? 1.0 + (cert.m + margin.eta_diagonal) / (1.0 - margin.eta_offdiagonal)
                         : std::numeric_limits<double>::infinity();
  cert.verified = cert.failure.empty();
  return cert;
}

TriPolyF certificate_polynomial(const BoundCertificate& certificate) {
  const ZonalFamily family(certificate.params.n, certificate.params.d,
                           Normalization::kUnnormalized);
  return reconstruct(certificate.matrix_coefficients, family) + TriPolyF::constant(1.0);
}

EqualityCaseReport equality_case_report(const BoundCertificate& certificate, const Code& code,
                                        double tight_tolerance) {
  EqualityCaseReport report;
  report.tight_tolerance = tight_tolerance;
  if (code.size() == 0) return report;
  const TriPolyF f = certificate_polynomial(certificate);
  const double b = certificate.reported_bound;
  std::vector<double> e;
  for (int i = 0; i < code.size(); ++i) e.push_back(to_double(code.pole_inner(i)));
  report.max_cross = -std::numeric_limits<double>::infinity();
  report.min_cross = std::numeric_limits<double>::infinity();
  for (int i = 0; i < code.size(); ++i) {
    ++report.diagonal_points;
    report.max_diagonal_gap =
        std::max(report.max_diagonal_gap, std::abs(f.eval_double(e[i], e[i], 1.0) - b));
    for (int j = 0; j < code.size(); ++j) {
      if (i == j) continue;
      const double val = f.eval_double(e[i], e[j], to_double(code.inner(i, j)));
      ++report.cross_pairs;
      report.max_abs_cross = std::max(report.max_abs_cross, std::abs(val));
      report.max_cross = std::max(report.max_cross, val);
      report.min_cross = std::min(report.min_cross, val);
    }
  }
  if (report.cross_pairs == 0) report.max_cross = report.min_cross = 0.0;
  report.near_tight =
      report.max_abs_cross <= tight_tolerance && report.max_diagonal_gap <= tight_tolerance;
  return report;
}

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

nlohmann::json to_json(const BoundCertificate& c, bool include_matrices) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& k : c.checks) {
    checks.push_back(
        {{"name", k.name}, {"value", k.value}, {"tolerance", k.tolerance}, {"passed", k.passed}});
  }
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : c.blocks) {
    blocks.push_back({{"label", b.label},
                      {"size", b.size},
                      {"min_eigenvalue", b.min_eigenvalue},
                      {"max_eigenvalue", b.max_eigenvalue},
                      {"deficit", b.deficit}});
  }
  nlohmann::json identities = nlohmann::json::array();
  for (const auto& id : c.identities) {
    nlohmann::json largest = nlohmann::json::array();
    for (const auto& t : id.largest) largest.push_back({{"monomial", t.monomial}, {"value", t.value}});
    identities.push_back({{"group", id.group},
                          {"max_abs", id.max_abs},
                          {"l1", id.l1},
                          {"scale", id.scale},
                          {"largest", largest}});
  }
  const MarginAnalysis& m = c.margin;
  nlohmann::json out{
      {"params",
       {{"n", c.params.n},
        {"cos_theta", to_string(c.params.cos_theta)},
        {"cos_phi", to_string(c.params.cos_phi)},
        {"d", c.params.d},
        {"N", c.params.N},
        {"symmetry_reduction", c.params.symmetry_reduction},
        {"basis", basis_name(c.params.basis)},
        {"gram_rule", gram_rule_name(c.params.gram_rule)}}},
      {"verdict", c.verified ? "verified" : "failed"},
      {"failure", c.failure},
      {"solver_status", c.solver_status},
      {"M", c.m},
      {"reported_bound", c.reported_bound},
      {"bound", std::isfinite(c.bound) ? nlohmann::json(c.bound) : nlohmann::json(nullptr)},
      {"margin",
       {{"eta_diagonal", m.eta_diagonal},
        {"eta_offdiagonal", m.eta_offdiagonal},
        {"residual_diagonal", m.residual_diagonal},
        {"residual_offdiagonal", m.residual_offdiagonal},
        {"zonal_shift_diagonal", m.zonal_shift_diagonal},
        {"zonal_shift_offdiagonal", m.zonal_shift_offdiagonal},
        {"gram_shift_diagonal", m.gram_shift_diagonal},
        {"gram_shift_offdiagonal", m.gram_shift_offdiagonal}}},
      {"checks", checks},
      {"blocks", blocks},
      {"identities", identities}};
  if (include_matrices) {
    nlohmann::json fk = nlohmann::json::array();
    for (const auto& mat : c.matrix_coefficients.matrices) fk.push_back(matrix_json(mat));
    nlohmann::json sos = nlohmann::json::object();
    for (const auto& [label, mat] : c.sos_witnesses) sos[label] = matrix_json(mat);
    out["matrix_coefficients"] = fk;
    out["sos_witnesses"] = sos;
  }
  return out;
}

nlohmann::json to_json(const EqualityCaseReport& r) {
  return {{"cross_pairs", r.cross_pairs},
          {"diagonal_points", r.diagonal_points},
          {"max_abs_cross", r.max_abs_cross},
          {"max_cross", r.max_cross},
          {"min_cross", r.min_cross},
          {"max_diagonal_gap", r.max_diagonal_gap},
          {"tight_tolerance", r.tight_tolerance},
          {"near_tight", r.near_tight}};
}

std::string short_rational(const Rational& r) {
  return r.get_den() == 1 ? r.get_num().get_str() : to_string(r);
}

std::string summary_row(const BoundCertificate& c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", c.bound);
  return std::to_string(c.params.n) + " | " + short_rational(c.params.cos_theta) + " | " +
         short_rational(c.params.cos_phi) + " | " + std::to_string(c.params.d) + " | " +
         std::to_string(c.params.N) + " | " + (c.verified ? std::string(buf) : "failed");
}

}  // namespace capsdp
