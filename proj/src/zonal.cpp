#include "capsdp/zonal.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace capsdp {

bool RationalMatrix::is_symmetric() const {
  for (int i = 0; i < size_; ++i)
    for (int j = i + 1; j < size_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

Eigen::MatrixXd RationalMatrix::to_double() const {
  Eigen::MatrixXd m(size_, size_);
  for (int i = 0; i < size_; ++i)
    for (int j = 0; j < size_; ++j) m(i, j) = (*this)(i, j).get_d();
  return m;
}

namespace {

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Coefficient matrix B[i][a] of u^a in P_i, inverted: u^a = sum_i T[a][i] P_i.
std::vector<std::vector<Rational>> monomial_to_gegenbauer(const std::vector<UniPoly>& p,
                                                          int size) {
  std::vector<std::vector<Rational>> t(size, std::vector<Rational>(size, Rational(0)));
  // Forward substitution on the lower triangular system B T^T = I.
  for (int a = 0; a < size; ++a) {
    // u^a = (1 / lead(P_a)) (P_a - sum_{b<a} coeff_b(P_a) u^b)
    Rational inv_lead = 1 / p[a].leading();
    t[a][a] = inv_lead;
    for (int b = 0; b < a; ++b) {
      Rational cb = p[a].coefficient(b);
      if (sgn(cb) == 0) continue;
      for (int i = 0; i <= b; ++i) t[a][i] -= inv_lead * cb * t[b][i];
    }
  }
  return t;
}

}  // namespace

std::int64_t harm_dim(int m, int k) {
  if (m < 1) throw std::invalid_argument("harm_dim: m must be >= 1");
  if (k < 0) throw std::invalid_argument("harm_dim: k must be >= 0");
  return binomial(m + k - 1, k) - (k >= 2 ? binomial(m + k - 3, k - 2) : 0);
}

std::int64_t DimensionTable::operator()(int m, int k) {
  if (m < 1 || k < 0) return harm_dim(m, k);
  if (static_cast<int>(cache_.size()) <= m) cache_.resize(m + 1);
  auto& row = cache_[m];
  while (static_cast<int>(row.size()) <= k) row.push_back(harm_dim(m, static_cast<int>(row.size())));
  return row[k];
}

TriPoly q_poly(int n, int k) {
  if (n < 3) throw std::invalid_argument("q_poly: n must be >= 3");
  const UniPoly p = gegenbauer(n - 1, k);
  const TriPoly x = TriPoly::t() - TriPoly::monomial({1, 1, 0});
  TriPoly s2 = TriPoly::constant(1);
  s2 -= TriPoly::monomial({2, 0, 0});
  TriPoly s2v = TriPoly::constant(1);
  s2v -= TriPoly::monomial({0, 2, 0});
  s2 = s2 * s2v;  // (1-u^2)(1-v^2)

  std::vector<TriPoly> x_pow{TriPoly::constant(1)};
  std::vector<TriPoly> s_pow{TriPoly::constant(1)};
  for (int i = 1; i <= k; ++i) x_pow.push_back(x_pow.back() * x);
  for (int i = 1; 2 * i <= k; ++i) s_pow.push_back(s_pow.back() * s2);

  TriPoly q;
  for (int e = k; e >= 0; e -= 2) {
    const Rational& c = p.coefficient(e);
    if (sgn(c) == 0) continue;
    q += (x_pow[e] * s_pow[(k - e) / 2]).scaled(c);
  }
  return q;
}

double sphere_area_ratio(int m) {
  if (m < 2) throw std::invalid_argument("sphere_area_ratio: m must be >= 2");
  return std::exp(0.5 * std::log(std::numbers::pi) + std::lgamma(0.5 * (m - 1)) -
                  std::lgamma(0.5 * m));
}

ZonalFamily::ZonalFamily(int n, int d, Normalization normalization)
    : n_(n), d_(d), normalization_(normalization) {
  if (n < 3) throw std::invalid_argument("zonal_family: n must be >= 3");
  if (d < 0) throw std::invalid_argument("zonal_family: d must be >= 0");
  for (int k = 0; k <= d; ++k) {
    const int s = block_size(k);
    p_.push_back(gegenbauer_sequence(n + 2 * k, s - 1));
    q_.push_back(q_poly(n, k));
    q_float_.push_back(to_float(q_.back()));
    std::vector<UniPolyF> pf;
    for (const auto& p : p_.back()) pf.push_back(to_float(p));
    p_float_.push_back(std::move(pf));

    std::vector<TriPoly> u_factors, v_factors;
    for (int i = 0; i < s; ++i) {
      u_factors.push_back(TriPoly::from_uni(p_[k][i], 0));
      v_factors.push_back(TriPoly::from_uni(p_[k][i], 1) * q_[k]);
    }
    std::vector<TriPoly> block(s * s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) block[i * s + j] = u_factors[i] * v_factors[j];
    std::vector<TriPoly> sym(s * s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j)
        sym[i * s + j] = (block[i * s + j] + block[j * s + i]).scaled(Rational(1, 2));
    entries_.push_back(std::move(block));
    sym_entries_.push_back(std::move(sym));

    std::vector<double> lam(s * s, 1.0);
    if (normalization == Normalization::kNormalized) {
      const double ratio = sphere_area_ratio(n) / sphere_area_ratio(n + 2 * k);
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
          lam[i * s + j] = ratio * std::sqrt(static_cast<double>(harm_dim(n + 2 * k, i)) *
                                             static_cast<double>(harm_dim(n + 2 * k, j)));
    }
    lambda_.push_back(std::move(lam));
  }
}

const TriPoly& ZonalFamily::exact_entry(int k, int i, int j) const {
  return entries_.at(k).at(i * block_size(k) + j);
}

const TriPoly& ZonalFamily::exact_sym_entry(int k, int i, int j) const {
  return sym_entries_.at(k).at(i * block_size(k) + j);
}

double ZonalFamily::lambda(int k, int i, int j) const {
  return lambda_.at(k).at(i * block_size(k) + j);
}

TriPolyF ZonalFamily::entry(int k, int i, int j) const {
  return to_float(exact_entry(k, i, j)).scaled(lambda(k, i, j));
}

TriPolyF ZonalFamily::sym_entry(int k, int i, int j) const {
  return to_float(exact_sym_entry(k, i, j)).scaled(lambda(k, i, j));
}

Eigen::MatrixXd ZonalFamily::evaluate_sym(int k, double u, double v, double t) const {
  const int s = block_size(k);
  Eigen::VectorXd pu(s), pv(s);
  for (int i = 0; i < s; ++i) {
    pu[i] = p_float_[k][i].eval_double(u);
    pv[i] = p_float_[k][i].eval_double(v);
  }
  const double q = q_float_[k].eval_double(u, v, t);
  Eigen::MatrixXd m(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      m(i, j) = 0.5 * (pu[i] * pv[j] + pv[i] * pu[j]) * q * lambda(k, i, j);
  return m;
}

MatrixCoefficients decompose(const TriPoly& f, const ZonalFamily& family) {
  if (!is_uv_symmetric(f)) throw AsymmetryError("decompose: polynomial is not u<->v symmetric");
  const int d = family.d();
  if (f.deg_ut() > d) {
    throw MembershipError("decompose: (u,t)-degree " + std::to_string(f.deg_ut()) +
                          " exceeds d = " + std::to_string(d));
  }

  TriPoly rest = f;
  std::vector<RationalMatrix> exact(d + 1);
  // Q_k is the only source of t-degree k, so peel from the top.
  for (int k = d; k >= 0; --k) {
    const int s = family.block_size(k);
    const Rational lead = gegenbauer(family.n() - 1, k).leading();
    TriPoly qk;
    for (const auto& [e, c] : rest.terms()) {
      if (e.t > k) throw MembershipError("decompose: residual t-degree exceeds block index");
      if (e.t == k) qk.add_term({e.u, e.v, 0}, c / lead);
    }
    rest -= qk * family.q(k);

    RationalMatrix coeff(s);
    for (const auto& [e, c] : qk.terms()) {
      if (e.u >= s || e.v >= s) {
        throw MembershipError("decompose: coefficient of Q_" + std::to_string(k) +
                              " exceeds degree " + std::to_string(s - 1));
      }
      coeff(e.u, e.v) = c;
    }
    std::vector<UniPoly> p;
    for (int i = 0; i < s; ++i) p.push_back(family.gegenbauer_factor(k, i));
    const auto tmat = monomial_to_gegenbauer(p, s);
    RationalMatrix fk(s);
    for (int a = 0; a < s; ++a)
      for (int b = 0; b < s; ++b) {
        if (sgn(coeff(a, b)) == 0) continue;
        for (int i = 0; i <= a; ++i) {
          if (sgn(tmat[a][i]) == 0) continue;
          const Rational left = tmat[a][i] * coeff(a, b);
          for (int j = 0; j <= b; ++j) fk(i, j) += left * tmat[b][j];
        }
      }
    exact[k] = std::move(fk);
  }
  if (!rest.is_zero()) throw MembershipError("decompose: nonzero remainder");

  MatrixCoefficients out;
  out.d = d;
  for (int k = 0; k <= d; ++k) {
    Eigen::MatrixXd m = exact[k].to_double();
    if (family.normalization() == Normalization::kNormalized) {
      for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) /= family.lambda(k, i, j);
    }
    out.matrices.push_back(std::move(m));
  }
  if (family.normalization() == Normalization::kUnnormalized) out.exact = std::move(exact);
  return out;
}

namespace {

void check_sizes(const MatrixCoefficients& coeffs, const ZonalFamily& family) {
  if (coeffs.d != family.d() || static_cast<int>(coeffs.matrices.size()) != family.d() + 1) {
    throw std::invalid_argument("matrix coefficients do not match the family degree");
  }
  for (int k = 0; k <= family.d(); ++k) {
    const auto& m = coeffs.matrices[k];
    if (m.rows() != family.block_size(k) || m.cols() != family.block_size(k)) {
      throw std::invalid_argument("matrix coefficient F_" + std::to_string(k) +
                                  " has the wrong size");
    }
  }
}

}  // namespace

TriPoly reconstruct_exact(const MatrixCoefficients& coeffs, const ZonalFamily& family) {
  check_sizes(coeffs, family);
  if (!coeffs.exact || family.normalization() != Normalization::kUnnormalized) {
    throw std::invalid_argument("exact reconstruction needs exact unnormalized coefficients");
  }
  TriPoly out;
  for (int k = 0; k <= family.d(); ++k) {
    const auto& fk = (*coeffs.exact)[k];
    if (fk.size() != family.block_size(k)) throw std::invalid_argument("block size mismatch");
    for (int i = 0; i < fk.size(); ++i)
      for (int j = 0; j < fk.size(); ++j)
        if (sgn(fk(i, j)) != 0) out += family.exact_sym_entry(k, i, j).scaled(fk(i, j));
  }
  return out;
}

TriPolyF reconstruct(const MatrixCoefficients& coeffs, const ZonalFamily& family) {
  check_sizes(coeffs, family);
  TriPolyF out;
  for (int k = 0; k <= family.d(); ++k) {
    const auto& fk = coeffs.matrices[k];
    for (int i = 0; i < fk.rows(); ++i)
      for (int j = 0; j < fk.cols(); ++j)
        if (fk(i, j) != 0.0) out += family.sym_entry(k, i, j).scaled(fk(i, j));
  }
  return out;
}

double evaluate(const MatrixCoefficients& coeffs, const ZonalFamily& family, double u,
                double v, double t) {
  check_sizes(coeffs, family);
  double acc = 0.0;
  for (int k = 0; k <= family.d(); ++k) {
    acc += (coeffs.matrices[k].array() * family.evaluate_sym(k, u, v, t).array()).sum();
  }
  return acc;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

PositiveDefiniteReport is_positive_definite(const TriPoly& f, const ZonalFamily& family,
                                            double tol) {
  const auto coeffs = decompose(f, family);
  PositiveDefiniteReport report;
  report.positive_definite = true;
  for (const auto& m : coeffs.matrices) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    report.spectra.push_back(es.eigenvalues());
    const double lo = es.eigenvalues().minCoeff();
    report.min_eigenvalues.push_back(lo);
    if (lo < -tol) report.positive_definite = false;
  }
  return report;
}

TriPolyF reproducing_kernel(const ZonalFamily& family, double u, double v, double t) {
  if (family.normalization() != Normalization::kNormalized) {
    throw std::invalid_argument("reproducing_kernel needs a normalized family");
  }
  TriPolyF out;
  for (int k = 0; k <= family.d(); ++k) {
    const double h = static_cast<double>(harm_dim(family.n() - 1, k));
    const Eigen::MatrixXd at = family.evaluate_sym(k, u, v, t);
    for (int i = 0; i < at.rows(); ++i)
      for (int j = 0; j < at.cols(); ++j)
        if (at(i, j) != 0.0) out += family.sym_entry(k, i, j).scaled(h * at(i, j));
  }
  return out;
}

nlohmann::json to_json(const ZonalFamily& family) {
  nlohmann::json blocks = nlohmann::json::array();
  for (int k = 0; k <= family.d(); ++k) {
    nlohmann::json block = nlohmann::json::array();
    for (int i = 0; i < family.block_size(k); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < family.block_size(k); ++j) {
        row.push_back(family.normalization() == Normalization::kUnnormalized
                          ? to_json(family.exact_entry(k, i, j))
                          : to_json(family.entry(k, i, j)));
      }
      block.push_back(row);
    }
    blocks.push_back(block);
  }
  return {{"n", family.n()},
          {"d", family.d()},
          {"normalization",
           family.normalization() == Normalization::kNormalized ? "normalized" : "unnormalized"},
          {"blocks", blocks}};
}

nlohmann::json to_json(const MatrixCoefficients& coeffs, const ZonalFamily& family) {
  nlohmann::json mats = nlohmann::json::array();
  for (std::size_t k = 0; k < coeffs.matrices.size(); ++k) {
    nlohmann::json m = nlohmann::json::array();
    for (int i = 0; i < coeffs.matrices[k].rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < coeffs.matrices[k].cols(); ++j) {
        if (coeffs.exact) {
          row.push_back(to_string((*coeffs.exact)[k](i, j)));
        } else {
          row.push_back(coeffs.matrices[k](i, j));
        }
      }
      m.push_back(row);
    }
    mats.push_back(m);
  }
  return {{"n", family.n()},
          {"d", coeffs.d},
          {"normalization",
           family.normalization() == Normalization::kNormalized ? "normalized" : "unnormalized"},
          {"matrices", mats}};
}

}  // namespace capsdp
