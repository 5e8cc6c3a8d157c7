#include "capsdp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "capsdp/zonal.hpp"

namespace capsdp {

GaussRule gauss_jacobi(double a, int points) {
  if (points < 1) throw std::invalid_argument("gauss_jacobi: points must be >= 1");
  if (!(a > -1.0)) throw std::invalid_argument("gauss_jacobi: exponent must exceed -1");
  // Monic recurrence for the symmetric weight: alpha_k = 0 and
  // beta_k = k (k + 2a) / ((2k + 2a + 1)(2k + 2a - 1)), with beta_1 = 1 / (2a + 3)
  // written out to avoid 0/0 at a = -1/2.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(points);
  Eigen::VectorXd sub(std::max(points - 1, 0));
  for (int k = 1; k < points; ++k) {
    const double beta = k == 1 ? 1.0 / (2 * a + 3)
                               : k * (k + 2 * a) / ((2 * k + 2 * a + 1) * (2 * k + 2 * a - 1));
    sub[k - 1] = std::sqrt(beta);
  }
  const double mu0 = std::exp(std::lgamma(0.5) + std::lgamma(a + 1) - std::lgamma(a + 1.5));
  GaussRule rule;
  if (points == 1) {
    rule.nodes = {0.0};
    rule.weights = {mu0};
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  for (int i = 0; i < points; ++i) {
    const double x = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, i);
    rule.nodes.push_back(x);
    rule.weights.push_back(mu0 * v0 * v0);
  }
  // Symmetrize against eigensolver rounding.
  for (int i = 0, j = points - 1; i < j; ++i, --j) {
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (points % 2 == 1) rule.nodes[points / 2] = 0.0;
  return rule;
}

QuadratureRule::QuadratureRule(int n, int points) : n_(n) {
  if (n < 3) throw std::invalid_argument("QuadratureRule: n must be >= 3");
  uv_ = gauss_jacobi(0.5 * (n - 3), points);
  alpha_ = gauss_jacobi(0.5 * (n - 4), points);
  // omega_{n-1} omega_{n-2} / omega_n^2 with omega_m the area of S^{m-1}.
  const auto log_area = [](int m) {
    return std::log(2.0) + 0.5 * m * std::log(std::numbers::pi) - std::lgamma(0.5 * m);
  };
  scale_ = std::exp(log_area(n - 1) + log_area(n - 2) - 2 * log_area(n));
}

QuadratureRule QuadratureRule::for_degree(int n, int degree) {
  return QuadratureRule(n, std::max(1, (degree + 2) / 2));
}

double QuadratureRule::integrate(const std::function<double(double, double, double)>& f) const {
  const int p = points();
  double acc = 0.0;
  for (int i = 0; i < p; ++i) {
    const double u = uv_.nodes[i];
    for (int j = 0; j < p; ++j) {
      const double v = uv_.nodes[j];
      const double s = std::sqrt((1 - u * u) * (1 - v * v));
      double inner = 0.0;
      for (int l = 0; l < p; ++l) inner += alpha_.weights[l] * f(u, v, u * v + s * alpha_.nodes[l]);
      acc += uv_.weights[i] * uv_.weights[j] * inner;
    }
  }
  return scale_ * acc;
}

double QuadratureRule::total_mass() const {
  return integrate([](double, double, double) { return 1.0; });
}

Eigen::MatrixXd QuadratureRule::node_matrix() const {
  const int p = points();
  Eigen::MatrixXd out(p * p * p, 3);
  int r = 0;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      for (int l = 0; l < p; ++l) {
        const double u = uv_.nodes[i], v = uv_.nodes[j];
        out.row(r++) << u, v, u * v + std::sqrt((1 - u * u) * (1 - v * v)) * alpha_.nodes[l];
      }
  return out;
}

Eigen::VectorXd QuadratureRule::weight_vector() const {
  const int p = points();
  Eigen::VectorXd out(p * p * p);
  int r = 0;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      for (int l = 0; l < p; ++l)
        out[r++] = scale_ * uv_.weights[i] * uv_.weights[j] * alpha_.weights[l];
  return out;
}

int coordinate_degree(const TriPolyF& f) {
  int m = 0;
  for (const auto& [e, c] : f.terms()) m = std::max({m, e.u + e.t, e.v + e.t});
  return m;
}

double inner_product(const TriPolyF& f, const TriPolyF& g, const QuadratureRule& rule) {
  const int need = coordinate_degree(f) + coordinate_degree(g);
  if (need > rule.degree()) {
    throw InsufficientDegreeError("inner_product: rule degree " + std::to_string(rule.degree()) +
                                  " below integrand degree " + std::to_string(need));
  }
  return rule.integrate(
      [&](double u, double v, double t) { return f.eval_double(u, v, t) * g.eval_double(u, v, t); });
}

double inner_product(const TriPolyF& f, const TriPolyF& g, int n) {
  return inner_product(f, g,
                       QuadratureRule::for_degree(n, coordinate_degree(f) + coordinate_degree(g)));
}

bool MonteCarloEstimate::agrees() const {
  return std::abs(mean - quadrature) <= 5 * standard_error + 1e-14;
}

namespace {

Eigen::VectorXd random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXd x(n);
  do {
    for (int i = 0; i < n; ++i) x[i] = gauss(rng);
  } while (x.norm() == 0.0);
  return x / x.norm();
}

Eigen::MatrixXd random_symmetric(int s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::MatrixXd a(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = i; j < s; ++j) a(i, j) = a(j, i) = unif(rng);
  return a;
}

TriPolyF pairing(const Eigen::MatrixXd& a, const ZonalFamily& family, int k) {
  TriPolyF out;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out += family.sym_entry(k, i, j).scaled(a(i, j));
  return out;
}

// Rows of values of each polynomial at the rule's nodes.
Eigen::MatrixXd tabulate(const std::vector<TriPolyF>& polys, const Eigen::MatrixXd& nodes) {
  Eigen::MatrixXd out(polys.size(), nodes.rows());
  for (std::size_t a = 0; a < polys.size(); ++a)
    for (int r = 0; r < nodes.rows(); ++r)
      out(a, r) = polys[a].eval_double(nodes(r, 0), nodes(r, 1), nodes(r, 2));
  return out;
}

}  // namespace

MonteCarloEstimate sphere_integral_crosscheck(const TriPolyF& p, int n, int samples,
                                              std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("sphere_integral_crosscheck: n must be >= 3");
  if (samples < 2) throw std::invalid_argument("sphere_integral_crosscheck: need >= 2 samples");
  std::mt19937_64 rng(seed);
  double sum = 0.0, sum2 = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd x = random_unit(n, rng);
    const Eigen::VectorXd y = random_unit(n, rng);
    const double val = p.eval_double(x[0], y[0], x.dot(y));
    sum += val;
    sum2 += val * val;
  }
  MonteCarloEstimate out;
  out.mean = sum / samples;
  const double var = std::max(0.0, (sum2 - samples * out.mean * out.mean) / (samples - 1));
  out.standard_error = std::sqrt(var / samples);
  out.quadrature = inner_product(p, TriPolyF::constant(1.0), n);
  return out;
}

OrthogonalityReport orthogonality_matrix(int n, int d) {
  const ZonalFamily family(n, d, Normalization::kNormalized);
  OrthogonalityReport report;
  std::vector<TriPolyF> polys;
  std::vector<double> diag;
  int degree = 0;
  for (int k = 0; k <= d; ++k)
    for (int i = 0; i < family.block_size(k); ++i)
      for (int j = 0; j < family.block_size(k); ++j) {
        report.labels.push_back({k, i, j});
        polys.push_back(family.entry(k, i, j));
        diag.push_back(1.0 / static_cast<double>(harm_dim(n - 1, k)));
        degree = std::max(degree, coordinate_degree(polys.back()));
      }
  const QuadratureRule rule = QuadratureRule::for_degree(n, 2 * degree);
  const Eigen::MatrixXd values = tabulate(polys, rule.node_matrix());
  report.gram = values * rule.weight_vector().asDiagonal() * values.transpose();
  report.expected = Eigen::VectorXd::Map(diag.data(), diag.size()).asDiagonal();
  report.max_error = (report.gram - report.expected).cwiseAbs().maxCoeff();
  return report;
}

double trace_orthogonality_test(int n, int d, int trials, std::uint64_t seed) {
  const ZonalFamily family(n, d, Normalization::kNormalized);
  const QuadratureRule rule = QuadratureRule::for_degree(n, 4 * d);
  const Eigen::MatrixXd nodes = rule.node_matrix();
  const Eigen::VectorXd w = rule.weight_vector();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, d);
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const int k = pick(rng), l = pick(rng);
    const Eigen::MatrixXd a = random_symmetric(family.block_size(k), rng);
    const Eigen::MatrixXd b = random_symmetric(family.block_size(l), rng);
    const Eigen::MatrixXd values = tabulate({pairing(a, family, k), pairing(b, family, l)}, nodes);
    const double got = (values.row(0).array() * values.row(1).array() * w.transpose().array()).sum();
    const double want =
        k == l ? (a.array() * b.array()).sum() / static_cast<double>(harm_dim(n - 1, k)) : 0.0;
    worst = std::max(worst, std::abs(got - want));
  }
  return worst;
}

double kernel_reproduce_test(int n, int d, int trials, std::uint64_t seed) {
  const ZonalFamily family(n, d, Normalization::kNormalized);
  const QuadratureRule rule = QuadratureRule::for_degree(n, 4 * d);
  const Eigen::MatrixXd nodes = rule.node_matrix();
  const Eigen::VectorXd w = rule.weight_vector();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    TriPolyF f;
    for (int k = 0; k <= d; ++k) f += pairing(random_symmetric(family.block_size(k), rng), family, k);
    const Eigen::VectorXd x = random_unit(n, rng);
    const Eigen::VectorXd y = random_unit(n, rng);
    const double u = x[0], v = y[0], t = x.dot(y);
    const Eigen::MatrixXd values = tabulate({reproducing_kernel(family, u, v, t), f}, nodes);
    const double got = (values.row(0).array() * values.row(1).array() * w.transpose().array()).sum();
    worst = std::max(worst, std::abs(got - f.eval_double(u, v, t)));
  }
  return worst;
}

double positivity_sample_test(int n, int d, int code_size, int trials, std::uint64_t seed) {
  if (code_size < 0) throw std::invalid_argument("positivity_sample_test: negative code size");
  const ZonalFamily family(n, d, Normalization::kNormalized);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<Eigen::VectorXd> code;
    std::vector<double> alpha;
    for (int c = 0; c < code_size; ++c) {
      code.push_back(random_unit(n, rng));
      alpha.push_back(unif(rng));
    }
    for (int k = 0; k <= d; ++k) {
      Eigen::MatrixXd s = Eigen::MatrixXd::Zero(family.block_size(k), family.block_size(k));
      for (int a = 0; a < code_size; ++a)
        for (int b = 0; b < code_size; ++b) {
          const double t = std::clamp(code[a].dot(code[b]), -1.0, 1.0);
          s += alpha[a] * alpha[b] * family.evaluate_sym(k, code[a][0], code[b][0], t);
        }
      worst = std::min(worst, min_eigenvalue(s));
    }
  }
  return worst;
}

double quadrature_doubling_test(int n, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> deg(0, 4);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const auto random_poly = [&] {
    TriPolyF f;
    const int top = deg(rng);
    for (int a = 0; a <= top; ++a)
      for (int b = 0; a + b <= top; ++b)
        for (int c = 0; a + b + c <= top; ++c) f.add_term({a, b, c}, unif(rng));
    return f;
  };
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const TriPolyF f = random_poly(), g = random_poly();
    const QuadratureRule base = QuadratureRule::for_degree(n, coordinate_degree(f) + coordinate_degree(g));
    const QuadratureRule doubled(n, 2 * base.points());
    const double a = inner_product(f, g, base);
    const double b = inner_product(f, g, doubled);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
  }
  return worst;
}

std::vector<std::string> suite_names() {
  return {"orthogonality", "kernel", "positivity", "quadrature"};
}

nlohmann::json run_suite(const std::string& name, std::uint64_t seed) {
  nlohmann::json report{{"suite", name}, {"seed", seed}};
  bool passed = true;
  if (name == "orthogonality") {
    const OrthogonalityReport orth = orthogonality_matrix(4, 3);
    const double tr = trace_orthogonality_test(4, 3, 20, seed);
    report["entries"] = orth.labels.size();
    report["max_entry_error"] = orth.max_error;
    report["max_trace_error"] = tr;
    nlohmann::json masses = nlohmann::json::array();
    double worst_mass = 0.0;
    for (int n = 3; n <= 10; ++n) {
      const double m = QuadratureRule(n, 8).total_mass();
      masses.push_back({{"n", n}, {"mass", m}});
      if (!(std::abs(m - 1.0) <= worst_mass)) worst_mass = std::abs(m - 1.0);
    }
    report["masses"] = masses;
    report["max_mass_error"] = worst_mass;
    passed = orth.max_error <= 1e-9 && tr <= 1e-9 && worst_mass <= 1e-13;
  } else if (name == "kernel") {
    const double r = kernel_reproduce_test(4, 2, 50, seed);
    report["n"] = 4;
    report["d"] = 2;
    report["trials"] = 50;
    report["max_residual"] = r;
    passed = r <= 1e-8;
  } else if (name == "positivity") {
    nlohmann::json cases = nlohmann::json::array();
    double worst = std::numeric_limits<double>::infinity();
    for (int n : {3, 4, 5})
      for (int d : {2, 3, 4}) {
        const double m = positivity_sample_test(n, d, 20, 100, seed);
        cases.push_back({{"n", n}, {"d", d}, {"min_eigenvalue", m}});
        worst = std::min(worst, m);
      }
    report["cases"] = cases;
    report["min_eigenvalue"] = worst;
    passed = worst >= -1e-9;
  } else if (name == "quadrature") {
    double worst_mass = 0.0;
    for (int n = 3; n <= 10; ++n) {
      const double err = std::abs(QuadratureRule(n, 8).total_mass() - 1.0);
      if (!(err <= worst_mass)) worst_mass = err;
    }
    double worst_doubling = 0.0;
    for (int n : {3, 4, 6}) worst_doubling = std::max(worst_doubling, quadrature_doubling_test(n, 50, seed));
    report["max_mass_error"] = worst_mass;
    report["max_doubling_change"] = worst_doubling;
    passed = worst_mass <= 1e-13 && worst_doubling <= 1e-13;
  } else {
    throw std::invalid_argument("unknown suite: " + name);
  }
  report["passed"] = passed;
  return report;
}

}  // namespace capsdp
