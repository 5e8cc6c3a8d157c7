#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "capsdp/polynomial.hpp"

namespace capsdp {

/// Gauss rule for the weight (1 - x^2)^a on [-1, 1], a > -1, computed by
/// Golub-Welsch on the symmetric Jacobi recurrence.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_jacobi(double a, int points);

class InsufficientDegreeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Product rule over (u, v, alpha) with t = uv + sqrt((1-u^2)(1-v^2)) alpha.
/// Integrates P(u, v, t) k(u, v, t) over Omega; the sphere-area constant is
/// folded into `scale` so that the total mass is 1.
class QuadratureRule {
 public:
  QuadratureRule(int n, int points);
  /// Smallest rule exact for integrands of the given coordinate degree.
  static QuadratureRule for_degree(int n, int degree);

  int n() const { return n_; }
  int points() const { return static_cast<int>(uv_.nodes.size()); }
  // Exact when the integrand has degree <= degree() in each of u, v, alpha.
  int degree() const { return 2 * points() - 1; }
  double scale() const { return scale_; }

  double integrate(const std::function<double(double, double, double)>& f) const;
  double total_mass() const;

  /// Nodes as (u, v, t) rows with their weights.
  Eigen::MatrixXd node_matrix() const;
  Eigen::VectorXd weight_vector() const;

 private:
  int n_;
  GaussRule uv_;
  GaussRule alpha_;
  double scale_;
};

/// Degree of P(u, v, uv + s alpha) in each of u, v, alpha.
int coordinate_degree(const TriPolyF& f);

/// [F, G] = int_Omega F G k. Throws InsufficientDegreeError when the rule is
/// not exact for F G.
double inner_product(const TriPolyF& f, const TriPolyF& g, const QuadratureRule& rule);
double inner_product(const TriPolyF& f, const TriPolyF& g, int n);

struct MonteCarloEstimate {
  double mean = 0;
  double standard_error = 0;
  double quadrature = 0;
  bool agrees() const;  // |mean - quadrature| <= 5 standard errors
};

/// Uniform samples of (x, y) on S^{n-1} x S^{n-1} with pole e_1.
MonteCarloEstimate sphere_integral_crosscheck(const TriPolyF& p, int n, int samples,
                                              std::uint64_t seed = 1);

/// Pairwise inner products of the normalized entries (Y_k)_{ij}, k <= d,
/// i <= j, in (k, i, j) order, together with the expected diagonal.
struct OrthogonalityReport {
  std::vector<std::array<int, 3>> labels;
  Eigen::MatrixXd gram;
  Eigen::MatrixXd expected;
  double max_error = 0;
};

OrthogonalityReport orthogonality_matrix(int n, int d);

/// max |[<A, Ybar_k>, <B, Ybar_k'>] - delta_kk' <A, B> / h_k| over random
/// symmetric A, B.
double trace_orthogonality_test(int n, int d, int trials, std::uint64_t seed = 1);

/// max over random F in R_d and random p in Omega of |[K_d(., p), F] - F(p)|.
double kernel_reproduce_test(int n, int d, int trials, std::uint64_t seed = 1);

/// min eigenvalue of sum_{c, c'} alpha(c) alpha(c') Ybar_k(e.c, e.c', c.c')
/// over random codes of the given size and k <= d.
double positivity_sample_test(int n, int d, int code_size, int trials,
                              std::uint64_t seed = 1);

/// Largest relative change of [F, G] for random F, G when the node count is
/// doubled.
double quadrature_doubling_test(int n, int trials, std::uint64_t seed = 1);

std::vector<std::string> suite_names();

/// Runs a named suite at its default sizes; the report carries "passed".
nlohmann::json run_suite(const std::string& name, std::uint64_t seed = 1);

}  // namespace capsdp
