#include <gtest/gtest.h>

#include <cmath>

#include "capsdp/harness.hpp"
#include "capsdp/zonal.hpp"

namespace capsdp {
namespace {

TriPolyF mono(int a, int b, int c) { return TriPolyF::monomial({a, b, c}); }

TEST(GaussJacobi, MomentsMatchBetaFunction) {
  // int x^{2m} (1 - x^2)^a dx = B(m + 1/2, a + 1).
  for (double a : {-0.5, 0.0, 0.5, 1.0, 2.5, 3.0}) {
    const GaussRule rule = gauss_jacobi(a, 6);
    for (int m = 0; m <= 5; ++m) {
      double q = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) q += rule.weights[i] * std::pow(rule.nodes[i], 2 * m);
      const double want = std::beta(m + 0.5, a + 1.0);
      EXPECT_NEAR(q, want, 1e-13 * want) << a << " " << m;
    }
  }
}

TEST(GaussJacobi, OddMomentsVanish) {
  const GaussRule rule = gauss_jacobi(1.5, 5);
  for (int m = 0; m < 5; ++m) {
    double q = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) q += rule.weights[i] * std::pow(rule.nodes[i], 2 * m + 1);
    EXPECT_NEAR(q, 0.0, 1e-14);
  }
}

TEST(GaussJacobi, GegenbauerOrthogonality) {
  for (int n : {3, 4, 7}) {
    const GaussRule rule = gauss_jacobi((n - 3) / 2.0, 8);
    const auto p = gegenbauer_sequence(n, 6);
    for (int k = 0; k <= 6; ++k)
      for (int l = 0; l < k; ++l) {
        double q = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
          q += rule.weights[i] * to_float(p[k]).eval_double(rule.nodes[i]) * to_float(p[l]).eval_double(rule.nodes[i]);
        EXPECT_NEAR(q, 0.0, 1e-13);
      }
  }
}

TEST(GaussJacobi, NodesInsideInterval) {
  const GaussRule rule = gauss_jacobi(-0.5, 10);
  for (double x : rule.nodes) {
    EXPECT_GT(x, -1.0);
    EXPECT_LT(x, 1.0);
  }
  for (double w : rule.weights) EXPECT_GT(w, 0.0);
}

TEST(QuadratureRule, TotalMass) {
  for (int n = 3; n <= 10; ++n) EXPECT_NEAR(QuadratureRule(n, 8).total_mass(), 1.0, 1e-13) << n;
}

TEST(QuadratureRule, ConstantInnerProduct) {
  for (int n = 3; n <= 6; ++n) EXPECT_NEAR(inner_product(TriPolyF::constant(1.0), TriPolyF::constant(1.0), n), 1.0, 1e-13);
}

TEST(QuadratureRule, Degrees) {
  EXPECT_EQ(QuadratureRule(4, 5).degree(), 9);
  EXPECT_GE(QuadratureRule::for_degree(4, 9).degree(), 9);
  EXPECT_GE(QuadratureRule::for_degree(4, 10).degree(), 10);
  EXPECT_EQ(coordinate_degree(mono(0, 0, 0)), 0);
  EXPECT_EQ(coordinate_degree(mono(2, 0, 1)), 3);
  EXPECT_EQ(coordinate_degree(mono(1, 3, 2)), 5);
  const QuadratureRule rule(4, 2);
  EXPECT_THROW(inner_product(mono(0, 0, 3), mono(0, 0, 2), rule), InsufficientDegreeError);
  EXPECT_NO_THROW(inner_product(mono(0, 0, 1), mono(0, 0, 1), rule));
}

TEST(QuadratureRule, MatchesMonteCarlo) {
  for (int n : {3, 5}) {
    const MonteCarloEstimate t2 = sphere_integral_crosscheck(mono(0, 0, 2), n, 20000, 3);
    EXPECT_NEAR(t2.quadrature, 1.0 / n, 1e-13);
    EXPECT_TRUE(t2.agrees()) << t2.mean << " vs " << t2.quadrature;
    const MonteCarloEstimate uv = sphere_integral_crosscheck(mono(1, 1, 0), n, 20000, 4);
    EXPECT_NEAR(uv.quadrature, 0.0, 1e-14);
    EXPECT_TRUE(uv.agrees());
    // E[u^2] = 1/n for a uniform point.
    const MonteCarloEstimate u2 = sphere_integral_crosscheck(mono(2, 0, 0), n, 20000, 5);
    EXPECT_NEAR(u2.quadrature, 1.0 / n, 1e-13);
    EXPECT_TRUE(u2.agrees());
  }
  const TriPolyF mixed = mono(2, 1, 1) + mono(0, 2, 2).scaled(3.0) - mono(1, 0, 0);
  EXPECT_TRUE(sphere_integral_crosscheck(mixed, 4, 20000, 6).agrees());
}

TEST(Orthogonality, NormalizedEntries) {
  const OrthogonalityReport r = orthogonality_matrix(4, 3);
  EXPECT_LE(r.max_error, 1e-9);
  EXPECT_EQ(r.gram.rows(), static_cast<Eigen::Index>(r.labels.size()));
  // Expected diagonal 1 / h_k^{n-1} for entry (k, i, j).
  for (std::size_t a = 0; a < r.labels.size(); ++a) {
    const int k = r.labels[a][0];
    EXPECT_DOUBLE_EQ(r.expected(a, a), 1.0 / static_cast<double>(harm_dim(3, k)));
  }
  EXPECT_LE(orthogonality_matrix(3, 3).max_error, 1e-9);
  EXPECT_LE(orthogonality_matrix(6, 2).max_error, 1e-9);
}

TEST(Orthogonality, TraceForm) {
  EXPECT_LE(trace_orthogonality_test(4, 3, 10, 2), 1e-9);
  EXPECT_LE(trace_orthogonality_test(5, 2, 10, 3), 1e-9);
}

TEST(Kernel, Reproduces) {
  EXPECT_LE(kernel_reproduce_test(4, 2, 50, 1), 1e-8);
  EXPECT_LE(kernel_reproduce_test(3, 3, 20, 2), 1e-8);
}

TEST(Kernel, BoundaryPoint) {
  // p = (1, 1, 1) lies on the boundary of Omega.
  const int n = 4, d = 2;
  const ZonalFamily fam(n, d, Normalization::kNormalized);
  const TriPolyF k = reproducing_kernel(fam, 1.0, 1.0, 1.0);
  const TriPolyF f = mono(1, 1, 0) + mono(0, 0, 1).scaled(2.0) + TriPolyF::constant(0.5);
  EXPECT_NEAR(inner_product(k, f, n), f.eval_double(1.0, 1.0, 1.0), 1e-8);
}

TEST(Positivity, RandomCodes) {
  for (int n : {3, 4, 5})
    for (int d : {2, 3, 4}) EXPECT_GE(positivity_sample_test(n, d, 15, 10, 7), -1e-9);
}

TEST(Quadrature, Doubling) { EXPECT_LE(quadrature_doubling_test(4, 10, 1), 1e-13); }

TEST(Suites, AllPass) {
  for (const std::string& name : suite_names()) {
    const nlohmann::json r = run_suite(name, 1);
    EXPECT_TRUE(r["passed"].get<bool>()) << r.dump();
    EXPECT_EQ(r["suite"], name);
  }
  EXPECT_THROW(run_suite("nope"), std::invalid_argument);
}

}  // namespace
}  // namespace capsdp
