#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "capsdp/certify.hpp"
#include "capsdp/conic.hpp"
#include "capsdp/relax.hpp"
#include "test_util.hpp"

namespace capsdp {
namespace {

using testing::C;
using testing::T;
using testing::U;
using testing::V;

struct Solved {
  CapRelaxation relax;
  SdpSolution solution;
};

const Solved& solved_b3() {
  static const Solved s = [] {
    CapParams p;
    p.n = 3;
    p.d = 4;
    p.N = 4;
    Solved out{build_cap_sdp(p), {}};
    out.solution = solve(out.relax.problem);
    return out;
  }();
  return s;
}

int block_index(const CapRelaxation& r, const std::string& label) { return r.problem.find_block(label); }

// Largest f with F_0 - f E_0 PSD, from the Schur complement over the diagonal
// trailing 2x2 block.
double schur_f0(int n, double ct, double cp, double a) {
  const auto m = example2_f0_matrix<double>(n, ct, cp, a);
  return m[0][0] - m[0][1] * m[0][1] / m[1][1] - m[0][2] * m[0][2] / m[2][2];
}

TEST(LinearClosedForm, Values) {
  EXPECT_EQ(*bound_example1(Rational(0), Rational(1, 2)), 4);
  EXPECT_NEAR(*bound_example1(0.5, std::sqrt(3.0) / 2), 2.0, 1e-14);
  EXPECT_FALSE(bound_example1(Rational(1, 2), Rational(0)).has_value());
  EXPECT_FALSE(bound_example1(Rational(0), Rational(-1, 2)).has_value());
}

TEST(QuadraticClosedForm, OddNumbers) {
  for (int n = 2; n <= 12; ++n) EXPECT_EQ(*bound_example2(n, Rational(0), Rational(0)), 2 * n - 1) << n;
  EXPECT_EQ(*bound_example2(3, Rational(0), Rational(0)), 5);
}

TEST(QuadraticClosedForm, F0FromDecomposition) {
  // F = (t + 1)(t - ct) + a ((u - cp)(u - 1) + (v - cp)(v - 1))
  const Rational ct(1, 5), cp(1, 3), a(2, 7);
  for (int n : {3, 4, 6}) {
    const TriPoly f = (T() + C(1)) * (T() - TriPoly::constant(ct)) +
                      TriPoly::constant(a) * ((U() - TriPoly::constant(cp)) * (U() - C(1)) +
                                              (V() - TriPoly::constant(cp)) * (V() - C(1)));
    const MatrixCoefficients m = decompose(f, ZonalFamily(n, 2, Normalization::kUnnormalized));
    const auto want = example2_f0_matrix<Rational>(n, ct, cp, a);
    const RationalMatrix& f0 = (*m.exact)[0];
    ASSERT_EQ(f0.size(), 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_EQ(f0(i, j), want[i][j]) << n << " " << i << j;
    for (std::size_t k = 1; k < m.exact->size(); ++k)
      for (int i = 0; i < (*m.exact)[k].size(); ++i)
        for (int j = 0; j < (*m.exact)[k].size(); ++j)
          if (i != j) EXPECT_EQ((*m.exact)[k](i, j), 0);
  }
}

TEST(QuadraticClosedForm, OptimumMatchesGridScan) {
  for (int n : {3, 4, 8})
    for (double ct : {-0.2, 0.0, 0.1})
      for (double cp : {-0.1, 0.0, 0.3}) {
        const auto e = example2<double>(n, ct, cp);
        if (!e) continue;
        double best = -1e300;
        for (int i = 0; i <= 200000; ++i) best = std::max(best, schur_f0(n, ct, cp, 3.0 * i / 200000));
        EXPECT_NEAR(best, e->f0_max, 1e-8) << n << " " << ct << " " << cp;
        EXPECT_NEAR(example2_f0(n, ct, cp, e->a), e->f0_max, 1e-14);
        EXPECT_NEAR(schur_f0(n, ct, cp, e->a), e->f0_max, 1e-12);
      }
}

TEST(QuadraticClosedForm, F0SingularAtOptimum) {
  for (int n = 2; n <= 6; ++n) {
    const auto e = example2(n, Rational(0), Rational(0));
    ASSERT_TRUE(e.has_value());
    auto m = example2_f0_matrix(n, Rational(0), Rational(0), e->a);
    m[0][0] -= e->f0_max;
    const Rational det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    EXPECT_EQ(det, 0);
    Eigen::Matrix3d d;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) d(i, j) = to_double(m[i][j]);
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(d).eigenvalues()(0), -1e-12);
  }
}

TEST(QuadraticClosedForm, BelowLpBound) {
  for (int n = 2; n <= 10; ++n)
    for (int i = -10; i <= 10; ++i)
      for (int j = -10; j <= 10; ++j) {
        const Rational ct(i, 25), cp(j, 20);
        const auto e2 = bound_example2(n, ct, cp);
        const auto lp = lp_bound_quadratic(n, ct);
        if (!e2 || !lp) continue;
        EXPECT_LE(to_double(*e2), to_double(*lp) + 1e-12);
      }
  EXPECT_EQ(*lp_bound_quadratic(3, Rational(0)), 6);
  EXPECT_FALSE(lp_bound_quadratic(3, Rational(1, 2)).has_value());
}

TEST(QuadraticClosedForm, Inapplicable) {
  EXPECT_FALSE(bound_example2(3, Rational(0), Rational(-1, 2)).has_value());
  EXPECT_FALSE(bound_example2(3, Rational(9, 10), Rational(0)).has_value());
}

TEST(Verify, ThreeDimensions) {
  const Solved& s = solved_b3();
  const BoundCertificate cert = verify_certificate(s.solution, s.relax);
  ASSERT_TRUE(cert.verified) << cert.failure;
  EXPECT_TRUE(cert.failure.empty());
  EXPECT_GT(cert.bound, 9.0);
  EXPECT_LE(cert.bound, 9.67);
  EXPECT_GE(cert.bound, cert.reported_bound);
  EXPECT_DOUBLE_EQ(cert.reported_bound, 1 + cert.m);
  EXPECT_EQ(cert.matrix_coefficients.matrices.size(), 5u);
  for (const AuditCheck& c : cert.checks) EXPECT_TRUE(c.passed) << c.name;
  EXPECT_EQ(cert.identities.size(), 2u);
  // The polynomial of the certificate is at most B on the diagonal and at most
  // 0 off the diagonal, up to the margin.
  const TriPolyF f = certificate_polynomial(cert);
  for (double u : {0.0, 0.3, 0.7, 1.0}) EXPECT_LE(f.eval_double(u, u, 1.0), cert.bound + 1e-6);
  EXPECT_LE(f.eval_double(0.0, 0.5, 0.5), 1e-6);
}

TEST(Verify, FaultPsd) {
  const Solved& s = solved_b3();
  SdpSolution bad = s.solution;
  bad.block_values[block_index(s.relax, "r0")] *= -1.0;
  const BoundCertificate cert = verify_certificate(bad, s.relax);
  EXPECT_FALSE(cert.verified);
  EXPECT_EQ(cert.failure, "psd");
}

TEST(Verify, FaultIdentity) {
  const Solved& s = solved_b3();
  SdpSolution bad = s.solution;
  bad.block_values[block_index(s.relax, "q0")](0, 0) += 1.0;
  const BoundCertificate cert = verify_certificate(bad, s.relax);
  EXPECT_FALSE(cert.verified);
  EXPECT_EQ(cert.failure.rfind("identity", 0), 0u) << cert.failure;
}

TEST(Verify, FaultSignOfM) {
  const Solved& s = solved_b3();
  SdpSolution bad = s.solution;
  bad.scalars[s.relax.m_var] *= -1.0;
  EXPECT_FALSE(verify_certificate(bad, s.relax).verified);
}

TEST(Verify, FaultTruncatedBlock) {
  const Solved& s = solved_b3();
  SdpSolution bad = s.solution;
  Eigen::MatrixXd& f0 = bad.block_values[s.relax.f_blocks[0]];
  f0 = f0.topLeftCorner(f0.rows() - 1, f0.cols() - 1).eval();
  const BoundCertificate cert = verify_certificate(bad, s.relax);
  EXPECT_FALSE(cert.verified);
  EXPECT_EQ(cert.failure, "structure");
}

TEST(Verify, FaultWrongDegree) {
  const Solved& s = solved_b3();
  CapParams p = s.relax.params;
  p.d = 3;
  const BoundCertificate cert = verify_certificate(s.solution, build_cap_sdp(p));
  EXPECT_FALSE(cert.verified);
}

TEST(Verify, SolverFailureRejected) {
  const Solved& s = solved_b3();
  SdpSolution bad = s.solution;
  bad.status = SolveStatus::kNumericalFailure;
  const BoundCertificate cert = verify_certificate(bad, s.relax);
  EXPECT_FALSE(cert.verified);
  EXPECT_EQ(cert.failure, "solver_status");
}

TEST(Verify, NonFiniteRejected) {
  const Solved& s = solved_b3();
  SdpSolution bad = s.solution;
  bad.block_values[0](0, 0) = std::nan("");
  EXPECT_FALSE(verify_certificate(bad, s.relax).verified);
}

TEST(Verify, DegreeOneClosedFormCase) {
  for (const Rational& cp : {Rational(7, 8), Rational(13, 15), Rational(4, 5)}) {
    CapParams p;
    p.n = 4;
    p.d = 1;
    p.N = 2;
    p.cos_theta = Rational(1, 2);
    p.cos_phi = cp;
    const CapRelaxation r = build_cap_sdp(p);
    const BoundCertificate cert = verify_certificate(solve(r.problem), r);
    ASSERT_TRUE(cert.verified) << cert.failure;
    EXPECT_LE(cert.bound, to_double(*bound_example1(p.cos_theta, cp)) + 1e-6);
    EXPECT_GE(cert.bound, 1.0 - 1e-9);
  }
}

TEST(Verify, MonotoneInDegree) {
  double previous = std::numeric_limits<double>::infinity();
  for (int deg = 3; deg <= 4; ++deg) {
    CapParams p;
    p.n = 3;
    p.d = deg;
    p.N = deg;
    const CapRelaxation r = build_cap_sdp(p);
    const BoundCertificate cert = verify_certificate(solve(r.problem), r);
    ASSERT_TRUE(cert.verified) << deg;
    EXPECT_LE(cert.bound, previous + 1e-6) << deg;
    previous = cert.bound;
  }
}

TEST(EqualityCase, EmptyCode) {
  const Solved& s = solved_b3();
  const BoundCertificate cert = verify_certificate(s.solution, s.relax);
  Code empty(3, Rational(1));
  empty.set_pole({Rational(1), Rational(0), Rational(0)});
  const EqualityCaseReport r = equality_case_report(cert, empty);
  EXPECT_EQ(r.cross_pairs, 0);
  EXPECT_EQ(r.diagonal_points, 0);
}

TEST(EqualityCase, RandomCodeIsNotTight) {
  const Solved& s = solved_b3();
  const BoundCertificate cert = verify_certificate(s.solution, s.relax);
  // Four points in the upper hemisphere with pairwise angles above pi/3.
  std::vector<Eigen::VectorXd> pts;
  for (double az : {0.0, 1.7, 3.4, 5.1}) {
    const double el = 0.4;
    pts.push_back(Eigen::Vector3d(std::sin(el), std::cos(el) * std::cos(az), std::cos(el) * std::sin(az)));
  }
  Code code = Code::from_doubles(pts);
  code.set_pole({Rational(1), Rational(0), Rational(0)});
  const EqualityCaseReport r = equality_case_report(cert, code);
  EXPECT_EQ(r.cross_pairs, 12);
  EXPECT_EQ(r.diagonal_points, 4);
  EXPECT_LT(r.min_cross, 0.0);
  EXPECT_FALSE(r.near_tight);
  const nlohmann::json j = to_json(r);
  EXPECT_EQ(j["cross_pairs"], 12);
}

TEST(CertificateJson, Fields) {
  const Solved& s = solved_b3();
  const BoundCertificate cert = verify_certificate(s.solution, s.relax);
  const nlohmann::json full = to_json(cert);
  EXPECT_EQ(full["verdict"], "verified");
  EXPECT_EQ(full["params"]["n"], 3);
  EXPECT_EQ(full["params"]["gram_rule"], "match-zonal");
  EXPECT_TRUE(full.contains("matrix_coefficients"));
  EXPECT_TRUE(full.contains("sos_witnesses"));
  EXPECT_TRUE(full["margin"].contains("eta_offdiagonal"));
  EXPECT_FALSE(to_json(cert, false).contains("matrix_coefficients"));
}

TEST(CertificateJson, SummaryRow) {
  const Solved& s = solved_b3();
  const BoundCertificate cert = verify_certificate(s.solution, s.relax);
  EXPECT_TRUE(std::regex_match(summary_row(cert), std::regex(R"(3 \| 1/2 \| 0 \| 4 \| 4 \| 9\.66\d{4})")))
      << summary_row(cert);
  SdpSolution bad = s.solution;
  bad.status = SolveStatus::kInfeasible;
  EXPECT_EQ(summary_row(verify_certificate(bad, s.relax)), "3 | 1/2 | 0 | 4 | 4 | failed");
}

}  // namespace
}  // namespace capsdp
